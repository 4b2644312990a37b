//! Curvature tensors of the gauge connections, their identity chains, the
//! field-strength tensors of the gauge potentials, and the gauge kinetic
//! action terms.

use num_complex::Complex64;

use crate::bundles::{cr, FiberForms, Mat2, Mat3, C_ZERO};
use crate::connections::{compose_gauge, ConnectionSet, GaugePotentials, PhysConstants};
use crate::grid::GridShape;
use crate::manifold::{Chart, StructureConstants};

/// Independent antisymmetric index pairs `(i, j)` with `i < j`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Curvature tensors of the hypercharge, isospin and color connections,
/// antisymmetric in the two tangent slots by construction.
#[derive(Debug, Clone)]
pub struct CurvatureField {
    pub shape: GridShape,
    u1: Vec<[Complex64; 6]>,
    su2: Vec<[Mat2; 6]>,
    su3: Vec<[Mat3; 6]>,
}

#[inline]
fn pair_index(i: usize, j: usize) -> (usize, f64) {
    debug_assert!(i != j);
    if i < j {
        (PAIRS.iter().position(|&p| p == (i, j)).unwrap(), 1.0)
    } else {
        (PAIRS.iter().position(|&p| p == (j, i)).unwrap(), -1.0)
    }
}

impl CurvatureField {
    pub fn u1_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        if i == j {
            return C_ZERO;
        }
        let (n, s) = pair_index(i, j);
        self.u1[p][n] * cr(s)
    }

    pub fn su2_at(&self, p: usize, i: usize, j: usize) -> Mat2 {
        if i == j {
            return Mat2::zeros();
        }
        let (n, s) = pair_index(i, j);
        self.su2[p][n] * cr(s)
    }

    pub fn su3_at(&self, p: usize, i: usize, j: usize) -> Mat3 {
        if i == j {
            return Mat3::zeros();
        }
        let (n, s) = pair_index(i, j);
        self.su3[p][n] * cr(s)
    }

    /// Max modulus of any component over interior points.
    pub fn max_norm_interior(&self, shape: &GridShape) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in shape.iter_interior() {
            let p = shape.flat(idx);
            for n in 0..6 {
                worst = worst.max(self.u1[p][n].norm());
                worst = worst.max(self.su2[p][n].norm());
                worst = worst.max(self.su3[p][n].norm());
            }
        }
        worst
    }
}

/// Curvature of each gauge connection: antisymmetrized Lie derivatives plus
/// the quadratic commutator term (for the non-abelian bundles), minus the
/// structure-constant term of the frame.
pub fn curvature(conn: &ConnectionSet, sc: &StructureConstants, chart: &Chart) -> CurvatureField {
    let shape = chart.shape;
    let n = shape.len();
    let mut u1 = vec![[C_ZERO; 6]; n];
    let mut su2 = vec![[Mat2::zeros(); 6]; n];
    let mut su3 = vec![[Mat3::zeros(); 6]; n];

    for idx in shape.iter() {
        let p = shape.flat(idx);
        for (npair, &(i, j)) in PAIRS.iter().enumerate() {
            let mut r1 = chart.lie_at(&|q: usize| conn.u1[q][j], idx, i)
                - chart.lie_at(&|q: usize| conn.u1[q][i], idx, j);
            for h in 0..4 {
                r1 -= cr(sc.get(p, h, i, j)) * conn.u1[p][h];
            }
            u1[p][npair] = r1;

            let mut r2 = Mat2::zeros();
            for a in 0..2 {
                for b in 0..2 {
                    r2[(a, b)] = chart.lie_at(&|q: usize| conn.su2[q][j][(a, b)], idx, i)
                        - chart.lie_at(&|q: usize| conn.su2[q][i][(a, b)], idx, j);
                }
            }
            r2 += conn.su2[p][i] * conn.su2[p][j] - conn.su2[p][j] * conn.su2[p][i];
            for h in 0..4 {
                r2 -= conn.su2[p][h] * cr(sc.get(p, h, i, j));
            }
            su2[p][npair] = r2;

            let mut r3 = Mat3::zeros();
            for a in 0..3 {
                for b in 0..3 {
                    r3[(a, b)] = chart.lie_at(&|q: usize| conn.su3[q][j][(a, b)], idx, i)
                        - chart.lie_at(&|q: usize| conn.su3[q][i][(a, b)], idx, j);
                }
            }
            r3 += conn.su3[p][i] * conn.su3[p][j] - conn.su3[p][j] * conn.su3[p][i];
            for h in 0..4 {
                r3 -= conn.su3[p][h] * cr(sc.get(p, h, i, j));
            }
            su3[p][npair] = r3;
        }
    }
    CurvatureField {
        shape,
        u1,
        su2,
        su3,
    }
}

/// Named residuals of the curvature identity chain, max-norms over interior
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureIdentityResiduals {
    /// Hypercharge curvature is purely imaginary.
    pub u1_imaginary: f64,
    /// Isospin curvature is skew-Hermitian for the isospin metric.
    pub su2_skew_hermitian: f64,
    /// Color curvature is skew-Hermitian for the color metric.
    pub su3_skew_hermitian: f64,
    /// Symplectic-form symmetry of the isospin curvature.
    pub su2_eps_symmetry: f64,
    /// Volume-form symmetry of the color curvature.
    pub su3_eps_symmetry: f64,
    /// Zero trace of the isospin curvature.
    pub su2_trace: f64,
    /// Zero trace of the color curvature.
    pub su3_trace: f64,
    /// Symmetry of the curvature with the isospin index raised.
    pub su2_raised_symmetry: f64,
    /// Symmetry of the curvature with the isospin index lowered.
    pub su2_lowered_symmetry: f64,
}

impl CurvatureIdentityResiduals {
    pub fn max(&self) -> f64 {
        [
            self.u1_imaginary,
            self.su2_skew_hermitian,
            self.su3_skew_hermitian,
            self.su2_eps_symmetry,
            self.su3_eps_symmetry,
            self.su2_trace,
            self.su3_trace,
            self.su2_raised_symmetry,
            self.su2_lowered_symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn curvature_identity_residuals(
    curv: &CurvatureField,
    forms: &FiberForms,
    shape: &GridShape,
) -> CurvatureIdentityResiduals {
    let d2 = forms.su2_d;
    let d3 = forms.su3_d;
    let eps2 = forms.su2_eps;
    let eps2_up = forms.su2_eps_up();
    let eps3_up = forms.su3_eps_up();
    let mut out = CurvatureIdentityResiduals {
        u1_imaginary: 0.0,
        su2_skew_hermitian: 0.0,
        su3_skew_hermitian: 0.0,
        su2_eps_symmetry: 0.0,
        su3_eps_symmetry: 0.0,
        su2_trace: 0.0,
        su3_trace: 0.0,
        su2_raised_symmetry: 0.0,
        su2_lowered_symmetry: 0.0,
    };
    for idx in shape.iter_interior() {
        let p = shape.flat(idx);
        for n in 0..6 {
            let r1 = curv.u1[p][n];
            out.u1_imaginary = out.u1_imaginary.max((r1 + r1.conj()).norm());

            let m2 = curv.su2[p][n];
            out.su2_skew_hermitian = out
                .su2_skew_hermitian
                .max((m2.transpose() * d2 + d2 * m2.conjugate()).norm());
            out.su2_trace = out.su2_trace.max(m2.trace().norm());

            // eps^{kq}-contracted symmetry, raised on the first eps slot.
            let raised = m2 * eps2_up;
            out.su2_raised_symmetry = out
                .su2_raised_symmetry
                .max((raised - raised.transpose()).norm());
            out.su2_eps_symmetry = out
                .su2_eps_symmetry
                .max((m2 * eps2_up + eps2_up * m2.transpose()).norm());
            let lowered = eps2.transpose() * m2;
            out.su2_lowered_symmetry = out
                .su2_lowered_symmetry
                .max((lowered - lowered.transpose()).norm());

            let m3 = curv.su3[p][n];
            out.su3_skew_hermitian = out
                .su3_skew_hermitian
                .max((m3.transpose() * d3 + d3 * m3.conjugate()).norm());
            out.su3_trace = out.su3_trace.max(m3.trace().norm());
            let mut worst3: f64 = 0.0;
            for q in 0..3 {
                for r in 0..3 {
                    for m in 0..3 {
                        let mut acc = C_ZERO;
                        for k in 0..3 {
                            acc += m3[(q, k)] * eps3_up[k][r][m];
                            acc += m3[(r, k)] * eps3_up[q][k][m];
                            acc += m3[(m, k)] * eps3_up[q][r][k];
                        }
                        worst3 = worst3.max(acc.norm());
                    }
                }
            }
            out.su3_eps_symmetry = out.su3_eps_symmetry.max(worst3);
        }
    }
    out
}

/// Field-strength tensors of the gauge potentials, antisymmetric in the two
/// tangent slots. The hypercharge strength is stored in complex form; its
/// reality is one of the checked constraints.
#[derive(Debug, Clone)]
pub struct FieldStrength {
    pub shape: GridShape,
    u1: Vec<[Complex64; 6]>,
    su2: Vec<[Mat2; 6]>,
    su3: Vec<[Mat3; 6]>,
}

impl FieldStrength {
    pub fn u1_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        if i == j {
            return C_ZERO;
        }
        let (n, s) = pair_index(i, j);
        self.u1[p][n] * cr(s)
    }

    pub fn su2_at(&self, p: usize, i: usize, j: usize) -> Mat2 {
        if i == j {
            return Mat2::zeros();
        }
        let (n, s) = pair_index(i, j);
        self.su2[p][n] * cr(s)
    }

    pub fn su3_at(&self, p: usize, i: usize, j: usize) -> Mat3 {
        if i == j {
            return Mat3::zeros();
        }
        let (n, s) = pair_index(i, j);
        self.su3[p][n] * cr(s)
    }

    pub fn max_norm_interior(&self, shape: &GridShape) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in shape.iter_interior() {
            let p = shape.flat(idx);
            for n in 0..6 {
                worst = worst.max(self.u1[p][n].norm());
                worst = worst.max(self.su2[p][n].norm());
                worst = worst.max(self.su3[p][n].norm());
            }
        }
        worst
    }
}

/// Result of assembling field strengths over a fixed vacuum: the tensors
/// plus the vacuum's own curvature norm (nonzero means the vacuum was not
/// flat and the report should carry a warning).
#[derive(Debug, Clone)]
pub struct FieldStrengthResult {
    pub strength: FieldStrength,
    pub vacuum_curvature: f64,
}

/// Field strengths of the gauge potentials with respect to a vacuum
/// connection.
///
/// The antisymmetrized vacuum covariant derivative of the covector-valued
/// potential reduces to Lie-derivative terms minus the structure-constant
/// term (the symmetric-connection symbols cancel under antisymmetrization)
/// plus vacuum commutator terms on the non-abelian bundles.
pub fn field_strength(
    potentials: &GaugePotentials,
    vacuum: &ConnectionSet,
    sc: &StructureConstants,
    chart: &Chart,
) -> FieldStrengthResult {
    let shape = chart.shape;
    let n = shape.len();
    let [_, s2, s3] = potentials.split_factors();
    let mut u1 = vec![[C_ZERO; 6]; n];
    let mut su2 = vec![[Mat2::zeros(); 6]; n];
    let mut su3 = vec![[Mat3::zeros(); 6]; n];

    for idx in shape.iter() {
        let p = shape.flat(idx);
        for (npair, &(i, j)) in PAIRS.iter().enumerate() {
            let mut f1 = chart.lie_at(&|q: usize| cr(potentials.u1[q][j]), idx, i)
                - chart.lie_at(&|q: usize| cr(potentials.u1[q][i]), idx, j);
            for h in 0..4 {
                f1 -= cr(sc.get(p, h, i, j) * potentials.u1[p][h]);
            }
            u1[p][npair] = f1;

            let mut f2 = Mat2::zeros();
            for a in 0..2 {
                for b in 0..2 {
                    f2[(a, b)] = chart.lie_at(&|q: usize| potentials.su2[q][j][(a, b)], idx, i)
                        - chart.lie_at(&|q: usize| potentials.su2[q][i][(a, b)], idx, j);
                }
            }
            for h in 0..4 {
                f2 -= potentials.su2[p][h] * cr(sc.get(p, h, i, j));
            }
            f2 += vacuum.su2[p][i] * potentials.su2[p][j] - potentials.su2[p][j] * vacuum.su2[p][i];
            f2 -= vacuum.su2[p][j] * potentials.su2[p][i] - potentials.su2[p][i] * vacuum.su2[p][j];
            f2 -= (potentials.su2[p][i] * potentials.su2[p][j]
                - potentials.su2[p][j] * potentials.su2[p][i])
                * s2;
            su2[p][npair] = f2;

            let mut f3 = Mat3::zeros();
            for a in 0..3 {
                for b in 0..3 {
                    f3[(a, b)] = chart.lie_at(&|q: usize| potentials.su3[q][j][(a, b)], idx, i)
                        - chart.lie_at(&|q: usize| potentials.su3[q][i][(a, b)], idx, j);
                }
            }
            for h in 0..4 {
                f3 -= potentials.su3[p][h] * cr(sc.get(p, h, i, j));
            }
            f3 += vacuum.su3[p][i] * potentials.su3[p][j] - potentials.su3[p][j] * vacuum.su3[p][i];
            f3 -= vacuum.su3[p][j] * potentials.su3[p][i] - potentials.su3[p][i] * vacuum.su3[p][j];
            f3 -= (potentials.su3[p][i] * potentials.su3[p][j]
                - potentials.su3[p][j] * potentials.su3[p][i])
                * s3;
            su3[p][npair] = f3;
        }
    }

    let vac_curv = curvature(vacuum, sc, chart).max_norm_interior(&shape);
    FieldStrengthResult {
        strength: FieldStrength {
            shape,
            u1,
            su2,
            su3,
        },
        vacuum_curvature: vac_curv,
    }
}

/// Two-path check: the curvature of the composed connection must equal
/// `-(i e g / hbar c)` times the field strength, per bundle. Returns the
/// max-norm difference over interior points.
pub fn composed_curvature_residual(
    potentials: &GaugePotentials,
    vacuum: &ConnectionSet,
    sc: &StructureConstants,
    chart: &Chart,
) -> f64 {
    let composed = compose_gauge(vacuum, potentials);
    let curv = curvature(&composed, sc, chart);
    let fs = field_strength(potentials, vacuum, sc, chart).strength;
    let [s1, s2, s3] = potentials.split_factors();
    let mut worst: f64 = 0.0;
    for idx in chart.shape.iter_interior() {
        let p = chart.shape.flat(idx);
        for n in 0..6 {
            worst = worst.max((curv.u1[p][n] + s1 * fs.u1[p][n]).norm());
            worst = worst.max((curv.su2[p][n] + fs.su2[p][n] * s2).norm());
            worst = worst.max((curv.su3[p][n] + fs.su3[p][n] * s3).norm());
        }
    }
    worst
}

/// Residuals of the algebraic constraints the field strengths inherit from
/// the concordance of the potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrengthConstraintResiduals {
    /// Reality of the hypercharge strength.
    pub u1_real: f64,
    /// Hermiticity-type relation of the isospin strength.
    pub su2_hermitian: f64,
    /// Hermiticity-type relation of the color strength.
    pub su3_hermitian: f64,
    /// Symplectic-form relation of the isospin strength.
    pub su2_eps: f64,
    /// Volume-form relation of the color strength.
    pub su3_eps: f64,
    /// Quadratic reality identity, hypercharge.
    pub u1_quadratic: f64,
    /// Quadratic reality identity, isospin.
    pub su2_quadratic: f64,
    /// Quadratic reality identity, color.
    pub su3_quadratic: f64,
}

impl StrengthConstraintResiduals {
    pub fn max(&self) -> f64 {
        [
            self.u1_real,
            self.su2_hermitian,
            self.su3_hermitian,
            self.su2_eps,
            self.su3_eps,
            self.u1_quadratic,
            self.su2_quadratic,
            self.su3_quadratic,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn field_strength_constraint_residuals(
    fs: &FieldStrength,
    forms: &FiberForms,
    shape: &GridShape,
) -> StrengthConstraintResiduals {
    let d2 = forms.su2_d;
    let d3 = forms.su3_d;
    let d2_inv = forms.su2_d_inv();
    let d3_inv = forms.su3_d_inv();
    let eps2 = forms.su2_eps;
    let eps3 = forms.su3_eps;
    let u1_weight = forms.u1_d_inv() * forms.u1_d;
    let mut out = StrengthConstraintResiduals {
        u1_real: 0.0,
        su2_hermitian: 0.0,
        su3_hermitian: 0.0,
        su2_eps: 0.0,
        su3_eps: 0.0,
        u1_quadratic: 0.0,
        su2_quadratic: 0.0,
        su3_quadratic: 0.0,
    };
    for idx in shape.iter_interior() {
        let p = shape.flat(idx);
        for n in 0..6 {
            let f1 = fs.u1[p][n];
            out.u1_real = out.u1_real.max((f1 - f1.conj()).norm());

            let m2 = fs.su2[p][n];
            out.su2_hermitian = out
                .su2_hermitian
                .max((m2.transpose() * d2 - d2 * m2.conjugate()).norm());
            let e2 = m2.transpose() * eps2;
            out.su2_eps = out.su2_eps.max((e2 - e2.transpose()).norm());

            let m3 = fs.su3[p][n];
            out.su3_hermitian = out
                .su3_hermitian
                .max((m3.transpose() * d3 - d3 * m3.conjugate()).norm());
            let mut worst3: f64 = 0.0;
            for q in 0..3 {
                for r in 0..3 {
                    for m in 0..3 {
                        let mut acc = C_ZERO;
                        for k in 0..3 {
                            acc += eps3[k][r][m] * m3[(k, q)];
                            acc += eps3[q][k][m] * m3[(k, r)];
                            acc += eps3[q][r][k] * m3[(k, m)];
                        }
                        worst3 = worst3.max(acc.norm());
                    }
                }
            }
            out.su3_eps = out.su3_eps.max(worst3);

            for m in 0..6 {
                let g1 = fs.u1[p][m];
                out.u1_quadratic = out
                    .u1_quadratic
                    .max((cr(u1_weight) * fs.u1[p][n] * g1.conj() - fs.u1[p][n] * g1).norm());

                let a2 = fs.su2[p][n];
                let b2 = fs.su2[p][m];
                let mut lhs2 = C_ZERO;
                for pp in 0..2 {
                    for pb in 0..2 {
                        for q in 0..2 {
                            for qb in 0..2 {
                                lhs2 += d2_inv[(q, qb)]
                                    * d2[(pp, pb)]
                                    * a2[(pp, q)]
                                    * b2[(pb, qb)].conj();
                            }
                        }
                    }
                }
                let rhs2 = (a2 * b2).trace();
                out.su2_quadratic = out.su2_quadratic.max((lhs2 - rhs2).norm());

                let a3 = fs.su3[p][n];
                let b3 = fs.su3[p][m];
                let mut lhs3 = C_ZERO;
                for pp in 0..3 {
                    for pb in 0..3 {
                        for q in 0..3 {
                            for qb in 0..3 {
                                lhs3 += d3_inv[(q, qb)]
                                    * d3[(pp, pb)]
                                    * a3[(pp, q)]
                                    * b3[(pb, qb)].conj();
                            }
                        }
                    }
                }
                let rhs3 = (a3 * b3).trace();
                out.su3_quadratic = out.su3_quadratic.max((lhs3 - rhs3).norm());
            }
        }
    }
    out
}

/// The three gauge kinetic action terms with their prefactors, plus the
/// largest imaginary part encountered (the integrals are real when the
/// quadratic reality identities hold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticActions {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub imag_residual: f64,
}

pub fn gauge_kinetic_actions(
    fs: &FieldStrength,
    chart: &Chart,
    constants: &PhysConstants,
) -> KineticActions {
    let shape = chart.shape;
    let cell = shape.cell_volume();
    let mut acc1 = C_ZERO;
    let mut acc2 = C_ZERO;
    let mut acc3 = C_ZERO;
    for idx in shape.iter_interior() {
        let p = shape.flat(idx);
        let ginv = chart.frame_metric_inv(p);
        let w = cr(chart.sqrt_neg_det(p) * cell);
        let mut s1 = C_ZERO;
        let mut s2 = C_ZERO;
        let mut s3 = C_ZERO;
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for m in 0..4 {
                    for nn in 0..4 {
                        if m == nn {
                            continue;
                        }
                        let gg = ginv[(i, m)] * ginv[(j, nn)];
                        if gg == 0.0 {
                            continue;
                        }
                        let gg = cr(gg);
                        s1 += gg * fs.u1_at(p, i, j) * fs.u1_at(p, m, nn);
                        s2 += gg * (fs.su2_at(p, i, j) * fs.su2_at(p, m, nn)).trace();
                        s3 += gg * (fs.su3_at(p, i, j) * fs.su3_at(p, m, nn)).trace();
                    }
                }
            }
        }
        acc1 += w * s1;
        acc2 += w * s2;
        acc3 += w * s3;
    }
    let pi_c = std::f64::consts::PI * constants.c;
    let l1 = acc1 * cr(-1.0 / (16.0 * pi_c));
    let l2 = acc2 * cr(-1.0 / (32.0 * pi_c));
    let l3 = acc3 * cr(-1.0 / (48.0 * pi_c));
    KineticActions {
        l1: l1.re,
        l2: l2.re,
        l3: l3.re,
        imag_residual: l1.im.abs().max(l2.im.abs()).max(l3.im.abs()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{c, standard_forms, C_I, C_ONE};
    use crate::connections::Couplings;
    use crate::grid::GridShape;
    use crate::manifold::structure_constants;

    fn shape() -> GridShape {
        GridShape::new([7, 7, 5, 5], [0.1; 4], [0.0; 4])
    }

    fn flat_setup() -> (Chart, ConnectionSet, StructureConstants) {
        let chart = Chart::preset("minkowski-coordinate", shape()).unwrap();
        let conn = ConnectionSet::trivial_flat(&chart).unwrap();
        let sc = structure_constants(&chart).unwrap();
        (chart, conn, sc)
    }

    fn natural_potentials(shape: GridShape) -> GaugePotentials {
        GaugePotentials::zeros(
            shape,
            Couplings {
                g1: 1.0,
                g2: 1.0,
                g3: 1.0,
            },
            PhysConstants::natural(),
        )
    }

    #[test]
    fn both_vacuum_presets_are_flat_on_the_coordinate_chart() {
        let (chart, _, sc) = flat_setup();
        for name in ["trivial-flat", "imaginary-constant"] {
            let conn = ConnectionSet::vacuum_preset(name, &chart).unwrap();
            let curv = curvature(&conn, &sc, &chart);
            assert!(curv.max_norm_interior(&chart.shape) < 1e-12, "{name}");
        }
    }

    #[test]
    fn abelian_curvature_of_a_linear_coefficient() {
        let (chart, mut conn, sc) = flat_setup();
        for idx in shape().iter() {
            let p = shape().flat(idx);
            let x = shape().coords(idx);
            conn.u1[p][0] = c(0.0, x[1]);
        }
        let curv = curvature(&conn, &sc, &chart);
        for idx in shape().iter_interior() {
            let p = shape().flat(idx);
            assert!((curv.u1_at(p, 1, 0) - C_I).norm() < 1e-10);
            assert!((curv.u1_at(p, 0, 1) + C_I).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_noncommuting_isospin_coefficients_leave_only_the_commutator() {
        let (chart, mut conn, sc) = flat_setup();
        let a0 = Mat2::new(c(0.0, 0.1), c(0.2, 0.0), c(-0.2, 0.0), c(0.0, -0.1));
        let a1 = Mat2::new(c(0.0, -0.3), c(0.0, 0.15), c(0.0, 0.15), c(0.0, 0.3));
        for p in 0..shape().len() {
            conn.su2[p][0] = a0;
            conn.su2[p][1] = a1;
        }
        let curv = curvature(&conn, &sc, &chart);
        let comm = a0 * a1 - a1 * a0;
        assert!(comm.norm() > 0.01, "test needs noncommuting matrices");
        for idx in shape().iter_interior() {
            let p = shape().flat(idx);
            assert!((curv.su2_at(p, 0, 1) - comm).norm() < 1e-13);
        }
    }

    #[test]
    fn identity_residuals_vanish_on_flat_presets() {
        let (chart, _, sc) = flat_setup();
        let conn = ConnectionSet::imaginary_constant(&chart).unwrap();
        let curv = curvature(&conn, &sc, &chart);
        let res = curvature_identity_residuals(&curv, &standard_forms().0, &chart.shape);
        assert!(res.max() < 1e-12, "{res:?}");
    }

    #[test]
    fn identity_residuals_hold_on_smooth_concordant_connections() {
        let (chart, mut conn, sc) = flat_setup();
        for idx in shape().iter() {
            let p = shape().flat(idx);
            let x = shape().coords(idx);
            for k in 0..4 {
                let t = 0.3 * x[k % 4] + 0.1 * k as f64;
                conn.u1[p][k] = c(0.0, 0.2 * t.sin());
                conn.su2[p][k] = Mat2::new(
                    c(0.0, 0.1 * t.cos()),
                    c(0.15 * t.sin(), 0.05),
                    c(-0.15 * t.sin(), 0.05),
                    c(0.0, -0.1 * t.cos()),
                );
                conn.su3[p][k] = su3_algebra_sample(t);
            }
        }
        let curv = curvature(&conn, &sc, &chart);
        let res = curvature_identity_residuals(&curv, &standard_forms().0, &chart.shape);
        assert!(res.max() < crate::fd_tol(chart.h()), "{res:?}");
    }

    fn su3_algebra_sample(t: f64) -> Mat3 {
        // Anti-Hermitian traceless 3x3 built from a few smooth coefficients.
        let (a, b, d) = (0.1 * t.sin(), 0.07 * t.cos(), 0.05 * t);
        Mat3::new(
            c(0.0, a),
            c(b, d),
            c(-0.03, 0.02),
            c(-b, d),
            c(0.0, -2.0 * a),
            c(0.04, -0.01),
            c(0.03, 0.02),
            c(-0.04, -0.01),
            c(0.0, a),
        )
    }

    #[test]
    fn deliberately_hermitian_connection_breaks_skew_hermiticity() {
        // Spatially varying and commuting, so the curvature is the Hermitian
        // curl rather than an anti-Hermitian commutator.
        let (chart, mut conn, sc) = flat_setup();
        for idx in shape().iter() {
            let p = shape().flat(idx);
            let x = shape().coords(idx);
            conn.su2[p][0] = Mat2::new(cr(0.4 * x[1]), C_ZERO, C_ZERO, cr(-0.4 * x[1]));
        }
        let curv = curvature(&conn, &sc, &chart);
        let res = curvature_identity_residuals(&curv, &standard_forms().0, &chart.shape);
        assert!(res.su2_skew_hermitian > 0.01);
    }

    #[test]
    fn zero_potentials_give_zero_strengths() {
        let (chart, vac, sc) = flat_setup();
        let pot = natural_potentials(shape());
        let result = field_strength(&pot, &vac, &sc, &chart);
        assert!(result.strength.max_norm_interior(&chart.shape) < 1e-14);
        assert!(result.vacuum_curvature < 1e-13);
    }

    #[test]
    fn abelian_strength_is_the_curl_of_the_potential() {
        let (chart, vac, sc) = flat_setup();
        let mut pot = natural_potentials(shape());
        for idx in shape().iter() {
            let p = shape().flat(idx);
            pot.u1[p][0] = shape().coords(idx)[1];
        }
        let fs = field_strength(&pot, &vac, &sc, &chart).strength;
        for idx in shape().iter_interior() {
            let p = shape().flat(idx);
            assert!((fs.u1_at(p, 1, 0) - C_ONE).norm() < 1e-10);
        }
    }

    fn smooth_constrained_potentials(shape: GridShape) -> GaugePotentials {
        let mut pot = natural_potentials(shape);
        for idx in shape.iter() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            for k in 0..4 {
                let t = 0.25 * x[(k + 1) % 4] + 0.1 * x[k];
                pot.u1[p][k] = 0.3 * t.sin();
                // Hermitian traceless: the constrained isospin subspace.
                pot.su2[p][k] = Mat2::new(
                    cr(0.2 * t.cos()),
                    c(0.1 * t.sin(), 0.12),
                    c(0.1 * t.sin(), -0.12),
                    cr(-0.2 * t.cos()),
                );
                // Hermitian traceless color sample.
                pot.su3[p][k] = Mat3::new(
                    cr(0.1 * t.sin()),
                    c(0.05, 0.02 * t.cos()),
                    c(0.03, -0.01),
                    c(0.05, -0.02 * t.cos()),
                    cr(-0.04),
                    c(0.02, 0.05 * t.sin()),
                    c(0.03, 0.01),
                    c(0.02, -0.05 * t.sin()),
                    cr(0.04 - 0.1 * t.sin()),
                );
            }
        }
        pot
    }

    #[test]
    fn composed_curvature_matches_scaled_field_strength() {
        let (chart, vac, sc) = flat_setup();
        let pot = smooth_constrained_potentials(shape());
        let res = composed_curvature_residual(&pot, &vac, &sc, &chart);
        assert!(res < crate::fd_tol(chart.h()), "residual {res}");

        // Exact on constant data in a coordinate frame.
        let mut pot_const = natural_potentials(shape());
        for p in 0..shape().len() {
            pot_const.u1[p][1] = 0.4;
            pot_const.su2[p][0] = Mat2::new(cr(0.2), c(0.1, 0.3), c(0.1, -0.3), cr(-0.2));
            pot_const.su2[p][2] = Mat2::new(C_ZERO, cr(0.5), cr(0.5), C_ZERO);
        }
        let vac2 = ConnectionSet::imaginary_constant(&chart).unwrap();
        let res_const = composed_curvature_residual(&pot_const, &vac2, &sc, &chart);
        assert!(res_const < 1e-10, "residual {res_const}");
    }

    #[test]
    fn strength_constraints_hold_for_constrained_potentials() {
        let (chart, vac, sc) = flat_setup();
        let pot = smooth_constrained_potentials(shape());
        let fs = field_strength(&pot, &vac, &sc, &chart).strength;
        let res = field_strength_constraint_residuals(&fs, &standard_forms().0, &chart.shape);
        let tol = crate::fd_tol(chart.h());
        assert!(res.u1_real < 1e-12, "{res:?}");
        assert!(res.max() < tol, "{res:?}");

        // Quadratic identities on constant data are near machine precision.
        let mut pot_const = natural_potentials(shape());
        for p in 0..shape().len() {
            pot_const.su2[p][0] = Mat2::new(cr(0.3), c(0.0, 0.2), c(0.0, -0.2), cr(-0.3));
            pot_const.su2[p][1] = Mat2::new(C_ZERO, cr(0.25), cr(0.25), C_ZERO);
            pot_const.su3[p][0] = Mat3::identity() * cr(0.1);
        }
        let fs_const = field_strength(&pot_const, &vac, &sc, &chart).strength;
        let res_const =
            field_strength_constraint_residuals(&fs_const, &standard_forms().0, &chart.shape);
        assert!(res_const.su2_quadratic < 1e-10, "{res_const:?}");
        assert!(res_const.u1_quadratic < 1e-10);
    }

    #[test]
    fn kinetic_actions_vanish_for_zero_strengths() {
        let (chart, vac, sc) = flat_setup();
        let pot = natural_potentials(shape());
        let fs = field_strength(&pot, &vac, &sc, &chart).strength;
        let acts = gauge_kinetic_actions(&fs, &chart, &PhysConstants::natural());
        assert_eq!(acts.l1, 0.0);
        assert_eq!(acts.l2, 0.0);
        assert_eq!(acts.l3, 0.0);
    }

    #[test]
    fn abelian_kinetic_action_of_a_unit_constant_strength() {
        // A constant strength component F_{10} = 1 contracts with the flat
        // inverse metric to -2, so L1 = Vol / (8 pi c).
        let (chart, _, _) = flat_setup();
        let n = shape().len();
        let mut u1 = vec![[C_ZERO; 6]; n];
        for row in u1.iter_mut() {
            row[0] = -C_ONE; // pair (0,1): F_{01} = -1 means F_{10} = 1.
        }
        let fs = FieldStrength {
            shape: shape(),
            u1,
            su2: vec![[Mat2::zeros(); 6]; n],
            su3: vec![[Mat3::zeros(); 6]; n],
        };
        let acts = gauge_kinetic_actions(&fs, &chart, &PhysConstants::natural());
        let expected = chart.volume() / (8.0 * std::f64::consts::PI);
        assert!((acts.l1 - expected).abs() < 1e-12);
        assert!(acts.imag_residual < 1e-15);
    }

    #[test]
    fn kinetic_actions_are_real_for_constrained_potentials() {
        let (chart, vac, sc) = flat_setup();
        let pot = smooth_constrained_potentials(shape());
        let fs = field_strength(&pot, &vac, &sc, &chart).strength;
        let acts = gauge_kinetic_actions(&fs, &chart, &PhysConstants::natural());
        assert!(acts.imag_residual < 1e-10);
    }

    #[test]
    fn pure_gauge_connections_are_flat_to_discretization_error() {
        let (chart, conn, sc) = flat_setup();
        let species = crate::fields::Species::higgs();
        let phi = crate::fields::IndexedField::for_species(shape(), &species);
        let omega: crate::connections::OmegaField = shape()
            .iter()
            .map(|idx| {
                let x = shape().coords(idx);
                crate::connections::su2_exp([
                    0.4 * (0.5 * x[0] + 0.2 * x[1]).sin(),
                    0.3 * (0.4 * x[2]).cos(),
                    0.2 * x[3],
                ])
            })
            .collect();
        let (_, su2) =
            crate::connections::su2_gauge_transform(&omega, &phi, &conn.su2, &chart).unwrap();
        let mut pure_gauge = conn.clone();
        pure_gauge.su2 = su2;
        let curv = curvature(&pure_gauge, &sc, &chart);
        let res = curv.max_norm_interior(&chart.shape);
        assert!(res < crate::fd_tol(chart.h()), "residual {res}");
    }

    #[test]
    fn gauge_transformed_curvature_is_conjugated() {
        let (chart, _, sc) = flat_setup();
        let mut conn = ConnectionSet::trivial_flat(&chart).unwrap();
        for idx in shape().iter() {
            let p = shape().flat(idx);
            let x = shape().coords(idx);
            for k in 0..4 {
                let t = 0.3 * x[(k + 2) % 4];
                conn.su2[p][k] = Mat2::new(
                    c(0.0, 0.2 * t.sin()),
                    c(0.1 * t.cos(), 0.05),
                    c(-0.1 * t.cos(), 0.05),
                    c(0.0, -0.2 * t.sin()),
                );
            }
        }
        let species = crate::fields::Species::higgs();
        let phi = crate::fields::IndexedField::for_species(shape(), &species);
        let omega: crate::connections::OmegaField = shape()
            .iter()
            .map(|idx| {
                let x = shape().coords(idx);
                crate::connections::su2_exp([0.3 * (0.4 * x[1]).sin(), 0.2 * x[0], 0.1])
            })
            .collect();
        let (_, su2) =
            crate::connections::su2_gauge_transform(&omega, &phi, &conn.su2, &chart).unwrap();
        let mut transformed = conn.clone();
        transformed.su2 = su2;
        let curv0 = curvature(&conn, &sc, &chart);
        let curv1 = curvature(&transformed, &sc, &chart);
        let mut worst: f64 = 0.0;
        for idx in shape().iter_interior() {
            let p = shape().flat(idx);
            let inv = omega[p].try_inverse().unwrap();
            for &(i, j) in PAIRS.iter() {
                let expected = omega[p] * curv0.su2_at(p, i, j) * inv;
                worst = worst.max((curv1.su2_at(p, i, j) - expected).norm());
            }
        }
        assert!(worst < crate::fd_tol(chart.h()), "residual {worst}");
    }
}
