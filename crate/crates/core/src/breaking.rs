//! Symmetry-breaking machinery: vacuum projectors and swap operators, the
//! dual Higgs field, the expansion of isospin potentials in the vacuum
//! frame, the photon/Z rotation, boson field strengths and the bosonic
//! Lagrangian split.

use num_complex::Complex64;

use crate::bundles::{c, cr, FiberForms, Mat2, C_ZERO};
use crate::connections::{ConnectionSet, Couplings, GaugePotentials, PhysConstants, Su2Connection};
use crate::curvature::{field_strength, gauge_kinetic_actions, PAIRS};
use crate::error::{Error, Result};
use crate::fields::{IndexedField, Species};
use crate::grid::{GridShape, ScalarField};
use crate::higgs::higgs_norm2;
use crate::manifold::{Chart, StructureConstants};

/// The vacuum doublet, its dual, the two rank-one projectors and the two
/// nilpotent swap operators they generate.
#[derive(Debug, Clone)]
pub struct VacuumFrame {
    pub shape: GridShape,
    pub phi_vac: IndexedField,
    pub phi_dual: IndexedField,
    pub p_op: Vec<Mat2>,
    pub q_op: Vec<Mat2>,
    /// Swap sending the vacuum direction to the dual direction; carries
    /// hypercharge weight -6.
    pub w_fp: Vec<Mat2>,
    /// Swap sending the dual direction to the vacuum direction; carries
    /// hypercharge weight +6.
    pub w_pf: Vec<Mat2>,
    /// Pointwise squared norm of the vacuum doublet.
    pub norm2: Vec<f64>,
    /// Amplitude scale, `v = sqrt(2 |phi_vac|^2)` at the first grid point.
    pub v: f64,
}

/// The dual doublet: the symplectic raise of the conjugated, metric-paired
/// vacuum. Carries hypercharge weight -3.
pub fn dual_doublet(phi_vac: &IndexedField, forms: &FiberForms) -> IndexedField {
    let eps_up = forms.su2_eps_up();
    let w = cr(forms.u1_d.powi(3));
    let mut dual = IndexedField::for_species(phi_vac.shape, &Species::higgs_dual());
    for p in 0..phi_vac.shape.len() {
        let v = phi_vac.at2(p);
        for alpha in 0..2 {
            let mut acc = C_ZERO;
            for beta in 0..2 {
                for bb in 0..2 {
                    acc += eps_up[(alpha, beta)] * forms.su2_d[(beta, bb)] * w * v[bb].conj();
                }
            }
            dual.set(p, &[alpha], acc);
        }
    }
    dual
}

/// Squared norm of a dual-type doublet (hypercharge weight -3): the isospin
/// metric against the inverse hypercharge metric cubed.
pub fn dual_norm2(phi_dual: &IndexedField, forms: &FiberForms) -> ScalarField {
    let w = cr(forms.u1_d_inv().powi(3));
    let mut out = ScalarField::zeros(phi_dual.shape);
    for p in 0..phi_dual.shape.len() {
        let v = phi_dual.at2(p);
        let mut acc = C_ZERO;
        for a in 0..2 {
            for ab in 0..2 {
                acc += forms.su2_d[(a, ab)] * w * v[a] * v[ab].conj();
            }
        }
        out.values[p] = acc;
    }
    out
}

/// Build the vacuum frame from a nonvanishing doublet. The operator
/// identities are verified separately by [`vacuum_frame_residual`].
pub fn build_vacuum_frame(phi_vac: &IndexedField, forms: &FiberForms) -> Result<VacuumFrame> {
    let shape = phi_vac.shape;
    let n2 = higgs_norm2(phi_vac, forms);
    for idx in shape.iter() {
        let p = shape.flat(idx);
        if n2.values[p].re <= 1e-12 {
            return Err(Error::VanishingVacuum { point: idx });
        }
    }
    let dual = dual_doublet(phi_vac, forms);
    let dn2 = dual_norm2(&dual, forms);

    let w3 = cr(forms.u1_d.powi(3));
    let w3_inv = cr(forms.u1_d_inv().powi(3));
    let n = shape.len();
    let mut p_op = Vec::with_capacity(n);
    let mut q_op = Vec::with_capacity(n);
    let mut w_fp = Vec::with_capacity(n);
    let mut w_pf = Vec::with_capacity(n);
    let mut norm2 = Vec::with_capacity(n);

    for p in 0..n {
        let phi = phi_vac.at2(p);
        let phid = dual.at2(p);
        let inv_n2 = cr(1.0 / n2.values[p].re);
        let inv_dn2 = cr(1.0 / dn2.values[p].re);
        let mut pm = Mat2::zeros();
        let mut qm = Mat2::zeros();
        let mut fp = Mat2::zeros();
        let mut pf = Mat2::zeros();
        for beta in 0..2 {
            for alpha in 0..2 {
                // Pair the conjugated components through the isospin metric.
                let mut bra_vac = C_ZERO;
                let mut bra_dual = C_ZERO;
                for ab in 0..2 {
                    bra_vac += forms.su2_d[(alpha, ab)] * phi[ab].conj();
                    bra_dual += forms.su2_d[(alpha, ab)] * phid[ab].conj();
                }
                pm[(beta, alpha)] = w3 * bra_vac * phi[beta] * inv_n2;
                qm[(beta, alpha)] = w3_inv * bra_dual * phid[beta] * inv_dn2;
                fp[(beta, alpha)] = w3 * bra_vac * phid[beta] * inv_n2;
                pf[(beta, alpha)] = w3_inv * bra_dual * phi[beta] * inv_dn2;
            }
        }
        p_op.push(pm);
        q_op.push(qm);
        w_fp.push(fp);
        w_pf.push(pf);
        norm2.push(n2.values[p].re);
    }

    let v = (2.0 * norm2[0]).sqrt();
    Ok(VacuumFrame {
        shape,
        phi_vac: phi_vac.clone(),
        phi_dual: dual,
        p_op,
        q_op,
        w_fp,
        w_pf,
        norm2,
        v,
    })
}

/// Max-norm over all points of the full operator-algebra identity list:
/// complementarity, idempotence, metric Hermiticity, orthogonality and norm
/// equality of the two doublets, nilpotence, and the composition and
/// absorption identities of the swaps.
pub fn vacuum_frame_residual(frame: &VacuumFrame, forms: &FiberForms) -> f64 {
    let d = forms.su2_d;
    let dn2 = dual_norm2(&frame.phi_dual, forms);
    let mut worst: f64 = 0.0;
    for p in 0..frame.shape.len() {
        let pm = frame.p_op[p];
        let qm = frame.q_op[p];
        let fp = frame.w_fp[p];
        let pf = frame.w_pf[p];
        let id = Mat2::identity();

        worst = worst.max((pm + qm - id).norm());
        worst = worst.max((pm * pm - pm).norm());
        worst = worst.max((qm * qm - qm).norm());
        worst = worst.max((pm.transpose() * d - d * pm.conjugate()).norm());
        worst = worst.max((qm.transpose() * d - d * qm.conjugate()).norm());

        // Orthogonality of the dual against the vacuum under the plain
        // isospin metric, and equality of the squared norms.
        let phi = frame.phi_vac.at2(p);
        let phid = frame.phi_dual.at2(p);
        let mut ortho = C_ZERO;
        for alpha in 0..2 {
            for ab in 0..2 {
                ortho += d[(alpha, ab)] * phid[ab].conj() * phi[alpha];
            }
        }
        worst = worst.max(ortho.norm() / frame.norm2[p]);
        worst = worst.max((dn2.values[p].re - frame.norm2[p]).abs() / frame.norm2[p]);

        worst = worst.max((fp * fp).norm());
        worst = worst.max((pf * pf).norm());
        worst = worst.max((fp * pf - qm).norm());
        worst = worst.max((pf * fp - pm).norm());
        worst = worst.max((fp * pm - fp).norm());
        worst = worst.max((fp * qm).norm());
        worst = worst.max((qm * fp - fp).norm());
        worst = worst.max((pm * fp).norm());
        worst = worst.max((pf * qm - pf).norm());
        worst = worst.max((pf * pm).norm());
        worst = worst.max((pm * pf - pf).norm());
        worst = worst.max((qm * pf).norm());
    }
    worst
}

/// A real covector field, one 4-tuple of components per grid point.
pub type RealCovectorField = Vec<[f64; 4]>;

/// Real photon/Z and complex W covector fields of the broken phase.
#[derive(Debug, Clone)]
pub struct BosonFields {
    pub shape: GridShape,
    pub a: Vec<[f64; 4]>,
    pub z: Vec<[f64; 4]>,
    pub w_plus: Vec<[Complex64; 4]>,
    pub w_minus: Vec<[Complex64; 4]>,
}

impl BosonFields {
    pub fn zeros(shape: GridShape) -> Self {
        let n = shape.len();
        Self {
            shape,
            a: vec![[0.0; 4]; n],
            z: vec![[0.0; 4]; n],
            w_plus: vec![[C_ZERO; 4]; n],
            w_minus: vec![[C_ZERO; 4]; n],
        }
    }

    /// Tie the conjugate W component to the other one through the sixth
    /// power of the hypercharge metric.
    pub fn set_w_minus_conjugate(&mut self, forms: &FiberForms) {
        let w6 = cr(forms.u1_d.powi(6));
        for p in 0..self.shape.len() {
            for k in 0..4 {
                self.w_minus[p][k] = w6 * self.w_plus[p][k].conj();
            }
        }
    }
}

/// `sqrt(g2^2 + (3 g1)^2)`, the normalization of the neutral rotation.
pub fn mixing_norm(g1: f64, g2: f64) -> f64 {
    (g2 * g2 + 9.0 * g1 * g1).sqrt()
}

/// Expansion coefficients of an isospin potential in the vacuum frame.
#[derive(Debug, Clone)]
pub struct ExpandedSu2 {
    pub shape: GridShape,
    pub a_plus: Vec<[Complex64; 4]>,
    pub a_minus: Vec<[Complex64; 4]>,
    pub w_plus: Vec<[Complex64; 4]>,
    pub w_minus: Vec<[Complex64; 4]>,
}

impl ExpandedSu2 {
    /// The real neutral coefficient, read from the complement-projector
    /// part.
    pub fn a3(&self) -> Vec<[f64; 4]> {
        self.a_minus
            .iter()
            .map(|row| [row[0].re, row[1].re, row[2].re, row[3].re])
            .collect()
    }
}

/// Residuals the expansion coefficients must satisfy for a concordant
/// potential: reality and mutual opposition of the neutral coefficients,
/// the conjugation tie between the two W components, and exact
/// reconstruction of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionResiduals {
    pub reality: f64,
    pub opposition: f64,
    pub conjugation: f64,
    pub reconstruction: f64,
}

impl ExpansionResiduals {
    pub fn max(&self) -> f64 {
        self.reality
            .max(self.opposition)
            .max(self.conjugation)
            .max(self.reconstruction)
    }
}

/// Extract the four expansion coefficients by trace pairings with the frame
/// operators and report the constraint residuals.
pub fn expand_su2_tensor(
    ca: &Su2Connection,
    frame: &VacuumFrame,
    forms: &FiberForms,
) -> (ExpandedSu2, ExpansionResiduals) {
    let shape = frame.shape;
    let n = shape.len();
    let mut out = ExpandedSu2 {
        shape,
        a_plus: vec![[C_ZERO; 4]; n],
        a_minus: vec![[C_ZERO; 4]; n],
        w_plus: vec![[C_ZERO; 4]; n],
        w_minus: vec![[C_ZERO; 4]; n],
    };
    let mut res = ExpansionResiduals {
        reality: 0.0,
        opposition: 0.0,
        conjugation: 0.0,
        reconstruction: 0.0,
    };
    let w6 = cr(forms.u1_d.powi(6));
    for p in 0..n {
        for k in 0..4 {
            let m = ca[p][k];
            let a_plus = (frame.p_op[p] * m).trace();
            let a_minus = (frame.q_op[p] * m).trace();
            let w_plus = (frame.w_pf[p] * m).trace();
            let w_minus = (frame.w_fp[p] * m).trace();
            out.a_plus[p][k] = a_plus;
            out.a_minus[p][k] = a_minus;
            out.w_plus[p][k] = w_plus;
            out.w_minus[p][k] = w_minus;

            res.reality = res.reality.max(a_plus.im.abs()).max(a_minus.im.abs());
            res.opposition = res.opposition.max((a_plus + a_minus).norm());
            res.conjugation = res.conjugation.max((w_minus - w6 * w_plus.conj()).norm());
            let rebuilt = frame.p_op[p] * a_plus
                + frame.q_op[p] * a_minus
                + frame.w_fp[p] * w_plus
                + frame.w_pf[p] * w_minus;
            res.reconstruction = res.reconstruction.max((rebuilt - m).norm());
        }
    }
    (out, res)
}

/// Solution of the vacuum-preserving constraint over the expansion ansatz,
/// solved pointwise by least squares in the doublet norm.
#[derive(Debug, Clone)]
pub struct VacuumPreservingSolution {
    pub shape: GridShape,
    /// The neutral coefficient of the vacuum-projector part.
    pub a_plus: Vec<[f64; 4]>,
    /// The solved W coefficient; zero on the solution set.
    pub w_plus: Vec<[Complex64; 4]>,
    /// Largest modulus of the solved W coefficient.
    pub w_plus_max: f64,
    /// Residual of the constraint at the solved coefficients.
    pub constraint_residual: f64,
    /// Largest modulus of the Z field implied by the solution.
    pub implied_z_max: f64,
}

/// Solve `g2 CA phi_vac + 3 g1 uCA phi_vac = 0` pointwise for the expansion
/// coefficients. The least-squares system decouples because the vacuum and
/// dual directions are orthogonal; only the neutral projector coefficient
/// survives, proportional to the hypercharge potential.
pub fn solve_vacuum_preserving(
    frame: &VacuumFrame,
    u1_ca: &[[f64; 4]],
    couplings: &Couplings,
    forms: &FiberForms,
) -> Result<VacuumPreservingSolution> {
    let (g1, g2) = (couplings.g1, couplings.g2);
    if g2 == 0.0 {
        return Err(Error::BadCoupling("g2 must be nonzero".into()));
    }
    let shape = frame.shape;
    let d3 = cr(forms.u1_d.powi(3));
    let norm = mixing_norm(g1, g2);
    let mut a_plus = vec![[0.0; 4]; shape.len()];
    let mut w_plus = vec![[C_ZERO; 4]; shape.len()];
    let mut w_max: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut z_max: f64 = 0.0;
    for p in 0..shape.len() {
        let phi = frame.phi_vac.at2(p);
        let phid = frame.phi_dual.at2(p);
        // Columns of the pointwise system: the neutral unknown acts through
        // the vacuum projector (P phi = phi), the W unknown through the
        // swap (Wfp phi = phi_dual).
        let col_a = phi * cr(g2);
        let col_w = phid * cr(g2);
        let inner = |u: &nalgebra::Vector2<Complex64>, w: &nalgebra::Vector2<Complex64>| {
            let mut acc = C_ZERO;
            for a in 0..2 {
                for ab in 0..2 {
                    acc += forms.su2_d[(a, ab)] * d3 * u[a] * w[ab].conj();
                }
            }
            acc
        };
        let na = inner(&col_a, &col_a).re;
        let nw = inner(&col_w, &col_w).re;
        for k in 0..4 {
            let b = phi * cr(-3.0 * g1 * u1_ca[p][k]);
            let xa = inner(&b, &col_a) / cr(na);
            let xw = inner(&b, &col_w) / cr(nw);
            a_plus[p][k] = xa.re;
            w_plus[p][k] = xw;
            w_max = w_max.max(xw.norm());
            let r = col_a * xa + col_w * xw - b;
            residual = residual.max(r.norm());
            // Rotate (a3 = -a_plus, uCA) into the Z direction.
            let z = (g2 * xa.re + 3.0 * g1 * u1_ca[p][k]) / norm;
            z_max = z_max.max(z.abs());
        }
    }
    Ok(VacuumPreservingSolution {
        shape,
        a_plus,
        w_plus,
        w_plus_max: w_max,
        constraint_residual: residual,
        implied_z_max: z_max,
    })
}

/// Residual of the vacuum-preserving constraint for explicit potentials.
pub fn vacuum_preservation_residual(
    su2_ca: &Su2Connection,
    u1_ca: &[[f64; 4]],
    frame: &VacuumFrame,
    couplings: &Couplings,
) -> f64 {
    let (g1, g2) = (couplings.g1, couplings.g2);
    let mut worst: f64 = 0.0;
    for p in 0..frame.shape.len() {
        let phi = frame.phi_vac.at2(p);
        for k in 0..4 {
            let r = su2_ca[p][k] * phi * cr(g2) + phi * cr(3.0 * g1 * u1_ca[p][k]);
            worst = worst.max(r.norm());
        }
    }
    worst
}

/// Neutral rotation from `(a3, uCA)` to `(z, a)`.
pub fn az_rotation(
    a3: &[[f64; 4]],
    u_ca: &[[f64; 4]],
    g1: f64,
    g2: f64,
) -> Result<(RealCovectorField, RealCovectorField)> {
    let norm = mixing_norm(g1, g2);
    if norm == 0.0 {
        return Err(Error::BadCoupling("g1 and g2 cannot both vanish".into()));
    }
    let mut z = vec![[0.0; 4]; a3.len()];
    let mut a = vec![[0.0; 4]; a3.len()];
    for p in 0..a3.len() {
        for k in 0..4 {
            z[p][k] = (-g2 * a3[p][k] + 3.0 * g1 * u_ca[p][k]) / norm;
            a[p][k] = (3.0 * g1 * a3[p][k] + g2 * u_ca[p][k]) / norm;
        }
    }
    Ok((z, a))
}

/// Inverse of [`az_rotation`].
pub fn az_inverse(
    a: &[[f64; 4]],
    z: &[[f64; 4]],
    g1: f64,
    g2: f64,
) -> Result<(RealCovectorField, RealCovectorField)> {
    let norm = mixing_norm(g1, g2);
    if norm == 0.0 {
        return Err(Error::BadCoupling("g1 and g2 cannot both vanish".into()));
    }
    let mut a3 = vec![[0.0; 4]; a.len()];
    let mut u_ca = vec![[0.0; 4]; a.len()];
    for p in 0..a.len() {
        for k in 0..4 {
            a3[p][k] = (3.0 * g1 * a[p][k] - g2 * z[p][k]) / norm;
            u_ca[p][k] = (g2 * a[p][k] + 3.0 * g1 * z[p][k]) / norm;
        }
    }
    Ok((a3, u_ca))
}

/// Hypercharge potential carried by the photon and Z fields.
pub fn u1_potential_of(bosons: &BosonFields, g1: f64, g2: f64) -> Vec<[f64; 4]> {
    let norm = mixing_norm(g1, g2);
    let mut out = vec![[0.0; 4]; bosons.shape.len()];
    for p in 0..bosons.shape.len() {
        for k in 0..4 {
            out[p][k] = (g2 * bosons.a[p][k] + 3.0 * g1 * bosons.z[p][k]) / norm;
        }
    }
    out
}

/// Rebuild the isospin potential from broken-phase fields: the neutral
/// combination on the projector difference plus the W components on the
/// swaps.
pub fn recompose_su2(bosons: &BosonFields, frame: &VacuumFrame, g1: f64, g2: f64) -> Su2Connection {
    let norm = mixing_norm(g1, g2);
    let mut out = vec![[Mat2::zeros(); 4]; frame.shape.len()];
    for p in 0..frame.shape.len() {
        let qp = frame.q_op[p] - frame.p_op[p];
        for k in 0..4 {
            let a3 = (3.0 * g1 * bosons.a[p][k] - g2 * bosons.z[p][k]) / norm;
            out[p][k] = qp * cr(a3)
                + frame.w_fp[p] * bosons.w_plus[p][k]
                + frame.w_pf[p] * bosons.w_minus[p][k];
        }
    }
    out
}

/// Gauge potentials carried by a broken-phase configuration: hypercharge
/// from the neutral rotation, isospin from the recomposition, no color.
pub fn broken_potentials(
    bosons: &BosonFields,
    frame: &VacuumFrame,
    couplings: &Couplings,
    constants: &PhysConstants,
) -> GaugePotentials {
    let mut pot = GaugePotentials::zeros(bosons.shape, *couplings, *constants);
    pot.u1 = u1_potential_of(bosons, couplings.g1, couplings.g2);
    pot.su2 = recompose_su2(bosons, frame, couplings.g1, couplings.g2);
    pot
}

/// Curls of the broken-phase fields: plain antisymmetrized vacuum
/// derivatives for the photon and Z, dressed covariant curls for the two W
/// fields, which carry hypercharge weight and therefore see both the vacuum
/// hypercharge coefficients and the neutral potential.
#[derive(Debug, Clone)]
pub struct BosonStrengths {
    pub shape: GridShape,
    f: Vec<[Complex64; 6]>,
    z: Vec<[Complex64; 6]>,
    wp: Vec<[Complex64; 6]>,
    wm: Vec<[Complex64; 6]>,
}

impl BosonStrengths {
    fn pick(table: &[[Complex64; 6]], p: usize, i: usize, j: usize) -> Complex64 {
        if i == j {
            return C_ZERO;
        }
        let (n, s) = if i < j {
            (PAIRS.iter().position(|&q| q == (i, j)).unwrap(), 1.0)
        } else {
            (PAIRS.iter().position(|&q| q == (j, i)).unwrap(), -1.0)
        };
        table[p][n] * cr(s)
    }

    pub fn f_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        Self::pick(&self.f, p, i, j)
    }

    pub fn z_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        Self::pick(&self.z, p, i, j)
    }

    pub fn wp_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        Self::pick(&self.wp, p, i, j)
    }

    pub fn wm_at(&self, p: usize, i: usize, j: usize) -> Complex64 {
        Self::pick(&self.wm, p, i, j)
    }
}

pub fn boson_field_strengths(
    bosons: &BosonFields,
    vacuum: &ConnectionSet,
    sc: &StructureConstants,
    chart: &Chart,
    couplings: &Couplings,
    constants: &PhysConstants,
) -> BosonStrengths {
    let shape = chart.shape;
    let n = shape.len();
    let u_ca = u1_potential_of(bosons, couplings.g1, couplings.g2);
    let dress = c(
        0.0,
        6.0 * constants.e * couplings.g1 / (constants.hbar * constants.c),
    );
    let mut f = vec![[C_ZERO; 6]; n];
    let mut z = vec![[C_ZERO; 6]; n];
    let mut wp = vec![[C_ZERO; 6]; n];
    let mut wm = vec![[C_ZERO; 6]; n];

    for idx in shape.iter() {
        let p = shape.flat(idx);
        for (npair, &(i, j)) in PAIRS.iter().enumerate() {
            let curl_real = |field: &Vec<[f64; 4]>| -> Complex64 {
                let mut v = chart.lie_at(&|q: usize| cr(field[q][j]), idx, i)
                    - chart.lie_at(&|q: usize| cr(field[q][i]), idx, j);
                for h in 0..4 {
                    v -= cr(sc.get(p, h, i, j) * field[p][h]);
                }
                v
            };
            f[p][npair] = curl_real(&bosons.a);
            z[p][npair] = curl_real(&bosons.z);

            let mut cp = chart.lie_at(&|q: usize| bosons.w_plus[q][j], idx, i)
                - chart.lie_at(&|q: usize| bosons.w_plus[q][i], idx, j);
            for h in 0..4 {
                cp -= cr(sc.get(p, h, i, j)) * bosons.w_plus[p][h];
            }
            cp += (vacuum.u1[p][i] * bosons.w_plus[p][j] - vacuum.u1[p][j] * bosons.w_plus[p][i])
                * cr(6.0);
            cp -= dress
                * (cr(u_ca[p][i]) * bosons.w_plus[p][j] - cr(u_ca[p][j]) * bosons.w_plus[p][i]);
            wp[p][npair] = cp;

            let mut cm = chart.lie_at(&|q: usize| bosons.w_minus[q][j], idx, i)
                - chart.lie_at(&|q: usize| bosons.w_minus[q][i], idx, j);
            for h in 0..4 {
                cm -= cr(sc.get(p, h, i, j)) * bosons.w_minus[p][h];
            }
            cm -= (vacuum.u1[p][i] * bosons.w_minus[p][j] - vacuum.u1[p][j] * bosons.w_minus[p][i])
                * cr(6.0);
            cm += dress
                * (cr(u_ca[p][i]) * bosons.w_minus[p][j] - cr(u_ca[p][j]) * bosons.w_minus[p][i]);
            wm[p][npair] = cm;
        }
    }
    BosonStrengths {
        shape,
        f,
        z,
        wp,
        wm,
    }
}

/// Central derivation check of the module: the isospin and hypercharge
/// field strengths computed from the recomposed potentials must match the
/// closed forms assembled from the broken-phase curls. Returns the two
/// max-norm differences `(isospin, hypercharge)` over interior points.
pub fn expand_field_strength_check(
    bosons: &BosonFields,
    frame: &VacuumFrame,
    vacuum: &ConnectionSet,
    sc: &StructureConstants,
    chart: &Chart,
    couplings: &Couplings,
    constants: &PhysConstants,
) -> (f64, f64) {
    let (g1, g2) = (couplings.g1, couplings.g2);
    let norm = mixing_norm(g1, g2);
    let pot = broken_potentials(bosons, frame, couplings, constants);
    let direct = field_strength(&pot, vacuum, sc, chart).strength;
    let curls = boson_field_strengths(bosons, vacuum, sc, chart, couplings, constants);
    let base = constants.e / (constants.hbar * constants.c);
    let s2 = c(0.0, base * g2);
    let zdress = c(0.0, 2.0 * base * norm);

    let mut worst_su2: f64 = 0.0;
    let mut worst_u1: f64 = 0.0;
    for idx in chart.shape.iter_interior() {
        let p = chart.shape.flat(idx);
        let qp = frame.q_op[p] - frame.p_op[p];
        for (npair, &(i, j)) in PAIRS.iter().enumerate() {
            let wwedge = bosons.w_plus[p][i] * bosons.w_minus[p][j]
                - bosons.w_plus[p][j] * bosons.w_minus[p][i];
            let neutral = (curls.f[p][npair] * cr(3.0 * g1) - curls.z[p][npair] * cr(g2))
                / cr(norm)
                - s2 * wwedge;
            let zwp =
                cr(bosons.z[p][i]) * bosons.w_plus[p][j] - cr(bosons.z[p][j]) * bosons.w_plus[p][i];
            let zwm = cr(bosons.z[p][i]) * bosons.w_minus[p][j]
                - cr(bosons.z[p][j]) * bosons.w_minus[p][i];
            let closed = qp * neutral
                + frame.w_fp[p] * (curls.wp[p][npair] + zdress * zwp)
                + frame.w_pf[p] * (curls.wm[p][npair] - zdress * zwm);
            worst_su2 = worst_su2.max((closed - direct.su2_at(p, i, j)).norm());

            let closed_u1 =
                (curls.f[p][npair] * cr(g2) + curls.z[p][npair] * cr(3.0 * g1)) / cr(norm);
            worst_u1 = worst_u1.max((closed_u1 - direct.u1_at(p, i, j)).norm());
        }
    }
    (worst_su2, worst_u1)
}

/// The eight bosonic Lagrangian terms, the imaginary-part residual of the
/// integrals, and the two-path residual of their sum against the kinetic
/// actions of the recomposed potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonLagrangian {
    pub l11: f64,
    pub l12: f64,
    pub l21: f64,
    pub l22: f64,
    pub l23: f64,
    pub l24: f64,
    pub l25: f64,
    pub l26: f64,
    pub imag_residual: f64,
    pub sum_vs_kinetic_residual: f64,
}

impl BosonLagrangian {
    pub fn sum(&self) -> f64 {
        self.l11 + self.l12 + self.l21 + self.l22 + self.l23 + self.l24 + self.l25 + self.l26
    }
}

pub fn boson_lagrangian(
    bosons: &BosonFields,
    frame: &VacuumFrame,
    vacuum: &ConnectionSet,
    sc: &StructureConstants,
    chart: &Chart,
    couplings: &Couplings,
    constants: &PhysConstants,
) -> BosonLagrangian {
    let shape = chart.shape;
    let (g1, g2) = (couplings.g1, couplings.g2);
    let norm = mixing_norm(g1, g2);
    let pi = std::f64::consts::PI;
    let (e, hbar, cc) = (constants.e, constants.hbar, constants.c);
    let curls = boson_field_strengths(bosons, vacuum, sc, chart, couplings, constants);

    let mut acc = [C_ZERO; 8];
    let cell = shape.cell_volume();
    for idx in shape.iter_interior() {
        let p = shape.flat(idx);
        let ginv = chart.frame_metric_inv(p);
        let w = cr(chart.sqrt_neg_det(p) * cell);
        let raise = |v: &[Complex64; 4]| -> [Complex64; 4] {
            let mut out = [C_ZERO; 4];
            for (i, slot) in out.iter_mut().enumerate() {
                for j in 0..4 {
                    if ginv[(i, j)] != 0.0 {
                        *slot += cr(ginv[(i, j)]) * v[j];
                    }
                }
            }
            out
        };
        let wpv: [Complex64; 4] = bosons.w_plus[p];
        let wmv: [Complex64; 4] = bosons.w_minus[p];
        let zf: [Complex64; 4] = [
            cr(bosons.z[p][0]),
            cr(bosons.z[p][1]),
            cr(bosons.z[p][2]),
            cr(bosons.z[p][3]),
        ];
        let wp_up = raise(&wpv);
        let wm_up = raise(&wmv);
        let z_up = raise(&zf);
        let dot = |a: &[Complex64; 4], b_up: &[Complex64; 4]| -> Complex64 {
            a.iter().zip(b_up.iter()).map(|(x, y)| x * y).sum()
        };

        let mut ff = C_ZERO;
        let mut zz = C_ZERO;
        let mut wpwm = C_ZERO;
        let mut f_wpwm = C_ZERO;
        let mut z_wpwm = C_ZERO;
        let mut wcurl_z_w = C_ZERO;
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let mut fu = C_ZERO;
                let mut zu = C_ZERO;
                let mut wmu = C_ZERO;
                for m in 0..4 {
                    for nn in 0..4 {
                        let gg = ginv[(i, m)] * ginv[(j, nn)];
                        if gg == 0.0 {
                            continue;
                        }
                        fu += cr(gg) * curls.f_at(p, m, nn);
                        zu += cr(gg) * curls.z_at(p, m, nn);
                        wmu += cr(gg) * curls.wm_at(p, m, nn);
                    }
                }
                ff += curls.f_at(p, i, j) * fu;
                zz += curls.z_at(p, i, j) * zu;
                wpwm += curls.wp_at(p, i, j) * wmu;
                f_wpwm += fu * wpv[i] * wmv[j];
                z_wpwm += zu * wpv[i] * wmv[j];
                wcurl_z_w += curls.wp_at(p, i, j) * z_up[i] * wm_up[j]
                    - curls.wm_at(p, i, j) * z_up[i] * wp_up[j];
            }
        }
        acc[0] += w * ff;
        acc[1] += w * zz;
        acc[2] += w * wpwm;
        let pw = dot(&wpv, &wm_up);
        let pp = dot(&wpv, &wp_up);
        let mm = dot(&wmv, &wm_up);
        let zz_dot = dot(&zf, &z_up);
        let zwp = dot(&zf, &wp_up);
        let zwm = dot(&zf, &wm_up);
        acc[3] += w * (pw * pw - pp * mm);
        acc[4] += w * f_wpwm;
        acc[5] += w * z_wpwm;
        acc[6] += w * (zz_dot * pw - zwp * zwm);
        acc[7] += w * wcurl_z_w;
    }

    let kappa2 = (e * g2 / (hbar * cc)).powi(2);
    let l11 = acc[0] * cr(-1.0 / (16.0 * pi * cc));
    let l12 = acc[1] * cr(-1.0 / (16.0 * pi * cc));
    let l21 = acc[2] * cr(-1.0 / (16.0 * pi * cc));
    let l22 = acc[3] * cr(-kappa2 / (8.0 * pi * cc));
    let l23 = acc[4] * c(0.0, 3.0 * e * g2 * g1 / (4.0 * pi * hbar * cc * cc * norm));
    let l24 = acc[5] * c(0.0, -e * g2 * g2 / (4.0 * pi * hbar * cc * cc * norm));
    let l25 = acc[6] * cr(-e * e * norm * norm / (2.0 * pi * hbar * hbar * cc.powi(3)));
    let l26 = acc[7] * c(0.0, e * norm / (4.0 * pi * hbar * cc * cc));

    let terms = [l11, l12, l21, l22, l23, l24, l25, l26];
    let imag_residual = terms.iter().map(|t| t.im.abs()).fold(0.0, f64::max);
    let sum: f64 = terms.iter().map(|t| t.re).sum();

    let pot = broken_potentials(bosons, frame, couplings, constants);
    let fs = field_strength(&pot, vacuum, sc, chart).strength;
    let kin = gauge_kinetic_actions(&fs, chart, constants);
    let sum_vs_kinetic_residual = (sum - (kin.l1 + kin.l2)).abs();

    BosonLagrangian {
        l11: l11.re,
        l12: l12.re,
        l21: l21.re,
        l22: l22.re,
        l23: l23.re,
        l24: l24.re,
        l25: l25.re,
        l26: l26.re,
        imag_residual,
        sum_vs_kinetic_residual,
    }
}
