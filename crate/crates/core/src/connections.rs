//! Gauge and spinor connections, species-aware covariant differentiation,
//! concordance residuals, the vacuum/non-vacuum gauge split and SU(2) gauge
//! transformations.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::bundles::{c, cr, FiberForms, Mat2, Mat3, Mat4, C_I, C_ONE, C_ZERO};
use crate::error::{Error, Result};
use crate::fields::{BundleKind, IndexedField, Slot, Species, Variance};
use crate::grid::GridShape;
use crate::manifold::{levi_civita, structure_constants, Chart, LeviCivita};

pub type U1Connection = Vec<[Complex64; 4]>;
pub type Su2Connection = Vec<[Mat2; 4]>;
pub type Su3Connection = Vec<[Mat3; 4]>;
pub type SpinorConnection = Vec<[Mat4; 4]>;

/// Connection coefficients for every bundle over a chart, plus the
/// Levi-Civita symbols of the chart metric.
///
/// No algebraic constraint is imposed at construction; concordance and
/// flatness are checked by residual operations, not forced.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    pub shape: GridShape,
    pub u1: U1Connection,
    pub su2: Su2Connection,
    pub su3: Su3Connection,
    pub spinor: SpinorConnection,
    pub levi_civita: LeviCivita,
}

impl ConnectionSet {
    /// All gauge and spinor coefficients zero; Levi-Civita symbols from the
    /// chart metric.
    pub fn trivial_flat(chart: &Chart) -> Result<Self> {
        let sc = structure_constants(chart)?;
        let lc = levi_civita(chart, &sc)?;
        let n = chart.shape.len();
        Ok(Self {
            shape: chart.shape,
            u1: vec![[C_ZERO; 4]; n],
            su2: vec![[Mat2::zeros(); 4]; n],
            su3: vec![[Mat3::zeros(); 4]; n],
            spinor: vec![[Mat4::zeros(); 4]; n],
            levi_civita: lc,
        })
    }

    /// Constant purely imaginary hypercharge coefficients with commuting
    /// anti-Hermitian traceless isospin and color coefficients.
    ///
    /// The isospin part is tied to the hypercharge part so that the standard
    /// Higgs vacuum `(v/sqrt(2), 0)` stays covariantly constant. Constant
    /// coefficients are flat only in frames with vanishing structure
    /// constants, so this preset belongs on coordinate-frame charts.
    pub fn imaginary_constant(chart: &Chart) -> Result<Self> {
        let mut conn = Self::trivial_flat(chart)?;
        let b = [0.2, 0.1, -0.15, 0.05];
        let g = [0.1, -0.05, 0.2, 0.15];
        for p in 0..chart.shape.len() {
            for k in 0..4 {
                conn.u1[p][k] = c(0.0, b[k]);
                conn.su2[p][k] = Mat2::from_diagonal(&nalgebra::Vector2::new(
                    c(0.0, -3.0 * b[k]),
                    c(0.0, 3.0 * b[k]),
                ));
                conn.su3[p][k] = Mat3::from_diagonal(&nalgebra::Vector3::new(
                    c(0.0, g[k]),
                    c(0.0, g[k]),
                    c(0.0, -2.0 * g[k]),
                ));
            }
        }
        Ok(conn)
    }

    /// Build one of the named vacuum presets.
    pub fn vacuum_preset(name: &str, chart: &Chart) -> Result<Self> {
        match name {
            "trivial-flat" => Self::trivial_flat(chart),
            "imaginary-constant" => Self::imaginary_constant(chart),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn vacuum_catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            ("trivial-flat", "all gauge connections zero"),
            (
                "imaginary-constant",
                "constant imaginary hypercharge with commuting anti-Hermitian traceless isospin/color parts",
            ),
        ]
    }
}

/// Physical constants entering the gauge split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    pub e: f64,
    pub hbar: f64,
    pub c: f64,
}

impl PhysConstants {
    /// Natural units, e = hbar = c = 1.
    pub fn natural() -> Self {
        Self {
            e: 1.0,
            hbar: 1.0,
            c: 1.0,
        }
    }

    /// CGS values of the positron charge, Planck constant and light speed.
    pub fn cgs_nist() -> Self {
        Self {
            e: 4.804_204_40e-10,
            hbar: 1.054_571_68e-27,
            c: 2.997_924_58e10,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "natural" => Ok(Self::natural()),
            "cgs-nist" => Ok(Self::cgs_nist()),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            ("natural", "e = hbar = c = 1"),
            (
                "cgs-nist",
                "CGS values e ~ 4.80420440e-10, hbar ~ 1.05457168e-27, c ~ 2.99792458e10",
            ),
        ]
    }
}

/// Coupling constants of the three gauge groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl Couplings {
    /// `g2 = 1` with `g1` solving the charge normalization constraint.
    pub fn constrained_g2_unit() -> Self {
        Self {
            g1: 1.0 / (3.0 * 3.0_f64.sqrt()),
            g2: 1.0,
            g3: 1.0,
        }
    }
}

/// Tensorial gauge potentials entering the split of a connection into a
/// vacuum part and a potential part, together with couplings and constants.
#[derive(Debug, Clone)]
pub struct GaugePotentials {
    pub shape: GridShape,
    /// Real hypercharge potential.
    pub u1: Vec<[f64; 4]>,
    pub su2: Su2Connection,
    pub su3: Su3Connection,
    pub couplings: Couplings,
    pub constants: PhysConstants,
}

impl GaugePotentials {
    pub fn zeros(shape: GridShape, couplings: Couplings, constants: PhysConstants) -> Self {
        let n = shape.len();
        Self {
            shape,
            u1: vec![[0.0; 4]; n],
            su2: vec![[Mat2::zeros(); 4]; n],
            su3: vec![[Mat3::zeros(); 4]; n],
            couplings,
            constants,
        }
    }

    /// `i e g / (hbar c)` for the three couplings.
    pub fn split_factors(&self) -> [Complex64; 3] {
        let base = self.constants.e / (self.constants.hbar * self.constants.c);
        [
            C_I * cr(base * self.couplings.g1),
            C_I * cr(base * self.couplings.g2),
            C_I * cr(base * self.couplings.g3),
        ]
    }
}

/// Superpose gauge potentials on a vacuum connection:
/// `A = A[vac] - (i e g / hbar c) CA` per bundle. Spinor and Levi-Civita
/// parts pass through.
pub fn compose_gauge(vacuum: &ConnectionSet, potentials: &GaugePotentials) -> ConnectionSet {
    assert_eq!(vacuum.shape, potentials.shape, "grid shape mismatch");
    let [s1, s2, s3] = potentials.split_factors();
    let mut out = vacuum.clone();
    for p in 0..vacuum.shape.len() {
        for k in 0..4 {
            out.u1[p][k] -= s1 * potentials.u1[p][k];
            out.su2[p][k] -= potentials.su2[p][k] * s2;
            out.su3[p][k] -= potentials.su3[p][k] * s3;
        }
    }
    out
}

/// Species-aware covariant derivative. The result carries one extra lower
/// tangent slot in front: component `[k, ...]` is the derivative along the
/// frame vector `Y_k`.
pub fn covariant_derivative(
    field: &IndexedField,
    species: &Species,
    conn: &ConnectionSet,
    chart: &Chart,
) -> Result<IndexedField> {
    species.matches(field)?;
    derivative_raw(field, conn, chart)
}

/// Covariant derivative driven purely by the field's index signature:
/// connection action on every slot plus the hypercharge weight term. Used
/// both by [`covariant_derivative`] and for derived fields (duals,
/// reconstruction coefficients) whose signatures are not in the species
/// table.
pub fn derivative_raw(
    field: &IndexedField,
    conn: &ConnectionSet,
    chart: &Chart,
) -> Result<IndexedField> {
    if field.shape != chart.shape {
        return Err(Error::ShapeMismatch(
            "field shape does not match chart".into(),
        ));
    }
    let shape = field.shape;
    let flen = field.fiber_len();
    let mut slots = Vec::with_capacity(field.slots.len() + 1);
    slots.push(Slot::down(BundleKind::Tangent));
    slots.extend_from_slice(&field.slots);
    let mut out = IndexedField::zeros(shape, slots, field.u1_weight);
    let weight = cr(field.u1_weight as f64);

    let dims = field.fiber_dims();
    let strides: Vec<usize> = (0..field.slots.len()).map(|s| field.stride(s)).collect();

    for idx in shape.iter() {
        let p = shape.flat(idx);
        for k in 0..4 {
            for fidx in 0..flen {
                let get = |q: usize| field.get_flat(q, fidx);
                let mut val = chart.lie_at(&get, idx, k);
                if field.u1_weight != 0 {
                    val += weight * conn.u1[p][k] * field.get_flat(p, fidx);
                }
                for (s, slot) in field.slots.iter().enumerate() {
                    let dim = dims[s];
                    let stride = strides[s];
                    let a = (fidx / stride) % dim;
                    let base = fidx - a * stride;
                    match (slot.kind, slot.variance) {
                        (BundleKind::Dirac, Variance::Up) => {
                            for b in 0..dim {
                                val += conn.spinor[p][k][(a, b)]
                                    * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Dirac, Variance::Down) => {
                            for b in 0..dim {
                                val -= conn.spinor[p][k][(b, a)]
                                    * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Su2, Variance::Up) => {
                            for b in 0..dim {
                                val +=
                                    conn.su2[p][k][(a, b)] * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Su2, Variance::Down) => {
                            for b in 0..dim {
                                val -=
                                    conn.su2[p][k][(b, a)] * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Su3, Variance::Up) => {
                            for b in 0..dim {
                                val +=
                                    conn.su3[p][k][(a, b)] * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Su3, Variance::Down) => {
                            for b in 0..dim {
                                val -=
                                    conn.su3[p][k][(b, a)] * field.get_flat(p, base + b * stride);
                            }
                        }
                        (BundleKind::Tangent, Variance::Down) => {
                            for h in 0..dim {
                                val -= cr(conn.levi_civita.get(p, h, k, a))
                                    * field.get_flat(p, base + h * stride);
                            }
                        }
                        (BundleKind::Tangent, Variance::Up) => {
                            for h in 0..dim {
                                val += cr(conn.levi_civita.get(p, a, k, h))
                                    * field.get_flat(p, base + h * stride);
                            }
                        }
                        (BundleKind::U1, _) => unreachable!("hypercharge indices are weights"),
                    }
                }
                out.set_flat(p, k * flen + fidx, val);
            }
        }
    }
    Ok(out)
}

/// Max-norms of the five concordance residuals plus the spinor-form check,
/// evaluated over interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcordanceResiduals {
    /// Hypercharge metric residual.
    pub u1_d: f64,
    /// Isospin metric residual.
    pub su2_d: f64,
    /// Isospin symplectic-form residual.
    pub su2_eps: f64,
    /// Color metric residual.
    pub su3_d: f64,
    /// Color volume-form residual.
    pub su3_eps: f64,
    /// Dirac form residual against the spinor connection.
    pub dirac_d: f64,
}

impl ConcordanceResiduals {
    pub fn gauge_max(&self) -> f64 {
        self.u1_d
            .max(self.su2_d)
            .max(self.su2_eps)
            .max(self.su3_d)
            .max(self.su3_eps)
    }
}

/// Forms over the chart: constant in the standard gauge, or sampled
/// pointwise when a non-constant gauge is being probed.
#[derive(Debug, Clone)]
pub enum FormsField {
    Constant(Box<FiberForms>),
    Sampled(Vec<FiberForms>),
}

impl FormsField {
    pub fn at(&self, p: usize) -> &FiberForms {
        match self {
            FormsField::Constant(f) => f,
            FormsField::Sampled(v) => &v[p],
        }
    }

    pub fn constant(&self) -> Option<&FiberForms> {
        match self {
            FormsField::Constant(f) => Some(f),
            FormsField::Sampled(_) => None,
        }
    }
}

/// Evaluate the concordance residuals of a connection set against the
/// bundle forms: each residual is the covariant derivative of the
/// corresponding basic form, which must vanish for a concordant connection.
pub fn concordance_residuals(
    conn: &ConnectionSet,
    forms: &FormsField,
    chart: &Chart,
) -> ConcordanceResiduals {
    let shape = chart.shape;
    let mut out = ConcordanceResiduals {
        u1_d: 0.0,
        su2_d: 0.0,
        su2_eps: 0.0,
        su3_d: 0.0,
        su3_eps: 0.0,
        dirac_d: 0.0,
    };
    for idx in shape.iter_interior() {
        let p = shape.flat(idx);
        let f = forms.at(p);
        for k in 0..4 {
            let a1 = conn.u1[p][k];
            let lie_u1 = chart.lie_at(&|q: usize| cr(forms.at(q).u1_d), idx, k);
            let r = lie_u1 - cr(f.u1_d) * a1 - cr(f.u1_d) * a1.conj();
            out.u1_d = out.u1_d.max(r.norm());

            let a2 = conn.su2[p][k];
            for i in 0..2 {
                for jb in 0..2 {
                    let lie = chart.lie_at(&|q: usize| forms.at(q).su2_d[(i, jb)], idx, k);
                    let mut r = lie;
                    for a in 0..2 {
                        r -= f.su2_d[(a, jb)] * a2[(a, i)];
                        r -= f.su2_d[(i, a)] * a2[(a, jb)].conj();
                    }
                    out.su2_d = out.su2_d.max(r.norm());
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    let lie = chart.lie_at(&|q: usize| forms.at(q).su2_eps[(i, j)], idx, k);
                    let mut r = lie;
                    for a in 0..2 {
                        r -= f.su2_eps[(a, j)] * a2[(a, i)];
                        r -= f.su2_eps[(i, a)] * a2[(a, j)];
                    }
                    out.su2_eps = out.su2_eps.max(r.norm());
                }
            }

            let a3 = conn.su3[p][k];
            for i in 0..3 {
                for jb in 0..3 {
                    let lie = chart.lie_at(&|q: usize| forms.at(q).su3_d[(i, jb)], idx, k);
                    let mut r = lie;
                    for a in 0..3 {
                        r -= f.su3_d[(a, jb)] * a3[(a, i)];
                        r -= f.su3_d[(i, a)] * a3[(a, jb)].conj();
                    }
                    out.su3_d = out.su3_d.max(r.norm());
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    for m in 0..3 {
                        let lie = chart.lie_at(&|q: usize| forms.at(q).su3_eps[i][j][m], idx, k);
                        let mut r = lie;
                        for a in 0..3 {
                            r -= f.su3_eps[a][j][m] * a3[(a, i)];
                            r -= f.su3_eps[i][a][m] * a3[(a, j)];
                            r -= f.su3_eps[i][j][a] * a3[(a, m)];
                        }
                        out.su3_eps = out.su3_eps.max(r.norm());
                    }
                }
            }

            let asp = conn.spinor[p][k];
            for i in 0..4 {
                for jb in 0..4 {
                    let lie = chart.lie_at(&|q: usize| forms.at(q).dirac_d[(i, jb)], idx, k);
                    let mut r = lie;
                    for a in 0..4 {
                        r -= f.dirac_d[(a, jb)] * asp[(a, i)];
                        r -= f.dirac_d[(i, a)] * asp[(a, jb)].conj();
                    }
                    out.dirac_d = out.dirac_d.max(r.norm());
                }
            }
        }
    }
    out
}

/// Max-norms of the algebraic constraints the tensorial gauge potentials
/// inherit from concordance: reality of the hypercharge part, metric
/// Hermiticity and form symmetry of the isospin and color parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialConstraintResiduals {
    pub su2_hermitian: f64,
    pub su2_eps: f64,
    pub su3_hermitian: f64,
    pub su3_eps: f64,
}

impl PotentialConstraintResiduals {
    pub fn max(&self) -> f64 {
        self.su2_hermitian
            .max(self.su2_eps)
            .max(self.su3_hermitian)
            .max(self.su3_eps)
    }
}

/// Check the pointwise constraints on a set of gauge potentials. The
/// hypercharge part is stored real, so only the matrix conditions remain.
pub fn potential_constraint_residuals(
    potentials: &GaugePotentials,
    forms: &FiberForms,
) -> PotentialConstraintResiduals {
    let d2 = forms.su2_d;
    let d3 = forms.su3_d;
    let eps2 = forms.su2_eps;
    let eps3 = forms.su3_eps;
    let mut out = PotentialConstraintResiduals {
        su2_hermitian: 0.0,
        su2_eps: 0.0,
        su3_hermitian: 0.0,
        su3_eps: 0.0,
    };
    for p in 0..potentials.shape.len() {
        for k in 0..4 {
            let m2 = potentials.su2[p][k];
            out.su2_hermitian = out
                .su2_hermitian
                .max((m2.transpose() * d2 - d2 * m2.conjugate()).norm());
            let e2 = m2.transpose() * eps2;
            out.su2_eps = out.su2_eps.max((e2 - e2.transpose()).norm());

            let m3 = potentials.su3[p][k];
            out.su3_hermitian = out
                .su3_hermitian
                .max((m3.transpose() * d3 - d3 * m3.conjugate()).norm());
            let mut worst3: f64 = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for m in 0..3 {
                        let mut acc = C_ZERO;
                        for a in 0..3 {
                            acc += eps3[a][j][m] * m3[(a, i)];
                            acc += eps3[i][a][m] * m3[(a, j)];
                            acc += eps3[i][j][a] * m3[(a, m)];
                        }
                        worst3 = worst3.max(acc.norm());
                    }
                }
            }
            out.su3_eps = out.su3_eps.max(worst3);
        }
    }
    out
}

/// A field of 2x2 gauge matrices, one per grid point.
pub type OmegaField = Vec<Mat2>;

/// Closed-form exponential of `i (n . sigma)` in the fundamental
/// representation; always special-unitary.
pub fn su2_exp(n: [f64; 3]) -> Mat2 {
    let theta = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let id = Mat2::identity();
    if theta < 1e-300 {
        return id;
    }
    let (s, ct) = (theta.sin() / theta, theta.cos());
    let nx = Matrix2::new(
        c(0.0, n[2] * s),
        c(n[1] * s, n[0] * s),
        c(-n[1] * s, n[0] * s),
        c(0.0, -n[2] * s),
    );
    id * cr(ct) + nx
}

/// Residual of the special-unitarity conditions for one matrix.
pub fn special_unitary_residual(m: &Mat2) -> f64 {
    let unit = (m.adjoint() * m - Mat2::identity()).norm();
    let det = (m.determinant() - C_ONE).norm();
    unit.max(det)
}

/// Apply an SU(2) gauge transformation to a Higgs-type doublet and the
/// isospin connection: the doublet rotates pointwise, the connection picks
/// up the conjugated part minus the logarithmic derivative of the gauge
/// field.
pub fn su2_gauge_transform(
    omega: &OmegaField,
    higgs: &IndexedField,
    su2: &Su2Connection,
    chart: &Chart,
) -> Result<(IndexedField, Su2Connection)> {
    let shape = chart.shape;
    if omega.len() != shape.len() || su2.len() != shape.len() || higgs.shape != shape {
        return Err(Error::ShapeMismatch(
            "gauge field, connection and chart must share the grid".into(),
        ));
    }
    for idx in shape.iter() {
        let p = shape.flat(idx);
        let res = special_unitary_residual(&omega[p]);
        if res > 1e-8 {
            return Err(Error::NotSpecialUnitary {
                point: idx,
                residual: res,
            });
        }
    }

    let mut phi_out = higgs.clone();
    for p in 0..shape.len() {
        phi_out.set2(p, omega[p] * higgs.at2(p));
    }

    let mut su2_out = vec![[Mat2::zeros(); 4]; shape.len()];
    for idx in shape.iter() {
        let p = shape.flat(idx);
        let inv = omega[p].try_inverse().expect("special unitary");
        for k in 0..4 {
            let mut lie = Mat2::zeros();
            for a in 0..2 {
                for s in 0..2 {
                    lie[(a, s)] = chart.lie_at(&|q: usize| omega[q][(a, s)], idx, k);
                }
            }
            let w = lie * inv;
            su2_out[p][k] = omega[p] * su2[p][k] * inv - w;
        }
    }
    Ok((phi_out, su2_out))
}
