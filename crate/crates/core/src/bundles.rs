//! Fiber index spaces: the basic Hermitian and skew forms of the Dirac,
//! hypercharge, weak-isospin and color bundles, the gamma/chirality algebra,
//! and index raising/lowering with the antisymmetric isospin form.

use nalgebra::{Matrix2, Matrix3, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{BundleKind, Chirality, IndexedField, Species, Variance};

pub type Mat2 = Matrix2<Complex64>;
pub type Mat3 = Matrix3<Complex64>;
pub type Mat4 = Matrix4<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Dirac matrices, the chirality operator and its two projectors.
///
/// Matrices act with the upper index as the row: `(H psi)^b = H[(b, a)] psi^a`.
#[derive(Debug, Clone)]
pub struct GammaAlgebra {
    pub gamma: [Mat4; 4],
    /// Chirality operator `H = i g0 g1 g2 g3 = diag(1, 1, -1, -1)`.
    pub h: Mat4,
    /// Chiral projector `(id + H) / 2`.
    pub hdot: Mat4,
    /// Antichiral projector `(id - H) / 2`.
    pub hcirc: Mat4,
    /// Flat frame metric `diag(1, -1, -1, -1)`.
    pub eta: [f64; 4],
}

impl Default for GammaAlgebra {
    fn default() -> Self {
        Self::new()
    }
}

impl GammaAlgebra {
    pub fn new() -> Self {
        let o = C_ZERO;
        let l = C_ONE;
        let i = C_I;
        let g0 = Mat4::from_rows(&[
            [o, o, l, o].into(),
            [o, o, o, l].into(),
            [l, o, o, o].into(),
            [o, l, o, o].into(),
        ]);
        let g1 = Mat4::from_rows(&[
            [o, o, o, -l].into(),
            [o, o, -l, o].into(),
            [o, l, o, o].into(),
            [l, o, o, o].into(),
        ]);
        let g2 = Mat4::from_rows(&[
            [o, o, o, i].into(),
            [o, o, -i, o].into(),
            [o, -i, o, o].into(),
            [i, o, o, o].into(),
        ]);
        let g3 = Mat4::from_rows(&[
            [o, o, -l, o].into(),
            [o, o, o, l].into(),
            [l, o, o, o].into(),
            [o, -l, o, o].into(),
        ]);
        let h = g0 * g1 * g2 * g3 * C_I;
        let id = Mat4::identity();
        Self {
            gamma: [g0, g1, g2, g3],
            h,
            hdot: (id + h) * cr(0.5),
            hcirc: (id - h) * cr(0.5),
            eta: [1.0, -1.0, -1.0, -1.0],
        }
    }
}

/// Basic forms of the four bundles in a fixed frame gauge.
#[derive(Debug, Clone)]
pub struct FiberForms {
    /// Dirac sesquilinear form `D`, Hermitian; the gamma matrices are
    /// self-adjoint with respect to it.
    pub dirac_d: Mat4,
    /// Hypercharge metric, a positive real.
    pub u1_d: f64,
    /// Isospin Hermitian metric, positive definite.
    pub su2_d: Mat2,
    /// Isospin antisymmetric (symplectic) form.
    pub su2_eps: Mat2,
    /// Color Hermitian metric, positive definite.
    pub su3_d: Mat3,
    /// Color totally antisymmetric volume form.
    pub su3_eps: [[[Complex64; 3]; 3]; 3],
}

impl FiberForms {
    /// The standard orthonormal-frame forms: unit metrics, the symplectic
    /// 2-form `[[0, 1], [-1, 0]]` and the unit antisymmetric 3-array.
    pub fn standard() -> Self {
        let mut eps3 = [[[C_ZERO; 3]; 3]; 3];
        let perms: [([usize; 3], f64); 6] = [
            ([0, 1, 2], 1.0),
            ([1, 2, 0], 1.0),
            ([2, 0, 1], 1.0),
            ([0, 2, 1], -1.0),
            ([2, 1, 0], -1.0),
            ([1, 0, 2], -1.0),
        ];
        for (p, s) in perms {
            eps3[p[0]][p[1]][p[2]] = cr(s);
        }
        let gamma = GammaAlgebra::new();
        Self {
            dirac_d: gamma.gamma[0],
            u1_d: 1.0,
            su2_d: Mat2::identity(),
            su2_eps: Mat2::new(C_ZERO, C_ONE, -C_ONE, C_ZERO),
            su3_d: Mat3::identity(),
            su3_eps: eps3,
        }
    }

    pub fn u1_d_inv(&self) -> f64 {
        1.0 / self.u1_d
    }

    pub fn su2_d_inv(&self) -> Mat2 {
        self.su2_d.try_inverse().expect("positive definite")
    }

    pub fn su3_d_inv(&self) -> Mat3 {
        self.su3_d.try_inverse().expect("positive definite")
    }

    /// Upper-index symplectic form, the matrix inverse of `su2_eps`.
    pub fn su2_eps_up(&self) -> Mat2 {
        self.su2_eps.try_inverse().expect("nondegenerate")
    }

    /// Upper-index color volume form, the dual array scaled so that the
    /// pairing with `su3_eps` over two indices is twice the identity.
    pub fn su3_eps_up(&self) -> [[[Complex64; 3]; 3]; 3] {
        let scale = self.su3_eps[0][1][2];
        assert!(scale.norm() > 0.0, "degenerate color volume form");
        let inv = C_ONE / scale;
        let mut out = [[[C_ZERO; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j][k] = unit_eps(i, j, k) * inv;
                }
            }
        }
        out
    }

    /// Residual of the isospin concordance condition
    /// `sum eps^{ij} D_{i ibar} D_{j jbar} = -conj(eps_{ibar jbar})`.
    pub fn concordance_su2_residual(&self) -> f64 {
        let up = self.su2_eps_up();
        let mut worst: f64 = 0.0;
        for ib in 0..2 {
            for jb in 0..2 {
                let mut acc = C_ZERO;
                for i in 0..2 {
                    for j in 0..2 {
                        acc += up[(i, j)] * self.su2_d[(i, ib)] * self.su2_d[(j, jb)];
                    }
                }
                worst = worst.max((acc + self.su2_eps[(ib, jb)].conj()).norm());
            }
        }
        worst
    }

    /// Residual of the color analogue, with a plus sign:
    /// `sum eps^{ijk} D_{i ibar} D_{j jbar} D_{k kbar} = conj(eps_{ibar jbar kbar})`.
    pub fn concordance_su3_residual(&self) -> f64 {
        let up = self.su3_eps_up();
        let mut worst: f64 = 0.0;
        for ib in 0..3 {
            for jb in 0..3 {
                for kb in 0..3 {
                    let mut acc = C_ZERO;
                    for i in 0..3 {
                        for j in 0..3 {
                            for k in 0..3 {
                                acc += up[i][j][k]
                                    * self.su3_d[(i, ib)]
                                    * self.su3_d[(j, jb)]
                                    * self.su3_d[(k, kb)];
                            }
                        }
                    }
                    worst = worst.max((acc - self.su3_eps[ib][jb][kb].conj()).norm());
                }
            }
        }
        worst
    }

    /// Max-norm violation of the structural invariants: Hermiticity and
    /// positivity of the metrics, antisymmetry of the two volume forms.
    pub fn structural_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        worst = worst.max((self.dirac_d - self.dirac_d.adjoint()).norm());
        worst = worst.max((self.su2_d - self.su2_d.adjoint()).norm());
        worst = worst.max((self.su3_d - self.su3_d.adjoint()).norm());
        worst = worst.max((self.su2_eps + self.su2_eps.transpose()).norm());
        if self.u1_d <= 0.0 {
            worst = worst.max(1.0);
        }
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let e = self.su3_eps[i][j][k];
                    worst = worst.max((e + self.su3_eps[j][i][k]).norm());
                    worst = worst.max((e + self.su3_eps[i][k][j]).norm());
                }
            }
        }
        worst
    }
}

fn unit_eps(i: usize, j: usize, k: usize) -> Complex64 {
    if i == j || j == k || i == k {
        return C_ZERO;
    }
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => C_ONE,
        _ => -C_ONE,
    }
}

/// Construct the standard forms together with the gamma algebra they are
/// concordant with.
pub fn standard_forms() -> (FiberForms, GammaAlgebra) {
    (FiberForms::standard(), GammaAlgebra::new())
}

/// Max-norm of the projector applied to the field's Dirac slot: the
/// antichiral projector for chiral species, the chiral projector for
/// antichiral species. Zero means the field honors its declared chirality.
pub fn chirality_check(
    psi: &IndexedField,
    species: &Species,
    algebra: &GammaAlgebra,
) -> Result<f64> {
    species.matches(psi)?;
    let slot = psi
        .slots
        .iter()
        .position(|s| s.kind == BundleKind::Dirac)
        .ok_or_else(|| Error::ShapeMismatch("field carries no Dirac slot".into()))?;
    let projector = match species.chirality {
        Chirality::Chiral => &algebra.hcirc,
        Chirality::Antichiral => &algebra.hdot,
        Chirality::None => return Err(Error::NoChirality(species.name.to_string())),
    };
    let projected = psi.map_slot(slot, |a, b| projector[(a, b)]);
    Ok(projected.max_norm())
}

/// Contract an isospin covector slot with the upper symplectic form:
/// `t^i = sum_k t_k eps^{ki}`. The slot variance flips to upper.
pub fn raise_su2(field: &IndexedField, slot: usize, forms: &FiberForms) -> Result<IndexedField> {
    su2_move(
        field,
        slot,
        forms.su2_eps_up(),
        Variance::Down,
        Variance::Up,
    )
}

/// Contract an isospin vector slot with the lower symplectic form:
/// `t_i = sum_k t^k eps_{ki}`. The slot variance flips to lower.
pub fn lower_su2(field: &IndexedField, slot: usize, forms: &FiberForms) -> Result<IndexedField> {
    su2_move(field, slot, forms.su2_eps, Variance::Up, Variance::Down)
}

fn su2_move(
    field: &IndexedField,
    slot: usize,
    eps: Mat2,
    expect: Variance,
    to: Variance,
) -> Result<IndexedField> {
    let s = field
        .slots
        .get(slot)
        .ok_or_else(|| Error::ShapeMismatch(format!("no slot {slot}")))?;
    if s.kind != BundleKind::Su2 {
        return Err(Error::ShapeMismatch(format!(
            "slot {slot} is {:?}, expected Su2",
            s.kind
        )));
    }
    if s.variance != expect {
        return Err(Error::ShapeMismatch(format!(
            "slot {slot} has variance {:?}, expected {:?}",
            s.variance, expect
        )));
    }
    // out(i) = sum_k eps[(k, i)] in(k): first eps index contracts.
    let mut out = field.map_slot(slot, |a, b| eps[(b, a)]);
    out.slots[slot].variance = to;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Slot;
    use crate::grid::GridShape;
    use proptest::prelude::*;

    fn shape() -> GridShape {
        GridShape::new([5, 5, 5, 5], [0.1; 4], [0.0; 4])
    }

    #[test]
    fn gamma_entries_match_the_fixed_representation() {
        let g = GammaAlgebra::new();
        assert_eq!(g.gamma[0][(0, 2)], C_ONE);
        assert_eq!(g.gamma[2][(0, 3)], C_I);
        assert_eq!(g.gamma[1][(0, 3)], -C_ONE);
        assert_eq!(g.gamma[3][(0, 2)], -C_ONE);
    }

    #[test]
    fn chirality_operator_is_the_block_diagonal_involution() {
        let g = GammaAlgebra::new();
        let mut expected = Mat4::zeros();
        expected[(0, 0)] = C_ONE;
        expected[(1, 1)] = C_ONE;
        expected[(2, 2)] = -C_ONE;
        expected[(3, 3)] = -C_ONE;
        assert!((g.h - expected).norm() < 1e-15);
        assert!((g.h * g.h - Mat4::identity()).norm() < 1e-15);
    }

    #[test]
    fn clifford_relations_hold_exactly() {
        let g = GammaAlgebra::new();
        for p in 0..4 {
            for q in 0..4 {
                let anti = g.gamma[p] * g.gamma[q] + g.gamma[q] * g.gamma[p];
                let expected = Mat4::identity() * cr(2.0 * if p == q { g.eta[p] } else { 0.0 });
                assert!(
                    (anti - expected).norm() < 1e-14,
                    "Clifford failure at ({p}, {q})"
                );
            }
        }
    }

    #[test]
    fn chirality_operator_anticommutes_with_every_gamma() {
        let g = GammaAlgebra::new();
        for q in 0..4 {
            assert!((g.h * g.gamma[q] + g.gamma[q] * g.h).norm() < 1e-14);
        }
    }

    #[test]
    fn projector_algebra_is_exact() {
        let g = GammaAlgebra::new();
        assert!((g.hdot + g.hcirc - Mat4::identity()).norm() < 1e-15);
        assert!((g.hdot * g.hdot - g.hdot).norm() < 1e-15);
        assert!((g.hcirc * g.hcirc - g.hcirc).norm() < 1e-15);
        assert!((g.hdot * g.hcirc).norm() < 1e-15);
    }

    #[test]
    fn gammas_are_self_adjoint_for_the_dirac_form() {
        let (forms, g) = standard_forms();
        for q in 0..4 {
            let lhs = forms.dirac_d * g.gamma[q];
            assert!((lhs - lhs.adjoint()).norm() < 1e-14, "gamma {q}");
        }
    }

    #[test]
    fn standard_forms_satisfy_both_concordance_conditions() {
        let forms = FiberForms::standard();
        assert_eq!(forms.su2_eps[(0, 1)], C_ONE);
        assert_eq!(forms.su2_eps[(1, 0)], -C_ONE);
        assert!(forms.concordance_su2_residual() < 1e-15);
        assert!(forms.concordance_su3_residual() < 1e-15);
        assert!(forms.structural_residual() < 1e-15);
        let up = forms.su2_eps_up();
        assert_eq!(up[(0, 1)], -C_ONE);
        assert_eq!(up[(1, 0)], C_ONE);
    }

    #[test]
    fn chirality_check_accepts_upper_half_spinors_as_chiral() {
        let (_, g) = standard_forms();
        let species = Species::neutrino();
        let mut psi = IndexedField::for_species(shape(), &species);
        for p in 0..psi.shape.len() {
            psi.set(p, &[0], c(0.3, 0.1));
            psi.set(p, &[1], c(-0.2, 0.4));
        }
        assert!(chirality_check(&psi, &species, &g).unwrap() < 1e-15);
    }

    #[test]
    fn chirality_check_accepts_lower_half_spinors_as_antichiral() {
        let (_, g) = standard_forms();
        let species = Species::lepton_singlet();
        let mut psi = IndexedField::for_species(shape(), &species);
        for p in 0..psi.shape.len() {
            psi.set(p, &[2], c(0.5, 0.0));
            psi.set(p, &[3], c(0.0, -0.7));
        }
        assert!(chirality_check(&psi, &species, &g).unwrap() < 1e-15);
    }

    #[test]
    fn chirality_residual_is_the_offending_half() {
        let (_, g) = standard_forms();
        let species = Species::neutrino();
        let mut psi = IndexedField::for_species(shape(), &species);
        psi.set(7, &[0], c(1.0, 0.0));
        psi.set(7, &[2], c(0.25, 0.0));
        psi.set(9, &[3], c(0.0, -0.5));
        let res = chirality_check(&psi, &species, &g).unwrap();
        assert!((res - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chirality_check_requires_a_declared_chirality() {
        let (_, g) = standard_forms();
        let species = Species::charged_lepton();
        let psi = IndexedField::for_species(shape(), &species);
        assert!(matches!(
            chirality_check(&psi, &species, &g),
            Err(Error::NoChirality(_))
        ));
    }

    #[test]
    fn raising_the_first_basis_covector() {
        let forms = FiberForms::standard();
        let mut t = IndexedField::zeros(shape(), vec![Slot::down(BundleKind::Su2)], 0);
        for p in 0..t.shape.len() {
            t.set(p, &[0], C_ONE);
        }
        let raised = raise_su2(&t, 0, &forms).unwrap();
        assert_eq!(raised.get(0, &[0]), C_ZERO);
        assert_eq!(raised.get(0, &[1]), -C_ONE);
        assert_eq!(raised.slots[0].variance, Variance::Up);
    }

    #[test]
    fn raise_rejects_wrong_slot_kind_and_variance() {
        let forms = FiberForms::standard();
        let t = IndexedField::zeros(shape(), vec![Slot::down(BundleKind::Su3)], 0);
        assert!(raise_su2(&t, 0, &forms).is_err());
        let t = IndexedField::zeros(shape(), vec![Slot::up(BundleKind::Su2)], 0);
        assert!(raise_su2(&t, 0, &forms).is_err());
    }

    proptest! {
        // With the first-slot contraction convention the raise/lower round
        // trip composes to plus identity.
        #[test]
        fn raise_then_lower_is_plus_identity(re0 in -2.0f64..2.0, im0 in -2.0f64..2.0,
                                             re1 in -2.0f64..2.0, im1 in -2.0f64..2.0) {
            let forms = FiberForms::standard();
            let small = GridShape::new([5, 5, 5, 5], [0.1; 4], [0.0; 4]);
            let mut t = IndexedField::zeros(small, vec![Slot::down(BundleKind::Su2)], 0);
            for p in 0..small.len() {
                t.set(p, &[0], c(re0, im0));
                t.set(p, &[1], c(re1, im1));
            }
            let round = lower_su2(&raise_su2(&t, 0, &forms).unwrap(), 0, &forms).unwrap();
            let diff = round.sub(&t);
            prop_assert!(diff.max_norm() < 1e-12);
        }
    }
}
