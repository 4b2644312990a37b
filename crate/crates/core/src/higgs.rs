//! Higgs field norms, potential, kinetic density, the stationarity residual
//! of the restricted action, unitary alignment of vacuum directions, and
//! elongation perturbations of the vacuum.

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::bundles::{cr, FiberForms, Mat2, C_ZERO};
use crate::connections::{covariant_derivative, derivative_raw, ConnectionSet, PhysConstants};
use crate::error::{Error, Result};
use crate::fields::{IndexedField, Species};
use crate::grid::ScalarField;
use crate::manifold::Chart;

/// Parameters of the Higgs sector.
///
/// In vacuum-consistent mode `lambda = mu^2 / v^2` and the stationarity
/// mass is twice the action mass, `m_chi = 2 m_phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiggsParams {
    pub lambda: f64,
    pub mu: f64,
    pub v: f64,
    pub m_phi: f64,
    pub m_chi: f64,
}

impl HiggsParams {
    /// Derive `lambda` and `m_chi` from `(mu, v, m_phi)`.
    pub fn vacuum_consistent(mu: f64, v: f64, m_phi: f64) -> Result<Self> {
        if v <= 0.0 {
            return Err(Error::NonPositiveParameter(format!("v = {v}")));
        }
        if m_phi <= 0.0 {
            return Err(Error::NonPositiveParameter(format!("m_phi = {m_phi}")));
        }
        Ok(Self {
            lambda: mu * mu / (v * v),
            mu,
            v,
            m_phi,
            m_chi: 2.0 * m_phi,
        })
    }

    /// Residuals of the two parameter ties.
    pub fn consistency_residual(&self) -> f64 {
        let r1 = (self.lambda - self.mu * self.mu / (self.v * self.v)).abs();
        let r2 = (self.m_chi - 2.0 * self.m_phi).abs();
        r1.max(r2)
    }
}

/// The sesquilinear weight of the doublet pairing: the isospin metric times
/// the cubed hypercharge metric (the doublet carries weight +3).
fn doublet_weight(forms: &FiberForms) -> Mat2 {
    forms.su2_d * cr(forms.u1_d.powi(3))
}

/// Pairing `<u, w> = sum D_{a abar} u^a conj(w^abar)` with the doublet
/// weight; linear in `u`, antilinear in `w`.
pub fn doublet_inner(
    forms: &FiberForms,
    u: &Vector2<Complex64>,
    w: &Vector2<Complex64>,
) -> Complex64 {
    let d = doublet_weight(forms);
    let mut acc = C_ZERO;
    for a in 0..2 {
        for ab in 0..2 {
            acc += d[(a, ab)] * u[a] * w[ab].conj();
        }
    }
    acc
}

/// Pointwise squared norm of a Higgs-type doublet field.
pub fn higgs_norm2(phi: &IndexedField, forms: &FiberForms) -> ScalarField {
    let mut out = ScalarField::zeros(phi.shape);
    for p in 0..phi.shape.len() {
        let v = phi.at2(p);
        out.values[p] = doublet_inner(forms, &v, &v);
    }
    out
}

/// Quartic-minus-quadratic Higgs potential density.
pub fn higgs_potential(
    phi: &IndexedField,
    params: &HiggsParams,
    forms: &FiberForms,
) -> ScalarField {
    let n2 = higgs_norm2(phi, forms);
    n2.map(|x| cr(params.lambda) * x * x - cr(params.mu * params.mu) * x)
}

/// Metric-contracted positive-form density of the covariant derivative of a
/// doublet.
pub fn higgs_kinetic2(
    phi: &IndexedField,
    conn: &ConnectionSet,
    forms: &FiberForms,
    chart: &Chart,
) -> Result<ScalarField> {
    let grad = covariant_derivative(phi, &Species::higgs(), conn, chart)?;
    Ok(kinetic2_of_gradient(&grad, forms, chart))
}

/// The same density evaluated from an already-computed gradient field with
/// slots `[tangent, isospin]`.
pub fn kinetic2_of_gradient(grad: &IndexedField, forms: &FiberForms, chart: &Chart) -> ScalarField {
    let d = doublet_weight(forms);
    let mut out = ScalarField::zeros(grad.shape);
    for p in 0..grad.shape.len() {
        let ginv = chart.frame_metric_inv(p);
        let mut acc = C_ZERO;
        for i in 0..4 {
            for j in 0..4 {
                let g = ginv[(i, j)];
                if g == 0.0 {
                    continue;
                }
                for a in 0..2 {
                    for ab in 0..2 {
                        acc += cr(g)
                            * d[(a, ab)]
                            * grad.get(p, &[i, a])
                            * grad.get(p, &[j, ab]).conj();
                    }
                }
            }
        }
        out.values[p] = acc;
    }
    out
}

/// The kinetic and potential action terms of the doublet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiggsActions {
    pub l4: f64,
    pub l5: f64,
    pub imag_residual: f64,
}

pub fn higgs_actions(
    phi: &IndexedField,
    params: &HiggsParams,
    conn: &ConnectionSet,
    forms: &FiberForms,
    chart: &Chart,
    constants: &PhysConstants,
) -> Result<HiggsActions> {
    let kin = higgs_kinetic2(phi, conn, forms, chart)?;
    let pot = higgs_potential(phi, params, forms);
    let l4 = chart.integrate(&kin)?
        * cr(constants.hbar * constants.hbar / (2.0 * params.m_phi * constants.c));
    let l5 = chart.integrate(&pot)? * cr(-params.m_phi * constants.c / 2.0);
    Ok(HiggsActions {
        l4: l4.re,
        l5: l5.re,
        imag_residual: l4.im.abs().max(l5.im.abs()),
    })
}

/// Stationarity residual of the restricted action `L4 + L5`: the variational
/// gradient with respect to the conjugate doublet,
/// `-(hbar^2 / 2 m c) g^{ij} grad_i grad_j phi - (m c / 2)(2 lambda |phi|^2 - mu^2) phi`.
///
/// The stationarity mass `m = m_chi` enters explicitly through the
/// parameters. Both the trivial zero field and a covariantly constant
/// doublet of squared norm `mu^2 / (2 lambda)` annihilate it.
pub fn kgf_residual(
    phi: &IndexedField,
    params: &HiggsParams,
    conn: &ConnectionSet,
    forms: &FiberForms,
    chart: &Chart,
    constants: &PhysConstants,
) -> Result<IndexedField> {
    let grad = covariant_derivative(phi, &Species::higgs(), conn, chart)?;
    let grad2 = derivative_raw(&grad, conn, chart)?;
    let n2 = higgs_norm2(phi, forms);
    let kin_factor = cr(-constants.hbar * constants.hbar / (2.0 * params.m_chi * constants.c));
    let pot_factor = cr(-params.m_chi * constants.c / 2.0);
    let mut out = IndexedField::zeros(phi.shape, phi.slots.clone(), phi.u1_weight);
    for p in 0..phi.shape.len() {
        let ginv = chart.frame_metric_inv(p);
        for alpha in 0..2 {
            let mut lap = C_ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    let g = ginv[(i, j)];
                    if g != 0.0 {
                        lap += cr(g) * grad2.get(p, &[i, j, alpha]);
                    }
                }
            }
            let pot = pot_factor
                * (cr(2.0 * params.lambda) * n2.values[p] - cr(params.mu * params.mu))
                * phi.get(p, &[alpha]);
            out.set(p, &[alpha], kin_factor * lap + pot);
        }
    }
    Ok(out)
}

/// Finite-difference check that [`kgf_residual`] is the functional gradient
/// of `L4 + L5`: compares the centered directional derivative of the action
/// along `delta` with `2 Re integral <delta, residual>`. Returns
/// `(directional, paired)`.
pub fn kgf_gradient_check(
    phi: &IndexedField,
    delta: &IndexedField,
    params: &HiggsParams,
    conn: &ConnectionSet,
    forms: &FiberForms,
    chart: &Chart,
    constants: &PhysConstants,
) -> Result<(f64, f64)> {
    // The stationarity residual is normalized with m_chi; the matching
    // action uses the same mass.
    let action_params = HiggsParams {
        m_phi: params.m_chi,
        ..*params
    };
    let step = 1e-4;
    let plus = phi.add(&delta.scale(cr(step)));
    let minus = phi.sub(&delta.scale(cr(step)));
    let action = |f: &IndexedField| -> Result<f64> {
        let a = higgs_actions(f, &action_params, conn, forms, chart, constants)?;
        Ok(a.l4 + a.l5)
    };
    let directional = (action(&plus)? - action(&minus)?) / (2.0 * step);

    let residual = kgf_residual(phi, params, conn, forms, chart, constants)?;
    let mut density = ScalarField::zeros(phi.shape);
    for p in 0..phi.shape.len() {
        let r = residual.at2(p);
        let d = delta.at2(p);
        density.values[p] = doublet_inner(forms, &d, &r);
    }
    let paired = 2.0 * chart.integrate(&density)?.re;
    Ok((directional, paired))
}

/// Constructive unitary alignment: a special-unitary matrix for the doublet
/// pairing taking one unit vector to another. Canonically the identity when
/// the two inputs coincide.
pub fn align_unitary(
    v_from: &Vector2<Complex64>,
    v_to: &Vector2<Complex64>,
    forms: &FiberForms,
) -> Result<Mat2> {
    let b1 = orthonormal_completion(v_from, forms)?;
    let b2 = orthonormal_completion(v_to, forms)?;
    let omega = b2
        * b1.try_inverse()
            .expect("orthonormal basis matrices are invertible");
    let det = omega.determinant();
    // Divide the completion column by the determinant to land in the
    // special unitary group without touching the aligned column.
    let fixed = Mat2::from_columns(&[b2.column(0).into_owned(), b2.column(1) / det]);
    Ok(fixed * b1.try_inverse().unwrap())
}

fn orthonormal_completion(v: &Vector2<Complex64>, forms: &FiberForms) -> Result<Mat2> {
    let n2 = doublet_inner(forms, v, v);
    if (n2.re - 1.0).abs() > 1e-9 || n2.im.abs() > 1e-9 {
        return Err(Error::NotUnitNorm(n2.re));
    }
    let e1 = Vector2::new(cr(1.0), C_ZERO);
    let e2 = Vector2::new(C_ZERO, cr(1.0));
    let s1 = doublet_inner(forms, &e1, v).norm();
    let s2 = doublet_inner(forms, &e2, v).norm();
    let e = if s1 <= s2 { e1 } else { e2 };
    let mut w = e - v * doublet_inner(forms, &e, v);
    let wn = doublet_inner(forms, &w, &w);
    w /= cr(wn.re.sqrt());
    Ok(Mat2::from_columns(&[*v, w]))
}

/// Residuals of the three defining properties of an alignment matrix:
/// unitarity for the weighted metric, unit determinant, and the mapping
/// property.
pub fn alignment_residual(
    omega: &Mat2,
    v_from: &Vector2<Complex64>,
    v_to: &Vector2<Complex64>,
    forms: &FiberForms,
) -> f64 {
    let d = doublet_weight(forms);
    let unitary = (omega.adjoint() * d.transpose() * omega - d.transpose()).norm();
    let det = (omega.determinant() - cr(1.0)).norm();
    let action = (omega * v_from - v_to).norm();
    unitary.max(det).max(action)
}

/// Elongation perturbation of a vacuum doublet: `phi = (1 + chi / v) phi_vac`.
///
/// The perturbation must stay small enough to keep the norm away from zero;
/// `chi <= -v` anywhere is rejected.
pub fn perturb_vacuum(phi_vac: &IndexedField, chi: &ScalarField, v: f64) -> Result<IndexedField> {
    if chi.shape != phi_vac.shape {
        return Err(Error::ShapeMismatch("chi does not match the vacuum".into()));
    }
    for idx in chi.shape.iter() {
        let p = chi.shape.flat(idx);
        let c = chi.values[p].re;
        if c <= -v {
            return Err(Error::NormCollapse {
                point: idx,
                chi: c,
                minus_v: -v,
            });
        }
    }
    let factor = chi.map(|x| cr(1.0) + x / cr(v));
    Ok(phi_vac.mul_scalar_field(&factor))
}

/// Coefficients `(chi^4, chi^3, chi^2, chi^1, chi^0)` of the potential
/// evaluated on an elongation perturbation.
pub fn potential_polynomial(params: &HiggsParams) -> [f64; 5] {
    let (l, m2, v) = (params.lambda, params.mu * params.mu, params.v);
    [
        l / 4.0,
        l * v,
        1.5 * l * v * v - 0.5 * m2,
        l * v.powi(3) - m2 * v,
        0.25 * l * v.powi(4) - 0.5 * m2 * v * v,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::{c, standard_forms};
    use crate::grid::GridShape;

    fn shape() -> GridShape {
        GridShape::new([7, 5, 5, 5], [0.1; 4], [0.0; 4])
    }

    fn flat_chart() -> Chart {
        Chart::preset("minkowski-coordinate", shape()).unwrap()
    }

    fn constant_doublet(v0: Complex64, v1: Complex64) -> IndexedField {
        let mut phi = IndexedField::for_species(shape(), &Species::higgs());
        for p in 0..shape().len() {
            phi.set(p, &[0], v0);
            phi.set(p, &[1], v1);
        }
        phi
    }

    fn standard_vacuum(v: f64) -> IndexedField {
        constant_doublet(cr(v / 2.0_f64.sqrt()), C_ZERO)
    }

    #[test]
    fn unit_doublet_has_unit_norm() {
        let forms = standard_forms().0;
        let phi = constant_doublet(cr(1.0), C_ZERO);
        let n2 = higgs_norm2(&phi, &forms);
        assert!((n2.values[0].re - 1.0).abs() < 1e-15);
        assert!(n2.max_imag() < 1e-15);
    }

    #[test]
    fn vacuum_norm_is_half_v_squared() {
        let forms = standard_forms().0;
        let phi = standard_vacuum(1.7);
        let n2 = higgs_norm2(&phi, &forms);
        assert!((n2.values[0].re - 1.7 * 1.7 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn hypercharge_metric_enters_cubed() {
        let mut forms = standard_forms().0;
        forms.u1_d = 2.0;
        let phi = constant_doublet(cr(1.0), C_ZERO);
        let n2 = higgs_norm2(&phi, &forms);
        assert!((n2.values[0].re - 8.0).abs() < 1e-14);
    }

    #[test]
    fn potential_at_vacuum_is_the_constant_term() {
        let forms = standard_forms().0;
        let params = HiggsParams::vacuum_consistent(0.9, 1.4, 1.0).unwrap();
        let phi = standard_vacuum(params.v);
        let pot = higgs_potential(&phi, &params, &forms);
        let expected = -params.mu * params.mu * params.v * params.v / 4.0;
        assert!((pot.values[0].re - expected).abs() < 1e-13);
        let zero = higgs_potential(&constant_doublet(C_ZERO, C_ZERO), &params, &forms);
        assert!(zero.max_norm() < 1e-15);
    }

    #[test]
    fn potential_direct_evaluation() {
        let forms = standard_forms().0;
        let params = HiggsParams {
            lambda: 1.0,
            mu: 0.0,
            v: 1.0,
            m_phi: 1.0,
            m_chi: 2.0,
        };
        // |phi|^2 = 2 gives V = 4.
        let phi = constant_doublet(cr(2.0_f64.sqrt()), C_ZERO);
        let pot = higgs_potential(&phi, &params, &forms);
        assert!((pot.values[0].re - 4.0).abs() < 1e-13);
    }

    #[test]
    fn kinetic_density_vanishes_on_the_covariantly_constant_vacuum() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        for preset in ["trivial-flat", "imaginary-constant"] {
            let conn = ConnectionSet::vacuum_preset(preset, &chart).unwrap();
            let phi = standard_vacuum(1.3);
            let kin = higgs_kinetic2(&phi, &conn, &forms, &chart).unwrap();
            assert!(kin.max_norm() < 1e-13, "{preset}");
        }
    }

    #[test]
    fn kinetic_density_of_a_spatial_gradient_is_negative() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::trivial_flat(&chart).unwrap();
        let phi = IndexedField::from_fn(shape(), Species::higgs().slots, 3, |x, f| {
            if f[0] == 0 {
                cr(x[1])
            } else {
                C_ZERO
            }
        });
        let kin = higgs_kinetic2(&phi, &conn, &forms, &chart).unwrap();
        for idx in shape().iter_interior() {
            let p = shape().flat(idx);
            assert!((kin.values[p].re + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kinetic_density_is_quadratic_in_the_field() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::imaginary_constant(&chart).unwrap();
        let phi = IndexedField::from_fn(shape(), Species::higgs().slots, 3, |x, f| {
            c((0.4 * x[0]).sin() + f[0] as f64 * 0.2, 0.3 * x[1])
        });
        let kin1 = higgs_kinetic2(&phi, &conn, &forms, &chart).unwrap();
        let kin2 = higgs_kinetic2(&phi.scale(cr(2.0)), &conn, &forms, &chart).unwrap();
        let diff = kin2.sub(&kin1.scale(cr(4.0)));
        assert!(diff.max_norm() < 1e-12);
    }

    #[test]
    fn actions_on_the_vacuum_configuration() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::trivial_flat(&chart).unwrap();
        let params = HiggsParams::vacuum_consistent(0.8, 1.1, 0.9).unwrap();
        let constants = PhysConstants::natural();
        let phi = standard_vacuum(params.v);
        let acts = higgs_actions(&phi, &params, &conn, &forms, &chart, &constants).unwrap();
        assert!(acts.l4.abs() < 1e-12);
        let expected = params.m_phi * constants.c / 2.0 * params.mu.powi(2) * params.v.powi(2)
            / 4.0
            * chart.volume();
        assert!((acts.l5 - expected).abs() < 1e-12);

        let zero = constant_doublet(C_ZERO, C_ZERO);
        let acts0 = higgs_actions(&zero, &params, &conn, &forms, &chart, &constants).unwrap();
        assert_eq!(acts0.l4, 0.0);
        assert_eq!(acts0.l5, 0.0);
    }

    #[test]
    fn stationarity_residual_vanishes_on_trivial_and_vacuum_solutions() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::imaginary_constant(&chart).unwrap();
        let params = HiggsParams::vacuum_consistent(0.8, 1.1, 0.9).unwrap();
        let constants = PhysConstants::natural();

        let zero = constant_doublet(C_ZERO, C_ZERO);
        let r0 = kgf_residual(&zero, &params, &conn, &forms, &chart, &constants).unwrap();
        assert!(r0.max_norm() < 1e-14);

        let vac = standard_vacuum(params.v);
        let rv = kgf_residual(&vac, &params, &conn, &forms, &chart, &constants).unwrap();
        assert!(rv.max_norm() < 1e-12);
    }

    #[test]
    fn stationarity_residual_detects_a_stretched_vacuum() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::trivial_flat(&chart).unwrap();
        let params = HiggsParams::vacuum_consistent(0.8, 1.1, 0.9).unwrap();
        let constants = PhysConstants::natural();
        let stretched = standard_vacuum(params.v).scale(cr(1.1));
        let r = kgf_residual(&stretched, &params, &conn, &forms, &chart, &constants).unwrap();
        // Algebraic prediction: the potential factor alone acts on the field.
        let factor = params.m_chi * constants.c / 2.0
            * (2.0 * params.lambda * 1.21 * params.v * params.v / 2.0 - params.mu * params.mu);
        let expected = factor * 1.1 * params.v / 2.0_f64.sqrt();
        let got = r.get(0, &[0]).norm();
        assert!((got - expected.abs()).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn stationarity_residual_is_the_functional_gradient() {
        let chart = flat_chart();
        let forms = standard_forms().0;
        let conn = ConnectionSet::trivial_flat(&chart).unwrap();
        let params = HiggsParams::vacuum_consistent(0.8, 1.1, 0.9).unwrap();
        let constants = PhysConstants::natural();
        let phi = IndexedField::from_fn(shape(), Species::higgs().slots, 3, |x, f| {
            c(
                0.8 + 0.2 * (0.7 * x[0] + 0.3 * x[1]).sin() + 0.1 * f[0] as f64,
                0.15 * (0.5 * x[2]).cos(),
            )
        });
        // Interior-supported variation.
        let delta = IndexedField::from_fn(shape(), Species::higgs().slots, 3, |x, f| {
            let bump: f64 = [x[0] - 0.3, x[1] - 0.2, x[2] - 0.2, x[3] - 0.2]
                .iter()
                .map(|&t| (-(t * t) / 0.008).exp())
                .product();
            c(bump * (1.0 + 0.3 * f[0] as f64), 0.2 * bump)
        });
        let (directional, paired) =
            kgf_gradient_check(&phi, &delta, &params, &conn, &forms, &chart, &constants).unwrap();
        let tol = crate::fd_tol(chart.h()) * directional.abs().max(1e-3);
        assert!(
            (directional - paired).abs() < tol,
            "directional {directional} vs paired {paired}"
        );
    }

    #[test]
    fn alignment_is_identity_on_equal_vectors() {
        let forms = standard_forms().0;
        let v = Vector2::new(c(0.6, 0.2), c(-0.3, 0.7));
        let v = v / cr(doublet_inner(&forms, &v, &v).re.sqrt());
        let omega = align_unitary(&v, &v, &forms).unwrap();
        assert!((omega - Mat2::identity()).norm() < 1e-12);
    }

    #[test]
    fn alignment_between_basis_vectors_is_the_symplectic_rotation() {
        let forms = standard_forms().0;
        let e1 = Vector2::new(cr(1.0), C_ZERO);
        let e2 = Vector2::new(C_ZERO, cr(1.0));
        let omega = align_unitary(&e1, &e2, &forms).unwrap();
        let expected = Mat2::new(C_ZERO, -cr(1.0), cr(1.0), C_ZERO);
        assert!((omega - expected).norm() < 1e-12);
        assert!(alignment_residual(&omega, &e1, &e2, &forms) < 1e-12);
    }

    #[test]
    fn alignment_properties_hold_for_random_unit_pairs() {
        let forms = standard_forms().0;
        let samples = [
            ([0.3, -0.4, 0.5, 0.1], [0.9, 0.05, -0.2, 0.3]),
            ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.3, 0.8]),
            ([0.2, 0.7, -0.5, 0.4], [-0.6, 0.1, 0.4, 0.2]),
        ];
        for (a, b) in samples {
            let mut u = Vector2::new(c(a[0], a[1]), c(a[2], a[3]));
            u /= cr(doublet_inner(&forms, &u, &u).re.sqrt());
            let mut w = Vector2::new(c(b[0], b[1]), c(b[2], b[3]));
            w /= cr(doublet_inner(&forms, &w, &w).re.sqrt());
            let omega = align_unitary(&u, &w, &forms).unwrap();
            assert!(
                alignment_residual(&omega, &u, &w, &forms) < 1e-12,
                "failed for {a:?} -> {b:?}"
            );
        }
    }

    #[test]
    fn alignment_rejects_non_unit_input() {
        let forms = standard_forms().0;
        let u = Vector2::new(cr(2.0), C_ZERO);
        let w = Vector2::new(cr(1.0), C_ZERO);
        assert!(matches!(
            align_unitary(&u, &w, &forms),
            Err(Error::NotUnitNorm(_))
        ));
    }

    #[test]
    fn elongation_norm_identity_is_exact() {
        let forms = standard_forms().0;
        let v = 1.3;
        let vac = standard_vacuum(v);
        let chi = ScalarField::from_real_fn(shape(), |x| 0.4 * (x[0].sin() + 0.3));
        let phi = perturb_vacuum(&vac, &chi, v).unwrap();
        let n2 = higgs_norm2(&phi, &forms);
        for p in 0..shape().len() {
            let expected = (v + chi.values[p].re).powi(2) / 2.0;
            assert!((n2.values[p].re - expected).abs() < 1e-13);
        }
        // chi = v doubles the amplitude: |phi|^2 = 2 v^2.
        let chi_v = ScalarField::constant(shape(), cr(v));
        let phi2 = perturb_vacuum(&vac, &chi_v, v).unwrap();
        let n2 = higgs_norm2(&phi2, &forms);
        assert!((n2.values[0].re - 2.0 * v * v).abs() < 1e-12);
        // chi = 0 leaves the vacuum.
        let phi0 = perturb_vacuum(&vac, &ScalarField::zeros(shape()), v).unwrap();
        assert!(phi0.sub(&vac).max_norm() < 1e-15);
    }

    #[test]
    fn elongation_rejects_norm_collapse() {
        let v = 1.0;
        let vac = standard_vacuum(v);
        let chi = ScalarField::constant(shape(), cr(-1.0));
        assert!(matches!(
            perturb_vacuum(&vac, &chi, v),
            Err(Error::NormCollapse { .. })
        ));
    }

    #[test]
    fn general_perturbation_decomposes_into_elongation_and_rotation() {
        let forms = standard_forms().0;
        let v = 1.2;
        let vac = standard_vacuum(v);
        // A small but generic perturbation.
        let xi = IndexedField::from_fn(shape(), Species::higgs().slots, 3, |x, f| {
            c(
                0.05 * (x[0] + 0.2 * f[0] as f64).sin(),
                0.04 * (0.7 * x[1]).cos(),
            )
        });
        let tilde = vac.add(&xi);
        let n2 = higgs_norm2(&tilde, &forms);
        let mut worst: f64 = 0.0;
        for p in 0..shape().len() {
            let vt = (2.0 * n2.values[p].re).sqrt();
            let unit_vac = vac.at2(p) * cr(2.0_f64.sqrt() / v);
            let unit_tilde = tilde.at2(p) * cr(2.0_f64.sqrt() / vt);
            let omega = align_unitary(&unit_vac, &unit_tilde, &forms).unwrap();
            // Reconstruct: elongation by (vt - v) then rotation.
            let rebuilt = omega * vac.at2(p) * cr(vt / v);
            worst = worst.max((rebuilt - tilde.at2(p)).norm());
        }
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn polynomial_coefficients_follow_the_expansion() {
        let params = HiggsParams {
            lambda: 0.0,
            mu: 1.0,
            v: 1.0,
            m_phi: 1.0,
            m_chi: 2.0,
        };
        assert_eq!(potential_polynomial(&params), [0.0, 0.0, -0.5, -1.0, -0.5]);

        let vc = HiggsParams::vacuum_consistent(0.9, 1.3, 1.0).unwrap();
        let coeffs = potential_polynomial(&vc);
        // Vacuum-consistent parameters kill the linear term and leave
        // mu^2 on the quadratic one.
        assert!(coeffs[3].abs() < 1e-14);
        assert!((coeffs[2] - vc.mu * vc.mu).abs() < 1e-14);
    }

    #[test]
    fn polynomial_matches_the_potential_on_elongations() {
        let forms = standard_forms().0;
        let params = HiggsParams::vacuum_consistent(0.7, 1.5, 1.0).unwrap();
        let vac = standard_vacuum(params.v);
        let chi_val = 0.37;
        let chi = ScalarField::constant(shape(), cr(chi_val));
        let phi = perturb_vacuum(&vac, &chi, params.v).unwrap();
        let pot = higgs_potential(&phi, &params, &forms);
        let coeffs = potential_polynomial(&params);
        let expected: f64 = coeffs[0] * chi_val.powi(4)
            + coeffs[1] * chi_val.powi(3)
            + coeffs[2] * chi_val.powi(2)
            + coeffs[3] * chi_val
            + coeffs[4];
        assert!((pot.values[0].re - expected).abs() < 1e-12);
    }
}
