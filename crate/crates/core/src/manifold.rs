//! Discretized space-time chart: metric and frame samples, Lie derivatives,
//! frame structure constants, Levi-Civita symbols and integration.
//!
//! The chart covers a single contractible box patch. The metric `g` is
//! stored in the coordinate basis; the frame is stored as coefficient
//! matrices `e^mu_k` giving the coordinate components of the four frame
//! vector fields. All tensor computations downstream use frame indices, so
//! the chart also caches the frame-basis metric and its inverse.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{partial_at_real, GridShape, ScalarField};

/// Lorentz metric signature convention: one positive, three negative.
const SIGNATURE_POS: usize = 1;

/// A discretized coordinate patch with metric and frame samples.
#[derive(Debug, Clone)]
pub struct Chart {
    pub shape: GridShape,
    /// Coordinate-basis metric `g_{mu nu}`, symmetric, signature (+,-,-,-).
    pub metric: Vec<Matrix4<f64>>,
    /// Frame coefficients; column `k` holds the coordinate components
    /// `e^mu_k` of the frame vector `Y_k`.
    pub frame: Vec<Matrix4<f64>>,
    /// Frame-basis metric `g_kl = e^mu_k e^nu_l g_{mu nu}`.
    frame_metric: Vec<Matrix4<f64>>,
    /// Pointwise inverse of the frame-basis metric.
    frame_metric_inv: Vec<Matrix4<f64>>,
    /// `sqrt(-det g)` in the coordinate basis, the volume density.
    sqrt_neg_det: Vec<f64>,
}

impl Chart {
    /// Sample metric and frame functions over the grid and validate the
    /// chart invariants pointwise.
    pub fn build(
        shape: GridShape,
        metric_fn: impl Fn([f64; 4]) -> Matrix4<f64>,
        frame_fn: impl Fn([f64; 4]) -> Matrix4<f64>,
    ) -> Result<Self> {
        if shape.extents.iter().any(|&n| n < 5) {
            return Err(Error::ExtentsTooSmall(shape.extents));
        }
        if shape.spacing.iter().any(|&h| h <= 0.0) {
            return Err(Error::NonPositiveSpacing(shape.spacing));
        }
        let n = shape.len();
        let mut metric = Vec::with_capacity(n);
        let mut frame = Vec::with_capacity(n);
        let mut frame_metric = Vec::with_capacity(n);
        let mut frame_metric_inv = Vec::with_capacity(n);
        let mut sqrt_neg_det = Vec::with_capacity(n);

        for idx in shape.iter() {
            let x = shape.coords(idx);
            let g = metric_fn(x);
            let g = 0.5 * (g + g.transpose());
            check_signature(&g, idx)?;
            let det = g.determinant();
            debug_assert!(det < 0.0, "signature check guarantees det < 0");
            let e = frame_fn(x);
            let edet = e.determinant();
            if edet.abs() < 1e-12 {
                return Err(Error::SingularFrame {
                    point: idx,
                    det: edet,
                });
            }
            let gf = e.transpose() * g * e;
            let gf_inv = gf
                .try_inverse()
                .ok_or(Error::SingularMetric { point: idx })?;
            metric.push(g);
            frame.push(e);
            frame_metric.push(gf);
            frame_metric_inv.push(gf_inv);
            sqrt_neg_det.push((-det).sqrt());
        }

        Ok(Self {
            shape,
            metric,
            frame,
            frame_metric,
            frame_metric_inv,
            sqrt_neg_det,
        })
    }

    /// Build one of the named chart presets.
    pub fn preset(name: &str, shape: GridShape) -> Result<Self> {
        match name {
            "minkowski-coordinate" => Self::build(shape, |_| minkowski(), |_| Matrix4::identity()),
            "curved-demo" => Self::build(
                shape,
                |x| (0.1 * x[1]).exp() * minkowski(),
                |x| {
                    // Diagonal but non-coordinate frame: each frame vector is
                    // rescaled by a factor depending on a neighboring axis,
                    // so the frame fields do not commute.
                    Matrix4::from_diagonal(&Vector4::new(
                        1.0 + 0.05 * x[1],
                        1.0 + 0.05 * x[2],
                        1.0 + 0.05 * x[3],
                        1.0 + 0.05 * x[0],
                    ))
                },
            ),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    /// Names and one-line descriptions of the built-in chart presets.
    pub fn preset_catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            (
                "minkowski-coordinate",
                "flat metric diag(1,-1,-1,-1) with the coordinate frame",
            ),
            (
                "curved-demo",
                "conformal factor exp(0.1 x1) on the flat metric with a non-coordinate frame",
            ),
        ]
    }

    pub fn frame_metric(&self, p: usize) -> &Matrix4<f64> {
        &self.frame_metric[p]
    }

    pub fn frame_metric_inv(&self, p: usize) -> &Matrix4<f64> {
        &self.frame_metric_inv[p]
    }

    pub fn sqrt_neg_det(&self, p: usize) -> f64 {
        self.sqrt_neg_det[p]
    }

    /// Frame coefficient `e^mu_k` at a flat point index.
    pub fn frame_coeff(&self, p: usize, mu: usize, k: usize) -> f64 {
        self.frame[p][(mu, k)]
    }

    /// Largest grid spacing.
    pub fn h(&self) -> f64 {
        self.shape.max_spacing()
    }

    /// Directional (Lie) derivative along frame vector `k` of an arbitrary
    /// per-point complex quantity, evaluated at one point.
    pub fn lie_at<F>(&self, get: &F, idx: [usize; 4], k: usize) -> Complex64
    where
        F: Fn(usize) -> Complex64,
    {
        let p = self.shape.flat(idx);
        let mut acc = Complex64::new(0.0, 0.0);
        for mu in 0..4 {
            let coeff = self.frame_coeff(p, mu, k);
            if coeff != 0.0 {
                acc += coeff * crate::grid::partial_at(&self.shape, get, idx, mu);
            }
        }
        acc
    }

    /// Real-valued variant of [`Chart::lie_at`].
    pub fn lie_at_real<F>(&self, get: &F, idx: [usize; 4], k: usize) -> f64
    where
        F: Fn(usize) -> f64,
    {
        let p = self.shape.flat(idx);
        let mut acc = 0.0;
        for mu in 0..4 {
            let coeff = self.frame_coeff(p, mu, k);
            if coeff != 0.0 {
                acc += coeff * partial_at_real(&self.shape, get, idx, mu);
            }
        }
        acc
    }

    /// Lie derivative of a scalar field along frame vector `k`.
    pub fn lie_derivative(&self, f: &ScalarField, k: usize) -> Result<ScalarField> {
        if f.shape != self.shape {
            return Err(Error::ShapeMismatch(format!(
                "field shape {:?} vs chart shape {:?}",
                f.shape.extents, self.shape.extents
            )));
        }
        let get = |p: usize| f.values[p];
        let mut out = ScalarField::zeros(self.shape);
        for idx in self.shape.iter() {
            out.values[self.shape.flat(idx)] = self.lie_at(&get, idx, k);
        }
        Ok(out)
    }

    /// Riemann sum of `f` against the 4-volume element over interior points.
    pub fn integrate(&self, f: &ScalarField) -> Result<Complex64> {
        if f.shape != self.shape {
            return Err(Error::ShapeMismatch(
                "integrand shape does not match chart".into(),
            ));
        }
        let cell = self.shape.cell_volume();
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in self.shape.iter_interior() {
            let p = self.shape.flat(idx);
            acc += f.values[p] * self.sqrt_neg_det[p];
        }
        Ok(acc * cell)
    }

    /// Interior 4-volume, `integrate(1)`.
    pub fn volume(&self) -> f64 {
        let one = ScalarField::constant(self.shape, Complex64::new(1.0, 0.0));
        self.integrate(&one).expect("shape matches").re
    }
}

fn minkowski() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

fn check_signature(g: &Matrix4<f64>, idx: [usize; 4]) -> Result<()> {
    let eigen = SymmetricEigen::new(*g);
    let mut eigenvalues = [0.0; 4];
    for (slot, ev) in eigenvalues.iter_mut().zip(eigen.eigenvalues.iter()) {
        *slot = *ev;
    }
    let pos = eigenvalues.iter().filter(|&&ev| ev > 0.0).count();
    let neg = eigenvalues.iter().filter(|&&ev| ev < 0.0).count();
    if pos != SIGNATURE_POS || neg != 3 {
        return Err(Error::SignatureViolation {
            point: idx,
            eigenvalues,
        });
    }
    Ok(())
}

/// Frame structure constants `c^k_ij`, antisymmetric in `(i, j)`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub shape: GridShape,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(shape: GridShape) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.len() * 64],
        }
    }

    #[inline]
    pub fn get(&self, p: usize, k: usize, i: usize, j: usize) -> f64 {
        self.data[p * 64 + k * 16 + i * 4 + j]
    }

    #[inline]
    fn set(&mut self, p: usize, k: usize, i: usize, j: usize, value: f64) {
        self.data[p * 64 + k * 16 + i * 4 + j] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Solve `[Y_i, Y_j] = c^k_ij Y_k` pointwise for the structure constants.
///
/// The commutator components are finite differences of the frame
/// coefficients; the 4x4 linear system is solved against the frame matrix.
/// Antisymmetry in `(i, j)` is exact by construction.
pub fn structure_constants(chart: &Chart) -> Result<StructureConstants> {
    let shape = chart.shape;
    let mut out = StructureConstants::zeros(shape);
    for idx in shape.iter() {
        let p = shape.flat(idx);
        let lu = chart.frame[p].lu();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut comm = Vector4::zeros();
                for mu in 0..4 {
                    let get_j = |q: usize| chart.frame_coeff(q, mu, j);
                    let get_i = |q: usize| chart.frame_coeff(q, mu, i);
                    comm[mu] =
                        chart.lie_at_real(&get_j, idx, i) - chart.lie_at_real(&get_i, idx, j);
                }
                let c = lu.solve(&comm).ok_or(Error::SingularFrame {
                    point: idx,
                    det: chart.frame[p].determinant(),
                })?;
                for k in 0..4 {
                    out.set(p, k, i, j, c[k]);
                    out.set(p, k, j, i, -c[k]);
                }
            }
        }
    }
    Ok(out)
}

/// Levi-Civita symbols `G^h_ij` of the chart metric in the frame basis.
///
/// The first lower index is the differentiation direction: the covariant
/// derivative of a covector is `L_i(A_j) - G^h_ij A_h`. The symbols satisfy
/// the torsion relation `G^h_ij - G^h_ji = c^h_ij` and metricity.
#[derive(Debug, Clone)]
pub struct LeviCivita {
    pub shape: GridShape,
    data: Vec<f64>,
}

impl LeviCivita {
    pub fn zeros(shape: GridShape) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.len() * 64],
        }
    }

    #[inline]
    pub fn get(&self, p: usize, h: usize, i: usize, j: usize) -> f64 {
        self.data[p * 64 + h * 16 + i * 4 + j]
    }

    #[inline]
    fn set(&mut self, p: usize, h: usize, i: usize, j: usize, value: f64) {
        self.data[p * 64 + h * 16 + i * 4 + j] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Koszul formula for the Levi-Civita symbols in a non-holonomic frame.
pub fn levi_civita(chart: &Chart, sc: &StructureConstants) -> Result<LeviCivita> {
    let shape = chart.shape;
    let mut out = LeviCivita::zeros(shape);
    // Precompute Lie derivatives of the frame-basis metric components.
    // lie_g[k][(i,j)] is L_k(g_ij) as a per-point table.
    let n = shape.len();
    let mut lie_g = vec![[[0.0f64; 4]; 4]; n * 4];
    for idx in shape.iter() {
        let p = shape.flat(idx);
        for k in 0..4 {
            for a in 0..4 {
                for b in a..4 {
                    let get = |q: usize| chart.frame_metric(q)[(a, b)];
                    let v = chart.lie_at_real(&get, idx, k);
                    lie_g[p * 4 + k][a][b] = v;
                    lie_g[p * 4 + k][b][a] = v;
                }
            }
        }
    }
    for idx in shape.iter() {
        let p = shape.flat(idx);
        let g = chart.frame_metric(p);
        let ginv = chart.frame_metric_inv(p);
        for i in 0..4 {
            for j in 0..4 {
                // Lowered symbol against index l, then raise with g^{hl}.
                let mut lowered = [0.0f64; 4];
                for (l, slot) in lowered.iter_mut().enumerate() {
                    let mut v =
                        lie_g[p * 4 + i][j][l] + lie_g[p * 4 + j][i][l] - lie_g[p * 4 + l][i][j];
                    for k in 0..4 {
                        v += sc.get(p, k, i, j) * g[(k, l)];
                        v -= sc.get(p, k, j, l) * g[(k, i)];
                        v += sc.get(p, k, l, i) * g[(k, j)];
                    }
                    *slot = 0.5 * v;
                }
                for h in 0..4 {
                    let mut v = 0.0;
                    for (l, &low) in lowered.iter().enumerate() {
                        v += ginv[(h, l)] * low;
                    }
                    out.set(p, h, i, j, v);
                }
            }
        }
    }
    Ok(out)
}

/// Max-norm of the torsion residual `G^h_ij - G^h_ji - c^h_ij` over the
/// interior.
pub fn torsion_residual(chart: &Chart, lc: &LeviCivita, sc: &StructureConstants) -> f64 {
    let mut worst: f64 = 0.0;
    for idx in chart.shape.iter_interior() {
        let p = chart.shape.flat(idx);
        for h in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let r = lc.get(p, h, i, j) - lc.get(p, h, j, i) - sc.get(p, h, i, j);
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    worst
}

/// Max-norm of the metricity residual `L_k g_ij - G^h_ki g_hj - G^h_kj g_ih`
/// over the interior.
pub fn metricity_residual(chart: &Chart, lc: &LeviCivita) -> f64 {
    let mut worst: f64 = 0.0;
    for idx in chart.shape.iter_interior() {
        let p = chart.shape.flat(idx);
        let g = chart.frame_metric(p);
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let get = |q: usize| chart.frame_metric(q)[(i, j)];
                    let mut r = chart.lie_at_real(&get, idx, k);
                    for h in 0..4 {
                        r -= lc.get(p, h, k, i) * g[(h, j)];
                        r -= lc.get(p, h, k, j) * g[(i, h)];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridShape;

    pub fn small_shape() -> GridShape {
        GridShape::new([7, 7, 7, 7], [0.1; 4], [1.0, -0.3, -0.3, -0.3])
    }

    #[test]
    fn minkowski_preset_is_flat_everywhere() {
        let chart = Chart::preset("minkowski-coordinate", small_shape()).unwrap();
        for p in 0..chart.shape.len() {
            assert_eq!(chart.metric[p], minkowski());
            assert_eq!(chart.frame[p], Matrix4::identity());
        }
    }

    #[test]
    fn curved_demo_has_negative_metric_determinant_at_every_point() {
        let chart = Chart::preset("curved-demo", small_shape()).unwrap();
        for p in 0..chart.shape.len() {
            assert!(chart.metric[p].determinant() < 0.0);
        }
    }

    #[test]
    fn singular_frame_is_rejected_naming_the_point() {
        let shape = small_shape();
        let bad = shape.coords([2, 3, 1, 4]);
        let err = Chart::build(
            shape,
            |_| minkowski(),
            |x| {
                if x == bad {
                    Matrix4::zeros()
                } else {
                    Matrix4::identity()
                }
            },
        )
        .unwrap_err();
        match err {
            Error::SingularFrame { point, .. } => assert_eq!(point, [2, 3, 1, 4]),
            other => panic!("expected SingularFrame, got {other}"),
        }
    }

    #[test]
    fn wrong_signature_is_rejected_naming_the_point() {
        let shape = small_shape();
        let err = Chart::build(
            shape,
            |x| {
                if x[0] > 1.55 && x[0] < 1.65 {
                    Matrix4::identity()
                } else {
                    minkowski()
                }
            },
            |_| Matrix4::identity(),
        )
        .unwrap_err();
        match err {
            Error::SignatureViolation { point, .. } => assert_eq!(point[0], 6),
            other => panic!("expected SignatureViolation, got {other}"),
        }
    }

    #[test]
    fn lie_derivative_of_constant_vanishes() {
        let chart = Chart::preset("curved-demo", small_shape()).unwrap();
        let f = ScalarField::constant(chart.shape, Complex64::new(2.5, -1.0));
        for k in 0..4 {
            let d = chart.lie_derivative(&f, k).unwrap();
            assert!(d.max_norm() < 1e-14);
        }
    }

    #[test]
    fn lie_derivative_of_coordinate_function() {
        let chart = Chart::preset("minkowski-coordinate", small_shape()).unwrap();
        let f = ScalarField::from_real_fn(chart.shape, |x| x[1]);
        let d = chart.lie_derivative(&f, 1).unwrap();
        for idx in chart.shape.iter_interior() {
            assert!((d.at(idx).re - 1.0).abs() < 1e-12);
        }
        let d0 = chart.lie_derivative(&f, 0).unwrap();
        assert!(d0.max_norm_interior() < 1e-12);
    }

    #[test]
    fn lie_derivative_matches_analytic_directional_derivative_on_curved_demo() {
        let chart = Chart::preset("curved-demo", small_shape()).unwrap();
        let f = ScalarField::from_real_fn(chart.shape, |x| x[0].sin());
        for k in 0..4 {
            let d = chart.lie_derivative(&f, k).unwrap();
            for idx in chart.shape.iter_interior() {
                let p = chart.shape.flat(idx);
                let x = chart.shape.coords(idx);
                let exact = chart.frame_coeff(p, 0, k) * x[0].cos();
                assert!(
                    (d.at(idx).re - exact).abs() < 2e-3,
                    "k={k} idx={idx:?}: {} vs {exact}",
                    d.at(idx).re
                );
            }
        }
    }

    #[test]
    fn coordinate_frame_has_vanishing_structure_constants() {
        let chart = Chart::preset("minkowski-coordinate", small_shape()).unwrap();
        let sc = structure_constants(&chart).unwrap();
        assert!(sc.max_abs() < 1e-13);
    }

    #[test]
    fn structure_constants_match_analytic_commutator() {
        // Frame Y_1 = x0 d_1, others the coordinate fields:
        // [Y_0, Y_1] = d_1 = (1/x0) Y_1, so c^1_01 = 1/x0.
        let shape = small_shape();
        let chart = Chart::build(
            shape,
            |_| minkowski(),
            |x| {
                let mut e = Matrix4::identity();
                e[(1, 1)] = x[0];
                e
            },
        )
        .unwrap();
        let sc = structure_constants(&chart).unwrap();
        for idx in shape.iter_interior() {
            let p = shape.flat(idx);
            let x = shape.coords(idx);
            assert!((sc.get(p, 1, 0, 1) - 1.0 / x[0]).abs() < 1e-10);
            assert!((sc.get(p, 1, 1, 0) + 1.0 / x[0]).abs() < 1e-10);
            assert!(sc.get(p, 0, 0, 1).abs() < 1e-12);
        }
    }

    #[test]
    fn structure_constants_are_exactly_antisymmetric() {
        let chart = Chart::preset("curved-demo", small_shape()).unwrap();
        let sc = structure_constants(&chart).unwrap();
        for p in 0..chart.shape.len() {
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        assert_eq!(sc.get(p, k, i, j), -sc.get(p, k, j, i));
                    }
                }
            }
        }
    }

    #[test]
    fn levi_civita_vanishes_on_flat_coordinate_chart() {
        let chart = Chart::preset("minkowski-coordinate", small_shape()).unwrap();
        let sc = structure_constants(&chart).unwrap();
        let lc = levi_civita(&chart, &sc).unwrap();
        assert!(lc.max_abs() < 1e-13);
    }

    #[test]
    fn levi_civita_torsion_and_metricity_hold_on_curved_demo() {
        let shape = GridShape::new([9, 9, 9, 9], [0.05; 4], [1.0, -0.2, -0.2, -0.2]);
        let chart = Chart::preset("curved-demo", shape).unwrap();
        let sc = structure_constants(&chart).unwrap();
        let lc = levi_civita(&chart, &sc).unwrap();
        assert!(torsion_residual(&chart, &lc, &sc) < 1e-8);
        assert!(metricity_residual(&chart, &lc) < 1e-3);
    }

    #[test]
    fn integrate_counts_interior_coordinate_volume_on_flat_chart() {
        let chart = Chart::preset("minkowski-coordinate", small_shape()).unwrap();
        let one = ScalarField::constant(chart.shape, Complex64::new(1.0, 0.0));
        let vol = chart.integrate(&one).unwrap();
        // 5^4 interior points, cell volume 1e-4.
        let expected = 625.0 * 1e-4;
        assert!((vol.re - expected).abs() < 1e-12);
        assert!(vol.im.abs() < 1e-15);
    }

    #[test]
    fn integrate_weights_by_conformal_density() {
        // Metric Omega * eta has determinant -Omega^4, so the volume density
        // is Omega^2.
        let shape = small_shape();
        let omega = |x: [f64; 4]| 1.0 + 0.1 * x[1] + 0.05 * x[2];
        let chart =
            Chart::build(shape, |x| omega(x) * minkowski(), |_| Matrix4::identity()).unwrap();
        let one = ScalarField::constant(shape, Complex64::new(1.0, 0.0));
        let vol = chart.integrate(&one).unwrap();
        let mut expected = 0.0;
        for idx in shape.iter_interior() {
            expected += omega(shape.coords(idx)).powi(2) * shape.cell_volume();
        }
        assert!((vol.re - expected).abs() < 1e-12);
    }

    #[test]
    fn integrate_of_zero_is_zero() {
        let chart = Chart::preset("curved-demo", small_shape()).unwrap();
        let zero = ScalarField::zeros(chart.shape);
        assert_eq!(chart.integrate(&zero).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn lie_commutator_identity_converges_on_smooth_fields() {
        // L_i(L_j f) - L_j(L_i f) - c^k_ij L_k f -> 0 as h -> 0.
        let residual_at = |h: f64| -> f64 {
            let shape = GridShape::new([9, 9, 9, 9], [h; 4], [1.0, -4.0 * h, -4.0 * h, -4.0 * h]);
            let chart = Chart::preset("curved-demo", shape).unwrap();
            let sc = structure_constants(&chart).unwrap();
            let f = ScalarField::from_real_fn(shape, |x| {
                (x[0] + 0.5 * x[1]).sin() * (0.3 * x[2]).cos()
            });
            let lie: Vec<ScalarField> = (0..4)
                .map(|k| chart.lie_derivative(&f, k).unwrap())
                .collect();
            let mut worst: f64 = 0.0;
            for idx in shape.iter().filter(|&i| shape.is_interior(i, 2)) {
                let p = shape.flat(idx);
                for i in 0..4 {
                    for j in 0..4 {
                        let lij = chart.lie_at(&|q: usize| lie[j].values[q], idx, i);
                        let lji = chart.lie_at(&|q: usize| lie[i].values[q], idx, j);
                        let mut r = lij - lji;
                        for k in 0..4 {
                            r -= sc.get(p, k, i, j) * lie[k].values[p];
                        }
                        worst = worst.max(r.norm());
                    }
                }
            }
            worst
        };
        let coarse = residual_at(0.1);
        let fine = residual_at(0.05);
        assert!(coarse < 1e-3, "coarse residual {coarse}");
        assert!(fine < 0.6 * coarse, "no decay: {fine} vs {coarse}");
    }
}
