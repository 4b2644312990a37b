//! 4-D grid shape, point indexing and finite-difference stencils.
//!
//! All fields in the crate are sampled on a structured grid covering one
//! coordinate patch. Points are addressed either by a flat index or by a
//! multi-index `[i0, i1, i2, i3]`. Partial derivatives use central O(h^2)
//! stencils in the interior and one-sided O(h) stencils on the boundary
//! layers; identity tests therefore evaluate interior points only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Geometry of the sampling grid: extents, spacing and origin per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub extents: [usize; 4],
    pub spacing: [f64; 4],
    pub origin: [f64; 4],
}

impl GridShape {
    pub fn new(extents: [usize; 4], spacing: [f64; 4], origin: [f64; 4]) -> Self {
        Self {
            extents,
            spacing,
            origin,
        }
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of a multi-index (row-major, axis 0 slowest).
    pub fn flat(&self, idx: [usize; 4]) -> usize {
        ((idx[0] * self.extents[1] + idx[1]) * self.extents[2] + idx[2]) * self.extents[3] + idx[3]
    }

    /// Multi-index of a flat index.
    pub fn multi(&self, mut p: usize) -> [usize; 4] {
        let mut idx = [0usize; 4];
        for axis in (0..4).rev() {
            idx[axis] = p % self.extents[axis];
            p /= self.extents[axis];
        }
        idx
    }

    /// Coordinates of a grid point.
    pub fn coords(&self, idx: [usize; 4]) -> [f64; 4] {
        let mut x = [0.0; 4];
        for axis in 0..4 {
            x[axis] = self.origin[axis] + idx[axis] as f64 * self.spacing[axis];
        }
        x
    }

    /// Iterate over all multi-indices.
    pub fn iter(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        let e = self.extents;
        (0..e[0]).flat_map(move |i0| {
            (0..e[1]).flat_map(move |i1| {
                (0..e[2]).flat_map(move |i2| (0..e[3]).map(move |i3| [i0, i1, i2, i3]))
            })
        })
    }

    /// True when the point is at least `margin` layers away from every face.
    pub fn is_interior(&self, idx: [usize; 4], margin: usize) -> bool {
        (0..4).all(|a| idx[a] >= margin && idx[a] + margin < self.extents[a])
    }

    /// Iterate over interior multi-indices (margin 1).
    pub fn iter_interior(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.iter().filter(move |&idx| self.is_interior(idx, 1))
    }

    /// Largest spacing, used to scale finite-difference tolerances.
    pub fn max_spacing(&self) -> f64 {
        self.spacing.iter().cloned().fold(0.0, f64::max)
    }

    /// Coordinate cell 4-volume.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }
}

/// Finite-difference derivative along `axis` of a per-point quantity.
///
/// `get` fetches the sampled value at a flat index; the result is the
/// derivative at the point `idx`.
pub fn partial_at<F>(shape: &GridShape, get: F, idx: [usize; 4], axis: usize) -> Complex64
where
    F: Fn(usize) -> Complex64,
{
    let h = shape.spacing[axis];
    let n = shape.extents[axis];
    let i = idx[axis];
    let mut lo = idx;
    let mut hi = idx;
    if i == 0 {
        hi[axis] = 1;
        (get(shape.flat(hi)) - get(shape.flat(idx))) / h
    } else if i + 1 == n {
        lo[axis] = i - 1;
        (get(shape.flat(idx)) - get(shape.flat(lo))) / h
    } else {
        lo[axis] = i - 1;
        hi[axis] = i + 1;
        (get(shape.flat(hi)) - get(shape.flat(lo))) / (2.0 * h)
    }
}

/// Real-valued variant of [`partial_at`].
pub fn partial_at_real<F>(shape: &GridShape, get: F, idx: [usize; 4], axis: usize) -> f64
where
    F: Fn(usize) -> f64,
{
    partial_at(shape, |p| Complex64::new(get(p), 0.0), idx, axis).re
}

/// A complex scalar field sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub shape: GridShape,
    pub values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(shape: GridShape) -> Self {
        Self {
            shape,
            values: vec![Complex64::new(0.0, 0.0); shape.len()],
        }
    }

    pub fn constant(shape: GridShape, value: Complex64) -> Self {
        Self {
            shape,
            values: vec![value; shape.len()],
        }
    }

    /// Sample a coordinate function.
    pub fn from_fn(shape: GridShape, f: impl Fn([f64; 4]) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(shape.len());
        for idx in shape.iter() {
            values.push(f(shape.coords(idx)));
        }
        Self { shape, values }
    }

    /// Sample a real coordinate function.
    pub fn from_real_fn(shape: GridShape, f: impl Fn([f64; 4]) -> f64) -> Self {
        Self::from_fn(shape, |x| Complex64::new(f(x), 0.0))
    }

    pub fn at(&self, idx: [usize; 4]) -> Complex64 {
        self.values[self.shape.flat(idx)]
    }

    /// Max modulus over interior points.
    pub fn max_norm_interior(&self) -> f64 {
        self.shape
            .iter_interior()
            .map(|idx| self.at(idx).norm())
            .fold(0.0, f64::max)
    }

    /// Max modulus over all points.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part in modulus, over all points.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            shape: self.shape,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        Self {
            shape: self.shape,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        Self {
            shape: self.shape,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| s * v)
    }

    /// Pointwise product with another scalar field.
    pub fn mul_real(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        Self {
            shape: self.shape,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}
