//! Numerical verification engine for the gauge-field content of the
//! electroweak and color sectors over a curved space-time chart.
//!
//! The crate discretizes a single coordinate patch as a 4-D grid, equips it
//! with a metric and a (possibly non-holonomic) frame, and builds the full
//! tower of structures living over it: fiber forms and the gamma/chirality
//! algebra ([`bundles`]), gauge and spinor connections with species-aware
//! covariant differentiation ([`connections`]), curvature and field-strength
//! tensors with their kinetic actions ([`curvature`]), the Higgs sector
//! ([`higgs`]), the symmetry-breaking machinery that rotates the neutral
//! potentials into photon and Z fields ([`breaking`]), and the lepton/quark
//! sector assembly with all mass and charge formulas ([`matter`]).
//!
//! Everything is verified rather than assumed: each algebraic identity is
//! evaluated as a residual, and each derived closed form is checked against
//! an independent evaluation path ("two-path checks"). The [`runner`] module
//! packages those checks into named suites driven from a [`config`] file and
//! reports them through [`report`].
//!
//! ```
//! use smverify::grid::GridShape;
//! use smverify::manifold::Chart;
//! use smverify::bundles::standard_forms;
//! use smverify::connections::ConnectionSet;
//! use smverify::higgs::higgs_kinetic2;
//! use smverify::fields::{IndexedField, Species};
//!
//! let shape = GridShape::new([5; 4], [0.1; 4], [0.0; 4]);
//! let chart = Chart::preset("minkowski-coordinate", shape)?;
//! let vacuum = ConnectionSet::trivial_flat(&chart)?;
//! let (forms, _) = standard_forms();
//!
//! // A covariantly constant doublet has vanishing kinetic density.
//! let mut phi = IndexedField::for_species(shape, &Species::higgs());
//! for p in 0..shape.len() {
//!     phi.set(p, &[0], num_complex::Complex64::new(1.0, 0.0));
//! }
//! let density = higgs_kinetic2(&phi, &vacuum, &forms, &chart)?;
//! assert!(density.max_norm() < 1e-13);
//! # Ok::<(), smverify::Error>(())
//! ```

// The numerical kernels walk several parallel tables per grid point, which
// reads more clearly with explicit indices than with zipped iterators.
#![allow(clippy::needless_range_loop)]

pub mod breaking;
pub mod bundles;
pub mod config;
pub mod connections;
pub mod curvature;
pub mod error;
pub mod fields;
pub mod grid;
pub mod higgs;
pub mod manifold;
pub mod matter;
pub mod report;
pub mod runner;

pub use error::{Error, Result};

/// Tolerance for identities that hold by exact (constant-data) algebra.
pub const TOL_EXACT: f64 = 1e-12;
/// Tolerance for identities expected to hold to machine precision.
pub const TOL_MACHINE: f64 = 1e-14;
/// Tolerance for exact algebra accumulated over grid sums.
pub const TOL_ACCUM: f64 = 1e-10;

/// Tolerance for finite-difference checks at grid spacing `h`.
pub fn fd_tol(h: f64) -> f64 {
    10.0 * h * h
}
