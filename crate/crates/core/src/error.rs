//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("metric signature violation at grid point {point:?}: eigenvalues {eigenvalues:?}, expected one positive and three negative")]
    SignatureViolation {
        point: [usize; 4],
        eigenvalues: [f64; 4],
    },

    #[error("frame matrix is singular at grid point {point:?} (|det| = {det:.3e})")]
    SingularFrame { point: [usize; 4], det: f64 },

    #[error("metric is not invertible at grid point {point:?}")]
    SingularMetric { point: [usize; 4] },

    #[error("chart extents must be at least 5 per axis, got {0:?}")]
    ExtentsTooSmall([usize; 4]),

    #[error("grid spacing must be positive, got {0:?}")]
    NonPositiveSpacing([f64; 4]),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("species `{0}` carries no declared chirality")]
    NoChirality(String),

    #[error("species `{species}` does not match the field signature: {detail}")]
    SpeciesMismatch { species: String, detail: String },

    #[error(
        "gauge matrix is not special-unitary at grid point {point:?} (residual {residual:.3e})"
    )]
    NotSpecialUnitary { point: [usize; 4], residual: f64 },

    #[error("vacuum norm vanishes at grid point {point:?}")]
    VanishingVacuum { point: [usize; 4] },

    #[error("elongation collapses the vacuum norm at grid point {point:?}: chi = {chi} <= -v = {minus_v}")]
    NormCollapse {
        point: [usize; 4],
        chi: f64,
        minus_v: f64,
    },

    #[error("input vector is not unit-norm (norm^2 = {0})")]
    NotUnitNorm(f64),

    #[error("coupling constraint violated: {0}")]
    BadCoupling(String),

    #[error("nonpositive parameter: {0}")]
    NonPositiveParameter(String),

    #[error("coupling matrices violate the `{mode}` constraint (residual {residual:.3e})")]
    CouplingModeViolation { mode: String, residual: f64 },

    #[error("individual masses are undefined for general coupling matrices; use the diagonal-real or hermitian mode")]
    MassesUndefined,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
