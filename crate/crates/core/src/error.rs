use thiserror::Error;

/// Errors produced by channel construction, metrics and the sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid wave parameters: {0}")]
    InvalidWave(String),
    #[error("invalid aperture: {0}")]
    InvalidAperture(String),
    #[error("axes are not a right-handed orthonormal triad (deviation {0:e})")]
    NonOrthonormalAxes(f64),
    #[error("distance must be strictly positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("Green's function evaluated at the source point")]
    Singular,
    #[error("element index {index} out of range for {count} elements")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("quadrature needs at least one point per axis")]
    InvalidQuadrature,
    #[error("TX and RX apertures overlap")]
    OverlappingApertures,
    #[error("TX and RX aperture centers coincide")]
    CoincidentCenters,
    #[error("source point coincides with element {0}")]
    CoincidentSource(usize),
    #[error("invalid angular spread: {0}")]
    InvalidSpread(String),
    #[error("radial range [{0}, {1}] is empty or non-positive")]
    EmptyRadialRange(f64, f64),
    #[error("scatterer set must hold at least one scatterer with matching gains")]
    EmptyScattererSet,
    #[error("ring intersects the aperture")]
    RingIntersectsAperture,
    #[error("one-ring model needs at least 8 ring points, got {0}")]
    TooFewRingPoints(usize),
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is identically zero")]
    ZeroMatrix,
    #[error("threshold must lie in (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error("model kind {0} is not supported by this operation")]
    UnknownKind(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
