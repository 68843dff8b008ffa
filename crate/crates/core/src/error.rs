use thiserror::Error;

/// Errors raised by the geometry, group and lattice layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: sec^{left} vs sec^{right}")]
    DimensionMismatch { left: i32, right: i32 },

    #[error("square root needs an even dimension and a non-negative value (got {value} sec^{dim})")]
    InvalidSqrt { value: f64, dim: i32 },

    #[error("not causal: vector is spacelike or zero")]
    NotCausal,

    #[error("not timelike")]
    NotTimelike,

    #[error("vector is past-directed")]
    PastDirected,

    #[error("observers differ")]
    ObserverMismatch,

    #[error("vector is not orthogonal to the observer velocity")]
    NotInRestSpace,

    #[error("rotation axis is zero")]
    ZeroAxis,

    #[error("map is not orthochronous")]
    NotOrthochronous,

    #[error("map is not a Lorentz transformation")]
    NotLorentz,

    #[error("target instant is not in the future of the region")]
    NotInFuture,

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("rapidity {rapidity:.4} exceeds the band-limit cap {cap:.4}")]
    BandLimit { rapidity: f64, cap: f64 },

    #[error("state is not band-limited: {0}")]
    NotBandLimited(String),

    #[error("map does not permute the lattice; use apply_boost path")]
    NotLatticePreserving,

    #[error("region instant does not match the projection instant")]
    InstantMismatch,

    #[error("region leaves the lattice box")]
    RegionOutsideLattice,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
