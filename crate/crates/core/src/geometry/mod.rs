//! Coordinate-free special-relativistic spacetime: the measure line, the
//! Lorentz product, absolute velocities and observer splittings.

mod observer;
mod scalar;
mod vector;

pub use observer::{
    instant_subtract, rest_space_basis, space_subtract, Frame, Instant, SpacePoint,
};
pub use scalar::MeasureScalar;
pub use vector::{
    causal_class, is_future_directed, lorentz_product, normalize_velocity, pi, tau, time_part,
    CausalClass, Direction, MinkowskiVector, Momentum, SpacetimePoint, SpacetimeVector, Velocity,
    GEOMETRY_TOL,
};

pub(crate) use vector::{axpy, minkowski, scale, unit_in_rest_space, Raw};
