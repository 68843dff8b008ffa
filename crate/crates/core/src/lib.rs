//! Coordinate-free Minkowski geometry, Lorentz and Poincaré groups, and a
//! periodic-lattice realization of Newton–Wigner localization for a free
//! spin-0 particle of mass `m`.
//!
//! The crate is split into three layers:
//!
//! * [`geometry`]: measure-line scalars, spacetime vectors and points,
//!   absolute velocities and the observer splittings built on them.
//! * [`groups`]: Lorentz and Poincaré maps, the observer-dependent subgroups
//!   and finite box regions living on instants.
//! * [`quantum`]: the one-particle Hilbert space on a momentum lattice, the
//!   localization projections and the verification drivers.

pub mod error;
pub mod geometry;
pub mod groups;
pub mod quantum;

pub use error::{Error, Result};
