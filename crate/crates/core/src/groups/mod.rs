//! Lorentz and Poincaré transformations, the observer-dependent subgroups
//! O_u, 𝓛_o and 𝓔_{u,t}, and box regions on instants.

mod lorentz;
mod poincare;
mod region;

pub use lorentz::{
    in_o_u, make_boost, make_boost_along, make_rotation, orthogonal_in_rest_space,
    space_inversion, time_inversion, LorentzMap, MEMBERSHIP_TOL,
};
pub use poincare::PoincareMap;
pub use region::{grow_region_causally, Box3, Region};

/// Membership predicates under the names used throughout the docs.
pub fn is_lorentz(l: &LorentzMap) -> bool {
    l.is_lorentz()
}

pub fn is_orthochronous(l: &LorentzMap) -> bool {
    l.is_orthochronous()
}

pub fn is_proper(l: &LorentzMap) -> bool {
    l.is_proper()
}

pub fn fixes_point(p: &PoincareMap, o: &crate::geometry::SpacetimePoint) -> bool {
    p.fixes_point(o)
}

pub fn stabilizes_instant(p: &PoincareMap, t: &crate::geometry::Instant) -> bool {
    p.stabilizes_instant(t)
}
