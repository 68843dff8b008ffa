//! Residual drivers for the covariance identities.
//!
//! Every driver evaluates both sides of an operator identity on the given
//! states and reports the largest residual norm. The states are processed in
//! order, so reports are deterministic. Projected and position-weighted
//! states are not band-limited, so the drivers apply maps with
//! [`BandPolicy::Allow`]: amplitude pushed past the cutoff is dropped and
//! counts towards the residual.

use serde::Serialize;

use super::lattice::Model;
use super::position::{apply_nw, nw_component_stats, NwPosition, VectorState};
use super::pvm::{pvm_project, PvmHandle};
use super::representation::{apply_poincare_with, BandPolicy, MapChain};
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::Velocity;
use crate::groups::{make_boost_along, Box3, PoincareMap, Region};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    /// Largest residual norm over the trials.
    pub residual: f64,
    pub trials: usize,
    pub lattice: usize,
}

impl ResidualReport {
    fn collect<I>(name: &str, model: &Model, residuals: I) -> Result<Self>
    where
        I: IntoIterator<Item = Result<f64>>,
    {
        let mut residual = 0.0_f64;
        let mut trials = 0;
        for r in residuals {
            residual = residual.max(r?);
            trials += 1;
        }
        Ok(Self {
            name: name.to_string(),
            residual,
            trials,
            lattice: model.n(),
        })
    }
}

fn projector_handle(region: &Region) -> PvmHandle {
    PvmHandle::on(*region.instant())
}

/// `‖U_S P_{u,t}(E) U_S⁻¹ s − P_{u,t}(S[E]) s‖` for `S ∈ 𝓔_{u,t}`.
pub fn verify_eq1(
    model: &Model,
    s_map: &PoincareMap,
    region: &Region,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    if !s_map.stabilizes_instant(region.instant()) {
        return Err(Error::InvalidArgument(
            "the map does not stabilize the region's instant".into(),
        ));
    }
    let handle = projector_handle(region);
    let image = region.transformed(s_map);
    let image = Region::in_frame(*region.instant(), *image.frame(), image.boxes().to_vec())?;
    let inv = s_map.inverse();
    ResidualReport::collect(
        "eq1",
        model,
        states.iter().map(|s| {
            let pulled = apply_poincare_with(model, s, &inv, BandPolicy::Allow)?;
            let cut = pvm_project(model, &handle, region, &pulled)?;
            let lhs = apply_poincare_with(model, &cut, s_map, BandPolicy::Allow)?;
            let rhs = pvm_project(model, &handle, &image, s)?;
            Ok(lhs.distance(&rhs))
        }),
    )
}

/// `‖U_L P_{u,t}(E) U_L⁻¹ s − P_{𝐋u,L[t]}(L[E]) s‖`.
pub fn verify_prop1(
    model: &Model,
    l: &MapChain,
    region: &Region,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    let handle = projector_handle(region);
    let image = region.transformed(&l.product());
    let image_handle = projector_handle(&image);
    let inv = l.inverse();
    ResidualReport::collect(
        "prop1",
        model,
        states.iter().map(|s| {
            let pulled = inv.apply_with(model, s, BandPolicy::Allow)?;
            let cut = pvm_project(model, &handle, region, &pulled)?;
            let lhs = l.apply_with(model, &cut, BandPolicy::Allow)?;
            let rhs = pvm_project(model, &image_handle, &image, s)?;
            Ok(lhs.distance(&rhs))
        }),
    )
}

fn conjugated_nw(
    model: &Model,
    l: &MapChain,
    w: &NwPosition,
    s: &LatticeState,
) -> Result<VectorState> {
    let pulled = l.inverse().apply_with(model, s, BandPolicy::Allow)?;
    apply_nw(model, w, &pulled)?.try_map(|c| l.apply_with(model, c, BandPolicy::Allow))
}

/// `‖U_L W^o_{u,t} U_L⁻¹ s − 𝐋⁻¹ W^{L(o)}_{𝐋u,L[t]} s‖`.
pub fn verify_prop2(
    model: &Model,
    l: &MapChain,
    w: &NwPosition,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    let product = l.product();
    let w2 = w.transformed(&product)?;
    let lin_inv = product.linear().inverse();
    ResidualReport::collect(
        "prop2",
        model,
        states.iter().map(|s| {
            let lhs = conjugated_nw(model, l, w, s)?;
            let rhs = apply_nw(model, &w2, s)?.transformed(&lin_inv);
            Ok(lhs.distance(&rhs))
        }),
    )
}

/// `‖U_L W U_L⁻¹ s − 𝐋 (W s)‖` with the labels of `W` held fixed and `L`
/// fixing the origin of `W`. A large value shows that `W` alone does not
/// transform as a spacetime vector.
pub fn verify_prop2_negative(
    model: &Model,
    l: &PoincareMap,
    w: &NwPosition,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    if !l.fixes_point(w.origin()) {
        return Err(Error::InvalidArgument(
            "the map must fix the operator's origin".into(),
        ));
    }
    let chain = MapChain::from(*l);
    ResidualReport::collect(
        "prop2-negative",
        model,
        states.iter().map(|s| {
            let lhs = conjugated_nw(model, &chain, w, s)?;
            let rhs = apply_nw(model, w, s)?.transformed(l.linear());
            Ok(lhs.distance(&rhs))
        }),
    )
}

/// `‖π_{u2}(U_L W U_L⁻¹ s) − 𝐑⁻¹ π_{u2}(W s)‖` for `L` fixing the origin of
/// `W` with `𝐋 u2 = u2`; `𝐑` is the restriction of `𝐋` to `E_{u2}`.
pub fn verify_prop3(
    model: &Model,
    u2: &Velocity,
    l: &MapChain,
    w: &NwPosition,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    let product = l.product();
    if !product.fixes_point(w.origin()) || !product.linear().in_rest_group(u2) {
        return Err(Error::InvalidArgument(
            "the map must fix the origin and the velocity u2".into(),
        ));
    }
    let lin_inv = product.linear().inverse();
    ResidualReport::collect(
        "prop3",
        model,
        states.iter().map(|s| {
            let lhs = conjugated_nw(model, l, w, s)?.project_rest(u2);
            let rhs = apply_nw(model, w, s)?.project_rest(u2).transformed(&lin_inv);
            Ok(lhs.distance(&rhs))
        }),
    )
}

/// Largest variance of `τ_{u2}(W)` over the states, in sec².
pub fn verify_prop4(
    model: &Model,
    w: &NwPosition,
    u2: &Velocity,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    ResidualReport::collect(
        "prop4-tau-variance",
        model,
        states
            .iter()
            .map(|s| Ok(nw_component_stats(model, w, u2, s)?.tau.variance)),
    )
}

/// Boost of rapidity `chi` along the first lattice axis about the center.
pub fn standard_boost(model: &Model, chi: f64) -> Result<PoincareMap> {
    let b = make_boost_along(model.observer(), &model.basis()[0], chi)?;
    Ok(PoincareMap::about(model.center(), b))
}

/// Centered cube of side `side` seconds on the lattice instant.
pub fn centered_region(model: &Model, side: f64) -> Result<Region> {
    Region::in_frame(
        *model.instant(),
        *model.frame(),
        vec![Box3::centered([0.0; 3], side)?],
    )
}

/// The boost consistency check: labels `(Bu0, B[t0])`, region `B[E0]` and
/// `L = B⁻¹`, so the right-hand side is the exact lattice projection and the
/// residual measures the boost numerics.
pub fn verify_prop1_boost(
    model: &Model,
    chi: f64,
    side: f64,
    states: &[LatticeState],
) -> Result<ResidualReport> {
    let b = standard_boost(model, chi)?;
    let e = centered_region(model, side)?.transformed(&b);
    let mut report = verify_prop1(model, &MapChain::from(b.inverse()), &e, states)?;
    report.name = "prop1-boost".into();
    Ok(report)
}
