//! Acausal spreading of Newton–Wigner localized states and the failure of
//! local commutativity.

use num_complex::Complex64;
use serde::Serialize;

use super::lattice::Model;
use super::packets::{make_gaussian, random_states};
use super::pvm::{canonical_map, localization_probability, Projector, PvmHandle};
use super::representation::{BandPolicy, MapChain};
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::{Instant, MeasureScalar, Momentum, SpacetimePoint, Velocity};
use crate::groups::{grow_region_causally, Region};

/// Center of the bounding box of a region, as a point of its instant.
pub fn region_center(region: &Region) -> Result<SpacetimePoint> {
    let boxes = region.boxes();
    if boxes.is_empty() {
        return Err(Error::InvalidArgument("empty region has no center".into()));
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for b in boxes {
        for i in 0..3 {
            lo[i] = lo[i].min(b.lo[i]);
            hi[i] = hi[i].max(b.hi[i]);
        }
    }
    Ok(region
        .frame()
        .point(std::array::from_fn(|i| 0.5 * (lo[i] + hi[i]))))
}

/// `Φ = P(E) G / ‖P(E) G‖` for a Gaussian `G` of the given width centered on
/// the region, with `E` on the lattice instant.
pub fn prepare_localized(model: &Model, region: &Region, width: MeasureScalar) -> Result<LatticeState> {
    if region.instant() != model.instant() {
        return Err(Error::InstantMismatch);
    }
    let center = model.instant().project(&region_center(region)?);
    let g = make_gaussian(model, &center, width, &Momentum::ZERO)?;
    let projected = Projector::new(model, &PvmHandle::on(*model.instant()), region)?.apply(model, &g)?;
    let norm = projected.norm();
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "region contains no lattice cell".into(),
        ));
    }
    Ok(projected.scaled(Complex64::new(1.0 / norm, 0.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CausalityOutcome {
    pub delta_t: f64,
    pub rapidity: f64,
    /// `P_{u0,t0}(E)` probability of the prepared state.
    pub initial_localization: f64,
    /// `1 − P_{u2,t′}((E + T) ∩ t′)` probability.
    pub leakage: f64,
    /// Probability found in the lattice cells outside the shadow; equals the
    /// leakage when no amplitude is lost to the momentum cutoff.
    pub outside: f64,
    pub lattice: usize,
}

/// Prepares `Φ` localized in `E` and measures how much probability lies
/// outside the causal shadow `(E + T) ∩ t′` on the instant `t′` of `u2`
/// through the point `dt·u2` after the center of `E`.
pub fn causality_experiment(
    model: &Model,
    region: &Region,
    dt: MeasureScalar,
    u2: &Velocity,
    width: MeasureScalar,
) -> Result<CausalityOutcome> {
    let dt_sec = dt.value_in(1)?;
    if dt_sec < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "time step must not be negative, got {dt_sec} sec"
        )));
    }
    let phi = prepare_localized(model, region, width)?;
    let initial =
        localization_probability(model, &PvmHandle::on(*model.instant()), region, &phi)?;
    let anchor = region_center(region)? + u2.displacement(dt)?;
    let later = Instant::new(*u2, anchor);
    let shadow = grow_region_causally(region, &later)?;
    let handle = PvmHandle::on(later);
    let projector = Projector::new(model, &handle, &shadow)?;
    let inside = projector.apply(model, &phi)?.norm_sqr();

    let outside_mask: Vec<bool> = projector.mask().iter().map(|m| !m).collect();
    let outside = probability_in_mask(model, &handle, &outside_mask, &phi)?;

    Ok(CausalityOutcome {
        delta_t: dt_sec,
        rapidity: model.observer().rapidity_to(u2),
        initial_localization: initial,
        leakage: 1.0 - inside,
        outside,
        lattice: model.n(),
    })
}

fn probability_in_mask(
    model: &Model,
    handle: &PvmHandle,
    mask: &[bool],
    s: &LatticeState,
) -> Result<f64> {
    let map = canonical_map(model, handle.instant());
    let pulled = MapChain::from(map)
        .inverse()
        .apply_with(model, s, BandPolicy::Allow)?;
    Ok(model
        .position_probabilities(&pulled)
        .iter()
        .zip(mask)
        .filter(|(_, keep)| **keep)
        .map(|(p, _)| p)
        .sum())
}

/// Estimates `‖[P(E), P′(E′)]‖` by power iteration on `−[P, P′]²` from a
/// random start. Returns the largest `‖[P, P′] s‖` seen over unit vectors.
pub fn commutator_witness(
    model: &Model,
    e1: &Region,
    e2: &Region,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    let p1 = Projector::new(model, &PvmHandle::on(*e1.instant()), e1)?;
    let p2 = Projector::new(model, &PvmHandle::on(*e2.instant()), e2)?;
    let commutator = |s: &LatticeState| -> Result<LatticeState> {
        let a = p1.apply(model, &p2.apply(model, s)?)?;
        let b = p2.apply(model, &p1.apply(model, s)?)?;
        Ok(a.sub(&b))
    };
    let mut s = random_states(model, 1, seed).remove(0);
    let mut best = 0.0_f64;
    for _ in 0..iterations.max(1) {
        let cs = commutator(&s)?;
        let value = cs.norm();
        best = best.max(value);
        if value == 0.0 {
            break;
        }
        // −C² s = C†C s, since C is anti-Hermitian.
        let next = commutator(&cs)?.scaled(Complex64::new(-1.0, 0.0));
        let norm = next.norm();
        if norm == 0.0 {
            break;
        }
        s = next.scaled(Complex64::new(1.0 / norm, 0.0));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Box3;
    use crate::quantum::ModelConfig;

    fn model(n: usize) -> Model {
        Model::new(ModelConfig::standard().with_lattice(n)).unwrap()
    }

    fn cube(m: &Model, instant: Instant, center: [f64; 3], side: f64) -> Region {
        let frame = m.frame().carried_to(&instant);
        Region::in_frame(instant, frame, vec![Box3::centered(center, side).unwrap()]).unwrap()
    }

    #[test]
    fn no_time_no_leakage() {
        let m = model(16);
        let e = cube(&m, *m.instant(), [0.0; 3], 1.0);
        let out = causality_experiment(
            &m,
            &e,
            MeasureScalar::seconds(0.0),
            m.observer(),
            MeasureScalar::seconds(0.75),
        )
        .unwrap();
        assert!((out.initial_localization - 1.0).abs() < 1e-12);
        assert!(out.leakage.abs() <= 1e-10, "{out:?}");
    }

    #[test]
    fn leakage_is_positive_and_located_outside() {
        let m = model(16);
        let e = cube(&m, *m.instant(), [0.0; 3], 1.0);
        let out = causality_experiment(
            &m,
            &e,
            MeasureScalar::seconds(0.5),
            m.observer(),
            MeasureScalar::seconds(0.75),
        )
        .unwrap();
        assert!(out.leakage > 1e-6, "{out:?}");
        assert!((out.leakage - out.outside).abs() <= 1e-10);
    }

    #[test]
    fn negative_time_is_rejected() {
        let m = model(8);
        let e = cube(&m, *m.instant(), [0.0; 3], 1.0);
        let err = causality_experiment(
            &m,
            &e,
            MeasureScalar::seconds(-1.0),
            m.observer(),
            MeasureScalar::seconds(0.75),
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn commutator_cases() {
        let m = model(8);
        let e = cube(&m, *m.instant(), [-0.5, 0.0, 0.0], 0.5);
        assert!(commutator_witness(&m, &e, &e, 3, 1).unwrap() < 1e-13);
        let f = cube(&m, *m.instant(), [0.5, 0.0, 0.0], 0.5);
        assert!(commutator_witness(&m, &e, &f, 3, 1).unwrap() <= 1e-12);
        let later = m.instant().later(MeasureScalar::seconds(0.25)).unwrap();
        let g = cube(&m, later, [0.5, 0.0, 0.0], 0.5);
        assert!(commutator_witness(&m, &e, &g, 10, 1).unwrap() >= 1e-4);
    }
}
