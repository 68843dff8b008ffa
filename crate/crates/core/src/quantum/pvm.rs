//! Localization projections `P_{u,t}(E)`.
//!
//! On the lattice instant t0 of u0 the projection multiplies the position
//! amplitudes by the indicator of E (a cell belongs to E when its center
//! does). Any other pair `(u, t)` is reached by the canonical map `Lc` with
//! `𝐋c u0 = u`, `Lc[t0] = t`, and the projection is defined through
//! covariance: `P_{u,t}(E) = U_Lc P_{u0,t0}(Lc⁻¹[E]) U_Lc⁻¹`. The
//! conjugation acts on sharply cut states, so it runs with
//! [`BandPolicy::Allow`] and the cutoff loss ends up in the result.

use num_complex::Complex64;
use rayon::prelude::*;

use super::lattice::Model;
use super::representation::{apply_poincare_with, BandPolicy, MapChain};
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::{Instant, Velocity, GEOMETRY_TOL};
use crate::groups::{make_boost, LorentzMap, PoincareMap, Region};

/// Labels `(u, t)` of a Wightman projection-valued measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PvmHandle {
    observer: Velocity,
    instant: Instant,
}

impl PvmHandle {
    pub fn new(observer: Velocity, instant: Instant) -> Result<Self> {
        if !instant.observer().approx_eq(&observer, GEOMETRY_TOL) {
            return Err(Error::ObserverMismatch);
        }
        Ok(Self { observer, instant })
    }

    pub fn on(instant: Instant) -> Self {
        Self {
            observer: *instant.observer(),
            instant,
        }
    }

    pub fn observer(&self) -> &Velocity {
        &self.observer
    }

    pub fn instant(&self) -> &Instant {
        &self.instant
    }
}

/// `Lc(x) = c' + B(x − c)`, with `B` the pure boost taking u0 to `u`, `c` the
/// lattice center and `c'` the point where the world line `c + s·u` meets `t`.
pub fn canonical_map(model: &Model, instant: &Instant) -> PoincareMap {
    let u0 = model.observer();
    let u = instant.observer();
    let b = if u.approx_eq(u0, 1e-14) {
        LorentzMap::identity()
    } else {
        make_boost(u0, u)
    };
    let c = *model.center();
    let shift = c - instant.project(&c);
    let about = PoincareMap::about(&c, b);
    if shift.is_zero() {
        about
    } else {
        PoincareMap::translation(-shift).compose(&about)
    }
}

/// A projection with its cell mask precomputed.
#[derive(Clone, Debug)]
pub struct Projector {
    map: PoincareMap,
    mask: Vec<bool>,
}

impl Projector {
    pub fn new(model: &Model, handle: &PvmHandle, region: &Region) -> Result<Self> {
        if region.instant() != handle.instant() {
            return Err(Error::InstantMismatch);
        }
        let map = canonical_map(model, handle.instant());
        let inv = map.inverse();
        let slack = 1e-9 * (1.0 + model.half_extent());
        for b in region.boxes() {
            for corner in b.corners() {
                let x = inv.apply_point(&region.frame().point(corner));
                if !model.in_box(&model.coords_of(&x), slack) {
                    return Err(Error::RegionOutsideLattice);
                }
            }
        }
        // The cell center ξ lands at region coordinates η = Aξ + η0.
        let frame = model.frame();
        let origin = region.frame().coordinates(&map.apply_point(frame.origin()));
        let cols: [[f64; 3]; 3] = std::array::from_fn(|i| {
            let mut xi = [0.0; 3];
            xi[i] = 1.0;
            let img = region.frame().coordinates(&map.apply_point(&frame.point(xi)));
            std::array::from_fn(|k| img[k] - origin[k])
        });
        let mask = (0..model.len())
            .into_par_iter()
            .map(|idx| {
                let xi = model.cell_coords(idx);
                let eta: [f64; 3] = std::array::from_fn(|k| {
                    origin[k] + cols[0][k] * xi[0] + cols[1][k] * xi[1] + cols[2][k] * xi[2]
                });
                region.contains_coords(&eta)
            })
            .collect();
        Ok(Self { map, mask })
    }

    pub fn canonical(&self) -> &PoincareMap {
        &self.map
    }

    /// Cells of the lattice instant selected after pulling back through `Lc`.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    fn is_trivial_map(&self) -> bool {
        self.map.approx_eq(&PoincareMap::identity(), 0.0)
    }

    pub fn apply(&self, model: &Model, s: &LatticeState) -> Result<LatticeState> {
        if self.is_trivial_map() {
            return Ok(self.apply_on_lattice(model, s));
        }
        let chain = MapChain::from(self.map);
        let pulled = chain.inverse().apply_with(model, s, BandPolicy::Allow)?;
        let cut = self.apply_on_lattice(model, &pulled);
        apply_poincare_with(model, &cut, &self.map, BandPolicy::Allow)
    }

    fn apply_on_lattice(&self, model: &Model, s: &LatticeState) -> LatticeState {
        let mut pos = model.to_position(s);
        pos.par_iter_mut().zip(self.mask.par_iter()).for_each(|(v, keep)| {
            if !keep {
                *v = Complex64::new(0.0, 0.0);
            }
        });
        model.to_momentum(pos)
    }
}

/// `P_{u,t}(E) s`, unnormalized.
pub fn pvm_project(
    model: &Model,
    handle: &PvmHandle,
    region: &Region,
    s: &LatticeState,
) -> Result<LatticeState> {
    Projector::new(model, handle, region)?.apply(model, s)
}

/// `‖P_{u,t}(E) s‖²`.
pub fn localization_probability(
    model: &Model,
    handle: &PvmHandle,
    region: &Region,
    s: &LatticeState,
) -> Result<f64> {
    let projector = Projector::new(model, handle, region)?;
    if projector.is_trivial_map() {
        let probs = model.position_probabilities(s);
        return Ok(probs
            .iter()
            .zip(projector.mask())
            .filter(|(_, keep)| **keep)
            .map(|(p, _)| p)
            .sum());
    }
    Ok(projector.apply(model, s)?.norm_sqr())
}
