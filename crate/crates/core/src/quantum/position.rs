//! The generalized Newton–Wigner position `W^o_{u,t} = ∫_t (x − o) dP_{u,t}`.
//!
//! `W` is a vector-valued operator, so `W s` is a [`VectorState`]: one lattice
//! state per fiducial component.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::Model;
use super::pvm::canonical_map;
use super::representation::{apply_poincare_with, BandPolicy, MapChain};
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::{
    minkowski, rest_space_basis, MinkowskiVector, Instant, SpacetimePoint, SpacetimeVector, Velocity, GEOMETRY_TOL,
};
use crate::groups::{LorentzMap, PoincareMap};

/// Labels `(u, t, o)` of a Newton–Wigner position operator.
#[derive(Clone, Copy, Debug)]
pub struct NwPosition {
    observer: Velocity,
    instant: Instant,
    origin: SpacetimePoint,
}

impl NwPosition {
    pub fn new(observer: Velocity, instant: Instant, origin: SpacetimePoint) -> Result<Self> {
        if !instant.observer().approx_eq(&observer, GEOMETRY_TOL) {
            return Err(Error::ObserverMismatch);
        }
        Ok(Self {
            observer,
            instant,
            origin,
        })
    }

    /// `W^{o}_{u0,t0}` of the lattice instant, centered at `origin`.
    pub fn on_lattice(model: &Model, origin: SpacetimePoint) -> Self {
        Self {
            observer: *model.observer(),
            instant: *model.instant(),
            origin,
        }
    }

    pub fn observer(&self) -> &Velocity {
        &self.observer
    }

    pub fn instant(&self) -> &Instant {
        &self.instant
    }

    pub fn origin(&self) -> &SpacetimePoint {
        &self.origin
    }

    /// Labels `(𝐋u, L[t], L(o))`.
    pub fn transformed(&self, map: &PoincareMap) -> Result<Self> {
        Ok(Self {
            observer: map.apply_velocity(&self.observer)?,
            instant: map.apply_instant(&self.instant),
            origin: map.apply_point(&self.origin),
        })
    }
}

/// Four lattice states, the fiducial components of a vector operator applied
/// to a state.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorState {
    components: [LatticeState; 4],
}

impl VectorState {
    pub fn new(components: [LatticeState; 4]) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[LatticeState; 4] {
        &self.components
    }

    /// `v·V`, the Lorentz product of a fixed vector with every component.
    pub fn contract<V: MinkowskiVector>(&self, v: &V) -> LatticeState {
        let w = v.raw();
        let coeff = [-w[0], w[1], w[2], w[3]];
        let mut out = LatticeState::zeros(self.components[0].lattice_size());
        for (c, s) in coeff.iter().zip(&self.components) {
            if *c != 0.0 {
                out = out.axpy(Complex64::new(*c, 0.0), s);
            }
        }
        out
    }

    /// Applies the linear map to the vector index.
    pub fn transformed(&self, l: &LorentzMap) -> VectorState {
        let m = l.fiducial_matrix();
        let n = self.components[0].lattice_size();
        let components = std::array::from_fn(|mu| {
            let mut out = LatticeState::zeros(n);
            for nu in 0..4 {
                if m[mu][nu] != 0.0 {
                    out = out.axpy(Complex64::new(m[mu][nu], 0.0), &self.components[nu]);
                }
            }
            out
        });
        VectorState { components }
    }

    /// `π_u` on the vector index: `V + (u·V) u`.
    pub fn project_rest(&self, u: &Velocity) -> VectorState {
        let uc = u.fiducial_components();
        let along = self.contract(&u.as_direction());
        let components = std::array::from_fn(|mu| {
            self.components[mu].axpy(Complex64::new(uc[mu], 0.0), &along)
        });
        VectorState { components }
    }

    pub fn try_map<F>(&self, f: F) -> Result<VectorState>
    where
        F: Fn(&LatticeState) -> Result<LatticeState>,
    {
        let [a, b, c, d] = &self.components;
        Ok(VectorState {
            components: [f(a)?, f(b)?, f(c)?, f(d)?],
        })
    }

    /// `(Σ_μ ‖V_μ − W_μ‖²)^{1/2}` over fiducial components.
    pub fn distance(&self, other: &VectorState) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.distance(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(LatticeState::norm_sqr)
            .sum::<f64>()
            .sqrt()
    }
}

/// `(Lc(c) − o)` as an affine function of the lattice coordinates `ξ` of the
/// cell `c`: `f(ξ) = f0 + Σ_i ξ_i g_i`, in fiducial components.
struct AffinePosition {
    map: PoincareMap,
    f0: [f64; 4],
    g: [[f64; 4]; 3],
}

impl AffinePosition {
    fn new(model: &Model, w: &NwPosition) -> Self {
        let map = canonical_map(model, w.instant());
        let f0 = (map.apply_point(model.center()) - *w.origin()).fiducial_components();
        let g = model
            .basis()
            .map(|b| map.apply_vector(&b).fiducial_components());
        Self { map, f0, g }
    }

    fn at(&self, xi: &[f64; 3], mu: usize) -> f64 {
        self.f0[mu] + xi[0] * self.g[0][mu] + xi[1] * self.g[1][mu] + xi[2] * self.g[2][mu]
    }

    fn pulled_back(&self, model: &Model, s: &LatticeState) -> Result<LatticeState> {
        if self.map.approx_eq(&PoincareMap::identity(), 0.0) {
            return Ok(s.clone());
        }
        MapChain::from(self.map)
            .inverse()
            .apply_with(model, s, BandPolicy::Allow)
    }
}

/// `W s`.
pub fn apply_nw(model: &Model, w: &NwPosition, s: &LatticeState) -> Result<VectorState> {
    let affine = AffinePosition::new(model, w);
    let pos = model.to_position(&affine.pulled_back(model, s)?);
    let trivial = affine.map.approx_eq(&PoincareMap::identity(), 0.0);
    let components = std::array::from_fn(|mu| {
        let weighted: Vec<Complex64> = pos
            .par_iter()
            .enumerate()
            .map(|(idx, v)| v * affine.at(&model.cell_coords(idx), mu))
            .collect();
        let local = model.to_momentum(weighted);
        if trivial {
            Ok(local)
        } else {
            apply_poincare_with(model, &local, &affine.map, BandPolicy::Allow)
        }
    });
    let [a, b, c, d] = components;
    Ok(VectorState::new([a?, b?, c?, d?]))
}

/// `⟨s|W s⟩ = Σ_cells (x − o)·prob(cell)`.
pub fn nw_expectation(model: &Model, w: &NwPosition, s: &LatticeState) -> Result<SpacetimeVector> {
    let affine = AffinePosition::new(model, w);
    let probs = model.position_probabilities(&affine.pulled_back(model, s)?);
    let mut acc = [0.0; 4];
    for (idx, p) in probs.iter().enumerate() {
        let xi = model.cell_coords(idx);
        for (mu, a) in acc.iter_mut().enumerate() {
            *a += p * affine.at(&xi, mu);
        }
    }
    Ok(SpacetimeVector::from_fiducial(acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanVariance {
    pub mean: f64,
    pub variance: f64,
}

/// Statistics of `τ_{u2}(W)` and of the components of `π_{u2}(W)` along the
/// default rest-space basis of `u2`, all in seconds (variances in sec²).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComponentStats {
    pub tau: MeanVariance,
    pub space: [MeanVariance; 3],
}

/// Mean and variance of the components of `W` seen by `u2`.
///
/// When `u2` is the operator's own observer every cell lies on one
/// u2-instant, the τ coefficient of the cell coordinates is dropped and the
/// τ variance is exactly zero.
pub fn nw_component_stats(
    model: &Model,
    w: &NwPosition,
    u2: &Velocity,
    s: &LatticeState,
) -> Result<ComponentStats> {
    let affine = AffinePosition::new(model, w);
    let probs = model.position_probabilities(&affine.pulled_back(model, s)?);
    let total: f64 = probs.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidArgument("zero state has no statistics".into()));
    }
    let u2c = u2.fiducial_components();
    let basis = rest_space_basis(u2).map(|b| b.fiducial_components());
    let same = u2.approx_eq(w.observer(), 1e-14);

    let stat = |functional: &[f64; 4], flat: bool| -> MeanVariance {
        let c0 = minkowski(functional, &affine.f0);
        let c: [f64; 3] = if flat {
            [0.0; 3]
        } else {
            std::array::from_fn(|i| minkowski(functional, &affine.g[i]))
        };
        let lin = |idx: usize| {
            let xi = model.cell_coords(idx);
            c[0] * xi[0] + c[1] * xi[1] + c[2] * xi[2]
        };
        let m: f64 = probs.iter().enumerate().map(|(i, p)| p * lin(i)).sum::<f64>() / total;
        let var: f64 = probs
            .iter()
            .enumerate()
            .map(|(i, p)| p * (lin(i) - m).powi(2))
            .sum::<f64>()
            / total;
        MeanVariance {
            mean: c0 + m,
            variance: var,
        }
    };

    let neg_u = u2c.map(|x| -x);
    Ok(ComponentStats {
        tau: stat(&neg_u, same),
        space: std::array::from_fn(|i| stat(&basis[i], false)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MeasureScalar, Momentum};
    use crate::groups::make_boost_along;
    use crate::quantum::{make_gaussian, random_states, ModelConfig};

    fn model(n: usize) -> Model {
        Model::new(ModelConfig::standard().with_lattice(n)).unwrap()
    }

    #[test]
    fn expectation_of_a_displaced_packet() {
        let m = model(32);
        let w = NwPosition::on_lattice(&m, *m.center());
        let c = m.frame().point([0.5, 0.0, -0.25]);
        let g = make_gaussian(&m, &c, MeasureScalar::seconds(1.0), &Momentum::ZERO).unwrap();
        let mean = nw_expectation(&m, &w, &g).unwrap();
        let coords = mean.coordinates_in(m.observer(), m.basis());
        assert!(coords[0].abs() < 1e-14);
        assert!((coords[1] - 0.5).abs() < m.spacing());
        assert!((coords[3] + 0.25).abs() < m.spacing());

        let stats = nw_component_stats(&m, &w, m.observer(), &g).unwrap();
        assert_eq!(stats.tau.variance, 0.0);
        assert!((stats.space[0].variance - 1.0).abs() < 0.05);
    }

    #[test]
    fn expectation_matches_the_operator() {
        let m = model(8);
        let w = NwPosition::on_lattice(&m, m.frame().point([0.1, 0.2, 0.3]));
        let s = &random_states(&m, 1, 3)[0];
        let ws = apply_nw(&m, &w, s).unwrap();
        let mean = nw_expectation(&m, &w, s).unwrap().fiducial_components();
        for mu in 0..4 {
            let e = s.inner(&ws.components()[mu]);
            assert!((e.re - mean[mu]).abs() < 1e-12);
            assert!(e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn boosted_observer_sees_time_spread() {
        let m = model(32);
        let w = NwPosition::on_lattice(&m, *m.center());
        let g = make_gaussian(&m, m.center(), MeasureScalar::seconds(1.0), &Momentum::ZERO).unwrap();
        let b = make_boost_along(m.observer(), &m.basis()[0], 0.5).unwrap();
        let u2 = b.apply_velocity(m.observer()).unwrap();
        let stats = nw_component_stats(&m, &w, &u2, &g).unwrap();
        let expected = 0.5f64.sinh().powi(2);
        assert!((stats.tau.variance - expected).abs() < 0.05 * expected, "{stats:?}");
    }

    #[test]
    fn vector_state_algebra() {
        let m = model(8);
        let s = &random_states(&m, 1, 5)[0];
        let w = NwPosition::on_lattice(&m, *m.center());
        let ws = apply_nw(&m, &w, s).unwrap();
        let b = make_boost_along(m.observer(), &m.basis()[1], 0.4).unwrap();
        let back = ws.transformed(&b).transformed(&b.inverse());
        assert!(back.distance(&ws) < 1e-12);
        // W has no u0-time component on its own instant.
        let tau = ws.contract(&m.observer().as_direction());
        assert!(tau.norm() < 1e-13);
        assert!(ws.project_rest(m.observer()).distance(&ws) < 1e-13);
    }
}
