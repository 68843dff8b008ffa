//! The unitary representation of orthochronous Poincaré maps on lattice
//! states: `(U_L ψ)(p) = e^{−i p·d} √(ω(q)/ω(p)) ψ(q)` with `q = 𝐋⁻¹p` and
//! `d = L(c) − c` the displacement of the lattice center.
//!
//! Three paths, from exact to approximate:
//! * translations: pure phases;
//! * the 48 cube symmetries about the center: signed permutations;
//! * boosts along a lattice axis (after a cube symmetry): exact trigonometric
//!   interpolation along one axis;
//! * anything else: 8-point Lagrange interpolation on the `pad`-oversampled
//!   momentum grid.

use num_complex::Complex64;
use rayon::prelude::*;

use super::lattice::{for_each_line, Model};
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::{minkowski, MeasureScalar, SpacetimeVector};
use crate::groups::{make_boost, orthogonal_in_rest_space, LorentzMap, PoincareMap};

/// Fraction of the probability allowed above the support energy.
const SUPPORT_TAIL: f64 = 1e-12;

/// An element of the cube group acting on the lattice axes:
/// `R b_j = sign_j · b_{perm_j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSymmetry {
    pub perm: [usize; 3],
    pub sign: [i8; 3],
}

impl LatticeSymmetry {
    pub const IDENTITY: Self = Self {
        perm: [0, 1, 2],
        sign: [1, 1, 1],
    };

    /// All 48 signed permutations, identity first.
    pub fn all() -> Vec<LatticeSymmetry> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for bits in 0..8u8 {
                let sign = [0, 1, 2].map(|i| if bits >> i & 1 == 0 { 1 } else { -1 });
                out.push(LatticeSymmetry { perm, sign });
            }
        }
        out
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let mut r = [[0.0; 3]; 3];
        for j in 0..3 {
            r[self.perm[j]][j] = self.sign[j] as f64;
        }
        r
    }

    pub fn is_proper(&self) -> bool {
        let r = self.matrix();
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        det > 0.0
    }

    pub fn to_lorentz(&self, model: &Model) -> LorentzMap {
        orthogonal_in_rest_space(model.observer(), model.basis(), self.matrix())
            .expect("lattice basis is orthonormal")
    }

    /// The symmetry about the lattice center as a Poincaré map.
    pub fn to_poincare(&self, model: &Model) -> PoincareMap {
        PoincareMap::about(model.center(), self.to_lorentz(model))
    }

    /// Recognizes a Lorentz map that acts on the lattice as a cube symmetry.
    pub fn detect(model: &Model, l: &LorentzMap) -> Option<LatticeSymmetry> {
        const TOL: f64 = 1e-9;
        let u = model.observer().fiducial_components();
        let lu = l.apply_raw(&u);
        if lu.iter().zip(&u).any(|(a, b)| (a - b).abs() > TOL) {
            return None;
        }
        let b = model.basis().map(|v| v.fiducial_components());
        let mut perm = [0usize; 3];
        let mut sign = [0i8; 3];
        for j in 0..3 {
            let img = l.apply_raw(&b[j]);
            let mut hit = None;
            for (i, bi) in b.iter().enumerate() {
                let r = minkowski(bi, &img);
                if (r.abs() - 1.0).abs() <= TOL {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some((i, if r > 0.0 { 1 } else { -1 }));
                } else if r.abs() > TOL {
                    return None;
                }
            }
            let (i, s) = hit?;
            perm[j] = i;
            sign[j] = s;
        }
        let mut seen = [false; 3];
        for p in perm {
            if seen[p] {
                return None;
            }
            seen[p] = true;
        }
        Some(LatticeSymmetry { perm, sign })
    }

    /// `ψ'(k) = ψ(R⁻¹k)`, with the sign flip of the anti-periodic Nyquist
    /// plane when a component lands on `+N/2`.
    pub fn apply(&self, model: &Model, s: &LatticeState) -> LatticeState {
        let n = model.n() as i64;
        let half = n / 2;
        let signed = |t: usize| {
            let t = t as i64;
            if t < half {
                t
            } else {
                t - n
            }
        };
        let amps = s.amplitudes();
        let out = (0..model.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j, k) = model.split(idx);
                let kk = [signed(i), signed(j), signed(k)];
                let mut factor = 1.0;
                let mut src = 0usize;
                for jx in 0..3 {
                    let mut q = self.sign[jx] as i64 * kk[self.perm[jx]];
                    if q == half {
                        q = -half;
                        factor = -factor;
                    }
                    let q = if q < 0 { q + n } else { q } as usize;
                    src = src * n as usize + q;
                }
                amps[src] * factor
            })
            .collect();
        LatticeState::from_amplitudes(model.n(), out)
    }
}

/// The 48 cube symmetries about the lattice center.
pub fn lattice_symmetries(model: &Model) -> Vec<PoincareMap> {
    LatticeSymmetry::all()
        .iter()
        .map(|r| r.to_poincare(model))
        .collect()
}

/// Translation by `Σ steps_i · a · b_i`.
pub fn lattice_translation(model: &Model, steps: [i64; 3]) -> PoincareMap {
    let xi = steps.map(|s| s as f64 * model.spacing());
    PoincareMap::translation(model.frame().vector(xi))
}

/// `ψ(p) ↦ e^{−i p·d} ψ(p)` with `p` on shell.
pub fn apply_translation(model: &Model, s: &LatticeState, d: &SpacetimeVector) -> LatticeState {
    let u = model.observer().fiducial_components();
    let raw = d.fiducial_components();
    let dt = -minkowski(&u, &raw);
    let ds = model.basis().map(|b| minkowski(&b.fiducial_components(), &raw));
    let axis_phase: Vec<[Complex64; 3]> = model
        .momenta_1d()
        .iter()
        .map(|p| [0, 1, 2].map(|i| Complex64::from_polar(1.0, -p * ds[i])))
        .collect();
    let omegas = model.omegas();
    let out = s
        .amplitudes()
        .par_iter()
        .enumerate()
        .map(|(idx, a)| {
            let (i, j, k) = model.split(idx);
            let time = Complex64::from_polar(1.0, omegas[idx] * dt);
            a * time * axis_phase[i][0] * axis_phase[j][1] * axis_phase[k][2]
        })
        .collect();
    LatticeState::from_amplitudes(model.n(), out)
}

/// Schrödinger evolution to the u0-instant `dt` later: `ψ ↦ e^{−iω dt} ψ`,
/// which is the representation of the translation by `−dt·u0`.
pub fn evolve(model: &Model, s: &LatticeState, dt: MeasureScalar) -> Result<LatticeState> {
    let d = model.observer().displacement(-dt)?;
    Ok(apply_translation(model, s, &d))
}

/// Exact action of a lattice-preserving element of O_{u0}.
pub fn apply_rotation(model: &Model, s: &LatticeState, l: &LorentzMap) -> Result<LatticeState> {
    let r = LatticeSymmetry::detect(model, l).ok_or(Error::NotLatticePreserving)?;
    Ok(r.apply(model, s))
}

/// Smallest ω such that all but a `1e-12` fraction of the probability sits
/// at energies `≤ ω`.
pub fn support_energy(model: &Model, s: &LatticeState) -> f64 {
    let mut pairs: Vec<(f64, f64)> = s
        .amplitudes()
        .iter()
        .zip(model.omegas())
        .map(|(a, w)| (*w, a.norm_sqr()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut tail = 0.0;
    for (w, p) in &pairs {
        tail += p;
        if tail > SUPPORT_TAIL * total {
            return *w;
        }
    }
    model.mass()
}

/// `χmax = asinh(0.25·(π/a)/ω_max)` for the state's support energy.
pub fn rapidity_cap(model: &Model, s: &LatticeState) -> f64 {
    (0.25 * model.cutoff() / support_energy(model, s)).asinh()
}

#[derive(Clone, Debug)]
pub struct BoostOutcome {
    pub state: LatticeState,
    /// Rapidity between u0 and 𝐋u0.
    pub rapidity: f64,
    pub cap: f64,
    /// `|‖U_L ψ‖ − ‖ψ‖|`.
    pub norm_drift: f64,
    /// True when the exact one-axis interpolation was used.
    pub exact_axis: bool,
}

/// Whether a boost may push amplitude past the momentum cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandPolicy {
    /// Refuse rapidities above the state's cap.
    Enforce,
    /// Boost anyway; whatever leaves the band is dropped and shows up as
    /// norm drift. Sharply localized states always need this.
    Allow,
}

/// Action of an orthochronous Lorentz map about the lattice center.
pub fn apply_boost(model: &Model, s: &LatticeState, l: &LorentzMap) -> Result<BoostOutcome> {
    apply_boost_with(model, s, l, BandPolicy::Enforce)
}

pub fn apply_boost_with(
    model: &Model,
    s: &LatticeState,
    l: &LorentzMap,
    policy: BandPolicy,
) -> Result<BoostOutcome> {
    if !l.is_lorentz() {
        return Err(Error::NotLorentz);
    }
    if !l.is_orthochronous() {
        return Err(Error::NotOrthochronous);
    }
    let u0 = *model.observer();
    let v = l.apply_velocity(&u0)?;
    let chi = u0.rapidity_to(&v);
    let cap = rapidity_cap(model, s);
    if policy == BandPolicy::Enforce && chi > cap {
        return Err(Error::BandLimit { rapidity: chi, cap });
    }

    let mut exact_axis = false;
    let state = if chi <= 1e-12 {
        match LatticeSymmetry::detect(model, l) {
            Some(r) => r.apply(model, s),
            None => general_linear(model, s, l),
        }
    } else {
        let b = make_boost(&u0, &v);
        let rest = b.inverse().compose(l);
        let vr = v.fiducial_components();
        let dir: Vec<f64> = model
            .basis()
            .iter()
            .map(|bi| minkowski(&bi.fiducial_components(), &vr) / chi.sinh())
            .collect();
        let axis = (0..3).find(|&i| dir[i].abs() >= 1.0 - 1e-12);
        match (axis, LatticeSymmetry::detect(model, &rest)) {
            (Some(i), Some(r)) => {
                exact_axis = true;
                let rotated = r.apply(model, s);
                axis_boost(model, &rotated, i, dir[i].signum() * chi)
            }
            _ => general_linear(model, s, l),
        }
    };
    let norm_drift = (state.norm() - s.norm()).abs();
    Ok(BoostOutcome {
        state,
        rapidity: chi,
        cap,
        norm_drift,
        exact_axis,
    })
}

/// Boost of rapidity `chi` along lattice axis `axis`. Only the momentum
/// component along the axis changes, so the amplitude at the pulled-back
/// momentum is the exact trigonometric sum over that axis.
fn axis_boost(model: &Model, s: &LatticeState, axis: usize, chi: f64) -> LatticeState {
    let n = model.n();
    let (ch, sh) = (chi.cosh(), chi.sinh());
    let m2 = model.mass().powi(2);
    let cutoff = model.cutoff();
    let a = model.spacing();
    let momenta = model.momenta_1d();
    let x0 = model.positions_1d()[0];
    let scale = (n as f64).sqrt().recip();

    let mut data = model.to_position_along(s, axis);
    for_each_line(&mut data, n, axis, |l, line| {
        let perp2 = momenta[l / n].powi(2) + momenta[l % n].powi(2);
        let phi = line.to_vec();
        for (t, out) in line.iter_mut().enumerate() {
            let p = momenta[t];
            let w = (p * p + perp2 + m2).sqrt();
            let q = ch * p - sh * w;
            if q.abs() >= cutoff {
                *out = Complex64::new(0.0, 0.0);
                continue;
            }
            let wq = ch * w - sh * p;
            let step = Complex64::from_polar(1.0, -q * a);
            let mut e = Complex64::from_polar(1.0, -q * x0);
            let mut acc = Complex64::new(0.0, 0.0);
            for f in &phi {
                acc += f * e;
                e *= step;
            }
            *out = acc * scale * (wq / w).sqrt();
        }
    });
    LatticeState::from_amplitudes(n, data)
}

fn lagrange_weights(t: f64) -> (i64, [f64; 8]) {
    let base = t.floor() as i64 - 3;
    let mut w = [1.0; 8];
    for (m, wm) in w.iter_mut().enumerate() {
        let xm = (base + m as i64) as f64;
        for l in 0..8 {
            if l != m {
                let xl = (base + l as i64) as f64;
                *wm *= (t - xl) / (xm - xl);
            }
        }
    }
    (base, w)
}

/// General linear action by Lagrange interpolation on the oversampled grid.
fn general_linear(model: &Model, s: &LatticeState, l: &LorentzMap) -> LatticeState {
    let fine = model.fine_momentum_grid(s);
    let m = (model.n() * model.pad()) as i64;
    let h = 2.0 * std::f64::consts::PI / (m as f64 * model.spacing());
    let cutoff = model.cutoff();
    let inv = l.inverse();
    let u = model.observer().fiducial_components();
    let b = model.basis().map(|v| v.fiducial_components());

    let out = (0..model.len())
        .into_par_iter()
        .map(|idx| {
            let p = model.four_momentum(idx).fiducial_components();
            let q = inv.apply_raw(&p);
            let wq = -minkowski(&u, &q);
            let qs = [0, 1, 2].map(|i| minkowski(&b[i], &q));
            if qs.iter().any(|c| c.abs() >= cutoff) {
                return Complex64::new(0.0, 0.0);
            }
            let stencils = qs.map(|c| lagrange_weights(c / h));
            let wrap = |k: i64| -> Option<usize> {
                if k < -m / 2 || k >= m / 2 {
                    None
                } else {
                    Some(if k < 0 { k + m } else { k } as usize)
                }
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for (ix, wx) in stencils[0].1.iter().enumerate() {
                let Some(fx) = wrap(stencils[0].0 + ix as i64) else {
                    continue;
                };
                for (iy, wy) in stencils[1].1.iter().enumerate() {
                    let Some(fy) = wrap(stencils[1].0 + iy as i64) else {
                        continue;
                    };
                    let row = (fx * m as usize + fy) * m as usize;
                    let wxy = wx * wy;
                    for (iz, wz) in stencils[2].1.iter().enumerate() {
                        if let Some(fz) = wrap(stencils[2].0 + iz as i64) {
                            acc += fine[row + fz] * (wxy * wz);
                        }
                    }
                }
            }
            acc * (wq / model.omega(idx)).sqrt()
        })
        .collect();
    LatticeState::from_amplitudes(model.n(), out)
}

/// `U_P ψ` for an orthochronous Poincaré map.
pub fn apply_poincare(model: &Model, s: &LatticeState, p: &PoincareMap) -> Result<LatticeState> {
    apply_poincare_with(model, s, p, BandPolicy::Enforce)
}

pub fn apply_poincare_with(
    model: &Model,
    s: &LatticeState,
    p: &PoincareMap,
    policy: BandPolicy,
) -> Result<LatticeState> {
    let lin = p.linear();
    let rotated = if lin.max_abs_diff(&LorentzMap::identity()) <= 1e-14 {
        s.clone()
    } else if let Some(r) = LatticeSymmetry::detect(model, lin) {
        r.apply(model, s)
    } else {
        apply_boost_with(model, s, lin, policy)?.state
    };
    let c = *model.center();
    let d = p.apply_point(&c) - c;
    if d.is_zero() {
        Ok(rotated)
    } else {
        Ok(apply_translation(model, &rotated, &d))
    }
}

/// A Poincaré map kept as a product `f_0 ∘ f_1 ∘ … ∘ f_k`, applied factor by
/// factor so each factor can take its exact path.
#[derive(Clone, Debug, Default)]
pub struct MapChain {
    factors: Vec<PoincareMap>,
}

impl MapChain {
    pub fn new(factors: Vec<PoincareMap>) -> Self {
        Self { factors }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[PoincareMap] {
        &self.factors
    }

    pub fn product(&self) -> PoincareMap {
        self.factors
            .iter()
            .fold(PoincareMap::identity(), |acc, f| acc.compose(f))
    }

    pub fn inverse(&self) -> MapChain {
        MapChain {
            factors: self.factors.iter().rev().map(|f| f.inverse()).collect(),
        }
    }

    /// `self ∘ rhs`.
    pub fn then_after(&self, rhs: &MapChain) -> MapChain {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&rhs.factors);
        MapChain { factors }
    }

    pub fn apply(&self, model: &Model, s: &LatticeState) -> Result<LatticeState> {
        self.apply_with(model, s, BandPolicy::Enforce)
    }

    pub fn apply_with(
        &self,
        model: &Model,
        s: &LatticeState,
        policy: BandPolicy,
    ) -> Result<LatticeState> {
        let mut out = s.clone();
        for f in self.factors.iter().rev() {
            out = apply_poincare_with(model, &out, f, policy)?;
        }
        Ok(out)
    }
}

impl From<PoincareMap> for MapChain {
    fn from(p: PoincareMap) -> Self {
        MapChain { factors: vec![p] }
    }
}
