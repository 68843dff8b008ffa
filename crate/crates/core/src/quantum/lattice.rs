//! The lattice realization: a periodic N³ grid of cells of side `a` on the
//! instant t0, its dual momentum lattice and the unitary transforms between
//! them.
//!
//! Cell centers are placed symmetrically, `x_j = (j − (N−1)/2)·a`, so the
//! 48 symmetries of the cube about the lattice center map centers to centers.
//! Momenta are `p_k = 2πk/(Na)` with `k ∈ [−N/2, N/2)`. With the half-cell
//! offset the momentum amplitudes are anti-periodic: `ψ̃(k + N) = −ψ̃(k)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::config::ModelConfig;
use super::state::LatticeState;
use crate::error::Result;
use crate::geometry::{Frame, Instant, Momentum, SpacetimePoint, SpacetimeVector, Velocity};

pub struct Model {
    cfg: ModelConfig,
    n: usize,
    a: f64,
    mass: f64,
    frame: Frame,
    instant: Instant,
    momenta: Vec<f64>,
    positions: Vec<f64>,
    offset_phase: Vec<Complex64>,
    omega: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    padded_forward: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model")
            .field("n", &self.n)
            .field("a", &self.a)
            .field("mass", &self.mass)
            .field("pad", &self.cfg.pad)
            .finish()
    }
}

/// Applies `f(line, values)` to every line of an `n³` array along `axis`.
/// `line = first·n + second`, with first/second the remaining axes in order.
pub(crate) fn for_each_line<F>(data: &mut [Complex64], n: usize, axis: usize, f: F)
where
    F: Fn(usize, &mut [Complex64]) + Sync,
{
    if axis == 2 {
        data.par_chunks_mut(n)
            .enumerate()
            .for_each(|(l, line)| f(l, line));
        return;
    }
    let index = |l: usize, t: usize| {
        let (p, q) = (l / n, l % n);
        match axis {
            0 => (t * n + p) * n + q,
            _ => (p * n + t) * n + q,
        }
    };
    let lines: Vec<Vec<Complex64>> = (0..n * n)
        .into_par_iter()
        .map(|l| {
            let mut buf: Vec<Complex64> = (0..n).map(|t| data[index(l, t)]).collect();
            f(l, &mut buf);
            buf
        })
        .collect();
    for (l, buf) in lines.iter().enumerate() {
        for (t, v) in buf.iter().enumerate() {
            data[index(l, t)] = *v;
        }
    }
}

fn fft3(data: &mut [Complex64], n: usize, plan: &Arc<dyn Fft<f64>>) {
    for axis in [2, 1, 0] {
        for_each_line(data, n, axis, |_, line| plan.process(line));
    }
}

impl Model {
    pub fn new(cfg: ModelConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.lattice;
        let a = cfg.spacing.value();
        let mass = cfg.mass.value();
        let u0 = *cfg.instant.observer();
        let center = cfg.instant.project(&cfg.origin);
        let instant = Instant::new(u0, center);
        let frame = Frame::new(center, u0, instant.spatial_basis());

        let momenta: Vec<f64> = (0..n)
            .map(|idx| {
                let k = if idx < n / 2 { idx as f64 } else { idx as f64 - n as f64 };
                2.0 * PI * k / (n as f64 * a)
            })
            .collect();
        let off = 0.5 * (n as f64 - 1.0) * a;
        let positions: Vec<f64> = (0..n).map(|j| j as f64 * a - off).collect();
        let offset_phase = momenta
            .iter()
            .map(|p| Complex64::from_polar(1.0, -p * off))
            .collect();
        let omega = (0..n * n * n)
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                (momenta[i].powi(2) + momenta[j].powi(2) + momenta[k].powi(2) + mass * mass)
                    .sqrt()
            })
            .collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let padded_forward = planner.plan_fft_forward(n * cfg.pad);
        Ok(Self {
            cfg,
            n,
            a,
            mass,
            frame,
            instant,
            momenta,
            positions,
            offset_phase,
            omega,
            forward,
            inverse,
            padded_forward,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing in seconds.
    pub fn spacing(&self) -> f64 {
        self.a
    }

    /// Mass in 1/sec.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn pad(&self) -> usize {
        self.cfg.pad
    }

    /// Momentum cutoff π/a.
    pub fn cutoff(&self) -> f64 {
        PI / self.a
    }

    /// Half the side of the periodic box.
    pub fn half_extent(&self) -> f64 {
        0.5 * self.n as f64 * self.a
    }

    pub fn observer(&self) -> &Velocity {
        self.frame.observer()
    }

    /// The u0-instant through the lattice center.
    pub fn instant(&self) -> &Instant {
        &self.instant
    }

    pub fn center(&self) -> &SpacetimePoint {
        self.frame.origin()
    }

    pub fn basis(&self) -> &[SpacetimeVector; 3] {
        self.frame.basis()
    }

    /// Lattice frame: origin at the center, axes along the lattice.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub(crate) fn momenta_1d(&self) -> &[f64] {
        &self.momenta
    }

    pub(crate) fn positions_1d(&self) -> &[f64] {
        &self.positions
    }

    pub(crate) fn split(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    pub fn momentum_coords(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.split(idx);
        [self.momenta[i], self.momenta[j], self.momenta[k]]
    }

    pub fn cell_coords(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.split(idx);
        [self.positions[i], self.positions[j], self.positions[k]]
    }

    pub fn cell_center(&self, idx: usize) -> SpacetimePoint {
        self.frame.point(self.cell_coords(idx))
    }

    /// ω(p) = √(|p|² + m²) at a lattice momentum.
    pub fn omega(&self, idx: usize) -> f64 {
        self.omega[idx]
    }

    pub(crate) fn omegas(&self) -> &[f64] {
        &self.omega
    }

    /// The on-shell four-momentum `ω u0 + Σ p_i b_i` of a lattice site.
    pub fn four_momentum(&self, idx: usize) -> Momentum {
        let p = self.momentum_coords(idx);
        let v = self.frame.vector(p).fiducial_components();
        let u = self.observer().fiducial_components();
        let w = self.omega[idx];
        Momentum::from_fiducial([
            w * u[0] + v[0],
            w * u[1] + v[1],
            w * u[2] + v[2],
            w * u[3] + v[3],
        ])
    }

    fn offset(&self, idx: usize) -> Complex64 {
        let (i, j, k) = self.split(idx);
        self.offset_phase[i] * self.offset_phase[j] * self.offset_phase[k]
    }

    /// Position-space amplitudes `ψ(x_j) = N^{-3/2} Σ_k ψ̃_k e^{i p_k·x_j}`.
    pub fn to_position(&self, s: &LatticeState) -> Vec<Complex64> {
        let scale = (self.len() as f64).sqrt().recip();
        let mut data: Vec<Complex64> = s
            .amplitudes()
            .par_iter()
            .enumerate()
            .map(|(idx, a)| a * self.offset(idx) * scale)
            .collect();
        fft3(&mut data, self.n, &self.inverse);
        data
    }

    /// Inverse of [`Model::to_position`].
    pub fn to_momentum(&self, mut pos: Vec<Complex64>) -> LatticeState {
        let scale = (self.len() as f64).sqrt().recip();
        fft3(&mut pos, self.n, &self.forward);
        pos.par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v *= self.offset(idx).conj() * scale);
        LatticeState::from_amplitudes(self.n, pos)
    }

    /// Position probabilities `|ψ(x_j)|²`.
    pub fn position_probabilities(&self, s: &LatticeState) -> Vec<f64> {
        self.to_position(s).iter().map(|c| c.norm_sqr()).collect()
    }

    /// Mixed representation: position along `axis`, momentum along the other
    /// two.
    pub(crate) fn to_position_along(&self, s: &LatticeState, axis: usize) -> Vec<Complex64> {
        let scale = (self.n as f64).sqrt().recip();
        let mut data = s.amplitudes().to_vec();
        let phase = &self.offset_phase;
        let inverse = &self.inverse;
        for_each_line(&mut data, self.n, axis, |_, line| {
            for (v, ph) in line.iter_mut().zip(phase) {
                *v *= ph * scale;
            }
            inverse.process(line);
        });
        data
    }

    /// The momentum amplitudes evaluated on the `pad`-times finer momentum
    /// grid of spacing `2π/(pad·N·a)`, i.e. the trigonometric polynomial
    /// `N^{-3/2} Σ_j ψ(x_j) e^{−i p·x_j}` sampled at `p = 2πk/(pad·N·a)`,
    /// `k ∈ [−pad·N/2, pad·N/2)`, in FFT order.
    pub(crate) fn fine_momentum_grid(&self, s: &LatticeState) -> Vec<Complex64> {
        let n = self.n;
        let m = n * self.cfg.pad;
        let pos = self.to_position(s);
        let mut fine = vec![Complex64::new(0.0, 0.0); m * m * m];
        for i in 0..n {
            for j in 0..n {
                let src = (i * n + j) * n;
                let dst = (i * m + j) * m;
                fine[dst..dst + n].copy_from_slice(&pos[src..src + n]);
            }
        }
        fft3(&mut fine, m, &self.padded_forward);
        let off = 0.5 * (n as f64 - 1.0) * self.a;
        let h = 2.0 * PI / (m as f64 * self.a);
        let phase: Vec<Complex64> = (0..m)
            .map(|idx| {
                let k = if idx < m / 2 { idx as f64 } else { idx as f64 - m as f64 };
                Complex64::from_polar(1.0, k * h * off)
            })
            .collect();
        let scale = (self.len() as f64).sqrt().recip();
        fine.par_iter_mut().enumerate().for_each(|(idx, v)| {
            let (i, j, k) = (idx / (m * m), (idx / m) % m, idx % m);
            *v *= phase[i] * phase[j] * phase[k] * scale;
        });
        fine
    }

    /// Lattice coordinates of a point of t0 relative to the center.
    pub fn coords_of(&self, x: &SpacetimePoint) -> [f64; 3] {
        self.frame.coordinates(x)
    }

    /// True when the coordinates lie in the periodic box `[−Na/2, Na/2)³`,
    /// up to `slack` seconds.
    pub fn in_box(&self, xi: &[f64; 3], slack: f64) -> bool {
        let h = self.half_extent() + slack;
        xi.iter().all(|x| *x >= -h && *x <= h)
    }
}
