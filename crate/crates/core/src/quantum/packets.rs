//! Test-state factories.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::lattice::Model;
use super::state::LatticeState;
use crate::error::{Error, Result};
use crate::geometry::{minkowski, MeasureScalar, Momentum, SpacetimePoint};

/// Gaussian wave packet built in momentum space,
/// `ψ̃(p) ∝ exp(−σ²|p − k0|²) e^{−i p·ξc}`, whose position density has
/// standard deviation `σ` per axis around `center`.
pub fn make_gaussian(
    model: &Model,
    center: &SpacetimePoint,
    width: MeasureScalar,
    mean_momentum: &Momentum,
) -> Result<LatticeState> {
    let sigma = width.value_in(1)?;
    if sigma < 3.0 * model.spacing() * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "width {sigma} sec is below 3a = {} sec",
            3.0 * model.spacing()
        )));
    }
    if !model.instant().contains(center) {
        return Err(Error::InvalidArgument(
            "packet center is not on the lattice instant".into(),
        ));
    }
    let xc = model.coords_of(center);
    if !model.in_box(&xc, 0.0) {
        return Err(Error::RegionOutsideLattice);
    }
    let k0 = mean_momentum.fiducial_components();
    let u = model.observer().fiducial_components();
    let scale = k0.iter().fold(1.0_f64, |m, c| m.max(c.abs()));
    if minkowski(&u, &k0).abs() > 1e-10 * scale {
        return Err(Error::NotInRestSpace);
    }
    let kc = model
        .basis()
        .map(|b| minkowski(&b.fiducial_components(), &k0));
    let k_len = kc.iter().map(|k| k * k).sum::<f64>().sqrt();
    if k_len > 0.5 * model.cutoff() {
        return Err(Error::NotBandLimited(format!(
            "mean momentum {k_len} exceeds half the cutoff {}",
            0.5 * model.cutoff()
        )));
    }

    let s2 = sigma * sigma;
    let amps = (0..model.len())
        .into_par_iter()
        .map(|idx| {
            let p = model.momentum_coords(idx);
            let mut d2 = 0.0;
            let mut phase = 0.0;
            for i in 0..3 {
                d2 += (p[i] - kc[i]).powi(2);
                phase -= p[i] * xc[i];
            }
            Complex64::from_polar((-s2 * d2).exp(), phase)
        })
        .collect();
    Ok(LatticeState::from_amplitudes(model.n(), amps).normalized())
}

/// `count` normalized white-noise states (independent complex normal
/// amplitudes). Not band-limited; use them only on exact paths.
pub fn random_states(model: &Model, count: usize, seed: u64) -> Vec<LatticeState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let amps = (0..model.len())
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            LatticeState::from_amplitudes(model.n(), amps).normalized()
        })
        .collect()
}

/// `count` random Gaussian packets: centers within one second of the lattice
/// center, widths in `[w, w + 0.4]` sec with `w = max(3a, 0.8)`, mean momenta
/// up to 0.5/sec per axis.
pub fn random_wave_packets(model: &Model, count: usize, seed: u64) -> Vec<LatticeState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = (3.0 * model.spacing()).max(0.8);
    (0..count)
        .map(|_| {
            let xi: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let k: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
            let width = w + rng.random_range(0.0..0.4);
            let center = model.frame().point(xi);
            let k0 = Momentum::from_fiducial(model.frame().vector(k).fiducial_components());
            make_gaussian(model, &center, MeasureScalar::seconds(width), &k0)
                .expect("packet parameters are inside the valid range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ModelConfig;

    fn model() -> Model {
        Model::new(ModelConfig::standard()).unwrap()
    }

    #[test]
    fn centered_packet_is_real_and_even() {
        let m = model();
        let g = make_gaussian(&m, m.center(), MeasureScalar::seconds(1.0), &Momentum::ZERO).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-12);
        let pos = m.to_position(&g);
        let n = m.n();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = pos[(i * n + j) * n + k];
                    let mirror = pos[((n - 1 - i) * n + (n - 1 - j)) * n + (n - 1 - k)];
                    assert!(v.im.abs() < 1e-12);
                    assert!((v - mirror).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn packet_is_concentrated() {
        let m = model();
        let sigma = 0.8;
        let center = m.frame().point([0.5, -0.25, 0.0]);
        let g = make_gaussian(&m, &center, MeasureScalar::seconds(sigma), &Momentum::ZERO).unwrap();
        let probs = m.position_probabilities(&g);
        let inside: f64 = probs
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                let x = m.cell_coords(*idx);
                let c = [0.5, -0.25, 0.0];
                (0..3).all(|i| (x[i] - c[i]).abs() <= 3.0 * sigma)
            })
            .map(|(_, p)| p)
            .sum();
        assert!(inside >= 0.99, "{inside}");
        let mean_x: f64 = probs
            .iter()
            .enumerate()
            .map(|(idx, p)| p * m.cell_coords(idx)[0])
            .sum();
        assert!((mean_x - 0.5).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_parameters() {
        let m = model();
        let narrow = make_gaussian(&m, m.center(), MeasureScalar::seconds(0.5), &Momentum::ZERO);
        assert!(matches!(narrow, Err(Error::InvalidArgument(_))));
        let far = m.frame().point([5.0, 0.0, 0.0]);
        assert_eq!(
            make_gaussian(&m, &far, MeasureScalar::seconds(1.0), &Momentum::ZERO).unwrap_err(),
            Error::RegionOutsideLattice
        );
        let fast = Momentum::from_fiducial(m.frame().vector([7.0, 0.0, 0.0]).fiducial_components());
        assert!(matches!(
            make_gaussian(&m, m.center(), MeasureScalar::seconds(1.0), &fast),
            Err(Error::NotBandLimited(_))
        ));
        assert!(make_gaussian(&m, m.center(), MeasureScalar::per_second(1.0), &Momentum::ZERO).is_err());
    }

    #[test]
    fn random_states_are_reproducible() {
        let m = Model::new(ModelConfig::standard().with_lattice(8)).unwrap();
        assert_eq!(random_states(&m, 2, 3), random_states(&m, 2, 3));
        assert_ne!(random_states(&m, 1, 3), random_states(&m, 1, 4));
        let packets = random_wave_packets(&m, 3, 1);
        assert!(packets.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    }
}
