use minkabs::geometry::{
    lorentz_product, pi, time_part, Instant, MeasureScalar, Momentum, SpacetimePoint,
    SpacetimeVector, Velocity,
};
use minkabs::groups::{
    make_boost, make_boost_along, make_rotation, Box3, LorentzMap, PoincareMap, Region,
};
use minkabs::quantum::{
    causality_experiment, centered_region, commutator_witness, lattice_symmetries,
    lattice_translation, make_gaussian, random_states, random_wave_packets, verify_eq1,
    verify_prop1, verify_prop1_boost, verify_prop2, verify_prop2_negative, verify_prop3,
    verify_prop4, LatticeSymmetry, MapChain, Model, NwPosition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::report::{Bound, Recorder, RunReport, SweepRow};
use crate::CliError;

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn random_velocity(rng: &mut ChaCha8Rng) -> Velocity {
    let chi: f64 = rng.random_range(0.0..1.0);
    let n = random_unit(rng);
    Velocity::from_fiducial([chi.cosh(), chi.sinh() * n[0], chi.sinh() * n[1], chi.sinh() * n[2]])
        .expect("unit timelike by construction")
}

fn random_vector(rng: &mut ChaCha8Rng) -> SpacetimeVector {
    SpacetimeVector::from_fiducial(std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
}

fn random_lorentz(rng: &mut ChaCha8Rng) -> LorentzMap {
    let u0 = Velocity::fiducial();
    (0..4).fold(LorentzMap::identity(), |acc, _| {
        let n = random_unit(rng);
        let axis = SpacetimeVector::seconds(0.0, n[0], n[1], n[2]);
        let step = if rng.random_bool(0.5) {
            make_boost_along(&u0, &axis, rng.random_range(-1.0..1.0))
        } else {
            make_rotation(&u0, &axis, rng.random_range(-3.0..3.0))
        };
        acc.compose(&step.expect("axis lies in the rest space"))
    })
}

pub fn verify_geometry(cfg: &RunConfig, timing: bool) -> RunReport {
    let mut rec = Recorder::new("verify-geometry", cfg, timing);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(Velocity, SpacetimeVector)> = (0..10_000)
        .map(|_| (random_velocity(&mut rng), random_vector(&mut rng)))
        .collect();
    let maps: Vec<(LorentzMap, SpacetimeVector, SpacetimeVector)> = (0..1_000)
        .map(|_| (random_lorentz(&mut rng), random_vector(&mut rng), random_vector(&mut rng)))
        .collect();

    rec.check("splitting-identity", 0, 1e-12, Bound::AtMost, || {
        Ok(pairs.iter().fold(0.0_f64, |m, (u, x)| {
            m.max((time_part(u, x) + pi(u, x) - *x).max_abs())
        }))
    });
    rec.check("rest-space-orthogonality", 0, 1e-12, Bound::AtMost, || {
        Ok(pairs.iter().fold(0.0_f64, |m, (u, x)| {
            m.max(lorentz_product(u, &pi(u, x)).value().abs())
        }))
    });
    rec.check("lorentz-product-preservation", 0, 1e-9, Bound::AtMost, || {
        Ok(maps.iter().fold(0.0_f64, |m, (l, x, y)| {
            let before = lorentz_product(x, y).value();
            let after = lorentz_product(&l.apply(x), &l.apply(y)).value();
            m.max((before - after).abs())
        }))
    });
    rec.check("lorentz-inverse", 0, 1e-9, Bound::AtMost, || {
        Ok(maps.iter().fold(0.0_f64, |m, (l, _, _)| {
            m.max(l.compose(&l.inverse()).max_abs_diff(&LorentzMap::identity()))
        }))
    });
    rec.check("orthochronous-closure", 0, 0.0, Bound::AtMost, || {
        let bad = maps
            .iter()
            .filter(|(l, _, _)| !(l.is_lorentz() && l.is_orthochronous() && l.is_proper()))
            .count();
        Ok(bad as f64)
    });
    rec.check("pure-boost-target", 0, 1e-9, Bound::AtMost, || {
        let mut worst = 0.0_f64;
        for w in pairs.windows(2).take(1_000) {
            let (u, v) = (w[0].0, w[1].0);
            let image = make_boost(&u, &v).apply_velocity(&u)?;
            let d = image.fiducial_components();
            let e = v.fiducial_components();
            worst = worst.max((0..4).fold(0.0_f64, |m, i| m.max((d[i] - e[i]).abs())));
        }
        Ok(worst)
    });
    rec.check("poincare-composition", 0, 1e-9, Bound::AtMost, || {
        let origin = SpacetimePoint::origin();
        Ok(maps.windows(2).fold(0.0_f64, |m, w| {
            let p = PoincareMap::new(w[0].0, w[0].1);
            let q = PoincareMap::new(w[1].0, w[1].1);
            let x = origin + w[0].2;
            let lhs = p.compose(&q).apply_point(&x);
            let rhs = p.apply_point(&q.apply_point(&x));
            m.max((lhs - rhs).max_abs())
        }))
    });
    rec.finish()
}

fn build_model(cfg: &RunConfig, lattice: usize) -> Result<Model, CliError> {
    Model::new(cfg.model_config(lattice)).map_err(|e| CliError::Config(e.to_string()))
}

pub fn verify_covariance(cfg: &RunConfig, timing: bool) -> Result<RunReport, CliError> {
    let m = build_model(cfg, cfg.lattice)?;
    let n = m.n();
    let h = m.half_extent();
    let a = m.spacing();
    let mut rec = Recorder::new("verify-covariance", cfg, timing);
    let states = random_states(&m, cfg.states, cfg.seed);
    let w = NwPosition::on_lattice(&m, *m.center());
    let region = Region::in_frame(
        *m.instant(),
        *m.frame(),
        vec![Box3::new([-0.5 * h, -0.25 * h, -0.375 * h], [0.375 * h, 0.5 * h, 0.25 * h])
            .map_err(|e| CliError::Config(e.to_string()))?],
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reach = (n / 8) as i64;
    let shifts: Vec<[i64; 3]> = (0..4)
        .map(|_| std::array::from_fn(|_| rng.random_range(-reach..=reach)))
        .collect();
    rec.check("eq1-lattice-translations", n, 1e-10, Bound::AtMost, || {
        shifts.iter().try_fold(0.0_f64, |acc, s| {
            Ok(acc.max(verify_eq1(&m, &lattice_translation(&m, *s), &region, &states)?.residual))
        })
    });
    rec.check("eq1-lattice-symmetries", n, 1e-10, Bound::AtMost, || {
        lattice_symmetries(&m).iter().try_fold(0.0_f64, |acc, s| {
            Ok(acc.max(verify_eq1(&m, s, &region, &states)?.residual))
        })
    });
    rec.check("prop1-time-translation", n, 1e-10, Bound::AtMost, || {
        let dt = m.observer().displacement(MeasureScalar::seconds(2.0 * a))?;
        let chain = MapChain::from(PoincareMap::translation(dt));
        Ok(verify_prop1(&m, &chain, &region, &states)?.residual)
    });

    // Boost residual at N and 2N on the central half of the lattice box.
    let mut boost = Vec::new();
    let doubled = build_model(cfg, 2 * n)?;
    for model in [&m, &doubled] {
        let lattice = model.n();
        let packets = random_wave_packets(model, 1, cfg.seed);
        let r = verify_prop1_boost(model, cfg.rapidity, model.half_extent(), &packets);
        if let Ok(r) = &r {
            rec.convergence("prop1-boost", lattice, r.residual);
        }
        boost.push(r);
    }
    rec.check("prop1-boost-ratio", 2 * n, 0.6, Bound::AtMost, || {
        Ok(boost[1].clone()?.residual / boost[0].clone()?.residual)
    });

    rec.check("prop2-lattice-symmetries", n, 1e-10, Bound::AtMost, || {
        LatticeSymmetry::all().iter().try_fold(0.0_f64, |acc, s| {
            let chain = MapChain::from(s.to_poincare(&m));
            Ok(acc.max(verify_prop2(&m, &chain, &w, &states)?.residual))
        })
    });
    let gaussian = make_gaussian(&m, m.center(), MeasureScalar::seconds(1.0), &Momentum::ZERO);
    rec.check("prop2-fixed-label-witness", n, 0.1, Bound::AtLeast, || {
        let b = make_boost_along(m.observer(), &m.basis()[0], cfg.rapidity)?;
        let g = gaussian.clone()?;
        Ok(verify_prop2_negative(&m, &PoincareMap::about(m.center(), b), &w, &[g])?.residual)
    });
    rec.check("prop3-rotations", n, 1e-10, Bound::AtMost, || {
        LatticeSymmetry::all()
            .iter()
            .filter(|s| s.is_proper())
            .try_fold(0.0_f64, |acc, s| {
                let chain = MapChain::from(s.to_poincare(&m));
                Ok(acc.max(verify_prop3(&m, m.observer(), &chain, &w, &states)?.residual))
            })
    });
    rec.check("prop3-moving-observer-witness", n, 0.05, Bound::AtLeast, || {
        let b = PoincareMap::about(m.center(), make_boost_along(m.observer(), &m.basis()[0], 0.5)?);
        let quarter = make_rotation(m.observer(), &m.basis()[2], std::f64::consts::FRAC_PI_2)?;
        let chain = MapChain::new(vec![b, PoincareMap::about(m.center(), quarter), b.inverse()]);
        let u2 = b.apply_velocity(m.observer())?;
        Ok(verify_prop3(&m, &u2, &chain, &w, &[gaussian.clone()?])?.residual)
    });
    rec.check("prop4-own-observer-tau-variance", n, 0.0, Bound::AtMost, || {
        Ok(verify_prop4(&m, &w, m.observer(), &states)?.residual)
    });
    rec.check("prop4-moving-observer-witness", n, 0.01, Bound::AtLeast, || {
        let u2 = m.observer().boosted(&m.basis()[0], 0.5)?;
        Ok(verify_prop4(&m, &w, &u2, &[gaussian.clone()?])?.residual)
    });
    Ok(rec.finish())
}

fn cube(m: &Model, instant: Instant, center: [f64; 3], side: f64) -> minkabs::Result<Region> {
    let frame = m.frame().carried_to(&instant);
    Region::in_frame(instant, frame, vec![Box3::centered(center, side)?])
}

pub fn demo_causality(cfg: &RunConfig, timing: bool) -> Result<RunReport, CliError> {
    let m = build_model(cfg, cfg.lattice)?;
    let n = m.n();
    let side = cfg.box_side.unwrap_or(4.0 * m.spacing());
    let width = MeasureScalar::seconds(cfg.width);
    let region = centered_region(&m, side).map_err(|e| CliError::Config(e.to_string()))?;
    let mut rec = Recorder::new("demo-causality", cfg, timing);

    let last = *cfg.delta_t.last().expect("validated non-empty");
    let mut runs: Vec<(f64, f64)> = cfg.delta_t.iter().map(|dt| (*dt, 0.0)).collect();
    runs.extend(cfg.rapidities.iter().map(|chi| (last, *chi)));

    for (dt, chi) in runs {
        let name = format!("leakage dt={dt} rapidity={chi}");
        let (tolerance, bound) = if dt == 0.0 {
            (1e-10, Bound::AtMost)
        } else {
            (1e-6, Bound::AtLeast)
        };
        let mut row = None;
        rec.check(&name, n, tolerance, bound, || {
            let u2 = m.observer().boosted(&m.basis()[0], chi)?;
            let out = causality_experiment(&m, &region, MeasureScalar::seconds(dt), &u2, width)?;
            row = Some(SweepRow {
                delta_t_sec: dt,
                rapidity: chi,
                leakage: out.leakage,
                outside: out.outside,
                lattice: n,
            });
            Ok(out.leakage.abs())
        });
        if let Some(row) = row {
            rec.sweep(row);
        }
    }

    let h = m.half_extent();
    let cell = (0.25 * h).max(side.min(h / 2.0));
    let gap = 0.5 * cell;
    rec.check("commutator-cross-instant", n, 1e-4, Bound::AtLeast, || {
        let e = cube(&m, *m.instant(), [0.0; 3], cell)?;
        let later = m.instant().later(MeasureScalar::seconds(0.5 * gap))?;
        let f = cube(&m, later, [cell + gap, 0.0, 0.0], cell)?;
        commutator_witness(&m, &e, &f, cfg.iterations, cfg.seed)
    });
    rec.check("commutator-same-instant", n, 1e-12, Bound::AtMost, || {
        let e = cube(&m, *m.instant(), [0.0; 3], cell)?;
        let f = cube(&m, *m.instant(), [cell + gap, 0.0, 0.0], cell)?;
        commutator_witness(&m, &e, &f, cfg.iterations.min(5), cfg.seed)
    });
    Ok(rec.finish())
}
