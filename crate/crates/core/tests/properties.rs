//! Randomised invariants of the master equation and the trajectory solver.

use std::f64::consts::PI;

use proptest::prelude::*;
use qdcavity::dynamics::*;
use qdcavity::hilbert::DensityMatrix;
use qdcavity::trajectories::*;

#[derive(Clone, Debug)]
struct Draw {
    params: SystemParams<f64>,
    drive: DriveField<f64>,
    fwhm: f64,
}

fn draws() -> impl Strategy<Value = Draw> {
    (
        (0.0..0.6f64, 0.05..3.0f64, 0.001..0.1f64),
        (-0.5..0.5f64, -1.0..1.0f64),
        (proptest::option::of(2.0..200.0f64), proptest::option::of(5.0..500.0f64)),
        1usize..=4,
        (0.0..3.0 * PI, 1.0..20.0f64, any::<bool>()),
    )
        .prop_map(|((g, kappa, gamma), (dal, dcl), (t1f, t2s), cutoff, (area, fwhm, on_cavity))| {
            let mut params = SystemParams::device();
            params.g = g;
            params.kappa = kappa;
            params.gamma1_prime = gamma;
            params.delta_al = dal;
            params.delta_cl = dcl;
            params.t2_star = t2s;
            if let Some(t) = t1f {
                params = params.with_relaxation(t);
            }
            let params = params.with_fock_cutoff(cutoff).unwrap();
            // cavity driving needs g > 0
            let target = if on_cavity && g > 0.05 { DriveTarget::Cavity } else { DriveTarget::Emitter };
            let drive = DriveField::single_pulse(area, fwhm, 0.0, target);
            Draw { params, drive, fwhm }
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn density_matrix_stays_physical(d in draws()) {
        let times = linspace(-3.0 * d.fwhm, 3.0 * d.fwhm + 60.0, 30);
        let rho0 = DensityMatrix::ground(&d.params.space);
        let r = evolve(&rho0, &d.params, &d.drive, &times, Tolerance::default()).unwrap();
        prop_assert!(r.max_trace_drift < 1e-6, "drift {}", r.max_trace_drift);
        for (k, rho) in r.states.iter().enumerate() {
            prop_assert!((rho.trace() - 1.0).abs() < 1e-6);
            prop_assert!(rho.as_operator().is_hermitian(1e-9));
            prop_assert!(rho.min_eigenvalue() > -1e-6, "λ_min {} at t = {}", rho.min_eigenvalue(), times[k]);
            let p = &r.populations;
            let upper = p.upper.as_ref().map_or(0.0, |u| u[k]);
            for v in [p.ground[k], p.exciton[k], upper] {
                prop_assert!((-1e-6..=1.0 + 1e-6).contains(&v));
            }
            prop_assert!(p.photons[k] >= -1e-6);
        }
        for w in r.emitted.cavity.windows(2).chain(r.emitted.emitter.windows(2)) {
            prop_assert!(w[1] >= w[0] - 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    #[test]
    fn trajectories_stay_normalised(d in draws(), seed in any::<u64>()) {
        let cfg = TrajectoryConfig {
            n_trajectories: 4,
            master_seed: seed,
            jump_channels: vec![Channel::Emitter, Channel::Cavity, Channel::Relaxation, Channel::Dephasing],
            ..TrajectoryConfig::default()
        };
        let (t0, t1) = cfg.resolve_span(&d.params, &d.drive);
        let cfg = TrajectoryConfig { sample_times: linspace(t0, t1, 20), ..cfg };
        let a = run_ensemble(&d.params, &d.drive, &cfg).unwrap();
        for rec in &a {
            prop_assert!(rec.exciton.iter().all(|p| (-1e-9..=1.0 + 1e-9).contains(p)));
            prop_assert!(rec.jumps.windows(2).all(|w| w[0].time <= w[1].time));
            prop_assert!(rec.jumps.iter().all(|j| j.time >= t0 && j.time <= t1));
        }
        prop_assert_eq!(&a, &run_ensemble(&d.params, &d.drive, &cfg).unwrap());
    }
}
