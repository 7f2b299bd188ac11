use std::f64::consts::PI;

use qdcavity::dynamics::*;
use qdcavity::hilbert::DensityMatrix;
use qdcavity::trajectories::*;

fn config(n: usize, seed: u64) -> TrajectoryConfig<f64> {
    TrajectoryConfig {
        n_trajectories: n,
        master_seed: seed,
        ..TrajectoryConfig::default()
    }
}

#[test]
fn no_drive_no_jumps() {
    let params = SystemParams::<f64>::device();
    let cfg = TrajectoryConfig {
        t_span: Some((0.0, 200.0)),
        ..config(50, 1)
    };
    let recs = run_ensemble(&params, &DriveField::off(), &cfg).unwrap();
    assert!(recs.iter().all(|r| r.jumps.is_empty()));
}

#[test]
fn impulsive_pulse_gives_one_photon() {
    let params = SystemParams::<f64>::device();
    let t1 = params.radiative_lifetime();
    let drive = DriveField::single_pulse(PI, 0.01 * t1, 0.0, DriveTarget::Emitter);
    let n = 4000;
    let cfg = TrajectoryConfig {
        t_span: Some((-1.0, 10.0 * t1)),
        ..config(n, 7)
    };
    let recs = run_ensemble(&params, &drive, &cfg).unwrap();
    let both = emission_statistics(&recs, &[Channel::Emitter, Channel::Cavity]).unwrap();
    let cavity = emission_statistics(&recs, &[Channel::Cavity]).unwrap();
    let p_emit = 1.0 - (-10.0f64).exp();
    assert!(both.p(1) > 0.995, "{:?}", both.p_of_n);
    let expected = p_emit * params.cavity_branching();
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!((cavity.p(1) - expected).abs() < 4.0 * se + 2e-3, "{} vs {expected}", cavity.p(1));
}

#[test]
fn ensemble_tracks_master_equation() {
    let params = SystemParams::<f64>::device();
    let drive = DriveField::single_pulse(PI, 13.0, 0.0, DriveTarget::Emitter);
    let mut cfg = config(2000, 11);
    let (t0, t1) = cfg.resolve_span(&params, &drive);
    let times = linspace(t0, t0 + (t1 - t0) * 0.6, 60);
    cfg.sample_times = times.clone();
    let recs = run_ensemble(&params, &drive, &cfg).unwrap();
    let mc = ensemble_population(&recs, &times).unwrap();
    let me = evolve(&DensityMatrix::ground(&params.space), &params, &drive, &times, Tolerance::default()).unwrap();
    for k in 0..times.len() {
        let d = (mc.mean[k] - me.populations.exciton[k]).abs();
        assert!(d <= 3.0 * mc.std_err[k] + 1e-6, "t = {}: {d} vs se {}", times[k], mc.std_err[k]);
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let params = SystemParams::<f64>::device();
    let drive = DriveField::single_pulse(PI, 13.0, 0.0, DriveTarget::Emitter);
    let run = |jobs| {
        let cfg = TrajectoryConfig { jobs, ..config(300, 42) };
        run_ensemble(&params, &drive, &cfg).unwrap()
    };
    let a = run(1);
    assert_eq!(a, run(4));
    assert_eq!(a, run(0));
    let cfg = TrajectoryConfig { jobs: 2, ..config(300, 43) };
    assert_ne!(a, run_ensemble(&params, &drive, &cfg).unwrap());
}

#[test]
fn double_pulse_photon_numbers() {
    let params = SystemParams::<f64>::device();
    let t1 = params.radiative_lifetime();
    let n = 3000;
    let cfg = TrajectoryConfig {
        jump_channels: vec![Channel::Emitter, Channel::Cavity],
        ..config(n, 5)
    };
    let stats = double_pulse_statistics(&params, 0.01 * t1, &[0.0, t1, 5.0 * t1], &cfg).unwrap();
    let [zero, one, five] = &stats.points[..] else { panic!() };

    assert!(zero.p0 > 0.9, "{zero:?}");
    for (pt, dt) in [(one, 1.0), (five, 5.0)] {
        let p2 = p2_expected(dt);
        let se = (p2 * (1.0 - p2) / n as f64).sqrt();
        assert!((pt.p2_plus - p2).abs() < 4.0 * se + 0.02, "Δτ = {dt} T1: {} vs {p2}", pt.p2_plus);
        assert!(pt.p1 < 0.05, "{pt:?}");
    }
    let total: f64 = five.stats.p_of_n.iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

fn p2_expected(dt_over_t1: f64) -> f64 {
    qdcavity::cavityqed::p2_probability(dt_over_t1, 1.0).unwrap()
}

#[test]
fn expected_counts_follow_dprf_curve() {
    let params = SystemParams::<f64>::device();
    let dt = 30.0;
    let scan = dprf_scan(&params, 13.0, &[dt], &ScanOptions::default()).unwrap();
    let n = 3000;
    let stats = double_pulse_statistics(&params, 13.0, &[dt], &config(n, 9)).unwrap();
    let pt = &stats.points[0];
    let expected = scan.intensity[0] * scan.single_pulse;
    assert!((pt.expected() - expected).abs() < 4.0 * pt.stats.std_err, "{} vs {expected}", pt.expected());
}

#[test]
fn g2_grows_with_pulse_duration() {
    let params = SystemParams::<f64>::device();
    let pts = g2_vs_pulse_duration(&params, &[0.01, 0.2, 0.6], &config(3000, 3), AreaConvention::ExactPi).unwrap();
    assert!(pts[0].g2.value < 0.005, "{:?}", pts[0].g2);
    for w in pts.windows(2) {
        let slack = 3.0 * (w[0].g2.error.powi(2) + w[1].g2.error.powi(2)).sqrt();
        assert!(w[1].g2.value + slack >= w[0].g2.value);
    }
    assert!(pts[2].g2.value > pts[0].g2.value);
    assert!(pts.iter().all(|p| p.area == PI));
}

#[test]
fn config_is_validated() {
    let params = SystemParams::<f64>::device();
    let bad = TrajectoryConfig { n_trajectories: 0, ..config(1, 0) };
    assert!(run_ensemble(&params, &DriveField::off(), &bad).is_err());
    let bad = TrajectoryConfig {
        jump_channels: vec![],
        ..config(1, 0)
    };
    assert!(run_ensemble(&params, &DriveField::off(), &bad).is_err());
    assert!(double_pulse_statistics(&params, 1.0, &[], &config(1, 0)).is_err());
}
