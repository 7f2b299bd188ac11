use qdcavity::cavityqed::*;
use qdcavity::units::HBAR_UEV_PS;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn device_purcell_and_lifetime() {
    let design = CavityDesign::<f64>::device();
    let emitter = EmitterConstants::<f64>::device();
    assert!(rel(ideal_purcell(540.0, 0.63).unwrap(), 65.1) < 0.005);
    let fp = purcell_factor(&design, 0.0).unwrap();
    assert!((fp - 43.0).abs() < 2.0, "{fp}");
    let t1 = t1_of_detuning(&design, &emitter, 0.0).unwrap();
    assert!((t1 - 22.7).abs() < 0.7, "{t1}");
}

#[test]
fn purcell_consistency_chain() {
    let design = CavityDesign::<f64>::device();
    let emitter = EmitterConstants::<f64>::device();
    let ideal = ideal_purcell(design.q, design.v_m).unwrap();
    let fp = purcell_factor(&design, 0.0).unwrap();
    assert!(rel(ideal * design.overlap_field.powi(2), fp) < 1e-14);
    let t1 = t1_of_detuning(&design, &emitter, 0.0).unwrap();
    assert!(rel(emitter.t1_prime / t1, fp) < 1e-14);
}

#[test]
fn lifetime_stays_short_across_tuning_window() {
    let design = CavityDesign::<f64>::device();
    let emitter = EmitterConstants::<f64>::device();
    for i in 0..=140 {
        let d = -700.0 + 10.0 * i as f64;
        let t1 = t1_of_detuning(&design, &emitter, d).unwrap();
        assert!(t1 <= 30.0, "Δ = {d} μeV: T1 = {t1}");
    }
    let half = design.linewidth() / 2.0;
    let f0 = purcell_factor(&design, 0.0).unwrap();
    assert!(rel(purcell_factor(&design, half).unwrap(), f0 / 2.0) < 1e-12);
}

#[test]
fn dipole_and_coupling_constants() {
    let e = EmitterConstants::<f64>::device();
    let mu = dipole_moment(e.gamma1_prime(), 1.354, 3.4).unwrap();
    assert!(rel(mu, 27.2) < 0.03, "{mu}");
    let g_max = coupling_strength(1.354, mu, 1.0, 3.4, 0.63).unwrap();
    let g = coupling_strength(1.354, mu, 0.81, 3.4, 0.63).unwrap();
    assert!(rel(g_max, 166.0) < 0.03, "{g_max}");
    assert!(rel(g, 135.0) < 0.03, "{g}");
    assert!(rel(g / g_max, 0.81) < 1e-12);
}

#[test]
fn cooperativity_form_matches_ideal_purcell() {
    let design = CavityDesign::<f64>::device();
    let e = EmitterConstants::<f64>::device();
    let mu = dipole_moment(e.gamma1_prime(), design.photon_energy, 3.4).unwrap();
    let g = coupling_strength(design.photon_energy, mu, 1.0, 3.4, design.v_m).unwrap() / HBAR_UEV_PS;
    let kappa = design.linewidth_from_q() / HBAR_UEV_PS / 2.0;
    let fp = 2.0 * g * g / (kappa * e.gamma1_prime());
    let ideal = ideal_purcell(design.q, design.v_m).unwrap();
    assert!(rel(fp, ideal) < 0.02, "{fp} vs {ideal}");
}

#[test]
fn device_is_weakly_coupled() {
    let r = strong_coupling_check(135.0, 2510.0, 0.68, 1.354).unwrap();
    assert_eq!(r.regime, CouplingRegime::Weak);
    assert!(rel(r.threshold_q, 2500.0) < 0.05, "{}", r.threshold_q);
    // at the threshold Q the inequality becomes an equality
    let lw = 1.354e6 / r.threshold_q;
    let at = strong_coupling_check(135.0, lw, 0.68, 1.354).unwrap();
    assert_eq!(at.regime, CouplingRegime::Boundary);
}

#[test]
fn rrs_fraction_properties() {
    let (t1, t2) = (24.6, 49.2);
    let f = rrs_fraction(t1, t2, 2.0 * std::f64::consts::PI * 2e-3).unwrap();
    assert!((f - 0.84).abs() < 0.01, "{f}");
    for &t2 in &[10.0, 30.0, 49.2] {
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let v = rrs_fraction(t1, t2, 0.002 * i as f64).unwrap();
            assert!(v <= last && v <= t2 / (2.0 * t1));
            last = v;
        }
    }
    assert!(rrs_fraction(t1, 2.0 * t1 * (1.0 + 1e-10), 0.0).is_ok());
    assert!(rrs_fraction(t1, 2.0 * t1 * 1.001, 0.0).is_err());
    assert_eq!(rrs_fraction(20.0, 30.0, 0.0).unwrap(), 0.75);
}

#[test]
fn damped_rabi_threshold() {
    let (g1, g2) = (0.05f64, 0.02);
    let thr = (g1 - g2) / 2.0;
    assert_eq!(damped_rabi(0.3, 0.04, 0.04).unwrap().value(), Some(0.3));
    assert!(damped_rabi(thr, g1, g2).unwrap().value().unwrap().abs() < 1e-9);
    assert!(damped_rabi(0.99 * thr, g1, g2).unwrap().value().is_none());
    assert!(damped_rabi(1.01 * thr, g1, g2).unwrap().value().is_some());
    // Ω_d² is linear in P with offset −(γ₁−γ₂)²/4
    let sq: Vec<f64> = [1.0, 2.0, 3.0]
        .iter()
        .map(|p: &f64| damped_rabi((0.01 * p).sqrt(), g1, g2).unwrap().squared())
        .collect();
    assert!((sq[1] - sq[0] - (sq[2] - sq[1])).abs() < 1e-15);
    assert!((2.0 * sq[0] - sq[1] + thr * thr).abs() < 1e-15);
}

#[test]
fn double_pulse_closed_forms() {
    assert_eq!(dprf_intensity(0.0, 22.7).unwrap(), 0.0);
    assert_eq!(dprf_intensity(f64::INFINITY, 22.7).unwrap(), 2.0);
    assert!((dprf_intensity(22.7f64, 22.7).unwrap() - 1.264).abs() < 1e-3);
    assert!((p2_probability(5.0f64 * 22.7, 22.7).unwrap() - 0.9933).abs() < 1e-4);
    assert!(dprf_intensity(-1.0, 22.7).is_err());
}

#[test]
fn efficiency_chain() {
    let e = coupling_efficiencies(540.0f64, 1109.0, 4.0, 43.0).unwrap();
    assert!((e.cavity_waveguides_total - 0.51).abs() < 0.01);
    assert!((e.per_waveguide.0 - 0.41).abs() < 0.01);
    assert!((e.per_waveguide.1 - 0.10).abs() < 0.01);
    assert!((e.beta - 0.98).abs() < 0.01);
    assert!((e.qd_waveguide - 0.40).abs() < 0.01);
}

#[test]
fn count_rates() {
    let b = BrightnessBudget::<f64>::device();
    let r = count_rate_budget(&b).unwrap();
    assert!(rel(r, 4.1e6) < 0.05, "{r}");
    let fast = BrightnessBudget { rep_rate: 10e9, ..b };
    assert!(rel(count_rate_budget(&fast).unwrap(), 540e6) < 0.05);
    // linear in the repetition rate, commutative in the efficiencies
    assert!(rel(count_rate_budget(&fast).unwrap() / r, 10e9 / 76.2e6) < 1e-12);
    let swapped = BrightnessBudget {
        eta_qd_waveguide: b.detector_efficiency,
        detector_efficiency: b.eta_qd_waveguide,
        ..b
    };
    assert!(rel(count_rate_budget(&swapped).unwrap(), r) < 1e-14);
}
