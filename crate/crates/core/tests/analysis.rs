use qdcavity::analysis::synthetic::{multiplicative_noise, poisson_counts};
use qdcavity::analysis::*;
use qdcavity::cavityqed::{damped_rabi, dprf_intensity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = ((b - a) / h).round() as usize;
    (0..=n).map(|i| a + h * i as f64).collect()
}

fn gauss_pdf(x: f64, fwhm: f64) -> f64 {
    let s = fwhm / (8.0 * 2f64.ln()).sqrt();
    (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
}

fn decay(t1: f64) -> SampledCurve<f64> {
    SampledCurve::from_fn(grid(-300.0, 1000.0, 1.0), |t| if t >= 0.0 { (-t / t1).exp() } else { 0.0 }).unwrap()
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

#[test]
fn delta_becomes_the_irf() {
    let h = 1.0;
    let x = grid(-200.0, 200.0, h);
    let delta = SampledCurve::from_fn(x, |t| if t == 0.0 { 1.0 / h } else { 0.0 }).unwrap();
    let out = convolve_irf(&delta, 60.0).unwrap();
    let peak = gauss_pdf(0.0, 60.0);
    for (t, y) in out.x().iter().zip(out.y()) {
        assert!((y - gauss_pdf(*t, 60.0)).abs() < 1e-3 * peak, "t = {t}");
    }
}

#[test]
fn gaussian_composition() {
    let c = decay(22.7);
    let twice = convolve_irf(&convolve_irf(&c, 40.0).unwrap(), 40.0).unwrap();
    let once = convolve_irf(&c, 40.0 * 2f64.sqrt()).unwrap();
    let peak = once.peak().unwrap().1;
    for t in grid(-100.0, 600.0, 5.0) {
        assert!((twice.interpolate(t) - once.interpolate(t)).abs() < 1e-3 * peak, "t = {t}");
    }
}

#[test]
fn convolution_preserves_area_and_is_linear() {
    let a = decay(22.7);
    let b = SampledCurve::from_fn(a.x().to_vec(), |t| gauss_pdf(t - 100.0, 30.0)).unwrap();
    for c in [&a, &b] {
        let out = convolve_irf(c, 60.0).unwrap();
        assert!((out.integral() / c.integral() - 1.0).abs() < 1e-6);
    }
    let sum = convolve_irf(&a.add(&b).unwrap(), 60.0).unwrap();
    let parts = convolve_irf(&a, 60.0).unwrap().add(&convolve_irf(&b, 60.0).unwrap()).unwrap();
    for (u, v) in sum.y().iter().zip(parts.y()) {
        assert!((u - v).abs() < 1e-12);
    }
}

#[test]
fn coarse_grid_is_rejected() {
    let c = SampledCurve::from_fn(grid(0.0, 100.0, 10.0), |t| (-t / 20.0).exp()).unwrap();
    assert!(matches!(convolve_irf(&c, 60.0), Err(AnalysisError::Resolution { .. })));
    assert!(convolve_irf(&c, 0.0).is_err());
}

#[test]
fn non_uniform_grid_is_resampled() {
    let mut x = grid(-200.0, 0.0, 2.0);
    x.extend(grid(0.5, 400.0, 0.5));
    let c = SampledCurve::from_fn(x, |t| if t >= 0.0 { (-t / 22.7).exp() } else { 0.0 }).unwrap();
    let out = convolve_irf(&c, 60.0).unwrap();
    assert!(out.uniform_step(1e-9).is_some());
    assert!((out.integral() / c.integral() - 1.0).abs() < 1e-3);
}

#[test]
fn naive_fit_overestimates_lifetime() {
    let conv = convolve_irf(&decay(22.7), 60.0).unwrap();
    let fit = fit_naive_decay(&conv, TailWindow::default()).unwrap();
    assert!((fit.tau / 46.0 - 1.0).abs() < 0.15, "{}", fit.tau);
    assert!(fit.tau > 22.7);
    // without the IRF the same fit returns the lifetime itself
    let bare = fit_naive_decay(&decay(22.7), TailWindow::default()).unwrap();
    assert!((bare.tau / 22.7 - 1.0).abs() < 1e-6, "{}", bare.tau);
}

#[test]
fn recovery_self_fit_and_noise() {
    let x = grid(40.0, 180.0, 7.0);
    let clean = SampledCurve::from_fn(x, |t| dprf_intensity(t, 22.7).unwrap()).unwrap();
    let fit = fit_exponential_recovery(&clean).unwrap();
    assert!((fit.t1 / 22.7 - 1.0).abs() < 1e-6);
    assert!((fit.amplitude / 2.0 - 1.0).abs() < 1e-6);

    let x = grid(2.0, 150.0, 4.0);
    let clean = SampledCurve::from_fn(x, |t| dprf_intensity(t, 22.7).unwrap()).unwrap();
    let noisy = multiplicative_noise(&clean, 0.05, &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
    let fit = fit_exponential_recovery(&noisy).unwrap();
    assert!((fit.t1 - 22.7).abs() < 3.0 * fit.t1_err, "{} ± {}", fit.t1, fit.t1_err);
    assert!(fit.t1_err > 0.1 && fit.t1_err < 2.0, "{}", fit.t1_err);
}

#[test]
fn error_bars_scale_with_realisations() {
    let x = grid(2.0, 150.0, 4.0);
    let clean = SampledCurve::from_fn(x, |t| dprf_intensity(t, 22.7).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut fits = Vec::new();
    let mut reported = Vec::new();
    for _ in 0..400 {
        let noisy = multiplicative_noise(&clean, 0.03, &mut rng).unwrap();
        let f = fit_exponential_recovery(&noisy).unwrap();
        fits.push(f.t1);
        reported.push(f.t1_err);
    }
    let (_, sd100) = mean_sd(&fits[..100]);
    let (m400, sd400) = mean_sd(&fits);
    let se_ratio = (sd400 / 400f64.sqrt()) / (sd100 / 100f64.sqrt());
    assert!((se_ratio - 0.5).abs() < 0.1, "{se_ratio}");
    assert!((m400 - 22.7).abs() < 3.0 * sd400 / 20.0);
    // reported 1σ matches the realised scatter
    let (rep, _) = mean_sd(&reported);
    assert!((rep / sd400 - 1.0).abs() < 0.25, "{rep} vs {sd400}");
}

#[test]
fn recovery_rejects_bad_input() {
    let c = SampledCurve::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap();
    assert!(fit_exponential_recovery(&c).is_err());
    let c = SampledCurve::new(grid(0.0, 5.0, 1.0), vec![0.0, 1.0, 1.5, 1.7, 1.8, 1.9]).unwrap();
    assert!(fit_exponential_recovery(&c).is_err());
}

fn rrs_grid() -> Vec<f64> {
    // Ω(25 nW) = 2π·2 rad/ns with Ω ∝ √P
    let w25 = 2.0 * std::f64::consts::PI * 2e-3;
    [10.0, 25.0, 50.0, 100.0, 200.0, 500.0, 1000.0]
        .iter()
        .map(|p: &f64| w25 * (p / 25.0).sqrt())
        .collect()
}

#[test]
fn rrs_self_fit_and_noise() {
    let clean = SampledCurve::from_fn(rrs_grid(), |w| rrs_model(w, 24.6, 49.2)).unwrap();
    let fit = fit_rrs_curve(&clean).unwrap();
    assert!((fit.t1 / 24.6 - 1.0).abs() < 1e-6);
    assert!((fit.t2 / 49.2 - 1.0).abs() < 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let noisy = multiplicative_noise(&clean, 0.02, &mut rng).unwrap();
        let f = fit_rrs_curve(&noisy).unwrap();
        assert!((f.t1 - 24.6).abs() < 1.6, "{}", f.t1);
        assert!((f.t2 - 49.2).abs() < 5.4, "{}", f.t2);
    }
}

#[test]
fn rrs_plateau_is_bounded() {
    assert_eq!(rrs_model(0.0, 20.0, 30.0), 0.75);
    for w in rrs_grid() {
        assert!(rrs_model(w, 20.0, 30.0) < 0.75);
    }
    let flat = SampledCurve::new(rrs_grid(), vec![0.5; 7]).unwrap();
    assert!(matches!(fit_rrs_curve(&flat), Err(AnalysisError::IllConditioned(_))));
}

fn lorentz_pdf(x: f64, fwhm: f64) -> f64 {
    let h = fwhm / 2.0;
    h / (std::f64::consts::PI * (x * x + h * h))
}

fn fp_spectrum(rrs: f64, se: f64, irf: f64, gamma: f64) -> SampledCurve<f64> {
    SampledCurve::from_fn(grid(-150.0, 150.0, 0.1), |x| {
        rrs * gauss_pdf(x - 2.0, irf) + se * lorentz_pdf(x - 2.0, gamma)
    })
    .unwrap()
}

#[test]
fn spectrum_decomposition() {
    let pure = decompose_fp_spectrum(&fp_spectrum(1.0, 0.0, 1.5, 20.0), 1.5, FpOptions::default()).unwrap();
    assert!((pure.rrs_fraction() - 1.0).abs() < 1e-6);

    let mix = decompose_fp_spectrum(&fp_spectrum(0.87, 0.13, 1.5, 20.0), 1.5, FpOptions::default()).unwrap();
    assert!((mix.rrs_fraction() - 0.87).abs() < 0.01, "{}", mix.rrs_fraction());
    assert!(!mix.linewidth_constrained);
    assert!((mix.se_linewidth / 20.0 - 1.0).abs() < 1e-3);
    assert!((mix.centre - 2.0).abs() < 1e-6);
}

#[test]
fn weak_incoherent_part_uses_given_linewidth() {
    let opts = FpOptions {
        se_linewidth_hint: Some(20.0),
        ..FpOptions::default()
    };
    let d = decompose_fp_spectrum(&fp_spectrum(0.97, 0.03, 1.5, 20.0), 1.5, opts).unwrap();
    assert!(d.linewidth_constrained);
    assert_eq!(d.se_linewidth, 20.0);
    assert!((d.rrs_fraction() - 0.97).abs() < 0.01);
}

#[test]
fn spectrum_too_narrow_for_linewidth() {
    let s = SampledCurve::from_fn(grid(-10.0, 10.0, 0.1), |x| gauss_pdf(x, 1.5) + 0.2 * lorentz_pdf(x, 20.0)).unwrap();
    let opts = FpOptions {
        se_linewidth_hint: Some(20.0),
        ..FpOptions::default()
    };
    assert!(decompose_fp_spectrum(&s, 1.5, opts).is_err());
}

const SPACING: f64 = 13_123.0;
const IRF: f64 = 860.0;

/// Five peaks of two-sided exponential shape seen through the detector,
/// binned at 50 ps.
fn hom_histogram(areas: [f64; 5], t1: f64) -> SampledCurve<f64> {
    let fine = SampledCurve::from_fn(grid(-3.0 * SPACING, 3.0 * SPACING, 2.0), |t| {
        (0..5)
            .map(|k| {
                let d = t - (k as f64 - 2.0) * SPACING;
                areas[k] * (-d.abs() / t1).exp() / (2.0 * t1)
            })
            .sum()
    })
    .unwrap();
    let seen = convolve_irf(&fine, IRF).unwrap();
    SampledCurve::from_fn(grid(-2.6 * SPACING, 2.6 * SPACING, 50.0), |t| seen.interpolate(t)).unwrap()
}

#[test]
fn hom_peaks_recovered() {
    let areas = [1000.0, 4000.0, 500.0, 4000.0, 1000.0];
    let fit = fit_hom_peaks(&hom_histogram(areas, 22.7), IRF, SPACING).unwrap();
    for k in 0..5 {
        assert!((fit.areas[k] / areas[k] - 1.0).abs() < 0.02, "peak {}: {}", k + 1, fit.areas[k]);
    }
    // widths fixed at the IRF: doubling the lifetime barely matters
    let slow = fit_hom_peaks(&hom_histogram(areas, 45.4), IRF, SPACING).unwrap();
    for k in 0..5 {
        assert!((slow.areas[k] / fit.areas[k] - 1.0).abs() < 0.01);
    }
}

#[test]
fn empty_central_peak() {
    let areas = [1000.0, 4000.0, 0.0, 4000.0, 1000.0];
    // 50 ps bins: counts per bin, back to densities for the fit
    let density = hom_histogram(areas, 22.7);
    let per_bin = SampledCurve::new(density.x().to_vec(), density.y().iter().map(|v| v * 50.0).collect()).unwrap();
    let n = poisson_counts(&per_bin, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let scale = |v: &[f64]| v.iter().map(|c| c / 50.0).collect::<Vec<_>>();
    let counts = SampledCurve::with_errors(n.x().to_vec(), scale(n.y()), scale(n.y_err().unwrap())).unwrap();
    let fit = fit_hom_peaks(&counts, IRF, SPACING).unwrap();
    assert!(fit.a(3).abs() < 3.0 * fit.err(3) + 1.0, "{} ± {}", fit.a(3), fit.err(3));
    assert!((fit.a(2) / 4000.0 - 1.0).abs() < 0.05);
}

#[test]
fn overlapping_peaks_flagged() {
    let h = hom_histogram([1.0; 5], 22.7);
    assert!(matches!(fit_hom_peaks(&h, IRF, 1.2 * IRF), Err(AnalysisError::OverlappingPeaks { .. })));
}

#[test]
fn santori_and_somaschi_agree() {
    let mut worst = 0.0f64;
    for g2 in [0.0f64, 0.05, 0.1, 0.134, 0.2] {
        for eps in [0.0, 0.032, 0.1] {
            for r in [0.45, 0.5, 0.544, 0.55] {
                let p = HomCorrectionParams::new(g2, eps, r, 1.0 - r).unwrap();
                for v in [0.3, 0.8, 1.0] {
                    let co = hom_peak_model(&p, v, 1e4).unwrap();
                    let cross = hom_peak_model(&p, 0.0, 1e4).unwrap();
                    let s = corrected_visibility_santori((co.a(3), 0.0), (cross.a(3), 0.0), &p).unwrap();
                    let m = corrected_visibility_somaschi(&co, &p).unwrap();
                    assert!((s.value - v).abs() < 1e-12);
                    worst = worst.max((s.value - m.value).abs());
                }
            }
        }
    }
    assert!(worst < 0.01, "{worst}");
}

#[test]
fn visibility_corrections_on_device_parameters() {
    let p = HomCorrectionParams::<f64>::device_13ps();
    // ideal photons through this interferometer: 2(1−ε)²R²T²/((R³T+RT³)(1+2g²))
    let (r, t) = (0.544f64, 0.456);
    let ideal = 2.0 * 0.968f64.powi(2) * (r * t).powi(2) / ((r.powi(3) * t + r * t.powi(3)) * 1.268);
    assert!((ideal_raw_visibility(&p).unwrap() - ideal).abs() < 1e-12);
    let raw = raw_visibility((100.0f64, 3.0), (39.9, 3.0)).unwrap();
    assert!((raw.value - 0.601).abs() < 1e-12);
    let v = santori_from_raw(raw, &p).unwrap();
    assert!((v.value - 0.601 / ideal).abs() < 1e-12);
    assert!(!v.saturated);

    let high = santori_from_raw(Visibility { value: 0.894, error: 0.03 }, &HomCorrectionParams::device_2p4ps()).unwrap();
    assert_eq!(high.saturated, high.value > 1.0);

    let ideal_p = HomCorrectionParams::new(0.0f64, 0.0, 0.5, 0.5).unwrap();
    let areas = HomPeakAreas {
        areas: [1.0, 1.0, 0.0, 1.0, 1.0],
        errors: [0.0; 5],
        centre: 0.0,
    };
    assert!((corrected_visibility_somaschi(&areas, &ideal_p).unwrap().value - 1.0).abs() < 1e-15);
    assert!(HomCorrectionParams::new(0.1, 0.0, 0.6, 0.5).is_err());
}

#[test]
fn mollow_power_calibration() {
    let (g1, g2) = (1.0 / 22.7, 1.0 / 40.0);
    let slope = 2.4e-5f64;
    let powers = [5.0f64, 25.0, 100.0, 400.0, 1000.0];
    let split: Vec<f64> = powers
        .iter()
        .map(|p| damped_rabi((slope * p).sqrt(), g1, g2).unwrap().value().unwrap_or(0.0))
        .collect();
    let cal = mollow_calibration(&powers, &split, g1, g2).unwrap();
    assert!((cal.slope / slope - 1.0).abs() < 0.01);
    assert_eq!(cal.omega_squared(200.0), 2.0 * cal.omega_squared(100.0));
    let below = vec![0.0; 5];
    assert!(mollow_calibration(&powers, &below, g1, g2).is_err());
}
