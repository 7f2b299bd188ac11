//! Hong–Ou–Mandel peak fitting and visibility corrections.

use super::lm::{levenberg_marquardt, solve, FitOptions};
use super::{AnalysisError, SampledCurve};
use crate::scalar::Real;

/// Imperfections of the source and interferometer entering the
/// correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomCorrectionParams<T> {
    /// g²(0) from an HBT measurement.
    pub g2: T,
    /// 1 − fringe contrast.
    pub epsilon: T,
    pub r: T,
    pub t: T,
}

impl<T: Real> HomCorrectionParams<T> {
    pub fn new(g2: T, epsilon: T, r: T, t: T) -> Result<Self, AnalysisError> {
        let p = Self { g2, epsilon, r, t };
        p.validate()?;
        Ok(p)
    }

    /// Interferometer of the measured device with the 13 ps source purity.
    pub fn device_13ps() -> Self {
        Self::device_with_g2(T::lit(0.134))
    }

    /// Same interferometer, 2.4 ps pulses.
    pub fn device_2p4ps() -> Self {
        Self::device_with_g2(T::lit(0.026))
    }

    fn device_with_g2(g2: T) -> Self {
        Self {
            g2,
            epsilon: T::lit(0.032),
            r: T::lit(0.544),
            t: T::lit(0.456),
        }
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |name, reason: &str| {
            Err(AnalysisError::InvalidInput {
                name,
                reason: reason.into(),
            })
        };
        if !(self.g2 >= T::zero()) || !self.g2.is_finite() {
            return bad("g2", "must be finite and non-negative");
        }
        if !(self.epsilon >= T::zero() && self.epsilon < T::one()) {
            return bad("epsilon", "must lie in [0, 1)");
        }
        if !(self.r > T::zero() && self.t > T::zero()) {
            return bad("r/t", "splitter coefficients must be positive");
        }
        if (self.r + self.t - T::one()).abs() > T::lit(1e-3) {
            return bad("r/t", "R + T must equal 1 within 1e-3");
        }
        Ok(())
    }

    /// (1 − ε)².
    fn contrast2(&self) -> T {
        (T::one() - self.epsilon).powi(2)
    }

    fn products(&self) -> (T, T) {
        (self.r * self.t, self.r * self.r + self.t * self.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomPeakAreas<T> {
    /// A₁..A₅ in order of delay; A₃ is the zero-delay peak.
    pub areas: [T; 5],
    pub errors: [T; 5],
    /// Fitted delay of A₃.
    pub centre: T,
}

impl<T: Real> HomPeakAreas<T> {
    /// Aₙ, n = 1..=5.
    pub fn a(&self, n: usize) -> T {
        self.areas[n - 1]
    }

    pub fn err(&self, n: usize) -> T {
        self.errors[n - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Visibility<T> {
    pub value: T,
    pub error: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrectedVisibility<T> {
    pub value: T,
    /// Propagated from the measured areas only; correction parameters are
    /// treated as exact.
    pub error: T,
    /// Set when `value` exceeds one. The value itself is not clipped.
    pub saturated: bool,
}

impl<T: Real> CorrectedVisibility<T> {
    fn new(value: T, error: T) -> Self {
        Self {
            value,
            error,
            saturated: value > T::one(),
        }
    }
}

/// (A₃⊥ − A₃∥)/A₃⊥ from `(area, 1σ)` pairs.
pub fn raw_visibility<T: Real>(a3_cross: (T, T), a3_co: (T, T)) -> Result<Visibility<T>, AnalysisError> {
    let (x, dx) = a3_cross;
    let (c, dc) = a3_co;
    if !(x > T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "a3_cross",
            reason: format!("must be positive, got {x}"),
        });
    }
    let value = (x - c) / x;
    let error = ((dc / x).powi(2) + (c * dx / (x * x)).powi(2)).sqrt();
    Ok(Visibility { value, error })
}

/// Raw visibility a perfectly indistinguishable source would show with
/// these imperfections: 2(1−ε)²R²T² / ((R³T + RT³)(1 + 2g²)).
pub fn ideal_raw_visibility<T: Real>(params: &HomCorrectionParams<T>) -> Result<T, AnalysisError> {
    params.validate()?;
    let (p, s) = params.products();
    let v = T::lit(2.0) * params.contrast2() * p * p / (p * s * (T::one() + T::lit(2.0) * params.g2));
    if !(v > T::zero()) {
        return Err(AnalysisError::Unusable(format!("ideal raw visibility {v} is not positive")));
    }
    Ok(v)
}

/// Normalises a measured raw visibility by [`ideal_raw_visibility`].
pub fn santori_from_raw<T: Real>(
    raw: Visibility<T>,
    params: &HomCorrectionParams<T>,
) -> Result<CorrectedVisibility<T>, AnalysisError> {
    let ideal = ideal_raw_visibility(params)?;
    Ok(CorrectedVisibility::new(raw.value / ideal, raw.error / ideal))
}

/// Raw visibility from the co- and cross-polarised central peaks,
/// corrected with [`santori_from_raw`].
pub fn corrected_visibility_santori<T: Real>(
    a3_co: (T, T),
    a3_cross: (T, T),
    params: &HomCorrectionParams<T>,
) -> Result<CorrectedVisibility<T>, AnalysisError> {
    santori_from_raw(raw_visibility(a3_cross, a3_co)?, params)
}

/// Single-histogram correction comparing A₃∥ with A₂∥ + A₄∥:
///
/// V = [2g² + S/(2P) − x(2 + g²S/P)] / (1−ε)², S = R² + T², P = RT,
/// x = A₃/(A₂ + A₄).
pub fn corrected_visibility_somaschi<T: Real>(
    areas: &HomPeakAreas<T>,
    params: &HomCorrectionParams<T>,
) -> Result<CorrectedVisibility<T>, AnalysisError> {
    params.validate()?;
    let side = areas.a(2) + areas.a(4);
    if !(side > T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "areas",
            reason: "A2 + A4 must be positive".into(),
        });
    }
    let (p, s) = params.products();
    let g = params.g2;
    let c = params.contrast2();
    if !(c > T::zero()) {
        return Err(AnalysisError::Unusable("zero fringe contrast".into()));
    }
    let x = areas.a(3) / side;
    let k = T::lit(2.0) + g * s / p;
    let value = (T::lit(2.0) * g + s / (T::lit(2.0) * p) - x * k) / c;
    let dx2 = (areas.err(3) / side).powi(2)
        + (areas.a(3) / (side * side)).powi(2) * (areas.err(2).powi(2) + areas.err(4).powi(2));
    Ok(CorrectedVisibility::new(value, dx2.sqrt() * k / c))
}

/// Co-polarised peak areas implied by the central-peak model
/// A₃ ∝ (R³T + RT³)(1 + 2g²) − 2(1−ε)²R²T²V, with side peaks normalised so
/// that A₂ + A₄ = 4R²T² + 2g²RT(R² + T²). Outer peaks equal the side peaks.
///
/// This normalisation makes the single-histogram correction return
/// `v + g²(2 − S/P)/(1−ε)²`, i.e. exactly `v` for a balanced splitter.
pub fn hom_peak_model<T: Real>(
    params: &HomCorrectionParams<T>,
    v: T,
    scale: T,
) -> Result<HomPeakAreas<T>, AnalysisError> {
    params.validate()?;
    let (p, s) = params.products();
    let g = params.g2;
    let a3 = p * s * (T::one() + T::lit(2.0) * g) - T::lit(2.0) * params.contrast2() * p * p * v;
    if a3 < T::zero() {
        return Err(AnalysisError::NegativeArea(format!("central peak {a3} for V = {v}")));
    }
    let side = (T::lit(4.0) * p * p + T::lit(2.0) * g * p * s) * T::lit(0.5);
    let areas = [side, side, a3, side, side].map(|a| a * scale);
    Ok(HomPeakAreas {
        areas,
        errors: [T::zero(); 5],
        centre: T::zero(),
    })
}

fn unit_gaussian<T: Real>(x: T, fwhm: T) -> T {
    let s = fwhm / (T::lit(8.0) * T::LN_2()).sqrt();
    (-(x * x) / (T::lit(2.0) * s * s)).exp() / (s * (T::lit(2.0) * T::PI()).sqrt())
}

/// Five equally spaced Gaussians of the detector width, free areas and a
/// common delay offset.
///
/// The offset starts from the histogram centroid and the areas from a
/// linear least-squares solve at that offset.
pub fn fit_hom_peaks<T: Real>(
    histogram: &SampledCurve<T>,
    irf_fwhm: T,
    peak_spacing: T,
) -> Result<HomPeakAreas<T>, AnalysisError> {
    if !(irf_fwhm > T::zero() && peak_spacing > T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "irf_fwhm/peak_spacing",
            reason: "must be positive".into(),
        });
    }
    if peak_spacing < T::lit(1.5) * irf_fwhm {
        return Err(AnalysisError::OverlappingPeaks {
            spacing: peak_spacing.as_f64(),
            fwhm: irf_fwhm.as_f64(),
        });
    }
    let (x, y) = (histogram.x(), histogram.y());
    if x.len() < 12 {
        return Err(AnalysisError::InvalidCurve("histogram needs at least 12 bins".into()));
    }
    let offset = |k: usize| T::from_usize_lossy(k) - T::lit(2.0);
    let model = |t: T, p: &[T]| {
        (0..5)
            .map(|k| p[k] * unit_gaussian(t - p[5] - offset(k) * peak_spacing, irf_fwhm))
            .sum::<T>()
    };
    let mass: T = y.iter().copied().sum();
    let centre0 = if mass > T::zero() {
        x.iter().zip(y).map(|(a, b)| *a * *b).sum::<T>() / mass
    } else {
        (x[0] + x[x.len() - 1]) * T::lit(0.5)
    };
    // linear solve for the areas at the starting offset
    let basis = |t: T, k: usize| unit_gaussian(t - centre0 - offset(k) * peak_spacing, irf_fwhm);
    let mut a = vec![T::zero(); 25];
    let mut b = vec![T::zero(); 5];
    for (&t, &v) in x.iter().zip(y) {
        let f: Vec<T> = (0..5).map(|k| basis(t, k)).collect();
        for i in 0..5 {
            b[i] = b[i] + f[i] * v;
            for j in 0..5 {
                a[i * 5 + j] = a[i * 5 + j] + f[i] * f[j];
            }
        }
    }
    let mut p0 = solve(a, b, 5).ok_or_else(|| {
        AnalysisError::IllConditioned("peak positions fall outside the histogram".into())
    })?;
    p0.push(centre0);
    let fit = levenberg_marquardt(&model, x, y, histogram.y_err(), &p0, &FitOptions::default())?;
    let mut areas = [T::zero(); 5];
    let mut errors = [T::zero(); 5];
    areas.copy_from_slice(&fit.params[..5]);
    errors.copy_from_slice(&fit.errors[..5]);
    Ok(HomPeakAreas {
        areas,
        errors,
        centre: fit.params[5],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal() -> HomCorrectionParams<f64> {
        HomCorrectionParams::new(0.0, 0.0, 0.5, 0.5).unwrap()
    }

    #[test]
    fn raw_examples() {
        assert!((raw_visibility((100.0f64, 0.0), (40.0, 0.0)).unwrap().value - 0.6).abs() < 1e-15);
        assert_eq!(raw_visibility((100.0f64, 0.0), (100.0, 0.0)).unwrap().value, 0.0);
        assert!(raw_visibility((0.0f64, 0.0), (1.0, 0.0)).is_err());
    }

    #[test]
    fn ideal_apparatus_leaves_raw_unchanged() {
        let v = santori_from_raw(Visibility { value: 0.7, error: 0.0 }, &ideal()).unwrap();
        assert!((v.value - 0.7).abs() < 1e-15);
        let areas = HomPeakAreas {
            areas: [1.0, 1.0, 0.0, 1.0, 1.0],
            errors: [0.0; 5],
            centre: 0.0,
        };
        assert!((corrected_visibility_somaschi(&areas, &ideal()).unwrap().value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn saturation_is_flagged_not_clipped() {
        let v = santori_from_raw(Visibility { value: 1.1, error: 0.0 }, &ideal()).unwrap();
        assert!(v.saturated && v.value > 1.0);
    }

    #[test]
    fn params_are_validated() {
        assert!(HomCorrectionParams::new(0.0, 0.0, 0.6, 0.6).is_err());
        assert!(HomCorrectionParams::new(-0.1, 0.0, 0.5, 0.5).is_err());
        assert!(HomCorrectionParams::new(0.0, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn overlapping_peaks_flagged() {
        let x: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let c = SampledCurve::new(x, vec![1.0; 200]).unwrap();
        assert!(matches!(fit_hom_peaks(&c, 10.0, 12.0), Err(AnalysisError::OverlappingPeaks { .. })));
    }
}
