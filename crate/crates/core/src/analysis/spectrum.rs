//! Splitting a high-resolution emission spectrum into its coherent
//! (instrument-limited Gaussian) and incoherent (Lorentzian) parts.

use super::lm::{levenberg_marquardt, multi_start, FitOptions, FitResult};
use super::{AnalysisError, SampledCurve};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpOptions<T> {
    /// SE linewidth (FWHM, same unit as x) used when the SE component is
    /// too weak to fit its own width, e.g. taken from a higher-power
    /// spectrum. Without it the instrument width is used.
    pub se_linewidth_hint: Option<T>,
    /// SE fraction of the total below which the linewidth is constrained.
    pub constrain_below: T,
}

impl<T: Real> Default for FpOptions<T> {
    fn default() -> Self {
        Self {
            se_linewidth_hint: None,
            constrain_below: T::lit(0.05),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FpDecomposition<T> {
    pub rrs_area: T,
    pub rrs_area_err: T,
    pub se_area: T,
    pub se_area_err: T,
    /// Lorentzian FWHM.
    pub se_linewidth: T,
    pub centre: T,
    /// True when the SE width was held at the hint instead of fitted.
    pub linewidth_constrained: bool,
    pub fit: FitResult<T>,
}

impl<T: Real> FpDecomposition<T> {
    /// I_RRS / (I_RRS + I_SE).
    pub fn rrs_fraction(&self) -> T {
        self.rrs_area / (self.rrs_area + self.se_area)
    }
}

fn gaussian<T: Real>(x: T, fwhm: T) -> T {
    let s = fwhm / (T::lit(8.0) * T::LN_2()).sqrt();
    (-(x * x) / (T::lit(2.0) * s * s)).exp() / (s * (T::lit(2.0) * T::PI()).sqrt())
}

fn lorentzian<T: Real>(x: T, fwhm: T) -> T {
    let h = fwhm * T::lit(0.5);
    h / (T::PI() * (x * x + h * h))
}

/// Width of the region above half maximum.
fn rough_fwhm<T: Real>(c: &SampledCurve<T>) -> T {
    let (_, peak) = c.peak().unwrap_or((0, T::zero()));
    let above: Vec<T> = c
        .x()
        .iter()
        .zip(c.y())
        .filter(|(_, y)| **y >= peak * T::lit(0.5))
        .map(|(x, _)| *x)
        .collect();
    match (above.first(), above.last()) {
        (Some(a), Some(b)) if b > a => *b - *a,
        _ => c.x()[1] - c.x()[0],
    }
}

/// Fits `A_G·G(x−x₀; irf_fwhm) + A_L·L(x−x₀; Γ)` with a shared centre.
///
/// If the free fit leaves the SE part under `constrain_below` of the total
/// (or cannot determine Γ at all), the fit is repeated with Γ held fixed.
/// Areas that come out negative beyond 3σ are rejected; smaller negative
/// excursions are fit noise around zero and are reported as zero.
/// Laser background must be subtracted beforehand.
pub fn decompose_fp_spectrum<T: Real>(
    spectrum: &SampledCurve<T>,
    irf_fwhm: T,
    opts: FpOptions<T>,
) -> Result<FpDecomposition<T>, AnalysisError> {
    if !(irf_fwhm > T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "irf_fwhm",
            reason: "must be positive".into(),
        });
    }
    if spectrum.len() < 8 {
        return Err(AnalysisError::InvalidCurve("spectrum needs at least 8 points".into()));
    }
    let (x, y) = (spectrum.x(), spectrum.y());
    let span = x[x.len() - 1] - x[0];
    let (ip, _) = spectrum.peak().expect("nonempty");
    let centre0 = x[ip];
    let total0 = spectrum.integral();
    let width0 = rough_fwhm(spectrum).max(irf_fwhm);
    let sigma = spectrum.y_err();
    let fit_opts = FitOptions::default();

    let free = |x: T, p: &[T]| p[0] * gaussian(x - p[2], irf_fwhm) + p[1] * lorentzian(x - p[2], p[3]);
    let starts: Vec<Vec<T>> = [0.2, 0.5, 0.8]
        .iter()
        .flat_map(|f| {
            [0.5, 1.0, 2.0].iter().map(move |w| {
                let f = T::lit(*f);
                vec![total0 * f, total0 * (T::one() - f), centre0, width0 * T::lit(*w)]
            })
        })
        .collect();
    let free_fit = multi_start(&free, x, y, sigma, &starts, &FitOptions {
        bounds: Some(vec![
            (T::neg_infinity(), T::infinity()),
            (T::neg_infinity(), T::infinity()),
            (x[0], x[x.len() - 1]),
            (span * T::lit(1e-6), span * T::lit(10.0)),
        ]),
        ..fit_opts.clone()
    });

    let weak = |f: &FitResult<T>| f.params[1] < opts.constrain_below * (f.params[0] + f.params[1]);
    let (areas, errs, centre, gamma, constrained, fit) = match free_fit {
        Ok(f) if !weak(&f) => {
            let p = &f.params;
            ((p[0], p[1]), (f.errors[0], f.errors[1]), p[2], p[3], false, f)
        }
        Ok(_) | Err(AnalysisError::IllConditioned(_)) | Err(AnalysisError::FitFailure { .. }) => {
            let gamma = opts.se_linewidth_hint.unwrap_or(irf_fwhm);
            if !(gamma > T::zero()) {
                return Err(AnalysisError::InvalidInput {
                    name: "se_linewidth_hint",
                    reason: "must be positive".into(),
                });
            }
            let fixed = |x: T, p: &[T]| p[0] * gaussian(x - p[2], irf_fwhm) + p[1] * lorentzian(x - p[2], gamma);
            let f = levenberg_marquardt(&fixed, x, y, sigma, &[total0, T::zero(), centre0], &fit_opts)?;
            let p = &f.params;
            ((p[0], p[1]), (f.errors[0], f.errors[1]), p[2], gamma, true, f)
        }
        Err(e) => return Err(e),
    };
    if span < T::lit(3.0) * gamma {
        return Err(AnalysisError::InvalidInput {
            name: "spectrum",
            reason: format!("span {span} is under 3 SE linewidths ({gamma})"),
        });
    }
    let scale = (areas.0.abs() + areas.1.abs()) * T::lit(1e-9);
    let settle = |name: &str, a: T, e: T| -> Result<T, AnalysisError> {
        if a >= T::zero() {
            Ok(a)
        } else if -a <= T::lit(3.0) * e + scale {
            Ok(T::zero())
        } else {
            Err(AnalysisError::NegativeArea(format!("{name} area {a} ± {e}")))
        }
    };
    let rrs_area = settle("RRS", areas.0, errs.0)?;
    let se_area = settle("SE", areas.1, errs.1)?;
    if !(rrs_area + se_area > T::zero()) {
        return Err(AnalysisError::NegativeArea("total area is not positive".into()));
    }
    Ok(FpDecomposition {
        rrs_area,
        rrs_area_err: errs.0,
        se_area,
        se_area_err: errs.1,
        se_linewidth: gamma,
        centre,
        linewidth_constrained: constrained,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (0..801).map(|i| -40.0 + 0.1 * i as f64).collect()
    }

    #[test]
    fn pure_gaussian_is_all_rrs() {
        let c = SampledCurve::from_fn(grid(), |x| 5.0 * gaussian(x - 0.3, 1.2)).unwrap();
        let d = decompose_fp_spectrum(&c, 1.2, FpOptions::default()).unwrap();
        assert!((d.rrs_fraction() - 1.0).abs() < 1e-6, "{d:?}");
        assert!(d.linewidth_constrained);
    }

    #[test]
    fn mixture_is_split() {
        let c = SampledCurve::from_fn(grid(), |x| 0.87 * gaussian(x, 1.2) + 0.13 * lorentzian(x, 6.0)).unwrap();
        let d = decompose_fp_spectrum(&c, 1.2, FpOptions::default()).unwrap();
        assert!((d.rrs_fraction() - 0.87).abs() < 1e-6, "{d:?}");
        assert!((d.se_linewidth - 6.0).abs() < 1e-4);
        assert!(!d.linewidth_constrained);
    }
}
