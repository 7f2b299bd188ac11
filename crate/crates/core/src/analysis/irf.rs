//! Forward convolution with a Gaussian detector response.

use super::{AnalysisError, SampledCurve};
use crate::scalar::Real;

/// Minimum grid points per IRF FWHM accepted by [`convolve_irf`].
pub const MIN_POINTS_PER_FWHM: usize = 8;

/// Kernel half-width in standard deviations.
const KERNEL_SIGMAS: f64 = 6.0;

fn fwhm_to_sigma<T: Real>(fwhm: T) -> T {
    fwhm / (T::lit(8.0) * T::LN_2()).sqrt()
}

/// Gaussian of the given FWHM sampled at `m·h` for |m·h| ≤ 6σ, normalised
/// so the samples sum to one.
pub fn gaussian_kernel<T: Real>(fwhm: T, h: T) -> Vec<T> {
    let sigma = fwhm_to_sigma(fwhm);
    let half = (T::lit(KERNEL_SIGMAS) * sigma / h).ceil().to_usize().unwrap_or(0);
    let mut w: Vec<T> = (0..=2 * half)
        .map(|k| {
            let t = (T::from_usize_lossy(k) - T::from_usize_lossy(half)) * h;
            (-(t * t) / (T::lit(2.0) * sigma * sigma)).exp()
        })
        .collect();
    let s: T = w.iter().copied().sum();
    w.iter_mut().for_each(|v| *v = *v / s);
    w
}

/// Convolves `curve` with a unit-area Gaussian of FWHM `irf_fwhm`.
///
/// Non-uniform grids are first resampled (linear interpolation) at their
/// smallest spacing. The result lives on the uniform grid extended by the
/// kernel half-width on both sides, so no area leaks off the ends; end
/// samples carry trapezoid half-weights so the output integral equals
/// the input's trapezoid integral.
pub fn convolve_irf<T: Real>(curve: &SampledCurve<T>, irf_fwhm: T) -> Result<SampledCurve<T>, AnalysisError> {
    if !(irf_fwhm > T::zero()) || !irf_fwhm.is_finite() {
        return Err(AnalysisError::InvalidInput {
            name: "irf_fwhm",
            reason: format!("must be positive, got {irf_fwhm}"),
        });
    }
    if curve.len() < 2 {
        return Err(AnalysisError::InvalidCurve("need at least two samples".into()));
    }
    let resampled;
    let (curve, h) = match curve.uniform_step(T::lit(1e-9)) {
        Some(h) => (curve, h),
        None => {
            let x = curve.x();
            let h = x.windows(2).map(|w| w[1] - w[0]).fold(T::infinity(), T::min);
            let n = ((x[x.len() - 1] - x[0]) / h).round().to_usize().unwrap_or(0);
            let h = (x[x.len() - 1] - x[0]) / T::from_usize_lossy(n);
            let grid = (0..=n).map(|k| x[0] + h * T::from_usize_lossy(k)).collect();
            resampled = SampledCurve::from_fn(grid, |t| curve.interpolate(t))?;
            (&resampled, h)
        }
    };
    let ppf = irf_fwhm / h;
    if ppf < T::from_usize_lossy(MIN_POINTS_PER_FWHM) {
        return Err(AnalysisError::Resolution {
            points_per_fwhm: ppf.as_f64(),
            required: MIN_POINTS_PER_FWHM,
        });
    }
    let w = gaussian_kernel(irf_fwhm, h);
    let half = (w.len() - 1) / 2;
    let y = curve.y();
    let n = y.len();
    let mut out = vec![T::zero(); n + 2 * half];
    for (j, &v) in y.iter().enumerate() {
        let v = if j == 0 || j == n - 1 { v * T::lit(0.5) } else { v };
        if v == T::zero() {
            continue;
        }
        for (m, &wm) in w.iter().enumerate() {
            out[j + m] = out[j + m] + v * wm;
        }
    }
    let x0 = curve.x()[0] - h * T::from_usize_lossy(half);
    let x = (0..out.len()).map(|k| x0 + h * T::from_usize_lossy(k)).collect();
    SampledCurve::new(x, out)
}
