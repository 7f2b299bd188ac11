//! Lifetime and resonant-scattering fits.

use super::lm::{levenberg_marquardt, multi_start, FitOptions, FitResult};
use super::{AnalysisError, SampledCurve};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryFit<T> {
    pub t1: T,
    pub t1_err: T,
    pub amplitude: T,
    pub amplitude_err: T,
    pub fit: FitResult<T>,
}

/// Fits A(1 − e^{−x/T₁}) (double-pulse intensity against pulse separation).
///
/// Uses `y_err` as weights when present. Several T₁ starts spread over the
/// x range are tried; the lowest χ² wins.
pub fn fit_exponential_recovery<T: Real>(curve: &SampledCurve<T>) -> Result<RecoveryFit<T>, AnalysisError> {
    if curve.len() < 5 {
        return Err(AnalysisError::InvalidInput {
            name: "curve",
            reason: format!("need at least 5 points, got {}", curve.len()),
        });
    }
    if curve.y().iter().any(|v| !(*v > T::zero())) {
        return Err(AnalysisError::InvalidInput {
            name: "curve",
            reason: "values must be positive".into(),
        });
    }
    let model = |x: T, p: &[T]| p[0] * (T::one() - (-x / p[1]).exp());
    let x = curve.x();
    let a0 = curve.y().iter().copied().fold(T::zero(), T::max);
    let span = (x[x.len() - 1] - x[0].max(T::zero())).max(x[x.len() - 1]);
    let starts: Vec<Vec<T>> = [0.03, 0.1, 0.3, 1.0]
        .iter()
        .map(|f| vec![a0, span * T::lit(*f)])
        .collect();
    let fit = multi_start(&model, x, curve.y(), curve.y_err(), &starts, &FitOptions::default())?;
    Ok(RecoveryFit {
        amplitude: fit.params[0],
        t1: fit.params[1],
        amplitude_err: fit.errors[0],
        t1_err: fit.errors[1],
        fit,
    })
}

/// Which part of a decay trace a naive single-exponential fit uses:
/// from the maximum down to the first sample below `floor_fraction` of it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailWindow<T> {
    pub floor_fraction: T,
}

impl<T: Real> Default for TailWindow<T> {
    fn default() -> Self {
        Self {
            floor_fraction: T::lit(0.1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit<T> {
    pub tau: T,
    pub tau_err: T,
    pub amplitude: T,
    /// Time origin of the fit (position of the maximum).
    pub t0: T,
    pub fit: FitResult<T>,
}

/// Single-exponential A·e^{−(t−t₀)/τ} on the falling tail, no deconvolution.
pub fn fit_naive_decay<T: Real>(curve: &SampledCurve<T>, window: TailWindow<T>) -> Result<DecayFit<T>, AnalysisError> {
    if !(window.floor_fraction > T::zero() && window.floor_fraction < T::one()) {
        return Err(AnalysisError::InvalidInput {
            name: "floor_fraction",
            reason: "must lie in (0, 1)".into(),
        });
    }
    let (i0, peak) = curve
        .peak()
        .filter(|(_, p)| *p > T::zero())
        .ok_or_else(|| AnalysisError::InvalidCurve("no positive maximum".into()))?;
    let floor = peak * window.floor_fraction;
    let end = (i0..curve.len())
        .find(|&i| curve.y()[i] < floor)
        .unwrap_or(curve.len());
    let x = &curve.x()[i0..end];
    let y = &curve.y()[i0..end];
    let sigma = curve.y_err().map(|e| &e[i0..end]);
    if x.len() < 3 {
        return Err(AnalysisError::InvalidCurve("tail window holds fewer than 3 points".into()));
    }
    let t0 = x[0];
    let model = |t: T, p: &[T]| p[0] * (-(t - t0) / p[1]).exp();
    let span = x[x.len() - 1] - t0;
    let tau0 = span / (T::one() / window.floor_fraction).ln();
    let fit = levenberg_marquardt(&model, x, y, sigma, &[peak, tau0], &FitOptions::default())?;
    Ok(DecayFit {
        amplitude: fit.params[0],
        tau: fit.params[1],
        tau_err: fit.errors[1],
        t0,
        fit,
    })
}

/// (T₂/2T₁) / (1 + Ω²T₁T₂).
pub fn rrs_model<T: Real>(omega: T, t1: T, t2: T) -> T {
    t2 / (T::lit(2.0) * t1) / (T::one() + omega * omega * t1 * t2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RrsFit<T> {
    pub t1: T,
    pub t1_err: T,
    pub t2: T,
    pub t2_err: T,
    pub fit: FitResult<T>,
}

/// Relative variation below which an RRS curve is treated as flat.
const FLAT_CURVE: f64 = 1e-3;

/// Two-parameter fit of the RRS fraction against Rabi frequency (rad/ps).
///
/// The plateau fixes T₂/T₁ and the knee fixes T₁T₂; data that never reach
/// the knee cannot separate them and are rejected.
pub fn fit_rrs_curve<T: Real>(fractions: &SampledCurve<T>) -> Result<RrsFit<T>, AnalysisError> {
    if fractions.len() < 4 {
        return Err(AnalysisError::InvalidInput {
            name: "fractions",
            reason: format!("need at least 4 points, got {}", fractions.len()),
        });
    }
    let (x, y) = (fractions.x(), fractions.y());
    if x[0] < T::zero() {
        return Err(AnalysisError::InvalidInput {
            name: "fractions",
            reason: "Rabi frequencies must be non-negative".into(),
        });
    }
    let hi = y.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = y.iter().copied().fold(T::infinity(), T::min);
    if !(hi > T::zero()) || (hi - lo) <= T::lit(FLAT_CURVE) * hi.abs() {
        return Err(AnalysisError::IllConditioned("flat RRS curve does not constrain the knee".into()));
    }
    // plateau from the lowest-Ω point, knee where the curve halves
    let a0 = y[0].max(T::lit(1e-6));
    let half = a0 * T::lit(0.5);
    let knee = (1..x.len())
        .find(|&i| y[i] <= half)
        .map(|i| {
            let w = (y[i - 1] - half) / (y[i - 1] - y[i]);
            x[i - 1] + (x[i] - x[i - 1]) * w
        })
        .unwrap_or(x[x.len() - 1]);
    let prod = T::one() / (knee * knee).max(T::min_positive_value());
    let ratio = (T::lit(2.0) * a0).min(T::lit(2.0));
    let t1 = (prod / ratio).sqrt();
    let starts: Vec<Vec<T>> = [1.0, 0.5, 2.0]
        .iter()
        .flat_map(|s| {
            let s = T::lit(*s);
            [vec![t1 * s, t1 * ratio * s], vec![t1 * s, t1 * ratio / s]]
        })
        .collect();
    let model = |om: T, p: &[T]| rrs_model(om, p[0], p[1]);
    let fit = multi_start(&model, x, y, fractions.y_err(), &starts, &FitOptions::default())?;
    Ok(RrsFit {
        t1: fit.params[0],
        t1_err: fit.errors[0],
        t2: fit.params[1],
        t2_err: fit.errors[1],
        fit,
    })
}
