//! Noisy synthetic datasets for exercising the fits.
//!
//! Counting histograms default to Poisson noise; the real detector noise
//! model is not known.

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

use super::{AnalysisError, SampledCurve};
use crate::scalar::Real;

/// Replaces each expected count by a Poisson draw; errors are √max(n, 1).
pub fn poisson_counts<T: Real, R: Rng + ?Sized>(
    expected: &SampledCurve<T>,
    rng: &mut R,
) -> Result<SampledCurve<T>, AnalysisError> {
    let mut y = Vec::with_capacity(expected.len());
    for &m in expected.y() {
        let m = m.as_f64();
        let n = if m > 0.0 {
            Poisson::new(m)
                .map_err(|e| AnalysisError::InvalidInput {
                    name: "expected",
                    reason: e.to_string(),
                })?
                .sample(rng)
        } else if m == 0.0 {
            0.0
        } else {
            return Err(AnalysisError::InvalidInput {
                name: "expected",
                reason: "expected counts must be non-negative".into(),
            });
        };
        y.push(T::lit(n));
    }
    let err = y.iter().map(|n| n.max(T::one()).sqrt()).collect();
    SampledCurve::with_errors(expected.x().to_vec(), y, err)
}

/// yᵢ(1 + r·ξᵢ), ξᵢ ~ N(0, 1); errors are r·|yᵢ| of the clean curve.
pub fn multiplicative_noise<T: Real, R: Rng + ?Sized>(
    clean: &SampledCurve<T>,
    relative: T,
    rng: &mut R,
) -> Result<SampledCurve<T>, AnalysisError> {
    if !(relative > T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "relative",
            reason: "noise level must be positive".into(),
        });
    }
    let normal = Normal::new(0.0, relative.as_f64()).expect("positive sigma");
    let y = clean
        .y()
        .iter()
        .map(|v| *v * (T::one() + T::lit(normal.sample(rng))))
        .collect();
    let err = clean
        .y()
        .iter()
        .map(|v| (v.abs() * relative).max(T::min_positive_value()))
        .collect();
    SampledCurve::with_errors(clean.x().to_vec(), y, err)
}
