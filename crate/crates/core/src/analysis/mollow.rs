//! Drive-power → Rabi-frequency calibration from Mollow-triplet splittings.

use super::AnalysisError;
use crate::scalar::Real;

/// Ω² = slope · P, with the damping offset (γ₁ − γ₂)²/4 that separates the
/// bare Rabi frequency from the observed splitting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollowCalibration<T> {
    /// rad²/ps² per unit power.
    pub slope: T,
    pub slope_err: T,
    /// (γ₁ − γ₂)²/4 in rad²/ps².
    pub damping_offset: T,
    pub points_used: usize,
}

impl<T: Real> MollowCalibration<T> {
    pub fn omega_squared(&self, power: T) -> T {
        self.slope * power
    }

    /// Rabi frequency at `power`.
    pub fn omega(&self, power: T) -> T {
        self.omega_squared(power).max(T::zero()).sqrt()
    }
}

/// Fits Ω_d² + (γ₁−γ₂)²/4 = slope·P through the origin.
///
/// `splittings` are damped Rabi frequencies Ω_d (rad/ps). Entries that are
/// zero, negative or non-finite mark spectra without a resolvable
/// splitting and are skipped; at least three resolved points are needed.
pub fn mollow_calibration<T: Real>(
    powers: &[T],
    splittings: &[T],
    gamma1: T,
    gamma2: T,
) -> Result<MollowCalibration<T>, AnalysisError> {
    if powers.len() != splittings.len() {
        return Err(AnalysisError::InvalidInput {
            name: "splittings",
            reason: "one splitting per power required".into(),
        });
    }
    if !(gamma1 >= T::zero() && gamma2 >= T::zero()) {
        return Err(AnalysisError::InvalidInput {
            name: "gamma",
            reason: "damping rates must be non-negative".into(),
        });
    }
    let offset = (gamma1 - gamma2).powi(2) * T::lit(0.25);
    let pts: Vec<(T, T)> = powers
        .iter()
        .zip(splittings)
        .filter(|(p, s)| p.is_finite() && **p > T::zero() && s.is_finite() && **s > T::zero())
        .map(|(p, s)| (*p, *s * *s + offset))
        .collect();
    if pts.len() < 3 {
        return Err(AnalysisError::InvalidInput {
            name: "splittings",
            reason: format!("{} points above the damping threshold, need 3", pts.len()),
        });
    }
    let spp: T = pts.iter().map(|(p, _)| *p * *p).sum();
    let slope = pts.iter().map(|(p, y)| *p * *y).sum::<T>() / spp;
    if slope < T::zero() {
        return Err(AnalysisError::Unusable(format!("negative fitted slope {slope}")));
    }
    let rss: T = pts.iter().map(|(p, y)| (*y - slope * *p).powi(2)).sum();
    let dof = T::from_usize_lossy(pts.len() - 1);
    Ok(MollowCalibration {
        slope,
        slope_err: (rss / dof / spp).sqrt(),
        damping_offset: offset,
        points_used: pts.len(),
    })
}
