use super::{non_negative, positive, CavityError};
use crate::scalar::Real;

/// Relative slack allowed on T₂ ≤ 2T₁.
pub const RRS_T2_TOLERANCE: f64 = 1e-9;

/// I_RRS / I_total = (T₂/2T₁) / (1 + Ω²/(γ₁γ₂)), γ₁ = 1/T₁, γ₂ = 1/T₂.
pub fn rrs_fraction<T: Real>(t1: T, t2: T, omega_r: T) -> Result<T, CavityError> {
    positive("T1", t1)?;
    positive("T2", t2)?;
    non_negative("omega_r", omega_r)?;
    if t2 > T::lit(2.0) * t1 * (T::one() + T::lit(RRS_T2_TOLERANCE)) {
        return Err(CavityError::Unphysical(format!("T2 = {t2} ps exceeds 2 T1 = {} ps", T::lit(2.0) * t1)));
    }
    let g1g2 = T::one() / (t1 * t2);
    Ok(t2 / (T::lit(2.0) * t1) / (T::one() + omega_r * omega_r / g1g2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DampedRabi<T> {
    /// Ω_d = √(Ω² − (γ₁−γ₂)²/4).
    Real(T),
    /// Ω below |γ₁−γ₂|/2: no resolvable splitting. Holds Ω_d² < 0.
    SubThreshold(T),
}

impl<T: Real> DampedRabi<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Self::Real(v) => Some(v),
            Self::SubThreshold(_) => None,
        }
    }

    /// Ω_d², negative below threshold.
    pub fn squared(self) -> T {
        match self {
            Self::Real(v) => v * v,
            Self::SubThreshold(s) => s,
        }
    }
}

pub fn damped_rabi<T: Real>(omega_r: T, gamma1: T, gamma2: T) -> Result<DampedRabi<T>, CavityError> {
    non_negative("omega_r", omega_r)?;
    non_negative("gamma1", gamma1)?;
    non_negative("gamma2", gamma2)?;
    let d = (gamma1 - gamma2) * T::lit(0.5);
    let sq = omega_r * omega_r - d * d;
    Ok(if sq >= T::zero() {
        DampedRabi::Real(sq.sqrt())
    } else {
        DampedRabi::SubThreshold(sq)
    })
}

/// Normalised double-pulse intensity 2(1 − e^{−Δt/T₁}).
pub fn dprf_intensity<T: Real>(delta_t: T, t1: T) -> Result<T, CavityError> {
    non_negative("delta_t", delta_t)?;
    positive("T1", t1)?;
    Ok(T::lit(2.0) * p2_probability(delta_t, t1)?)
}

/// Probability 1 − e^{−Δτ/T₁} that two impulsive π-pulses give two photons.
pub fn p2_probability<T: Real>(delta_tau: T, t1: T) -> Result<T, CavityError> {
    non_negative("delta_tau", delta_tau)?;
    positive("T1", t1)?;
    Ok(-(-delta_tau / t1).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rrs_limits() {
        assert!((rrs_fraction(24.6f64, 49.2, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let (t1, t2) = (24.6, 49.2);
        let omega = (1.0f64 / (t1 * t2)).sqrt();
        assert!((rrs_fraction(t1, t2, omega).unwrap() - 0.5).abs() < 1e-14);
        assert!(rrs_fraction(10.0, 20.0 * (1.0 + 1e-10), 0.0).is_ok());
        assert!(rrs_fraction(10.0, 20.1, 0.0).is_err());
        assert_eq!(rrs_fraction(20.0, 30.0, 0.0).unwrap(), 0.75);
    }

    #[test]
    fn damped_rabi_threshold() {
        assert_eq!(damped_rabi(0.3, 0.1, 0.1).unwrap(), DampedRabi::Real(0.3));
        assert_eq!(damped_rabi(0.05, 0.2, 0.1).unwrap().value(), Some(0.0));
        assert!(damped_rabi(0.01, 0.2, 0.1).unwrap().value().is_none());
    }

    #[test]
    fn dprf_closed_forms() {
        assert_eq!(dprf_intensity(0.0f64, 22.7).unwrap(), 0.0);
        assert_eq!(dprf_intensity(f64::INFINITY, 22.7).unwrap(), 2.0);
        assert!((dprf_intensity(22.7f64, 22.7).unwrap() - 1.2642).abs() < 1e-4);
        assert!((p2_probability(5.0f64, 1.0).unwrap() - 0.99326).abs() < 1e-5);
        assert!(dprf_intensity(-1.0f64, 22.7).is_err());
    }
}
