//! Closed-form cavity-QED relations: Purcell enhancement, coupling
//! constants, resonance-fluorescence ratios and efficiency budgets.

mod budget;
mod coherence;
mod coupling;
mod purcell;

use thiserror::Error;

pub use budget::{count_rate_budget, coupling_efficiencies, BrightnessBudget, CouplingEfficiencies};
pub use coherence::{damped_rabi, dprf_intensity, p2_probability, rrs_fraction, DampedRabi, RRS_T2_TOLERANCE};
pub use coupling::{
    coupling_strength, dipole_moment, strong_coupling_check, CouplingRegime, StrongCouplingCheck,
};
pub use purcell::{ideal_purcell, purcell_factor, t1_of_detuning, CavityDesign, EmitterConstants};

/// SI constants (CODATA 2018 exact or recommended values).
pub mod si {
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const H: f64 = 6.626_070_15e-34;
    pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
    pub const C: f64 = 299_792_458.0;
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// 1 D = 10⁻²¹/c C·m.
    pub const DEBYE: f64 = 1e-21 / C;
}

/// Default refractive index (GaAs near 915 nm).
pub const DEFAULT_REFRACTIVE_INDEX: f64 = 3.4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CavityError {
    #[error("`{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("`{name}` out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },
    #[error("unphysical coherence: {0}")]
    Unphysical(String),
}

pub(crate) fn positive<T: crate::Real>(name: &'static str, v: T) -> Result<T, CavityError> {
    if v > T::zero() && v.is_finite() {
        Ok(v)
    } else {
        Err(CavityError::NonPositive { name, value: v.as_f64() })
    }
}

/// Accepts +∞ so that limits such as F_P → ∞ can be evaluated.
pub(crate) fn non_negative<T: crate::Real>(name: &'static str, v: T) -> Result<T, CavityError> {
    if v >= T::zero() {
        Ok(v)
    } else {
        Err(CavityError::OutOfRange {
            name,
            reason: format!("must be non-negative, got {v}"),
        })
    }
}
