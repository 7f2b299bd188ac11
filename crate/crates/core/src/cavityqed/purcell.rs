use super::{non_negative, positive, CavityError, DEFAULT_REFRACTIVE_INDEX};
use crate::scalar::Real;
use crate::units::HBAR_UEV_PS;

/// F_P = 3Q / (4π² V_m), V_m in (λ/n)³.
pub fn ideal_purcell<T: Real>(q: T, v_m: T) -> Result<T, CavityError> {
    positive("Q", q)?;
    positive("V_m", v_m)?;
    Ok(T::lit(3.0) * q / (T::lit(4.0) * T::PI() * T::PI() * v_m))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityDesign<T> {
    pub q: T,
    /// Mode volume in (λ/n)³.
    pub v_m: T,
    /// |ε(r₀)·μ|/|μ|, the unsquared field-projection factor.
    pub overlap_field: T,
    /// Cavity FWHM ħ·2κ in μeV; derived from `q` when absent.
    pub linewidth_2kappa: Option<T>,
    /// Photon energy, eV.
    pub photon_energy: T,
    pub refractive_index: T,
}

impl<T: Real> CavityDesign<T> {
    /// The M1 mode of the measured device.
    pub fn device() -> Self {
        Self {
            q: T::lit(540.0),
            v_m: T::lit(0.63),
            overlap_field: T::lit(0.81),
            linewidth_2kappa: Some(T::lit(2510.0)),
            photon_energy: T::lit(1.354),
            refractive_index: T::lit(DEFAULT_REFRACTIVE_INDEX),
        }
    }

    /// ħω/Q in μeV.
    pub fn linewidth_from_q(&self) -> T {
        self.photon_energy * T::lit(1e6) / self.q
    }

    pub fn linewidth(&self) -> T {
        self.linewidth_2kappa.unwrap_or_else(|| self.linewidth_from_q())
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        positive("Q", self.q)?;
        positive("V_m", self.v_m)?;
        positive("photon_energy", self.photon_energy)?;
        positive("refractive_index", self.refractive_index)?;
        non_negative("overlap_field", self.overlap_field)?;
        if self.overlap_field > T::one() {
            return Err(CavityError::OutOfRange {
                name: "overlap_field",
                reason: format!("must not exceed 1, got {}", self.overlap_field),
            });
        }
        if let Some(lw) = self.linewidth_2kappa {
            positive("linewidth_2kappa", lw)?;
            let from_q = self.linewidth_from_q();
            if ((lw - from_q) / from_q).abs() > T::lit(0.05) {
                return Err(CavityError::OutOfRange {
                    name: "linewidth_2kappa",
                    reason: format!("{lw} μeV inconsistent with ħω/Q = {from_q} μeV"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmitterConstants<T> {
    /// Bare lifetime T′₁, ps.
    pub t1_prime: T,
}

impl<T: Real> EmitterConstants<T> {
    pub fn new(t1_prime: T) -> Result<Self, CavityError> {
        positive("t1_prime", t1_prime)?;
        Ok(Self { t1_prime })
    }

    /// Ensemble lifetime outside the photonic crystal.
    pub fn device() -> Self {
        Self { t1_prime: T::lit(971.0) }
    }

    /// Natural linewidth ħγ′₁ = ħ/T′₁, μeV.
    pub fn gamma1_prime_uev(&self) -> T {
        T::lit(HBAR_UEV_PS) / self.t1_prime
    }

    /// γ′₁ in ps⁻¹.
    pub fn gamma1_prime(&self) -> T {
        T::one() / self.t1_prime
    }
}

/// F_P(Δ) = ideal · (2κ)²/(4Δ² + (2κ)²) · overlap², detuning in μeV.
pub fn purcell_factor<T: Real>(design: &CavityDesign<T>, detuning_uev: T) -> Result<T, CavityError> {
    design.validate()?;
    let lw = design.linewidth();
    let lorentz = lw * lw / (T::lit(4.0) * detuning_uev * detuning_uev + lw * lw);
    Ok(ideal_purcell(design.q, design.v_m)? * lorentz * design.overlap_field * design.overlap_field)
}

/// T₁ = T′₁ / F_P(Δ), ps.
pub fn t1_of_detuning<T: Real>(
    design: &CavityDesign<T>,
    emitter: &EmitterConstants<T>,
    detuning_uev: T,
) -> Result<T, CavityError> {
    Ok(emitter.t1_prime / purcell_factor(design, detuning_uev)?)
}
