use super::{non_negative, positive, CavityError};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingEfficiencies<T> {
    /// Cavity → both waveguides, 1 − Q_M1/Q_u.
    pub cavity_waveguides_total: T,
    /// Main and secondary waveguide shares of the total.
    pub per_waveguide: (T, T),
    /// Fraction of emission into the cavity mode, F_P/(1 + F_P).
    pub beta: T,
    /// Dot → main waveguide, β times the main-arm share.
    pub qd_waveguide: T,
}

/// `branch_ratio` is main-arm : secondary-arm (4 for 4:1).
pub fn coupling_efficiencies<T: Real>(
    q_m1: T,
    q_uncoupled: T,
    branch_ratio: T,
    purcell: T,
) -> Result<CouplingEfficiencies<T>, CavityError> {
    positive("Q_M1", q_m1)?;
    positive("Q_uncoupled", q_uncoupled)?;
    positive("branch_ratio", branch_ratio)?;
    non_negative("F_P", purcell)?;
    if q_uncoupled < q_m1 {
        return Err(CavityError::OutOfRange {
            name: "Q_uncoupled",
            reason: format!("must be at least Q_M1 = {q_m1}, got {q_uncoupled}"),
        });
    }
    let total = T::one() - q_m1 / q_uncoupled;
    let main = total * branch_ratio / (branch_ratio + T::one());
    let beta = if purcell.is_infinite() {
        T::one()
    } else {
        purcell / (T::one() + purcell)
    };
    Ok(CouplingEfficiencies {
        cavity_waveguides_total: total,
        per_waveguide: (main, total - main),
        beta,
        qd_waveguide: beta * main,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BrightnessBudget<T> {
    /// Laser repetition rate, Hz.
    pub rep_rate: T,
    pub eta_qd_waveguide: T,
    /// mm
    pub waveguide_length: T,
    /// dB/mm
    pub propagation_loss: T,
    pub detector_efficiency: T,
}

impl<T: Real> BrightnessBudget<T> {
    /// The on-chip estimate at 76.2 MHz.
    pub fn device() -> Self {
        Self {
            rep_rate: T::lit(76.2e6),
            eta_qd_waveguide: T::lit(0.40),
            waveguide_length: T::lit(0.1),
            propagation_loss: T::lit(17.0),
            detector_efficiency: T::lit(0.20),
        }
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        non_negative("rep_rate", self.rep_rate)?;
        non_negative("waveguide_length", self.waveguide_length)?;
        non_negative("propagation_loss", self.propagation_loss)?;
        for (name, v) in [
            ("eta_qd_waveguide", self.eta_qd_waveguide),
            ("detector_efficiency", self.detector_efficiency),
        ] {
            non_negative(name, v)?;
            if v > T::one() {
                return Err(CavityError::OutOfRange {
                    name,
                    reason: format!("efficiency above 1: {v}"),
                });
            }
        }
        Ok(())
    }
}

/// Detected rate, Hz: rep · η · 10^(−loss·L/10) · η_det.
pub fn count_rate_budget<T: Real>(budget: &BrightnessBudget<T>) -> Result<T, CavityError> {
    budget.validate()?;
    let transmission = T::lit(10.0).powf(-budget.propagation_loss * budget.waveguide_length / T::lit(10.0));
    Ok(budget.rep_rate * budget.eta_qd_waveguide * transmission * budget.detector_efficiency)
}
