use super::si::{C, DEBYE, ELEMENTARY_CHARGE, EPSILON_0, H, HBAR};
use super::{non_negative, positive, CavityError};
use crate::scalar::Real;

fn omega_si(photon_energy_ev: f64) -> f64 {
    photon_energy_ev * ELEMENTARY_CHARGE / HBAR
}

/// |μ| = √(3πħε₀γ′₁c³ / (nω³)) in Debye; γ′₁ in ps⁻¹, energy in eV.
pub fn dipole_moment<T: Real>(gamma1_prime: T, photon_energy: T, n: T) -> Result<T, CavityError> {
    let g = positive("gamma1_prime", gamma1_prime)?.as_f64() * 1e12;
    let w = omega_si(positive("photon_energy", photon_energy)?.as_f64());
    let n = positive("refractive_index", n)?.as_f64();
    let mu = (3.0 * std::f64::consts::PI * HBAR * EPSILON_0 * g * C.powi(3) / (n * w.powi(3))).sqrt();
    Ok(T::lit(mu / DEBYE))
}

/// ħg = ħ√(ω|ε·μ|² / (2ħε₀n²V)) in μeV, with V = V_m (λ/n)³.
pub fn coupling_strength<T: Real>(
    photon_energy: T,
    dipole_debye: T,
    overlap_field: T,
    n: T,
    v_m: T,
) -> Result<T, CavityError> {
    let e = positive("photon_energy", photon_energy)?.as_f64();
    let mu = positive("dipole", dipole_debye)?.as_f64() * DEBYE;
    let eta = non_negative("overlap_field", overlap_field)?.as_f64();
    let n = positive("refractive_index", n)?.as_f64();
    let v_m = positive("V_m", v_m)?.as_f64();
    let w = omega_si(e);
    let lambda = H * C / (e * ELEMENTARY_CHARGE);
    let volume = v_m * (lambda / n).powi(3);
    let g = (w * (eta * mu).powi(2) / (2.0 * HBAR * EPSILON_0 * n * n * volume)).sqrt();
    Ok(T::lit(HBAR * g / ELEMENTARY_CHARGE * 1e6))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingRegime {
    Strong,
    Weak,
    /// 16g² = (2κ − γ′₁)² to rounding; treated as weak.
    Boundary,
}

impl CouplingRegime {
    pub fn is_strong(self) -> bool {
        self == Self::Strong
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrongCouplingCheck<T> {
    pub regime: CouplingRegime,
    /// Q above which the system would be strongly coupled at fixed g, γ′₁
    /// and photon energy.
    pub threshold_q: T,
}

/// Strong coupling iff 16g² > (2κ − γ′₁)²; all energies in μeV, photon
/// energy in eV.
pub fn strong_coupling_check<T: Real>(
    hbar_g: T,
    hbar_2kappa: T,
    hbar_gamma1_prime: T,
    photon_energy: T,
) -> Result<StrongCouplingCheck<T>, CavityError> {
    positive("g", hbar_g)?;
    positive("2kappa", hbar_2kappa)?;
    non_negative("gamma1_prime", hbar_gamma1_prime)?;
    positive("photon_energy", photon_energy)?;
    let lhs = T::lit(16.0) * hbar_g * hbar_g;
    let d = hbar_2kappa - hbar_gamma1_prime;
    let rhs = d * d;
    let scale = lhs.max(rhs);
    let regime = if (lhs - rhs).abs() <= T::lit(1e-12) * scale {
        CouplingRegime::Boundary
    } else if lhs > rhs {
        CouplingRegime::Strong
    } else {
        CouplingRegime::Weak
    };
    // boundary 2κ = 4g + γ′₁ and 2κ = E/Q
    let threshold_q = photon_energy * T::lit(1e6) / (T::lit(4.0) * hbar_g + hbar_gamma1_prime);
    Ok(StrongCouplingCheck { regime, threshold_q })
}
