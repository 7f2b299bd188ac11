//! Unit conventions.
//!
//! Internally every rate or angular frequency is in rad/ps and every time is
//! in ps. Energies quoted in μeV (linewidths, couplings) are converted with a
//! single reduced Planck constant.

use crate::scalar::Real;

/// ħ in meV·ps.
pub const HBAR_MEV_PS: f64 = 0.65821195;

/// ħ in μeV·ps.
pub const HBAR_UEV_PS: f64 = HBAR_MEV_PS * 1.0e3;

/// Converts an energy in μeV to an angular frequency in rad/ps.
#[inline]
pub fn uev_to_rad_per_ps<T: Real>(energy_uev: T) -> T {
    energy_uev / T::lit(HBAR_UEV_PS)
}

/// Converts an angular frequency in rad/ps to an energy in μeV.
#[inline]
pub fn rad_per_ps_to_uev<T: Real>(omega: T) -> T {
    omega * T::lit(HBAR_UEV_PS)
}

/// Rabi frequency quoted as Ω/2π in GHz, converted to rad/ps.
#[inline]
pub fn ghz_cycles_to_rad_per_ps<T: Real>(f_ghz: T) -> T {
    T::TAU() * f_ghz * T::lit(1e-3)
}

/// Gaussian standard deviation from a full width at half maximum.
#[inline]
pub fn fwhm_to_sigma<T: Real>(fwhm: T) -> T {
    fwhm / (T::lit(2.0) * (T::lit(2.0) * T::LN_2()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_round_trip() {
        let w = uev_to_rad_per_ps(2510.0_f64);
        assert!((w - 3.813360).abs() < 1e-5);
        assert!((rad_per_ps_to_uev(w) - 2510.0).abs() < 1e-9);
    }

    #[test]
    fn fwhm_sigma() {
        let s = fwhm_to_sigma(2.354820045_f64);
        assert!((s - 1.0).abs() < 1e-8);
    }
}
