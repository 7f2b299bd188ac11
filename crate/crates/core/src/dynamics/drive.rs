use num_complex::Complex;

use super::{DynamicsError, SystemParams};
use crate::scalar::{Cplx, Real};
use crate::units::fwhm_to_sigma;

/// Which mode the laser couples to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DriveTarget {
    /// `Ē a† + Ē* a`
    #[default]
    Cavity,
    /// `Ē σ₊ + Ē* σ₋`
    Emitter,
}

/// Gaussian pulse with electric-field FWHM `fwhm`.
///
/// `area` is the pulse area Θ = ∫Ω(t)dt of the Rabi frequency seen by the
/// emitter, so Θ = π inverts an undamped two-level system regardless of the
/// target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPulse<T> {
    pub area: T,
    pub fwhm: T,
    pub center: T,
    /// Optical phase of the pulse, rad.
    pub phase: T,
}

/// Envelope is set to zero beyond this many `fwhm/√(2 ln 2)` from the centre.
pub const PULSE_TRUNCATION: f64 = 4.0;

impl<T: Real> GaussianPulse<T> {
    pub fn new(area: T, fwhm: T, center: T) -> Self {
        Self {
            area,
            fwhm,
            center,
            phase: T::zero(),
        }
    }

    pub fn sigma(&self) -> T {
        fwhm_to_sigma(self.fwhm)
    }

    /// Half-width of the support window.
    pub fn half_span(&self) -> T {
        T::lit(PULSE_TRUNCATION) * self.fwhm / (T::lit(2.0) * T::LN_2()).sqrt()
    }

    pub fn support(&self) -> (T, T) {
        let h = self.half_span();
        (self.center - h, self.center + h)
    }

    /// Emitter Rabi frequency Ω(t), rad/ps.
    pub fn rabi(&self, t: T) -> T {
        let dt = t - self.center;
        if dt.abs() > self.half_span() {
            return T::zero();
        }
        let s = self.sigma();
        let norm = self.area / (s * T::TAU().sqrt());
        norm * (-(dt * dt) / (T::lit(2.0) * s * s)).exp()
    }

    /// dΩ/dt inside the support, zero outside.
    pub fn rabi_rate(&self, t: T) -> T {
        let s = self.sigma();
        -self.rabi(t) * (t - self.center) / (s * s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DriveKind<T> {
    Off,
    Pulses(Vec<GaussianPulse<T>>),
    /// Constant Hamiltonian amplitude Ē₀, rad/ps.
    Continuous { amplitude: Cplx<T> },
}

/// Laser field in the frame rotating at the laser frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct DriveField<T> {
    pub kind: DriveKind<T>,
    pub target: DriveTarget,
}

impl<T: Real> DriveField<T> {
    pub fn off() -> Self {
        Self {
            kind: DriveKind::Off,
            target: DriveTarget::default(),
        }
    }

    pub fn pulses(pulses: Vec<GaussianPulse<T>>, target: DriveTarget) -> Self {
        Self {
            kind: DriveKind::Pulses(pulses),
            target,
        }
    }

    pub fn single_pulse(area: T, fwhm: T, center: T, target: DriveTarget) -> Self {
        Self::pulses(vec![GaussianPulse::new(area, fwhm, center)], target)
    }

    pub fn continuous(amplitude: T, target: DriveTarget) -> Self {
        Self {
            kind: DriveKind::Continuous {
                amplitude: Complex::new(amplitude, T::zero()),
            },
            target,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        match &self.kind {
            DriveKind::Off => Ok(()),
            DriveKind::Continuous { amplitude } => {
                if amplitude.re.is_nan() || amplitude.im.is_nan() || !amplitude.norm().is_finite() {
                    Err(DynamicsError::NonFiniteDrive)
                } else {
                    Ok(())
                }
            }
            DriveKind::Pulses(ps) => {
                for p in ps {
                    if !p.area.is_finite() || !p.center.is_finite() || !p.phase.is_finite() {
                        return Err(DynamicsError::NonFiniteDrive);
                    }
                    if !(p.fwhm > T::zero()) {
                        return Err(DynamicsError::InvalidParameter {
                            name: "fwhm",
                            reason: format!("pulse duration must be positive, got {}", p.fwhm),
                        });
                    }
                }
                if ps.windows(2).any(|w| w[1].center < w[0].center) {
                    return Err(DynamicsError::InvalidParameter {
                        name: "center",
                        reason: "pulse centres must be ordered".into(),
                    });
                }
                Ok(())
            }
        }
    }

    /// Complex emitter Rabi frequency Σ Ωₖ(t) e^{iφₖ}; zero for CW.
    pub fn rabi(&self, t: T) -> Cplx<T> {
        match &self.kind {
            DriveKind::Pulses(ps) => ps.iter().fold(Cplx::new(T::zero(), T::zero()), |acc, p| {
                acc + Complex::from_polar(p.rabi(t), p.phase)
            }),
            _ => Cplx::new(T::zero(), T::zero()),
        }
    }

    /// Complex dΩ/dt.
    pub fn rabi_rate(&self, t: T) -> Cplx<T> {
        match &self.kind {
            DriveKind::Pulses(ps) => ps.iter().fold(Cplx::new(T::zero(), T::zero()), |acc, p| {
                acc + Complex::from_polar(p.rabi_rate(t), p.phase)
            }),
            _ => Cplx::new(T::zero(), T::zero()),
        }
    }

    /// Amplitude Ē(t) multiplying the raising operator of the target.
    ///
    /// For pulses on the emitter this is Ω/2. On the cavity it is
    /// `[(κ + iδ_CL)Ω + dΩ/dt]/(2g)`: the empty-cavity field then follows
    /// α(t) = −iΩ(t)/(2g) exactly, and after displacing `a` by α the emitter
    /// sees Rabi frequency Ω (up to a constant phase), with no adiabatic
    /// approximation. The pulse-edge truncation adds an error of order
    /// e^{−8} relative.
    pub fn amplitude(&self, t: T, params: &SystemParams<T>) -> Cplx<T> {
        match &self.kind {
            DriveKind::Off => Cplx::new(T::zero(), T::zero()),
            DriveKind::Continuous { amplitude } => *amplitude,
            DriveKind::Pulses(_) => {
                let omega = self.rabi(t);
                match self.target {
                    DriveTarget::Emitter => omega.scale(T::lit(0.5)),
                    DriveTarget::Cavity => {
                        (omega * Complex::new(params.kappa, params.delta_cl) + self.rabi_rate(t))
                            / (params.g * T::lit(2.0))
                    }
                }
            }
        }
    }

    /// Times where the envelope switches on or off.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut b: Vec<T> = match &self.kind {
            DriveKind::Pulses(ps) => ps
                .iter()
                .flat_map(|p| {
                    let (lo, hi) = p.support();
                    [lo, hi]
                })
                .collect(),
            _ => Vec::new(),
        };
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b
    }

    /// Longest pulse duration, used to cap integrator steps.
    pub fn shortest_feature(&self) -> Option<T> {
        match &self.kind {
            DriveKind::Pulses(ps) => ps.iter().map(|p| p.sigma()).fold(None, |acc, s| {
                Some(acc.map_or(s, |a: T| a.min(s)))
            }),
            _ => None,
        }
    }

    /// End of the last pulse; `None` for CW or no drive.
    pub fn last_pulse_end(&self) -> Option<T> {
        match &self.kind {
            DriveKind::Pulses(ps) => ps.iter().map(|p| p.support().1).fold(None, |acc, e| {
                Some(acc.map_or(e, |a: T| a.max(e)))
            }),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pulse_area_is_reproduced() {
        let p = GaussianPulse::new(std::f64::consts::PI, 13.0, 0.0);
        let (lo, hi) = p.support();
        let n = 200_000;
        let dt = (hi - lo) / n as f64;
        // composite Simpson
        let mut s = p.rabi(lo) + p.rabi(hi);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * p.rabi(lo + k as f64 * dt);
        }
        let area = s * dt / 3.0;
        assert!((area - std::f64::consts::PI).abs() < 1e-8, "{area}");
        assert_eq!(p.rabi(hi + 1e-9), 0.0);
    }

    #[test]
    fn rejects_nan() {
        let d = DriveField::single_pulse(f64::NAN, 10.0, 0.0, DriveTarget::Cavity);
        assert!(matches!(d.validate(), Err(DynamicsError::NonFiniteDrive)));
        let d = DriveField::continuous(f64::NAN, DriveTarget::Emitter);
        assert!(matches!(d.validate(), Err(DynamicsError::NonFiniteDrive)));
        let d = DriveField::single_pulse(1.0, -1.0, 0.0, DriveTarget::Emitter);
        assert!(d.validate().is_err());
    }

    #[test]
    fn cavity_amplitude_scaling() {
        let params = SystemParams::<f64>::device();
        let d = DriveField::single_pulse(1.0, 10.0, 0.0, DriveTarget::Cavity);
        let e = d.amplitude(0.0, &params);
        let omega = d.rabi(0.0).re;
        assert!((e.norm() - omega * params.kappa / (2.0 * params.g)).abs() < 1e-12);
    }
}
