use num_complex::Complex;

use super::DynamicsError;
use crate::hilbert::{EmitterLevels, SystemSpace};
use crate::scalar::Real;
use crate::units::uev_to_rad_per_ps;

/// Slow feeding of the exciton from a higher level `|f⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relaxation<T> {
    /// Lifetime of `|f⟩ → |X⟩`, ps.
    pub t1f: T,
}

/// Rates and detunings of the emitter–cavity system, all in rad/ps.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams<T> {
    /// Emitter–cavity coupling g.
    pub g: T,
    /// Cavity field decay κ; the linewidth (FWHM) is 2κ.
    pub kappa: T,
    /// Bare emitter decay γ′₁ into non-cavity modes.
    pub gamma1_prime: T,
    /// Emitter–laser detuning ω_A − ω₀.
    pub delta_al: T,
    /// Cavity–laser detuning ω_C − ω₀.
    pub delta_cl: T,
    pub relax: Option<Relaxation<T>>,
    /// Pure dephasing time T₂*; `None` means no dephasing channel.
    pub t2_star: Option<T>,
    pub space: SystemSpace,
}

impl<T: Real> SystemParams<T> {
    /// Resonant two-level system from energies in μeV: cavity linewidth 2ħκ,
    /// coupling ħg and natural linewidth ħγ′₁.
    pub fn from_uev(two_kappa: T, g: T, gamma1_prime: T) -> Self {
        Self {
            g: uev_to_rad_per_ps(g),
            kappa: uev_to_rad_per_ps(two_kappa) * T::lit(0.5),
            gamma1_prime: uev_to_rad_per_ps(gamma1_prime),
            delta_al: T::zero(),
            delta_cl: T::zero(),
            relax: None,
            t2_star: None,
            space: SystemSpace::default(),
        }
    }

    /// The measured device: ħ{2κ, g, γ′₁} = {2510, 135, 0.68} μeV.
    pub fn device() -> Self {
        Self::from_uev(T::lit(2510.0), T::lit(135.0), T::lit(0.68))
    }

    pub fn with_relaxation(mut self, t1f: T) -> Self {
        self.relax = Some(Relaxation { t1f });
        self.space = SystemSpace::new(EmitterLevels::Three, self.space.fock_cutoff())
            .expect("cutoff already validated");
        self
    }

    pub fn with_fock_cutoff(mut self, n: usize) -> Result<Self, DynamicsError> {
        self.space = self.space.with_cutoff(n)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let positive = [("g", self.g), ("kappa", self.kappa), ("gamma1_prime", self.gamma1_prime)];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(DynamicsError::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        for (name, v) in [("delta_al", self.delta_al), ("delta_cl", self.delta_cl)] {
            if !v.is_finite() {
                return Err(DynamicsError::InvalidParameter {
                    name,
                    reason: "must be finite".into(),
                });
            }
        }
        match (self.relax, self.space.levels()) {
            (Some(r), EmitterLevels::Three) if !(r.t1f > T::zero()) => {
                return Err(DynamicsError::InvalidParameter {
                    name: "t1f",
                    reason: format!("must be positive, got {}", r.t1f),
                })
            }
            (Some(_), EmitterLevels::Two) => {
                return Err(DynamicsError::InvalidParameter {
                    name: "relax",
                    reason: "relaxation channel needs a three-level emitter".into(),
                })
            }
            _ => {}
        }
        if let Some(t2s) = self.t2_star {
            if !(t2s > T::zero()) {
                return Err(DynamicsError::InvalidParameter {
                    name: "t2_star",
                    reason: format!("must be positive, got {t2s}"),
                });
            }
        }
        Ok(())
    }

    /// Decay rate of the emitter-like eigenmode of the single-excitation
    /// manifold `{|X,0⟩, |0,1⟩}`, rad/ps.
    ///
    /// Exact for the truncated model; reduces to `γ′₁ + 2g²/κ` deep in the
    /// bad-cavity limit.
    pub fn emitter_decay_rate(&self) -> T {
        let half = T::lit(0.5);
        let a = Complex::new(self.delta_al, -self.gamma1_prime * half);
        let d = Complex::new(self.delta_cl, -self.kappa);
        // [[a, -ig], [ig, d]]: eigenvalues (a+d)/2 ± sqrt(((a-d)/2)² + g²)
        let mean = (a + d).scale(half);
        let disc = ((a - d).scale(half).powi(2) + Complex::new(self.g * self.g, T::zero())).sqrt();
        let l1 = mean + disc;
        let l2 = mean - disc;
        // the emitter-like mode is the slower one
        let r1 = -l1.im * T::lit(2.0);
        let r2 = -l2.im * T::lit(2.0);
        r1.min(r2)
    }

    /// Radiative lifetime T₁ implied by the parameters, ps.
    pub fn radiative_lifetime(&self) -> T {
        T::one() / self.emitter_decay_rate()
    }

    /// Bare lifetime T′₁ = 1/γ′₁, ps.
    pub fn bare_lifetime(&self) -> T {
        T::one() / self.gamma1_prime
    }

    /// Fraction of emission leaving through the cavity.
    pub fn cavity_branching(&self) -> T {
        T::one() - self.gamma1_prime / self.emitter_decay_rate()
    }

    /// Re-solves `g` so that [`Self::radiative_lifetime`] equals `t1`,
    /// keeping every other rate fixed.
    pub fn with_lifetime(mut self, t1: T) -> Result<Self, DynamicsError> {
        let target = T::one() / t1;
        if !(target > self.gamma1_prime) {
            return Err(DynamicsError::InvalidParameter {
                name: "t1",
                reason: "lifetime must be shorter than the bare lifetime".into(),
            });
        }
        let (mut lo, mut hi) = (T::zero(), self.kappa * T::lit(0.5));
        let rate_at = |p: &Self, g: T| {
            let mut q = p.clone();
            q.g = g;
            q.emitter_decay_rate()
        };
        if rate_at(&self, hi) < target {
            return Err(DynamicsError::InvalidParameter {
                name: "t1",
                reason: "lifetime not reachable in the weak-coupling regime".into(),
            });
        }
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if rate_at(&self, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.g = (lo + hi) * T::lit(0.5);
        Ok(self)
    }
}

impl<T: Real> Default for SystemParams<T> {
    fn default() -> Self {
        Self::device()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn device_lifetime_near_measured() {
        let p = SystemParams::<f64>::device();
        let t1 = p.radiative_lifetime();
        // bad-cavity estimate 1/(2g²/κ) is 22.66 ps; the exact slow mode is a
        // little faster
        let bad_cavity = 1.0 / (2.0 * p.g * p.g / p.kappa);
        assert!((bad_cavity - 22.66).abs() < 0.05, "{bad_cavity}");
        assert!(t1 < bad_cavity && t1 > 21.0, "{t1}");
        assert!((t1 - 22.7).abs() / 22.7 < 0.05);
    }

    #[test]
    fn lifetime_inversion() {
        let p = SystemParams::<f64>::device().with_lifetime(22.7).unwrap();
        assert!((p.radiative_lifetime() - 22.7).abs() < 1e-9);
        assert!(SystemParams::<f64>::device().with_lifetime(2000.0).is_err());
    }

    #[test]
    fn validation() {
        let mut p = SystemParams::<f64>::device();
        p.g = -1.0;
        assert!(p.validate().is_err());
        let mut p = SystemParams::<f64>::device();
        p.relax = Some(Relaxation { t1f: 100.0 });
        assert!(p.validate().is_err());
        assert!(SystemParams::<f64>::device().with_relaxation(100.0).validate().is_ok());
    }
}
