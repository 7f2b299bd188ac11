//! Parameter scans built on [`evolve`]: π-pulse calibration, Rabi curves,
//! double-pulse intensity and relaxation traces.

use rayon::prelude::*;

use super::evolve::{evolve, linspace};
use super::{DriveField, DriveTarget, DynamicsError, GaussianPulse, SystemParams, Tolerance};
use crate::hilbert::{DensityMatrix, EmitterLevels, Level};
use crate::scalar::Real;

/// Settings shared by the pulse scans.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions<T> {
    /// Where the laser couples. Scans default to the emitter so that the
    /// cavity-channel count contains only photons emitted by the dot.
    pub target: DriveTarget,
    pub tol: Tolerance<T>,
    /// Integration continues this many radiative lifetimes past the last pulse.
    pub tail_lifetimes: T,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        Self {
            target: DriveTarget::Emitter,
            tol: Tolerance::default(),
            tail_lifetimes: T::lit(14.0),
        }
    }
}

/// Photons emitted per channel over a whole pulse sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseEmission<T> {
    pub emitter: T,
    pub cavity: T,
}

impl<T: Real> PulseEmission<T> {
    pub fn total(&self) -> T {
        self.emitter + self.cavity
    }
}

/// Runs `drive` from the ground state until the emission has died out.
pub fn pulse_emission<T: Real>(
    params: &SystemParams<T>,
    drive: &DriveField<T>,
    opts: &ScanOptions<T>,
) -> Result<PulseEmission<T>, DynamicsError> {
    let (start, end) = match drive.breakpoints().as_slice() {
        [] => (T::zero(), T::zero()),
        b => (b[0], b[b.len() - 1]),
    };
    let mut tail = params.radiative_lifetime();
    if let Some(r) = params.relax {
        tail = tail.max(r.t1f);
    }
    let grid = [start, end + opts.tail_lifetimes * tail];
    let rho = DensityMatrix::ground(&params.space);
    let res = evolve(&rho, params, drive, &grid, opts.tol)?;
    let (emitter, cavity) = res.final_emission();
    Ok(PulseEmission { emitter, cavity })
}

fn single_pulse_emission<T: Real>(
    params: &SystemParams<T>,
    tp: T,
    area: T,
    opts: &ScanOptions<T>,
) -> Result<PulseEmission<T>, DynamicsError> {
    let drive = DriveField::single_pulse(area, tp, T::zero(), opts.target);
    pulse_emission(params, &drive, opts)
}

fn check_duration<T: Real>(tp: T) -> Result<(), DynamicsError> {
    if tp > T::zero() && tp.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::InvalidParameter {
            name: "fwhm",
            reason: format!("pulse duration must be positive, got {tp}"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiCalibration<T> {
    /// Area at the first emission maximum, rad.
    pub area: T,
    /// Cavity-channel photons per pulse at that area.
    pub emission: T,
}

/// Number of coarse samples over (0, 4π].
const CALIBRATION_COARSE: usize = 48;

/// Finds the "experimental π-power": the pulse area of the first local
/// maximum of cavity-channel emission, searching (0, 4π].
pub fn calibrate_pi_pulse<T: Real>(
    params: &SystemParams<T>,
    tp: T,
    opts: &ScanOptions<T>,
) -> Result<PiCalibration<T>, DynamicsError> {
    check_duration(tp)?;
    params.validate()?;
    let max_area = T::lit(4.0) * T::PI();
    let areas: Vec<T> = (0..=CALIBRATION_COARSE)
        .map(|k| max_area * T::from_usize_lossy(k) / T::from_usize_lossy(CALIBRATION_COARSE))
        .collect();
    let counts = areas
        .par_iter()
        .map(|&a| single_pulse_emission(params, tp, a, opts).map(|e| e.cavity))
        .collect::<Result<Vec<_>, _>>()?;
    let k = (1..CALIBRATION_COARSE)
        .find(|&k| counts[k] >= counts[k - 1] && counts[k] > counts[k + 1])
        .ok_or_else(|| {
            DynamicsError::Calibration(format!("no emission maximum for area in (0, 4π] at T_P = {tp} ps"))
        })?;

    // golden-section refinement on the bracketing interval
    let f = |a: T| single_pulse_emission(params, tp, a, opts).map(|e| e.cavity);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut lo, mut hi) = (areas[k - 1], areas[k + 1]);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > T::lit(1e-7) * hi {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let area = (lo + hi) * T::lit(0.5);
    Ok(PiCalibration {
        area,
        emission: f(area)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiPoint<T> {
    pub area: T,
    pub emission: PulseEmission<T>,
}

/// Emission per pulse against pulse area.
pub fn rabi_scan<T: Real>(
    params: &SystemParams<T>,
    tp: T,
    areas: &[T],
    opts: &ScanOptions<T>,
) -> Result<Vec<RabiPoint<T>>, DynamicsError> {
    check_duration(tp)?;
    if areas.is_empty() {
        return Err(DynamicsError::InvalidParameter {
            name: "areas",
            reason: "empty area list".into(),
        });
    }
    areas
        .par_iter()
        .map(|&area| {
            single_pulse_emission(params, tp, area, opts).map(|emission| RabiPoint { area, emission })
        })
        .collect()
}

/// Double-pulse intensity curve.
#[derive(Clone, Debug, PartialEq)]
pub struct DprfScan<T> {
    pub pulse_duration: T,
    pub pi_area: T,
    /// Cavity-channel photons from one calibrated pulse.
    pub single_pulse: T,
    pub delta_t: Vec<T>,
    /// Cavity-channel photons from both pulses divided by `single_pulse`.
    pub intensity: Vec<T>,
}

impl<T: Real> DprfScan<T> {
    /// Samples with Δt above `min_dt`, the usual fitting window.
    pub fn window(&self, min_dt: T) -> (Vec<T>, Vec<T>) {
        self.delta_t
            .iter()
            .zip(&self.intensity)
            .filter(|(dt, _)| **dt > min_dt)
            .map(|(a, b)| (*a, *b))
            .unzip()
    }
}

/// Two calibrated π-pulses separated by each Δt; total cavity emission
/// normalised to a single pulse.
pub fn dprf_scan<T: Real>(
    params: &SystemParams<T>,
    tp: T,
    delta_t: &[T],
    opts: &ScanOptions<T>,
) -> Result<DprfScan<T>, DynamicsError> {
    if let Some(bad) = delta_t.iter().find(|d| !(**d >= T::zero()) || !d.is_finite()) {
        return Err(DynamicsError::InvalidParameter {
            name: "delta_t",
            reason: format!("pulse separation must be non-negative, got {bad}"),
        });
    }
    let cal = calibrate_pi_pulse(params, tp, opts)?;
    let intensity = delta_t
        .par_iter()
        .map(|&dt| {
            let pulses = vec![
                GaussianPulse::new(cal.area, tp, T::zero()),
                GaussianPulse::new(cal.area, tp, dt),
            ];
            let drive = DriveField::pulses(pulses, opts.target);
            pulse_emission(params, &drive, opts).map(|e| e.cavity / cal.emission)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DprfScan {
        pulse_duration: tp,
        pi_area: cal.area,
        single_pulse: cal.emission,
        delta_t: delta_t.to_vec(),
        intensity,
    })
}

/// How the three-level system is excited before it relaxes.
#[derive(Clone, Debug, PartialEq)]
pub enum Excitation<T> {
    /// Start with all population in `|f⟩` (impulsive non-resonant pumping).
    PopulateUpper,
    /// Start in the ground state and apply a drive on the `|0⟩ ↔ |X⟩` transition.
    Resonant(DriveField<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationDecay<T> {
    pub times: Vec<T>,
    pub exciton: Vec<T>,
    pub upper: Vec<T>,
    /// Decay constant of the late-time exciton population, ps.
    pub late_decay: T,
}

/// Exciton population of a three-level emitter fed by `|f⟩ → |X⟩`.
///
/// The late-time decay constant is a log-linear least-squares fit over the
/// second half of `[0, t_end]`.
pub fn relaxation_decay<T: Real>(
    params: &SystemParams<T>,
    excitation: &Excitation<T>,
    t_end: T,
    samples: usize,
    opts: &ScanOptions<T>,
) -> Result<RelaxationDecay<T>, DynamicsError> {
    if params.space.levels() != EmitterLevels::Three || params.relax.is_none() {
        return Err(DynamicsError::InvalidParameter {
            name: "relax",
            reason: "relaxation traces need three-level parameters".into(),
        });
    }
    if !(t_end > T::zero()) || samples < 4 {
        return Err(DynamicsError::InvalidGrid("need t_end > 0 and at least 4 samples".into()));
    }
    let (rho, drive) = match excitation {
        Excitation::PopulateUpper => (
            DensityMatrix::basis(&params.space, Level::Upper, 0),
            DriveField::off(),
        ),
        Excitation::Resonant(d) => (DensityMatrix::ground(&params.space), d.clone()),
    };
    let t0 = drive.breakpoints().first().copied().unwrap_or_else(T::zero).min(T::zero());
    let grid = linspace(t0, t_end, samples);
    let res = evolve(&rho, params, &drive, &grid, opts.tol)?;
    let upper = res.populations.upper.clone().unwrap_or_default();
    let late_decay = late_decay_constant(&res.times, &res.populations.exciton, t_end * T::lit(0.5))
        .ok_or_else(|| DynamicsError::Calibration("exciton population vanished before the fit window".into()))?;
    Ok(RelaxationDecay {
        times: res.times,
        exciton: res.populations.exciton,
        upper,
        late_decay,
    })
}

/// −1/slope of ln y against t for t ≥ `from` and y above a noise floor.
fn late_decay_constant<T: Real>(t: &[T], y: &[T], from: T) -> Option<T> {
    let floor = T::lit(1e-13);
    let pts: Vec<(T, T)> = t
        .iter()
        .zip(y)
        .filter(|(t, y)| **t >= from && **y > floor)
        .map(|(t, y)| (*t, y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = T::from_usize_lossy(pts.len());
    let mt = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: T = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let slope = sxy / sxx;
    (slope < T::zero()).then(|| -T::one() / slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn late_decay_of_pure_exponential() {
        let t = linspace(0.0f64, 100.0, 50);
        let y: Vec<f64> = t.iter().map(|t: &f64| 3.0 * (-t / 17.0).exp()).collect();
        assert!((late_decay_constant(&t, &y, 50.0).unwrap() - 17.0).abs() < 1e-9);
    }

    #[test]
    fn relaxation_needs_three_levels() {
        let p = SystemParams::<f64>::device();
        let r = relaxation_decay(&p, &Excitation::PopulateUpper, 100.0, 10, &ScanOptions::default());
        assert!(r.is_err());
    }
}
