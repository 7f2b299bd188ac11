use super::mcwf::{run_ensemble, TrajectoryConfig};
use super::stats::{emission_statistics, EmissionStatistics, G2Estimate};
use super::TrajectoryError;
use crate::dynamics::{
    calibrate_pi_pulse, DriveField, DriveTarget, GaussianPulse, ScanOptions, SystemParams,
};
use crate::scalar::Real;

fn scan_options<T: Real>(config: &TrajectoryConfig<T>) -> ScanOptions<T> {
    ScanOptions {
        target: DriveTarget::Emitter,
        tol: config.tol,
        ..ScanOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoublePulsePoint<T> {
    pub delta_tau: T,
    pub p0: T,
    pub p1: T,
    /// P[n ≥ 2].
    pub p2_plus: T,
    pub stats: EmissionStatistics<T>,
}

impl<T: Real> DoublePulsePoint<T> {
    /// Mean counted photons for the pulse pair.
    pub fn expected(&self) -> T {
        self.stats.mean
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoublePulseStatistics<T> {
    pub pulse_duration: T,
    pub pi_area: T,
    pub points: Vec<DoublePulsePoint<T>>,
}

/// Photon-number statistics for two calibrated π-pulses at each delay.
///
/// Counts jumps on `config.jump_channels`; every delay reuses the same
/// master seed. Pulses address the emitter.
pub fn double_pulse_statistics<T: Real>(
    params: &SystemParams<T>,
    tp: T,
    delta_tau: &[T],
    config: &TrajectoryConfig<T>,
) -> Result<DoublePulseStatistics<T>, TrajectoryError> {
    if delta_tau.is_empty() {
        return Err(TrajectoryError::InvalidConfig("empty delay grid".into()));
    }
    if delta_tau.iter().any(|d| !(*d >= T::zero())) {
        return Err(TrajectoryError::InvalidConfig("delays must be non-negative".into()));
    }
    config.validate()?;
    let cal = calibrate_pi_pulse(params, tp, &scan_options(config))?;
    let mut points = Vec::with_capacity(delta_tau.len());
    for &dt in delta_tau {
        let drive = DriveField::pulses(
            vec![GaussianPulse::new(cal.area, tp, T::zero()), GaussianPulse::new(cal.area, tp, dt)],
            DriveTarget::Emitter,
        );
        let records = run_ensemble(params, &drive, config)?;
        let stats = emission_statistics(&records, &config.jump_channels)?;
        points.push(DoublePulsePoint {
            delta_tau: dt,
            p0: stats.p(0),
            p1: stats.p(1),
            p2_plus: stats.p_at_least(2),
            stats,
        });
    }
    Ok(DoublePulseStatistics {
        pulse_duration: tp,
        pi_area: cal.area,
        points,
    })
}

/// How the area of the single excitation pulse is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AreaConvention {
    /// Θ = π exactly, whatever the duration.
    #[default]
    ExactPi,
    /// The first emission maximum, as found by [`calibrate_pi_pulse`].
    ExperimentalPi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Point<T> {
    pub tp_over_t1: T,
    pub pulse_duration: T,
    pub area: T,
    pub g2: G2Estimate<T>,
    pub stats: EmissionStatistics<T>,
}

/// g²(0) of single-pulse excitation against T_P/T₁, with T₁ the radiative
/// lifetime implied by `params`.
pub fn g2_vs_pulse_duration<T: Real>(
    params: &SystemParams<T>,
    tp_over_t1: &[T],
    config: &TrajectoryConfig<T>,
    convention: AreaConvention,
) -> Result<Vec<G2Point<T>>, TrajectoryError> {
    if tp_over_t1.iter().any(|r| !(*r > T::zero()) || !r.is_finite()) {
        return Err(TrajectoryError::InvalidConfig("T_P/T1 values must be positive".into()));
    }
    config.validate()?;
    let t1 = params.radiative_lifetime();
    tp_over_t1
        .iter()
        .map(|&ratio| {
            let tp = ratio * t1;
            let area = match convention {
                AreaConvention::ExactPi => T::PI(),
                AreaConvention::ExperimentalPi => calibrate_pi_pulse(params, tp, &scan_options(config))?.area,
            };
            let drive = DriveField::single_pulse(area, tp, T::zero(), DriveTarget::Emitter);
            let records = run_ensemble(params, &drive, config)?;
            let stats = emission_statistics(&records, &config.jump_channels)?;
            Ok(G2Point {
                tp_over_t1: ratio,
                pulse_duration: tp,
                area,
                g2: stats.g2()?,
                stats,
            })
        })
        .collect()
}
