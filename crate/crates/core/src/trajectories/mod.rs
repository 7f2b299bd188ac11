//! Quantum-jump unravelling of the master equation and photon counting.

mod experiments;
mod mcwf;
mod stats;

use thiserror::Error;

use crate::dynamics::DynamicsError;

pub use experiments::{
    double_pulse_statistics, g2_vs_pulse_duration, AreaConvention, DoublePulsePoint, DoublePulseStatistics,
    G2Point,
};
pub use mcwf::{
    ensemble_population, run_ensemble, run_trajectory, trajectory_seed, Jump, PopulationEstimate,
    TrajectoryConfig, TrajectoryRecord, DEFAULT_TRAJECTORIES, JUMP_TIME_TOL,
};
pub use stats::{emission_statistics, g2_from_distribution, EmissionStatistics, G2Estimate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("invalid trajectory configuration: {0}")]
    InvalidConfig(String),
    #[error("no trajectory records")]
    Empty,
    #[error("undefined result: {0}")]
    UndefinedResult(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
