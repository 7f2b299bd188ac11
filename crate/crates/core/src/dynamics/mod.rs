//! Driven Lindblad dynamics of the emitter–cavity system.

mod drive;
mod evolve;
mod integrate;
mod master;
mod params;
mod scans;

use thiserror::Error;

use crate::hilbert::HilbertError;

pub use drive::{DriveField, DriveKind, DriveTarget, GaussianPulse, PULSE_TRUNCATION};
pub use evolve::{
    check_fock_convergence, evolve, linspace, EmittedPhotons, EvolutionResult, FockConvergence, Populations,
    FOCK_CONVERGENCE_TOL,
};
pub use integrate::{integrate_on_grid, Stepper, Tolerance};
pub use master::{
    lindblad_generator, lindblad_generator_reference, Channel, CollapseOperator, MasterEquation, Scratch,
};
pub use params::{Relaxation, SystemParams};
pub use scans::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("drive amplitude is not finite")]
    NonFiniteDrive,
    #[error("integration failed at t = {time} ps: {reason}")]
    IntegrationFailure { time: f64, reason: String },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}
