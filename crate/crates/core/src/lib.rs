//! Simulation and analysis toolkit for a Purcell-enhanced quantum-dot
//! single-photon source.
//!
//! Units throughout are ps for time and rad/ps for rates and detunings.
//! Energies in μeV are converted with [`units::HBAR_UEV_PS`].
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cavityqed;
pub mod dynamics;
pub mod hilbert;
pub mod trajectories;
pub mod scalar;
pub mod units;

pub use scalar::{Cplx, Real};

pub type Operator64 = hilbert::Operator<f64>;
pub type DensityMatrix64 = hilbert::DensityMatrix<f64>;
pub type PureState64 = hilbert::PureState<f64>;
pub type SystemParams64 = dynamics::SystemParams<f64>;
pub type DriveField64 = dynamics::DriveField<f64>;
