//! Fitting and correction procedures applied to measured or simulated
//! curves: IRF convolution, lifetime and RRS fits, spectrum decomposition,
//! HOM peak areas and visibility corrections.
//!
//! Background (laser leakage) subtraction is left to the caller.

mod curve;
mod fits;
mod hom;
mod irf;
mod lm;
mod mollow;
mod spectrum;
pub mod synthetic;

use thiserror::Error;

pub use curve::SampledCurve;
pub use fits::{
    fit_exponential_recovery, fit_naive_decay, fit_rrs_curve, rrs_model, DecayFit, RecoveryFit, RrsFit,
    TailWindow,
};
pub use hom::{
    corrected_visibility_santori, corrected_visibility_somaschi, fit_hom_peaks, hom_peak_model, ideal_raw_visibility,
    raw_visibility, santori_from_raw, CorrectedVisibility, HomCorrectionParams, HomPeakAreas, Visibility,
};
pub use irf::{convolve_irf, gaussian_kernel, MIN_POINTS_PER_FWHM};
pub use lm::{levenberg_marquardt, multi_start, FitOptions, FitResult};
pub use mollow::{mollow_calibration, MollowCalibration};
pub use spectrum::{decompose_fp_spectrum, FpDecomposition, FpOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid input `{name}`: {reason}")]
    InvalidInput { name: &'static str, reason: String },
    #[error("grid too coarse: {points_per_fwhm:.2} points per FWHM, need at least {required}")]
    Resolution { points_per_fwhm: f64, required: usize },
    #[error("fit did not converge after {iterations} iterations (residual norm {residual_norm:e})")]
    FitFailure { iterations: usize, residual_norm: f64 },
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("fit returned a negative area: {0}")]
    NegativeArea(String),
    #[error("overlapping peaks: spacing {spacing} below 1.5 × FWHM {fwhm}")]
    OverlappingPeaks { spacing: f64, fwhm: f64 },
    #[error("unusable configuration: {0}")]
    Unusable(String),
}
