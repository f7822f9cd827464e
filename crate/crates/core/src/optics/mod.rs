//! Optical comb, square-law photodetection into an RF comb, dispersion
//! fading of the detected harmonics, and a scalar link budget / BER model.

mod budget;
mod comb;
mod harmonics;

pub use budget::{
    estimate_ber, estimate_ber_with, q_to_ber, CrosstalkPenalty, LinkBudget, Stage,
    DEFAULT_Q_AT_REFERENCE,
};
pub use comb::{filtered_comb, CombSpec};
pub use harmonics::{
    beat_phase_step, harmonic_amplitude, rf_comb_harmonics, write_harmonics_csv, DispersiveSpan,
    Harmonic, PhotodetectorSpec,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpticsError {
    #[error("invalid comb: {0}")]
    InvalidComb(String),
    #[error("invalid dispersive span: {0}")]
    InvalidSpan(String),
    #[error("invalid photodetector: {0}")]
    InvalidDetector(String),
    #[error("filter bandwidth must be positive, got {0} Hz")]
    InvalidFilter(f64),
    #[error("{bandwidth_hz} Hz filter removes every comb line")]
    FilterRemovesAll { bandwidth_hz: f64 },
    #[error("no beat harmonic fits: f_rep {f_rep_hz} Hz, detector bandwidth {bandwidth_hz} Hz, {n_lines} lines")]
    NoHarmonics {
        f_rep_hz: f64,
        bandwidth_hz: f64,
        n_lines: usize,
    },
    #[error("invalid link budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = OpticsError> = std::result::Result<T, E>;
