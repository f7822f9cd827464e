//! Scenario engine: fibre drift, caching sessions and optics bound into a
//! time-stepped run, plus the metrics and artefacts derived from it.
//!
//! Only the slow loop (drift and protocol, one step per update interval) is
//! simulated in time. Fast phase noise stays spectral and enters through
//! [`jitter_report`].

mod engine;
mod histogram;
mod jitter;
mod report;
mod scenario;

pub use engine::{run_scenario, run_scenario_with};
pub use histogram::{histogram, write_histogram_csv, HistogramBin};
pub use jitter::{
    fading_check, jitter_report, scenario_jitter_table, FadingCheck, JitterRow, JitterTable,
    FADING_THRESHOLD,
};
pub use report::{ReportSummary, RuMetrics, RuSeries, ScenarioReport};
pub use scenario::Scenario;

use thiserror::Error;

use crate::fiber::FiberError;
use crate::noise::NoiseError;
use crate::optics::OpticsError;
use crate::protocol::ProtocolError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("empty series")]
    EmptySeries,
    #[error("histogram bin width must be positive, got {0}")]
    InvalidBinWidth(f64),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl SimError {
    /// True for errors caused by reading or writing files rather than by
    /// the content of the scenario.
    pub fn is_io(&self) -> bool {
        match self {
            SimError::Io(_) => true,
            SimError::Csv(e) => e.is_io_error(),
            SimError::Fiber(FiberError::Io(_)) | SimError::Noise(NoiseError::Io(_)) => true,
            _ => false,
        }
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
