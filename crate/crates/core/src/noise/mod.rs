//! Phase-noise metrology: piecewise power-law PSD profiles, closed-form RMS
//! jitter integration, time-domain phase synthesis and divider transforms.

mod jitter;
mod presets;
mod profile;
pub(crate) mod record;
mod synth;

pub use jitter::{
    integrate_jitter, integrate_jitter_numeric, integrated_phase_power, JitterFigure, STANDARD_BAND,
};
pub use presets::{
    corner_profile, preset_jitter, PresetLibrary, CLOCK_2G5_NO_DATA, CLOCK_2G5_WITH_DATA,
    EMBEDDED_CLOCK_2G5, PRESET_DIR_ENV, RF_CARRIER_25G,
};
pub use profile::{apply_divider, evaluate_psd, PhaseNoiseProfile, Segment};
pub use record::{rms_of_record, PhaseRecord};
pub use synth::synthesize_phase;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("invalid phase-noise profile: {0}")]
    InvalidProfile(String),
    #[error("offset {offset} Hz outside profile range [{min}, {max}] Hz")]
    OffsetOutOfRange { offset: f64, min: f64, max: f64 },
    #[error("invalid integration band [{low}, {high}] Hz")]
    InvalidBand { low: f64, high: f64 },
    #[error("band [{low}, {high}] Hz not covered by profile range [{min}, {max}] Hz")]
    BandOutOfRange {
        low: f64,
        high: f64,
        min: f64,
        max: f64,
    },
    #[error("record length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("sample rate {sample_rate} Hz too low: profile needs at least {required} Hz")]
    SampleRateTooLow { sample_rate: f64, required: f64 },
    #[error("divider ratio must be at least 1")]
    InvalidDivider,
    #[error("phase record is empty")]
    EmptyRecord,
    #[error("invalid phase record: {0}")]
    InvalidRecord(String),
    #[error("cannot calibrate preset: {0}")]
    Calibration(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = NoiseError> = std::result::Result<T, E>;
