//! Clock phase caching.
//!
//! The DU measures the round-trip phase of data returned by an RU, modulo
//! one unit interval, and sends the residual to the RU every update
//! interval. The RU accumulates residuals into an unwrapped phase store and
//! drives two quantized phase interpolators from it: `-2δφ` on its return
//! transmitter and `-δφ` on its main clock.

mod config;
mod du;
mod ru;
mod wire;

pub use config::CachingConfig;
pub use du::{du_measure, wrap_residual, Delivery, DuSession};
pub use ru::{
    estimate_uncompensated, quantize, replay, ru_apply_update, ru_clock_offset, CachingState,
    RuSession,
};
pub use wire::{decode_log, encode_log, EventRecord, PhaseUpdateMsg, WIRE_LEN};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error("invalid caching configuration: {0}")]
    InvalidConfig(String),
    #[error("out-of-order update: expected sequence >= {expected}, got {got}")]
    OutOfOrder { expected: u32, got: u32 },
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("malformed wire data: {0}")]
    Wire(String),
}

pub type Result<T, E = ProtocolError> = std::result::Result<T, E>;
