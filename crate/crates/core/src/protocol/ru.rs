use serde::{Deserialize, Serialize};

use super::{CachingConfig, PhaseUpdateMsg, ProtocolError, Result};

/// Round to the nearest multiple of `step`.
pub fn quantize(x: f64, step: f64) -> f64 {
    (x / step).round() * step
}

/// RU phase store and interpolator settings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CachingState {
    /// Unwrapped running estimate of `2δφ`.
    pub cached_two_way: f64,
    pub last_wrapped_measurement: f64,
    /// Quantized `-2δφ` applied to the return transmitter.
    pub return_pi_setting: f64,
    /// Quantized `-δφ` applied to the main clock.
    pub clock_pi_setting: f64,
    pub update_count: u64,
    /// Lowest sequence number still acceptable.
    pub next_sequence: u32,
}

/// Applies one update: accumulate the residual, then requantize both
/// interpolators. Sequence numbers may skip (lost messages) but never go
/// backwards.
pub fn ru_apply_update(
    msg: &PhaseUpdateMsg,
    state: &CachingState,
    cfg: &CachingConfig,
) -> Result<CachingState> {
    if msg.sequence_number < state.next_sequence {
        return Err(ProtocolError::OutOfOrder {
            expected: state.next_sequence,
            got: msg.sequence_number,
        });
    }
    let cached_two_way = state.cached_two_way + msg.residual_two_way;
    Ok(CachingState {
        cached_two_way,
        last_wrapped_measurement: msg.residual_two_way,
        return_pi_setting: -quantize(cached_two_way, cfg.pi_resolution_s),
        clock_pi_setting: -quantize(cached_two_way / 2.0, cfg.pi_resolution_s),
        update_count: state.update_count + 1,
        next_sequence: msg.sequence_number.wrapping_add(1),
    })
}

/// Residual RU-vs-DU clock offset after the clock interpolator correction.
pub fn ru_clock_offset(state: &CachingState, true_one_way_forward: f64) -> f64 {
    true_one_way_forward + state.clock_pi_setting
}

/// Drift the RU clock would have shown without caching: the synchronised
/// offset plus half the measured two-way shift.
pub fn estimate_uncompensated(synchronized: &[f64], two_way: &[f64]) -> Result<Vec<f64>> {
    if synchronized.len() != two_way.len() {
        return Err(ProtocolError::LengthMismatch {
            left: synchronized.len(),
            right: two_way.len(),
        });
    }
    Ok(synchronized
        .iter()
        .zip(two_way)
        .map(|(s, w)| s + w / 2.0)
        .collect())
}

/// RU side of one session.
#[derive(Debug, Clone)]
pub struct RuSession {
    cfg: CachingConfig,
    state: CachingState,
}

impl RuSession {
    pub fn new(cfg: CachingConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(RuSession {
            cfg,
            state: CachingState::default(),
        })
    }

    pub fn state(&self) -> &CachingState {
        &self.state
    }

    pub fn apply(&mut self, msg: &PhaseUpdateMsg) -> Result<&CachingState> {
        self.state = ru_apply_update(msg, &self.state, &self.cfg)?;
        Ok(&self.state)
    }

    pub fn clock_offset(&self, true_one_way_forward: f64) -> f64 {
        ru_clock_offset(&self.state, true_one_way_forward)
    }
}

/// Re-applies a recorded update log from an empty store, returning the state
/// after every message.
pub fn replay(messages: &[PhaseUpdateMsg], cfg: &CachingConfig) -> Result<Vec<CachingState>> {
    let mut ru = RuSession::new(*cfg)?;
    messages.iter().map(|m| ru.apply(m).copied()).collect()
}
