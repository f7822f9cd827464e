use serde::{Deserialize, Serialize};

use super::{ProtocolError, Result};

/// Encoded size of one update: `u32` sequence, `i64` residual in fs,
/// `u64` timestamp in ns, all little-endian.
pub const WIRE_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseUpdateMsg {
    pub sequence_number: u32,
    /// Wrapped two-way residual, seconds.
    pub residual_two_way: f64,
    /// DU measurement time, seconds.
    pub timestamp: f64,
}

impl PhaseUpdateMsg {
    /// Residual and timestamp are rounded to whole femtoseconds and
    /// nanoseconds; negative timestamps are invalid.
    pub fn encode(&self) -> Result<[u8; WIRE_LEN]> {
        let fs = (self.residual_two_way * 1e15).round();
        let ns = (self.timestamp * 1e9).round();
        if !(fs.is_finite() && fs.abs() < i64::MAX as f64) {
            return Err(ProtocolError::Wire(format!(
                "residual {} s out of range",
                self.residual_two_way
            )));
        }
        if !(ns.is_finite() && ns >= 0.0 && ns < u64::MAX as f64) {
            return Err(ProtocolError::Wire(format!(
                "timestamp {} s out of range",
                self.timestamp
            )));
        }
        let mut out = [0u8; WIRE_LEN];
        out[0..4].copy_from_slice(&self.sequence_number.to_le_bytes());
        out[4..12].copy_from_slice(&(fs as i64).to_le_bytes());
        out[12..20].copy_from_slice(&(ns as u64).to_le_bytes());
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let b: &[u8; WIRE_LEN] = bytes.try_into().map_err(|_| {
            ProtocolError::Wire(format!("expected {WIRE_LEN} bytes, got {}", bytes.len()))
        })?;
        let seq = u32::from_le_bytes(b[0..4].try_into().expect("4 bytes"));
        let fs = i64::from_le_bytes(b[4..12].try_into().expect("8 bytes"));
        let ns = u64::from_le_bytes(b[12..20].try_into().expect("8 bytes"));
        Ok(PhaseUpdateMsg {
            sequence_number: seq,
            residual_two_way: fs as f64 * 1e-15,
            timestamp: ns as f64 * 1e-9,
        })
    }
}

pub fn encode_log(messages: &[PhaseUpdateMsg]) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(messages.len() * WIRE_LEN);
    for m in messages {
        out.extend_from_slice(&m.encode()?);
    }
    Ok(out)
}

pub fn decode_log(bytes: &[u8]) -> Result<Vec<PhaseUpdateMsg>> {
    if !bytes.len().is_multiple_of(WIRE_LEN) {
        return Err(ProtocolError::Wire(format!(
            "log length {} is not a multiple of {WIRE_LEN}",
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(WIRE_LEN)
        .map(PhaseUpdateMsg::decode)
        .collect()
}

/// One row of a session event log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub time_s: f64,
    pub sequence_number: u32,
    pub residual_s: f64,
    pub delivered: bool,
    pub cached_two_way_s: f64,
    pub return_pi_s: f64,
    pub clock_pi_s: f64,
}
