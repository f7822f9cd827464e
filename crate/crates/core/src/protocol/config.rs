use serde::{Deserialize, Serialize};

use super::{ProtocolError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CachingConfig {
    /// Phase update period `1 / f_φ`, seconds.
    pub update_interval_s: f64,
    /// Bit period of the line rate; phase is only observable modulo this.
    pub unit_interval_s: f64,
    /// Phase interpolator step.
    pub pi_resolution_s: f64,
    /// Gaussian σ of each DU phase measurement.
    pub measurement_noise_sigma_s: f64,
    /// Rate at which the RU clock offset is recorded.
    pub eval_rate_hz: f64,
    /// Fixed DU to RU delivery latency of update messages.
    pub transport_latency_s: f64,
    /// Probability that an update message is lost in transport.
    pub loss_probability: f64,
}

impl Default for CachingConfig {
    fn default() -> Self {
        CachingConfig {
            update_interval_s: 0.1,
            unit_interval_s: 400e-12,
            pi_resolution_s: 3.125e-12,
            measurement_noise_sigma_s: 1e-12,
            eval_rate_hz: 10.0,
            transport_latency_s: 0.1,
            loss_probability: 0.0,
        }
    }
}

impl CachingConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("update_interval_s", self.update_interval_s),
            ("unit_interval_s", self.unit_interval_s),
            ("pi_resolution_s", self.pi_resolution_s),
            ("eval_rate_hz", self.eval_rate_hz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ProtocolError::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.measurement_noise_sigma_s.is_finite() && self.measurement_noise_sigma_s >= 0.0) {
            return Err(ProtocolError::InvalidConfig(
                "noise sigma must be >= 0".into(),
            ));
        }
        if !(self.transport_latency_s.is_finite() && self.transport_latency_s >= 0.0) {
            return Err(ProtocolError::InvalidConfig(
                "transport latency must be >= 0".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.loss_probability) {
            return Err(ProtocolError::InvalidConfig(
                "loss probability must be in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = CachingConfig::default();
        c.validate().unwrap();
        assert_eq!(c.unit_interval_s / c.pi_resolution_s, 128.0);
    }

    #[test]
    fn rejects_nonsense() {
        for c in [
            CachingConfig {
                update_interval_s: 0.0,
                ..Default::default()
            },
            CachingConfig {
                pi_resolution_s: -1.0,
                ..Default::default()
            },
            CachingConfig {
                unit_interval_s: f64::NAN,
                ..Default::default()
            },
            CachingConfig {
                eval_rate_hz: 0.0,
                ..Default::default()
            },
            CachingConfig {
                loss_probability: 1.5,
                ..Default::default()
            },
        ] {
            assert!(c.validate().is_err());
        }
    }

    #[test]
    fn partial_json_uses_defaults() {
        let c: CachingConfig = serde_json::from_str(r#"{"eval_rate_hz": 9540}"#).unwrap();
        assert_eq!(c.eval_rate_hz, 9540.0);
        assert_eq!(c.update_interval_s, 0.1);
    }
}
