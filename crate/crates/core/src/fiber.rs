//! Fibre propagation delay and its temperature-driven drift.
//!
//! Drift is quasi-static: the delay follows the temperature instantly, and
//! only the change since `t = 0` is reported as the one-way shift `δφ(t)`.

use std::f64::consts::PI;
use std::io::Read;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optics::DispersiveSpan;
use crate::units::{PICOSECOND, PS_PER_NM_KM, SPEED_OF_LIGHT};

#[derive(Debug, Error)]
pub enum FiberError {
    #[error("invalid fibre link: {0}")]
    InvalidLink(String),
    #[error("invalid temperature profile: {0}")]
    InvalidProfile(String),
    #[error("time {t} s outside temperature trace [{start}, {end}] s")]
    OutsideTrace { t: f64, start: f64, end: f64 },
    #[error("temperature trace {0:?} has not been loaded")]
    UnresolvedTrace(PathBuf),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = FiberError> = std::result::Result<T, E>;

/// SSMF thermal delay coefficient, ps/(km·K).
pub const SSMF_THERMAL_COEFF: f64 = 39.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub time_s: f64,
    pub temp_k: f64,
}

/// Temperature seen by a fibre as a function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TemperatureProfile {
    Sinusoid {
        amplitude_k: f64,
        period_s: f64,
        #[serde(default)]
        phase_rad: f64,
        mean_k: f64,
    },
    Ramp {
        rate_k_per_s: f64,
        start_k: f64,
    },
    /// Linearly interpolated samples. In scenario files the samples may be
    /// given through `path`, a `time_s,temp_k` CSV resolved at load time.
    Trace {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        samples: Vec<TracePoint>,
    },
}

impl TemperatureProfile {
    /// One kelvin of diurnal swing around 293.15 K.
    pub fn diurnal() -> Self {
        TemperatureProfile::Sinusoid {
            amplitude_k: 1.0,
            period_s: 86_400.0,
            phase_rad: 0.0,
            mean_k: 293.15,
        }
    }

    pub fn constant(temp_k: f64) -> Self {
        TemperatureProfile::Ramp {
            rate_k_per_s: 0.0,
            start_k: temp_k,
        }
    }

    pub fn trace(samples: Vec<TracePoint>) -> Result<Self> {
        let p = TemperatureProfile::Trace {
            path: None,
            samples,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parses `time_s,temp_k` rows.
    pub fn trace_from_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let samples = rdr
            .deserialize::<TracePoint>()
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::trace(samples)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FiberError::InvalidProfile(m.to_string()));
        match self {
            TemperatureProfile::Sinusoid {
                amplitude_k,
                period_s,
                phase_rad,
                mean_k,
            } => {
                if !(period_s.is_finite() && *period_s > 0.0) {
                    return bad("sinusoid period must be positive");
                }
                if ![amplitude_k, phase_rad, mean_k]
                    .iter()
                    .all(|v| v.is_finite())
                {
                    return bad("sinusoid parameters must be finite");
                }
            }
            TemperatureProfile::Ramp {
                rate_k_per_s,
                start_k,
            } => {
                if !(rate_k_per_s.is_finite() && start_k.is_finite()) {
                    return bad("ramp parameters must be finite");
                }
            }
            TemperatureProfile::Trace { path, samples } => {
                if samples.is_empty() {
                    return match path {
                        Some(p) => Err(FiberError::UnresolvedTrace(p.clone())),
                        None => bad("trace has no samples"),
                    };
                }
                if samples.len() < 2 {
                    return bad("trace needs at least two samples");
                }
                if samples
                    .iter()
                    .any(|s| !(s.time_s.is_finite() && s.temp_k.is_finite()))
                {
                    return bad("trace samples must be finite");
                }
                if samples.windows(2).any(|w| w[1].time_s <= w[0].time_s) {
                    return bad("trace timestamps must be strictly increasing");
                }
            }
        }
        Ok(())
    }

    /// Time span over which the profile is defined; `None` means unbounded.
    pub fn span(&self) -> Option<(f64, f64)> {
        match self {
            TemperatureProfile::Trace { samples, .. } if !samples.is_empty() => {
                Some((samples[0].time_s, samples[samples.len() - 1].time_s))
            }
            _ => None,
        }
    }

    pub fn temperature_at(&self, t: f64) -> Result<f64> {
        match self {
            TemperatureProfile::Sinusoid {
                amplitude_k,
                period_s,
                phase_rad,
                mean_k,
            } => Ok(mean_k + amplitude_k * (2.0 * PI * t / period_s + phase_rad).sin()),
            TemperatureProfile::Ramp {
                rate_k_per_s,
                start_k,
            } => Ok(start_k + rate_k_per_s * t),
            TemperatureProfile::Trace { path, samples } => {
                if samples.is_empty() {
                    return Err(match path {
                        Some(p) => FiberError::UnresolvedTrace(p.clone()),
                        None => FiberError::InvalidProfile("trace has no samples".into()),
                    });
                }
                let (start, end) = (samples[0].time_s, samples[samples.len() - 1].time_s);
                if !(t >= start && t <= end) {
                    return Err(FiberError::OutsideTrace { t, start, end });
                }
                let i = samples
                    .partition_point(|s| s.time_s <= t)
                    .clamp(1, samples.len() - 1);
                let (a, b) = (samples[i - 1], samples[i]);
                let frac = (t - a.time_s) / (b.time_s - a.time_s);
                Ok(a.temp_k + frac * (b.temp_k - a.temp_k))
            }
        }
    }
}

/// A fibre span with its thermal delay coefficient and temperature profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberLink {
    pub length_km: f64,
    #[serde(default = "default_thermal_coeff")]
    pub thermal_coeff_ps_per_km_k: f64,
    #[serde(default = "default_group_index")]
    pub group_index: f64,
    #[serde(default = "default_attenuation")]
    pub attenuation_db_per_km: f64,
    #[serde(default = "default_dispersion")]
    pub dispersion_ps_per_nm_km: f64,
    pub profile: TemperatureProfile,
}

fn default_thermal_coeff() -> f64 {
    SSMF_THERMAL_COEFF
}
fn default_group_index() -> f64 {
    1.4682
}
fn default_attenuation() -> f64 {
    0.2
}
fn default_dispersion() -> f64 {
    17.0
}

impl FiberLink {
    pub fn ssmf(length_km: f64, profile: TemperatureProfile) -> Self {
        FiberLink {
            length_km,
            thermal_coeff_ps_per_km_k: SSMF_THERMAL_COEFF,
            group_index: default_group_index(),
            attenuation_db_per_km: default_attenuation(),
            dispersion_ps_per_nm_km: default_dispersion(),
            profile,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_km.is_finite() && self.length_km >= 0.0) {
            return Err(FiberError::InvalidLink(format!(
                "length must be >= 0 km, got {}",
                self.length_km
            )));
        }
        let finite = [
            self.thermal_coeff_ps_per_km_k,
            self.attenuation_db_per_km,
            self.dispersion_ps_per_nm_km,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite || !(self.group_index >= 1.0) {
            return Err(FiberError::InvalidLink(
                "non-physical fibre parameters".into(),
            ));
        }
        self.profile.validate()
    }

    /// Propagation delay at the reference temperature, seconds.
    pub fn base_delay(&self) -> f64 {
        self.length_km * 1e3 * self.group_index / SPEED_OF_LIGHT
    }

    pub fn loss_db(&self) -> f64 {
        self.length_km * self.attenuation_db_per_km
    }

    /// Delay change per kelvin for the whole span, seconds/K.
    pub fn drift_per_kelvin(&self) -> f64 {
        self.length_km * self.thermal_coeff_ps_per_km_k * PICOSECOND
    }

    pub fn dispersive_span(&self) -> DispersiveSpan {
        DispersiveSpan {
            length_m: self.length_km * 1e3,
            dispersion_s_per_m2: self.dispersion_ps_per_nm_km * PS_PER_NM_KM,
            reference_wavelength_m: 1550e-9,
        }
    }
}

/// Two-way delay change split into its directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoWayShift {
    pub forward: f64,
    pub return_path: f64,
}

impl TwoWayShift {
    pub fn total(&self) -> f64 {
        self.forward + self.return_path
    }
}

/// `δφ(t) = L · coeff · (T(t) - T(0))`, seconds.
pub fn one_way_shift(link: &FiberLink, t: f64) -> Result<f64> {
    let dt = link.profile.temperature_at(t)? - link.profile.temperature_at(0.0)?;
    Ok(link.drift_per_kelvin() * dt)
}

/// Forward `(1 + a) δφ` and return `(1 - a) δφ` for fractional imbalance `a`.
pub fn two_way_shift(link: &FiberLink, t: f64, asymmetry: f64) -> Result<TwoWayShift> {
    if !(-1.0..=1.0).contains(&asymmetry) {
        return Err(FiberError::InvalidLink(format!(
            "asymmetry must be within [-1, 1], got {asymmetry}"
        )));
    }
    let d = one_way_shift(link, t)?;
    Ok(TwoWayShift {
        forward: (1.0 + asymmetry) * d,
        return_path: (1.0 - asymmetry) * d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp_link(km: f64) -> FiberLink {
        // +1 K after 1 s
        FiberLink::ssmf(
            km,
            TemperatureProfile::Ramp {
                rate_k_per_s: 1.0,
                start_k: 290.0,
            },
        )
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1e-15)
    }

    #[test]
    fn trunk_one_kelvin() {
        assert!(close(
            one_way_shift(&ramp_link(13.0), 1.0).unwrap(),
            507e-12
        ));
        assert_eq!(one_way_shift(&ramp_link(13.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn feeder_one_kelvin() {
        assert!(close(
            one_way_shift(&ramp_link(0.08), 1.0).unwrap(),
            3.12e-12
        ));
    }

    #[test]
    fn two_way_symmetric_and_asymmetric() {
        let l = ramp_link(13.0);
        let s = two_way_shift(&l, 1.0, 0.0).unwrap();
        assert!(close(s.total(), 1014e-12));
        // δφ = 100 ps
        let l = ramp_link(100.0 / 39.0);
        let s = two_way_shift(&l, 1.0, 0.1).unwrap();
        assert!(close(s.total(), 200e-12));
        assert!(close(s.forward, 110e-12));
        assert!(close(s.forward - s.total() / 2.0, 10e-12));
        assert!(two_way_shift(&l, 1.0, 1.5).is_err());
    }

    #[test]
    fn trace_interpolates_and_bounds() {
        let csv = "time_s,temp_k\n0,290\n10,291\n20,290\n";
        let p = TemperatureProfile::trace_from_csv(csv.as_bytes()).unwrap();
        assert!(close(p.temperature_at(5.0).unwrap(), 290.5));
        assert!(close(p.temperature_at(15.0).unwrap(), 290.5));
        assert_eq!(p.temperature_at(20.0).unwrap(), 290.0);
        assert!(matches!(
            p.temperature_at(20.5),
            Err(FiberError::OutsideTrace { .. })
        ));
        assert_eq!(p.span(), Some((0.0, 20.0)));
    }

    #[test]
    fn trace_validation() {
        let unordered = "time_s,temp_k\n0,290\n0,291\n";
        assert!(TemperatureProfile::trace_from_csv(unordered.as_bytes()).is_err());
        let unresolved = TemperatureProfile::Trace {
            path: Some("x.csv".into()),
            samples: vec![],
        };
        assert!(matches!(
            unresolved.validate(),
            Err(FiberError::UnresolvedTrace(_))
        ));
        let bad_sine = TemperatureProfile::Sinusoid {
            amplitude_k: 1.0,
            period_s: 0.0,
            phase_rad: 0.0,
            mean_k: 290.0,
        };
        assert!(bad_sine.validate().is_err());
    }

    #[test]
    fn sinusoid_peak_to_trough() {
        let link = FiberLink::ssmf(13.0, TemperatureProfile::diurnal());
        let n = 10_000;
        let shifts: Vec<f64> = (0..=n)
            .map(|i| one_way_shift(&link, 86_400.0 * i as f64 / n as f64).unwrap())
            .collect();
        let max = shifts.iter().cloned().fold(f64::MIN, f64::max);
        let min = shifts.iter().cloned().fold(f64::MAX, f64::min);
        assert!(close(max - min, 13.0 * 39.0 * 2.0 * 1e-12));
    }

    #[test]
    fn base_delay_of_trunk() {
        let link = FiberLink::ssmf(13.0, TemperatureProfile::diurnal());
        assert!((link.base_delay() - 63.66e-6).abs() < 0.01e-6);
    }

    #[test]
    fn json_defaults() {
        let j = r#"{"length_km": 13, "profile": {"kind": "ramp", "rate_k_per_s": 0.0, "start_k": 290}}"#;
        let l: FiberLink = serde_json::from_str(j).unwrap();
        assert_eq!(l.thermal_coeff_ps_per_km_k, 39.0);
        assert_eq!(l.dispersion_ps_per_nm_km, 17.0);
    }

    proptest! {
        #[test]
        fn linear_in_length_and_delta_t(
            km in 0.0f64..100.0,
            scale in 0.1f64..10.0,
            rate in -2.0f64..2.0,
            t in 0.0f64..100.0,
        ) {
            let mk = |km: f64, rate: f64| FiberLink::ssmf(km, TemperatureProfile::Ramp { rate_k_per_s: rate, start_k: 290.0 });
            let base = one_way_shift(&mk(km, rate), t).unwrap();
            let longer = one_way_shift(&mk(km * scale, rate), t).unwrap();
            let hotter = one_way_shift(&mk(km, rate * scale), t).unwrap();
            let tol = 1e-9 * (base.abs() * scale).max(1e-21);
            prop_assert!((longer - scale * base).abs() <= tol);
            prop_assert!((hotter - scale * base).abs() <= tol);
            let two = two_way_shift(&mk(km, rate), t, 0.0).unwrap();
            prop_assert_eq!(two.total(), 2.0 * base);
        }
    }
}
