use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Result, SimError};
use crate::fiber::{FiberLink, TemperatureProfile};
use crate::noise::{
    PresetLibrary, CLOCK_2G5_NO_DATA, CLOCK_2G5_WITH_DATA, EMBEDDED_CLOCK_2G5, RF_CARRIER_25G,
};
use crate::optics::{CombSpec, PhotodetectorSpec};
use crate::protocol::CachingConfig;

/// Complete description of one simulated DU with its RUs.
///
/// Every RU shares the trunk. Its feeder only sits on the outbound path:
/// return data goes straight back over the trunk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub trunk: FiberLink,
    pub feeders: Vec<FiberLink>,
    pub n_rus: usize,
    /// Fractional forward/return imbalance of the trunk delay drift.
    #[serde(default)]
    pub asymmetry: f64,
    pub comb: CombSpec,
    pub obpf_bandwidth_hz: f64,
    pub pd: PhotodetectorSpec,
    /// RF carrier frequency checked for dispersion fading.
    pub rf_carrier_hz: f64,
    pub caching: CachingConfig,
    #[serde(default = "yes")]
    pub caching_enabled: bool,
    pub duration_s: f64,
    #[serde(default)]
    pub noise_presets: Vec<String>,
    pub seed: u64,
    pub histogram_bin_width_s: f64,
}

fn yes() -> bool {
    true
}

impl Default for Scenario {
    /// 16 h over 13 km SSMF with two RUs on 80 m feeders, 2.5 GHz comb
    /// through a 50 GHz OBPF onto a 40 GHz photodiode, 0.1 s updates.
    fn default() -> Self {
        let feeder = FiberLink::ssmf(0.08, TemperatureProfile::diurnal());
        Scenario {
            name: "default".into(),
            trunk: FiberLink::ssmf(13.0, TemperatureProfile::diurnal()),
            feeders: vec![feeder.clone(), feeder],
            n_rus: 2,
            asymmetry: 0.0,
            comb: CombSpec::fronthaul_source(),
            obpf_bandwidth_hz: 50e9,
            pd: PhotodetectorSpec::new(40e9).expect("positive bandwidth"),
            rf_carrier_hz: 25e9,
            caching: CachingConfig::default(),
            caching_enabled: true,
            duration_s: 57_600.0,
            noise_presets: [
                RF_CARRIER_25G,
                CLOCK_2G5_NO_DATA,
                CLOCK_2G5_WITH_DATA,
                EMBEDDED_CLOCK_2G5,
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            seed: 1,
            histogram_bin_width_s: 0.25e-12,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a scenario file and loads any temperature trace it references,
    /// resolving relative paths against the scenario's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut s = Self::from_json(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for link in std::iter::once(&mut s.trunk).chain(s.feeders.iter_mut()) {
            if let TemperatureProfile::Trace {
                path: Some(p),
                samples,
            } = &mut link.profile
            {
                if samples.is_empty() {
                    let full = if p.is_absolute() {
                        p.clone()
                    } else {
                        base.join(&*p)
                    };
                    let loaded = TemperatureProfile::trace_from_csv(fs::File::open(&full)?)?;
                    if let TemperatureProfile::Trace { samples: s2, .. } = loaded {
                        *samples = s2;
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario serialises");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn validate(&self, presets: &PresetLibrary) -> Result<()> {
        let bad = |m: String| Err(SimError::InvalidScenario(m));
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return bad(format!(
                "duration must be positive, got {}",
                self.duration_s
            ));
        }
        if self.n_rus == 0 {
            return bad("need at least one RU".into());
        }
        if self.feeders.len() != self.n_rus {
            return bad(format!(
                "{} feeders listed for {} RUs",
                self.feeders.len(),
                self.n_rus
            ));
        }
        if !(-1.0..=1.0).contains(&self.asymmetry) {
            return bad(format!(
                "asymmetry must be within [-1, 1], got {}",
                self.asymmetry
            ));
        }
        if !(self.histogram_bin_width_s > 0.0) {
            return bad("histogram bin width must be positive".into());
        }
        if !(self.obpf_bandwidth_hz > 0.0) {
            return bad("OBPF bandwidth must be positive".into());
        }
        if !(self.pd.bandwidth_hz > 0.0) {
            return bad("photodiode bandwidth must be positive".into());
        }
        if !(self.rf_carrier_hz > 0.0) {
            return bad("RF carrier must be positive".into());
        }
        self.caching.validate()?;
        for (i, link) in std::iter::once(&self.trunk)
            .chain(&self.feeders)
            .enumerate()
        {
            link.validate()?;
            if let Some((start, end)) = link.profile.span() {
                if start > 0.0 || end < self.duration_s {
                    return bad(format!(
                        "temperature trace of link {i} covers [{start}, {end}] s, run needs [0, {}] s",
                        self.duration_s
                    ));
                }
            }
        }
        for name in &self.noise_presets {
            presets.get(name)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_validates() {
        Scenario::default()
            .validate(&PresetLibrary::builtin())
            .unwrap();
    }

    #[test]
    fn json_roundtrip_and_hash() {
        let s = Scenario::default();
        let back = Scenario::from_json(&s.to_json_pretty().unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.config_hash(), s.config_hash());
        let mut other = s.clone();
        other.seed = 2;
        assert_ne!(other.config_hash(), s.config_hash());
    }

    #[test]
    fn invalid_cases() {
        let lib = PresetLibrary::builtin();
        let s = Scenario {
            n_rus: 3,
            ..Scenario::default()
        };
        assert!(s.validate(&lib).is_err());
        let s = Scenario {
            duration_s: 0.0,
            ..Scenario::default()
        };
        assert!(s.validate(&lib).is_err());
        let mut s = Scenario::default();
        s.noise_presets.push("missing".into());
        assert!(s.validate(&lib).is_err());
        let mut s = Scenario::default();
        s.trunk.profile = TemperatureProfile::trace(vec![
            crate::fiber::TracePoint {
                time_s: 0.0,
                temp_k: 290.0,
            },
            crate::fiber::TracePoint {
                time_s: 100.0,
                temp_k: 291.0,
            },
        ])
        .unwrap();
        assert!(matches!(
            s.validate(&lib),
            Err(SimError::InvalidScenario(_))
        ));
    }

    #[test]
    fn load_resolves_trace_relative_to_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("temps.csv"),
            "time_s,temp_k\n0,290\n100,291\n",
        )
        .unwrap();
        let mut s = Scenario {
            duration_s: 100.0,
            ..Scenario::default()
        };
        s.trunk.profile = TemperatureProfile::Trace {
            path: Some("temps.csv".into()),
            samples: vec![],
        };
        let path = dir.path().join("s.json");
        fs::write(&path, s.to_json_pretty().unwrap()).unwrap();
        let loaded = Scenario::load(&path).unwrap();
        assert_eq!(loaded.trunk.profile.span(), Some((0.0, 100.0)));
        loaded.validate(&PresetLibrary::builtin()).unwrap();
    }
}
