//! Named reference profiles for the carriers and clocks of the fronthaul
//! link. Only integrated jitter totals and the white floor are known, so each
//! preset is a 1/f² skirt falling onto a flat floor, with the corner solved
//! so the 1 kHz to 10 MHz jitter lands on the target.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use super::{integrate_jitter, NoiseError, PhaseNoiseProfile, Result, Segment, STANDARD_BAND};

/// Environment variable naming a directory of `*.json` profiles that
/// replaces the built-in presets.
pub const PRESET_DIR_ENV: &str = "COMBSYNC_PRESET_DIR";

pub const RF_CARRIER_25G: &str = "rf-carrier-25ghz";
pub const CLOCK_2G5_NO_DATA: &str = "clock-2g5-no-data";
pub const CLOCK_2G5_WITH_DATA: &str = "clock-2g5-with-data";
pub const EMBEDDED_CLOCK_2G5: &str = "embedded-clock-2g5";

/// (name, carrier Hz, floor dBc/Hz, target RMS jitter s over the standard band)
const BUILTIN: [(&str, f64, f64, f64); 4] = [
    (RF_CARRIER_25G, 25e9, -131.0, 90.0e-15),
    (CLOCK_2G5_NO_DATA, 2.5e9, -140.0, 70.3e-15),
    (CLOCK_2G5_WITH_DATA, 2.5e9, -136.0, 93.1e-15),
    (EMBEDDED_CLOCK_2G5, 2.5e9, -110.0, 18.0e-12),
];

/// Builds a two-piece profile over `band`: `-20 dB/decade` from `band.0` down
/// to a corner, then `floor_dbc_hz` flat up to `band.1`.
///
/// With the floor's linear level `P` and corner `c`, the integral is
/// `P (c²/f_lo - 2c + f_hi)`; setting it to `(σ 2π f_c)² / 2` gives a
/// quadratic in `c` whose larger root is taken.
pub fn corner_profile(
    carrier_hz: f64,
    floor_dbc_hz: f64,
    target_jitter: f64,
    band: (f64, f64),
) -> Result<PhaseNoiseProfile> {
    let (f_lo, f_hi) = band;
    let floor = 10f64.powf(floor_dbc_hz / 10.0);
    let power = (target_jitter * 2.0 * PI * carrier_hz).powi(2) / 2.0;
    let ratio = power / floor;
    let disc = 1.0 - (f_hi - ratio) / f_lo;
    if disc < -1e-9 {
        return Err(NoiseError::Calibration(format!(
            "floor {floor_dbc_hz} dBc/Hz alone exceeds target {target_jitter:e} s"
        )));
    }
    let corner = f_lo * (1.0 + disc.max(0.0).sqrt());
    if corner >= f_hi {
        return Err(NoiseError::Calibration(format!(
            "corner {corner:e} Hz falls outside band; raise the floor"
        )));
    }
    let mut segments = Vec::with_capacity(2);
    if corner > f_lo * (1.0 + 1e-5) {
        let skirt_start = floor_dbc_hz + 20.0 * (corner / f_lo).log10();
        segments.push(Segment::new(f_lo, corner, skirt_start, -20.0));
    }
    segments.push(Segment::new(
        segments.last().map_or(f_lo, |s: &Segment| s.end_hz),
        f_hi,
        floor_dbc_hz,
        0.0,
    ));
    PhaseNoiseProfile::new(carrier_hz, segments)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PresetLibrary {
    profiles: BTreeMap<String, PhaseNoiseProfile>,
}

impl PresetLibrary {
    pub fn builtin() -> Self {
        let profiles = BUILTIN
            .iter()
            .map(|&(name, fc, floor, target)| {
                let p = corner_profile(fc, floor, target, STANDARD_BAND)
                    .expect("built-in preset parameters are consistent");
                (name.to_string(), p)
            })
            .collect();
        PresetLibrary { profiles }
    }

    /// Loads every `*.json` file in `dir`; the file stem is the preset name.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut profiles = BTreeMap::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let Some(name) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let profile: PhaseNoiseProfile = serde_json::from_slice(&fs::read(&path)?)?;
            profiles.insert(name.to_string(), profile);
        }
        Ok(PresetLibrary { profiles })
    }

    /// Built-in presets unless `COMBSYNC_PRESET_DIR` is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(PRESET_DIR_ENV) {
            Some(dir) => Self::load_dir(Path::new(&dir)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, profile) in &self.profiles {
            let json = serde_json::to_string_pretty(profile)?;
            fs::write(dir.join(format!("{name}.json")), json + "\n")?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&PhaseNoiseProfile> {
        self.profiles
            .get(name)
            .ok_or_else(|| NoiseError::UnknownPreset(name.to_string()))
    }

    pub fn insert(&mut self, name: impl Into<String>, profile: PhaseNoiseProfile) {
        self.profiles.insert(name.into(), profile);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PhaseNoiseProfile)> {
        self.profiles.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// Standard-band jitter of a named preset.
pub fn preset_jitter(lib: &PresetLibrary, name: &str) -> Result<f64> {
    Ok(integrate_jitter(lib.get(name)?, STANDARD_BAND)?.rms_jitter)
}
