use serde::{Deserialize, Serialize};

use super::{Result, Scenario};
use crate::noise::{integrate_jitter, PresetLibrary, STANDARD_BAND};
use crate::optics::{filtered_comb, harmonic_amplitude};

/// Minimum normalised beat amplitude for a carrier to count as surviving
/// dispersion fading.
pub const FADING_THRESHOLD: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JitterRow {
    pub name: String,
    pub carrier_hz: f64,
    pub rms_jitter_s: f64,
    pub band_hz: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FadingCheck {
    pub harmonic: usize,
    pub freq_hz: f64,
    pub filter_bandwidth_hz: f64,
    pub fiber_length_km: f64,
    pub amplitude: f64,
    pub threshold: f64,
    pub survives: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JitterTable {
    pub rows: Vec<JitterRow>,
    pub fading: Option<FadingCheck>,
}

/// Standard-band jitter of each named preset.
pub fn jitter_report<'a>(
    presets: &PresetLibrary,
    names: impl IntoIterator<Item = &'a str>,
) -> Result<Vec<JitterRow>> {
    names
        .into_iter()
        .map(|name| {
            let p = presets.get(name)?;
            let j = integrate_jitter(p, STANDARD_BAND)?;
            Ok(JitterRow {
                name: name.to_string(),
                carrier_hz: p.carrier_hz(),
                rms_jitter_s: j.rms_jitter,
                band_hz: STANDARD_BAND,
            })
        })
        .collect()
}

/// Beat amplitude of the scenario's RF carrier harmonic after the OBPF and
/// the trunk plus first feeder.
pub fn fading_check(s: &Scenario) -> Result<FadingCheck> {
    let comb = filtered_comb(&s.comb, s.obpf_bandwidth_hz)?;
    let harmonic = (s.rf_carrier_hz / comb.f_rep_hz()).round() as usize;
    let mut span = s.trunk.dispersive_span();
    if let Some(feeder) = s.feeders.first() {
        span.length_m += feeder.length_km * 1e3;
    }
    let amplitude = harmonic_amplitude(&comb, &span, harmonic);
    Ok(FadingCheck {
        harmonic,
        freq_hz: harmonic as f64 * comb.f_rep_hz(),
        filter_bandwidth_hz: s.obpf_bandwidth_hz,
        fiber_length_km: span.length_m / 1e3,
        amplitude,
        threshold: FADING_THRESHOLD,
        survives: amplitude >= FADING_THRESHOLD,
    })
}

/// Preset jitter rows plus the fading check for `s`.
pub fn scenario_jitter_table(s: &Scenario, presets: &PresetLibrary) -> Result<JitterTable> {
    Ok(JitterTable {
        rows: jitter_report(presets, s.noise_presets.iter().map(String::as_str))?,
        fading: Some(fading_check(s)?),
    })
}
