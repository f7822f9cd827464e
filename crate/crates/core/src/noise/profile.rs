use serde::{Deserialize, Serialize};

use super::{NoiseError, Result};

/// One power-law piece of a single-sideband phase-noise profile.
///
/// The level in dBc/Hz at offset `f` is
/// `level_dbc_hz + slope_db_per_decade * log10(f / start_hz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(rename = "f_start_hz")]
    pub start_hz: f64,
    #[serde(rename = "f_end_hz")]
    pub end_hz: f64,
    pub level_dbc_hz: f64,
    pub slope_db_per_decade: f64,
}

impl Segment {
    pub fn new(start_hz: f64, end_hz: f64, level_dbc_hz: f64, slope_db_per_decade: f64) -> Self {
        Segment {
            start_hz,
            end_hz,
            level_dbc_hz,
            slope_db_per_decade,
        }
    }

    pub fn level_at(&self, offset: f64) -> f64 {
        self.level_dbc_hz + self.slope_db_per_decade * (offset / self.start_hz).log10()
    }

    pub fn end_level(&self) -> f64 {
        self.level_at(self.end_hz)
    }

    pub fn contains(&self, offset: f64) -> bool {
        offset >= self.start_hz && offset <= self.end_hz
    }

    /// Exact `∫ 10^(L(f)/10) df` over `[lo, hi]`, which must lie inside the
    /// segment. With `L` linear in `log10 f` the integrand is `P0 (f/f0)^a`,
    /// `a = slope / 10`.
    pub fn integrate_linear(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let p0 = 10f64.powf(self.level_dbc_hz / 10.0);
        let b = self.slope_db_per_decade / 10.0 + 1.0;
        let u1 = (lo / self.start_hz).ln();
        let du = (hi / lo).ln();
        if b == 0.0 {
            return p0 * self.start_hz * du;
        }
        // s * (x2^b - x1^b) / b written through expm1 so a ≈ -1 stays accurate.
        p0 * self.start_hz * (b * u1).exp() * (b * du).exp_m1() / b
    }
}

/// Piecewise power-law SSB phase-noise PSD `L(f)` of a carrier.
///
/// Segments are contiguous and strictly increasing. The white floor is just
/// the last (zero-slope) segment; there is no implicit `max` with a floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct PhaseNoiseProfile {
    carrier_hz: f64,
    segments: Vec<Segment>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    carrier_hz: f64,
    segments: Vec<Segment>,
}

impl TryFrom<RawProfile> for PhaseNoiseProfile {
    type Error = NoiseError;

    fn try_from(raw: RawProfile) -> Result<Self> {
        PhaseNoiseProfile::new(raw.carrier_hz, raw.segments)
    }
}

impl From<PhaseNoiseProfile> for RawProfile {
    fn from(p: PhaseNoiseProfile) -> Self {
        RawProfile {
            carrier_hz: p.carrier_hz,
            segments: p.segments,
        }
    }
}

fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

impl PhaseNoiseProfile {
    pub fn new(carrier_hz: f64, segments: Vec<Segment>) -> Result<Self> {
        let invalid = |m: String| Err(NoiseError::InvalidProfile(m));
        if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
            return invalid(format!(
                "carrier frequency must be positive, got {carrier_hz}"
            ));
        }
        if segments.is_empty() {
            return invalid("profile has no segments".into());
        }
        for (i, s) in segments.iter().enumerate() {
            let finite = s.start_hz.is_finite()
                && s.end_hz.is_finite()
                && s.level_dbc_hz.is_finite()
                && s.slope_db_per_decade.is_finite();
            if !finite {
                return invalid(format!("segment {i} has non-finite fields"));
            }
            if !(s.start_hz > 0.0 && s.end_hz > s.start_hz) {
                return invalid(format!(
                    "segment {i} must satisfy 0 < start < end, got [{}, {}]",
                    s.start_hz, s.end_hz
                ));
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            if !same_frequency(pair[0].end_hz, pair[1].start_hz) {
                return invalid(format!(
                    "segments {i} and {} are not contiguous ({} Hz vs {} Hz)",
                    i + 1,
                    pair[0].end_hz,
                    pair[1].start_hz
                ));
            }
        }
        Ok(PhaseNoiseProfile {
            carrier_hz,
            segments,
        })
    }

    /// Single flat segment over `[f_lo, f_hi]`.
    pub fn flat(carrier_hz: f64, level_dbc_hz: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        Self::new(
            carrier_hz,
            vec![Segment::new(f_lo, f_hi, level_dbc_hz, 0.0)],
        )
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn min_offset(&self) -> f64 {
        self.segments[0].start_hz
    }

    pub fn max_offset(&self) -> f64 {
        self.segments[self.segments.len() - 1].end_hz
    }

    /// Level of the highest-offset segment at its upper end.
    pub fn white_floor(&self) -> f64 {
        self.segments[self.segments.len() - 1].end_level()
    }

    /// Segment owning `offset`: half-open `[start, end)` except the last one,
    /// which also owns its end point.
    pub(crate) fn segment_for(&self, offset: f64) -> Option<&Segment> {
        if !(offset >= self.min_offset() && offset <= self.max_offset()) {
            return None;
        }
        self.segments
            .iter()
            .find(|s| offset >= s.start_hz && offset < s.end_hz)
            .or_else(|| self.segments.last())
    }

    /// Linear PSD value `10^(L/10)` in 1/Hz, or zero outside the profile.
    pub(crate) fn linear_or_zero(&self, offset: f64) -> f64 {
        match self.segment_for(offset) {
            Some(s) => 10f64.powf(s.level_at(offset) / 10.0),
            None => 0.0,
        }
    }

    pub fn with_carrier(&self, carrier_hz: f64) -> Result<Self> {
        Self::new(carrier_hz, self.segments.clone())
    }
}

/// `L(offset)` in dBc/Hz.
pub fn evaluate_psd(profile: &PhaseNoiseProfile, offset: f64) -> Result<f64> {
    profile
        .segment_for(offset)
        .map(|s| s.level_at(offset))
        .ok_or(NoiseError::OffsetOutOfRange {
            offset,
            min: profile.min_offset(),
            max: profile.max_offset(),
        })
}

/// Ideal frequency divider by `ratio`: the carrier drops by `ratio` and
/// every level by `20 log10(ratio)` dB, which leaves timing jitter unchanged.
pub fn apply_divider(profile: &PhaseNoiseProfile, ratio: u32) -> Result<PhaseNoiseProfile> {
    if ratio == 0 {
        return Err(NoiseError::InvalidDivider);
    }
    if ratio == 1 {
        return Ok(profile.clone());
    }
    let n = f64::from(ratio);
    let drop_db = 20.0 * n.log10();
    let segments = profile
        .segments
        .iter()
        .map(|s| Segment {
            level_dbc_hz: s.level_dbc_hz - drop_db,
            ..*s
        })
        .collect();
    PhaseNoiseProfile::new(profile.carrier_hz / n, segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_segment() -> PhaseNoiseProfile {
        PhaseNoiseProfile::new(
            2.5e9,
            vec![
                Segment::new(1e3, 1e5, -100.0, -20.0),
                Segment::new(1e5, 1e7, -140.0, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flat_profile_is_constant() {
        let p = PhaseNoiseProfile::flat(2.5e9, -130.0, 1e3, 1e7).unwrap();
        assert_eq!(evaluate_psd(&p, 1e5).unwrap(), -130.0);
    }

    #[test]
    fn one_decade_down_a_slope() {
        let p = PhaseNoiseProfile::new(1e9, vec![Segment::new(1e3, 1e6, -100.0, -20.0)]).unwrap();
        assert!((evaluate_psd(&p, 1e4).unwrap() + 120.0).abs() < 1e-12);
    }

    #[test]
    fn breakpoint_belongs_to_right_segment() {
        let p = two_segment();
        let left_end = p.segments()[0].end_level();
        let at = evaluate_psd(&p, 1e5).unwrap();
        assert_eq!(at, p.segments()[1].level_dbc_hz);
        assert!((at - left_end).abs() < 1e-9);
        // last segment owns its end point
        assert_eq!(evaluate_psd(&p, 1e7).unwrap(), -140.0);
    }

    #[test]
    fn out_of_range_offsets_rejected() {
        let p = two_segment();
        assert!(matches!(
            evaluate_psd(&p, 999.0),
            Err(NoiseError::OffsetOutOfRange { .. })
        ));
        assert!(evaluate_psd(&p, 1.0001e7).is_err());
    }

    #[test]
    fn rejects_gaps_and_bad_carrier() {
        let gap = PhaseNoiseProfile::new(
            1e9,
            vec![
                Segment::new(1e3, 1e4, -100.0, 0.0),
                Segment::new(2e4, 1e5, -100.0, 0.0),
            ],
        );
        assert!(gap.is_err());
        assert!(PhaseNoiseProfile::flat(0.0, -130.0, 1e3, 1e7).is_err());
        assert!(PhaseNoiseProfile::flat(1e9, -130.0, 1e7, 1e3).is_err());
        assert!(PhaseNoiseProfile::new(1e9, vec![]).is_err());
    }

    #[test]
    fn divider_by_four() {
        let p = two_segment();
        let d = apply_divider(&p, 4).unwrap();
        assert_eq!(d.carrier_hz(), 625e6);
        let drop = p.segments()[0].level_dbc_hz - d.segments()[0].level_dbc_hz;
        assert!((drop - 12.041199826559248).abs() < 1e-12);
        assert_eq!(apply_divider(&p, 1).unwrap(), p);
        assert!(matches!(
            apply_divider(&p, 0),
            Err(NoiseError::InvalidDivider)
        ));
    }

    #[test]
    fn json_shape() {
        let p = two_segment();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["carrier_hz"], 2.5e9);
        assert_eq!(v["segments"][1]["f_start_hz"], 1e5);
        assert_eq!(v["segments"][0]["slope_db_per_decade"], -20.0);
        let back: PhaseNoiseProfile = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"carrier_hz": -1, "segments": []}"#;
        assert!(serde_json::from_str::<PhaseNoiseProfile>(bad).is_err());
    }
}
