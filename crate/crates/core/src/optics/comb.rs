use serde::{Deserialize, Serialize};

use super::{OpticsError, Result};

/// Optical frequency comb: `n_lines` lines spaced by `f_rep_hz`, centred on
/// `center_wavelength_m`, each with a linear field amplitude weight.
///
/// Line `i` sits at `(i - (n - 1) / 2) · f_rep` from the centre, so odd combs
/// have a line exactly at the centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawComb", into = "RawComb")]
pub struct CombSpec {
    f_rep_hz: f64,
    center_wavelength_m: f64,
    envelope: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawComb {
    f_rep_hz: f64,
    center_wavelength_m: f64,
    n_lines: usize,
    /// Omitted for a flat comb.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    envelope: Option<Vec<f64>>,
}

impl TryFrom<RawComb> for CombSpec {
    type Error = OpticsError;
    fn try_from(raw: RawComb) -> Result<Self> {
        let envelope = raw.envelope.unwrap_or_else(|| vec![1.0; raw.n_lines]);
        if envelope.len() != raw.n_lines {
            return Err(OpticsError::InvalidComb(format!(
                "envelope has {} weights for {} lines",
                envelope.len(),
                raw.n_lines
            )));
        }
        CombSpec::new(raw.f_rep_hz, raw.center_wavelength_m, envelope)
    }
}

impl From<CombSpec> for RawComb {
    fn from(c: CombSpec) -> Self {
        RawComb {
            f_rep_hz: c.f_rep_hz,
            center_wavelength_m: c.center_wavelength_m,
            n_lines: c.envelope.len(),
            envelope: if c.envelope.iter().all(|w| *w == 1.0) {
                None
            } else {
                Some(c.envelope)
            },
        }
    }
}

impl CombSpec {
    pub fn new(f_rep_hz: f64, center_wavelength_m: f64, envelope: Vec<f64>) -> Result<Self> {
        let bad = |m: String| Err(OpticsError::InvalidComb(m));
        if !(f_rep_hz.is_finite() && f_rep_hz > 0.0) {
            return bad(format!("f_rep must be positive, got {f_rep_hz}"));
        }
        if !(center_wavelength_m.is_finite() && center_wavelength_m > 0.0) {
            return bad(format!(
                "centre wavelength must be positive, got {center_wavelength_m}"
            ));
        }
        if envelope.is_empty() {
            return bad("comb has no lines".into());
        }
        if envelope.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return bad("weights must be finite and non-negative".into());
        }
        if envelope.iter().all(|w| *w == 0.0) {
            return bad("all weights are zero".into());
        }
        Ok(CombSpec {
            f_rep_hz,
            center_wavelength_m,
            envelope,
        })
    }

    pub fn uniform(f_rep_hz: f64, center_wavelength_m: f64, n_lines: usize) -> Result<Self> {
        Self::new(f_rep_hz, center_wavelength_m, vec![1.0; n_lines])
    }

    /// Gaussian field envelope whose optical power falls to half at
    /// `±fwhm_hz / 2` from the centre.
    pub fn gaussian(
        f_rep_hz: f64,
        center_wavelength_m: f64,
        n_lines: usize,
        fwhm_hz: f64,
    ) -> Result<Self> {
        if !(fwhm_hz > 0.0) {
            return Err(OpticsError::InvalidComb(format!(
                "FWHM must be positive, got {fwhm_hz}"
            )));
        }
        let mid = (n_lines as f64 - 1.0) / 2.0;
        let envelope = (0..n_lines)
            .map(|i| {
                let f = (i as f64 - mid) * f_rep_hz;
                // field = sqrt(power), power = exp(-4 ln2 f² / fwhm²)
                (-2.0 * std::f64::consts::LN_2 * (f / fwhm_hz).powi(2)).exp()
            })
            .collect();
        Self::new(f_rep_hz, center_wavelength_m, envelope)
    }

    /// Default unfiltered source: 81 uniform lines (±100 GHz) at 2.5 GHz around 1551.1 nm.
    pub fn fronthaul_source() -> Self {
        Self::uniform(2.5e9, 1551.1e-9, 81).expect("valid default comb")
    }

    pub fn f_rep_hz(&self) -> f64 {
        self.f_rep_hz
    }

    pub fn center_wavelength_m(&self) -> f64 {
        self.center_wavelength_m
    }

    pub fn n_lines(&self) -> usize {
        self.envelope.len()
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    /// Offset of line `i` from the comb centre, Hz.
    pub fn line_offset_hz(&self, i: usize) -> f64 {
        (i as f64 - (self.n_lines() as f64 - 1.0) / 2.0) * self.f_rep_hz
    }
}

/// Ideal rectangular optical band-pass filter centred on the comb. A line
/// survives only if it lies strictly inside `±bandwidth / 2`.
pub fn filtered_comb(comb: &CombSpec, bandwidth_hz: f64) -> Result<CombSpec> {
    if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
        return Err(OpticsError::InvalidFilter(bandwidth_hz));
    }
    // guard against 10 * 2.5e9 landing a hair under 25e9
    let edge = bandwidth_hz / 2.0 - 1e-9 * comb.f_rep_hz;
    let envelope: Vec<f64> = (0..comb.n_lines())
        .filter(|&i| comb.line_offset_hz(i).abs() < edge)
        .map(|i| comb.envelope[i])
        .collect();
    if envelope.is_empty() || envelope.iter().all(|w| *w == 0.0) {
        return Err(OpticsError::FilterRemovesAll { bandwidth_hz });
    }
    CombSpec::new(comb.f_rep_hz, comb.center_wavelength_m, envelope)
}
