use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CombSpec, OpticsError, Result};
use crate::units::{PS_PER_NM_KM, SPEED_OF_LIGHT};

/// Fibre span treated as pure second-order dispersion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveSpan {
    pub length_m: f64,
    /// Dispersion parameter `D` in s/m².
    pub dispersion_s_per_m2: f64,
    /// Wavelength at which `D` is quoted. Without a dispersion slope it is
    /// informational only.
    pub reference_wavelength_m: f64,
}

impl DispersiveSpan {
    pub fn new(
        length_m: f64,
        dispersion_s_per_m2: f64,
        reference_wavelength_m: f64,
    ) -> Result<Self> {
        if !(length_m.is_finite() && length_m >= 0.0) {
            return Err(OpticsError::InvalidSpan(format!(
                "length must be >= 0, got {length_m}"
            )));
        }
        if !dispersion_s_per_m2.is_finite() {
            return Err(OpticsError::InvalidSpan("dispersion must be finite".into()));
        }
        if !(reference_wavelength_m > 0.0) {
            return Err(OpticsError::InvalidSpan(
                "reference wavelength must be positive".into(),
            ));
        }
        Ok(DispersiveSpan {
            length_m,
            dispersion_s_per_m2,
            reference_wavelength_m,
        })
    }

    /// Standard single-mode fibre, 17 ps/(nm·km) at 1550 nm.
    pub fn ssmf(length_km: f64) -> Result<Self> {
        Self::new(length_km * 1e3, 17.0 * PS_PER_NM_KM, 1550e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotodetectorSpec {
    pub bandwidth_hz: f64,
    pub responsivity_relative: f64,
}

impl PhotodetectorSpec {
    pub fn new(bandwidth_hz: f64) -> Result<Self> {
        if !(bandwidth_hz.is_finite() && bandwidth_hz > 0.0) {
            return Err(OpticsError::InvalidDetector(format!(
                "bandwidth must be positive, got {bandwidth_hz}"
            )));
        }
        Ok(PhotodetectorSpec {
            bandwidth_hz,
            responsivity_relative: 1.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub k: usize,
    pub freq_hz: f64,
    /// Beat amplitude relative to the same harmonic without dispersion.
    pub amplitude: f64,
}

/// Phase step between neighbouring line pairs of the first harmonic,
/// `2π f_rep² D L λ² / c`. Harmonic `k` steps by `k` times this.
pub fn beat_phase_step(comb: &CombSpec, span: &DispersiveSpan) -> f64 {
    let lambda = comb.center_wavelength_m();
    2.0 * PI * comb.f_rep_hz().powi(2) * span.dispersion_s_per_m2 * span.length_m * lambda * lambda
        / SPEED_OF_LIGHT
}

/// Normalised amplitude of harmonic `k`:
/// `|Σ w_n w_{n+k} e^{iθnk}| / Σ w_n w_{n+k}`. Zero when no line pair has
/// weight at that spacing.
pub fn harmonic_amplitude(comb: &CombSpec, span: &DispersiveSpan, k: usize) -> f64 {
    let w = comb.envelope();
    if k >= w.len() {
        return 0.0;
    }
    let step = beat_phase_step(comb, span) * k as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut norm = 0.0;
    for n in 0..w.len() - k {
        let p = w[n] * w[n + k];
        sum += Complex64::from_polar(p, step * n as f64);
        norm += p;
    }
    if norm == 0.0 {
        0.0
    } else {
        sum.norm() / norm
    }
}

/// Detected RF comb: harmonics `k = 0..=K` with `K f_rep` inside the
/// detector bandwidth and `K < n_lines`.
pub fn rf_comb_harmonics(
    comb: &CombSpec,
    span: &DispersiveSpan,
    pd: &PhotodetectorSpec,
) -> Result<Vec<Harmonic>> {
    let by_bandwidth = (pd.bandwidth_hz / comb.f_rep_hz() * (1.0 + 1e-12)).floor() as usize;
    let k_max = by_bandwidth.min(comb.n_lines() - 1);
    if k_max == 0 {
        return Err(OpticsError::NoHarmonics {
            f_rep_hz: comb.f_rep_hz(),
            bandwidth_hz: pd.bandwidth_hz,
            n_lines: comb.n_lines(),
        });
    }
    Ok((0..=k_max)
        .map(|k| Harmonic {
            k,
            freq_hz: k as f64 * comb.f_rep_hz(),
            amplitude: harmonic_amplitude(comb, span, k),
        })
        .collect())
}

/// `k,freq_hz,amplitude` rows.
pub fn write_harmonics_csv<W: Write>(harmonics: &[Harmonic], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for h in harmonics {
        wtr.serialize(h)?;
    }
    wtr.flush()?;
    Ok(())
}
