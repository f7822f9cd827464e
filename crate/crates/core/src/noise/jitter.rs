use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{NoiseError, PhaseNoiseProfile, Result};

/// The 1 kHz to 10 MHz offset band used for every reported jitter figure.
pub const STANDARD_BAND: (f64, f64) = (1e3, 1e7);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterFigure {
    /// RMS timing jitter, seconds.
    pub rms_jitter: f64,
    pub band: (f64, f64),
    pub carrier_hz: f64,
}

fn check_band(profile: &PhaseNoiseProfile, (low, high): (f64, f64)) -> Result<()> {
    if !(low.is_finite() && high.is_finite() && low > 0.0 && low <= high) {
        return Err(NoiseError::InvalidBand { low, high });
    }
    let (min, max) = (profile.min_offset(), profile.max_offset());
    if low < min || high > max {
        return Err(NoiseError::BandOutOfRange {
            low,
            high,
            min,
            max,
        });
    }
    Ok(())
}

/// `∫ 10^(L(f)/10) df` over `band`, summed segment by segment in closed form.
pub fn integrated_phase_power(profile: &PhaseNoiseProfile, band: (f64, f64)) -> Result<f64> {
    check_band(profile, band)?;
    let (low, high) = band;
    Ok(profile
        .segments()
        .iter()
        .map(|s| {
            let lo = s.start_hz.max(low);
            let hi = s.end_hz.min(high);
            s.integrate_linear(lo, hi)
        })
        .sum())
}

fn to_jitter(profile: &PhaseNoiseProfile, band: (f64, f64), power: f64) -> JitterFigure {
    JitterFigure {
        rms_jitter: (2.0 * power).sqrt() / (2.0 * PI * profile.carrier_hz()),
        band,
        carrier_hz: profile.carrier_hz(),
    }
}

/// RMS jitter `sqrt(2 ∫ L) / (2π f_c)` over `band`. A zero-width band
/// yields zero jitter.
pub fn integrate_jitter(profile: &PhaseNoiseProfile, band: (f64, f64)) -> Result<JitterFigure> {
    let power = integrated_phase_power(profile, band)?;
    Ok(to_jitter(profile, band, power))
}

/// Same quantity as [`integrate_jitter`] by adaptive Simpson quadrature in
/// `ln f`. Only meant as a cross-check of the closed form.
pub fn integrate_jitter_numeric(
    profile: &PhaseNoiseProfile,
    band: (f64, f64),
    rel_tol: f64,
) -> Result<JitterFigure> {
    check_band(profile, band)?;
    let (low, high) = band;
    let mut power = 0.0;
    for s in profile.segments() {
        let lo = s.start_hz.max(low);
        let hi = s.end_hz.min(high);
        if hi <= lo {
            continue;
        }
        let g = |u: f64| {
            let f = u.exp();
            10f64.powf(s.level_at(f) / 10.0) * f
        };
        power += adaptive_simpson(&g, lo.ln(), hi.ln(), rel_tol);
    }
    Ok(to_jitter(profile, band, power))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
