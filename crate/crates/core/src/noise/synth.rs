use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use super::{NoiseError, PhaseNoiseProfile, PhaseRecord, Result};

/// Draws a real phase sequence whose spectrum follows `profile`.
///
/// White Gaussian noise is shaped in the frequency domain: bin `k` gets
/// `sqrt(S(f_k) · fs · n)` times a unit complex normal, where the two-sided
/// phase PSD `S` equals the linear SSB level `L` (one-sided `2L`, halved).
/// Bins outside the profile range are zero. The result is converted to
/// seconds through `1 / (2π f_c)`.
pub fn synthesize_phase(
    profile: &PhaseNoiseProfile,
    sample_rate: f64,
    n: usize,
    seed: u64,
) -> Result<PhaseRecord> {
    if n < 2 || !n.is_power_of_two() {
        return Err(NoiseError::NotPowerOfTwo(n));
    }
    let required = 2.0 * profile.max_offset();
    if !(sample_rate >= required) {
        return Err(NoiseError::SampleRateTooLow {
            sample_rate,
            required,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let df = sample_rate / n as f64;
    let scale = sample_rate * n as f64;
    let half = n / 2;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..half {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        let amp = (profile.linear_or_zero(k as f64 * df) * scale / 2.0).sqrt();
        spectrum[k] = Complex64::new(a * amp, b * amp);
        spectrum[n - k] = spectrum[k].conj();
    }
    let a: f64 = StandardNormal.sample(&mut rng);
    spectrum[half] = Complex64::new(
        a * (profile.linear_or_zero(half as f64 * df) * scale).sqrt(),
        0.0,
    );

    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);

    let to_seconds = 1.0 / (n as f64 * 2.0 * PI * profile.carrier_hz());
    let samples = spectrum.iter().map(|c| c.re * to_seconds).collect();
    PhaseRecord::new(sample_rate, samples)
}
