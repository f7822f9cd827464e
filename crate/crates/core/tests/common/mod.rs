#![allow(dead_code)]

use std::f64::consts::PI;

use combsync::fiber::{FiberLink, TemperatureProfile};
use combsync::noise::PhaseRecord;
use combsync::units::SPEED_OF_LIGHT;
use combsync::Scenario;
use num_complex::Complex64;

/// Harmonic magnitudes of a comb after a dispersive span, found the slow way:
/// propagate every line with its own quadratic spectral phase, square the
/// field on a time grid covering one repetition period, then take a direct
/// DFT of the intensity. Each harmonic is normalised by the same
/// computation without fibre.
pub fn brute_force_harmonics(
    envelope: &[f64],
    f_rep: f64,
    center_wavelength: f64,
    dispersion_s_per_m2: f64,
    length_m: f64,
    k_max: usize,
) -> Vec<f64> {
    let with = intensity_harmonics(
        envelope,
        f_rep,
        center_wavelength,
        dispersion_s_per_m2,
        length_m,
        k_max,
    );
    let without = intensity_harmonics(
        envelope,
        f_rep,
        center_wavelength,
        dispersion_s_per_m2,
        0.0,
        k_max,
    );
    with.iter()
        .zip(&without)
        .map(|(a, b)| if *b == 0.0 { 0.0 } else { a / b })
        .collect()
}

fn intensity_harmonics(
    envelope: &[f64],
    f_rep: f64,
    lambda: f64,
    d: f64,
    length_m: f64,
    k_max: usize,
) -> Vec<f64> {
    let n = envelope.len();
    let beta2 = -d * lambda * lambda / (2.0 * PI * SPEED_OF_LIGHT);
    let mid = (n as f64 - 1.0) / 2.0;
    let lines: Vec<(f64, Complex64)> = envelope
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let omega = 2.0 * PI * (i as f64 - mid) * f_rep;
            (
                omega,
                Complex64::from_polar(a, 0.5 * beta2 * omega * omega * length_m),
            )
        })
        .collect();
    let samples = 4 * n.max(2);
    let period = 1.0 / f_rep;
    let intensity: Vec<f64> = (0..samples)
        .map(|j| {
            let t = j as f64 * period / samples as f64;
            lines
                .iter()
                .map(|(omega, c)| c * Complex64::from_polar(1.0, omega * t))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect();
    (0..=k_max)
        .map(|k| {
            intensity
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    Complex64::from_polar(v, -2.0 * PI * (k * j) as f64 / samples as f64)
                })
                .sum::<Complex64>()
                .norm()
                / samples as f64
        })
        .collect()
}

/// Two-sided phase PSD estimate in rad²/Hz, one value per bin `0..n/2`.
pub fn periodogram(record: &PhaseRecord, carrier_hz: f64) -> Vec<f64> {
    use rustfft::FftPlanner;
    let n = record.samples.len();
    let to_rad = 2.0 * PI * carrier_hz;
    let mut buf: Vec<Complex64> = record
        .samples
        .iter()
        .map(|&x| Complex64::new(x * to_rad, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let norm = record.sample_rate * n as f64;
    buf[..n / 2].iter().map(|c| c.norm_sqr() / norm).collect()
}

/// Trunk on a linear temperature ramp producing `one_way_rate` seconds of
/// delay drift per second; feeders held at constant temperature.
pub fn ramp_scenario(one_way_rate: f64, duration_s: f64) -> Scenario {
    let mut s = Scenario {
        duration_s,
        ..Scenario::default()
    };
    let per_kelvin = s.trunk.drift_per_kelvin();
    s.trunk.profile = TemperatureProfile::Ramp {
        rate_k_per_s: one_way_rate / per_kelvin,
        start_k: 293.15,
    };
    for f in &mut s.feeders {
        f.profile = TemperatureProfile::constant(293.15);
    }
    s
}

pub fn still_scenario(duration_s: f64) -> Scenario {
    let mut s = Scenario {
        duration_s,
        ..Scenario::default()
    };
    s.trunk.profile = TemperatureProfile::constant(293.15);
    s.feeders = vec![FiberLink::ssmf(0.08, TemperatureProfile::constant(293.15)); s.n_rus];
    s
}

pub fn rms(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}
