use combsync::protocol::{
    decode_log, encode_log, estimate_uncompensated, replay, CachingConfig, DuSession, RuSession,
};
use proptest::prelude::*;

/// Runs a zero-latency session over `truth` (two-way phase per update) and
/// returns the RU cache after each update.
fn track(
    truth: &[f64],
    cfg: CachingConfig,
    seed: u64,
) -> (Vec<f64>, Vec<combsync::protocol::PhaseUpdateMsg>) {
    let mut du = DuSession::new(cfg, seed).unwrap();
    let mut ru = RuSession::new(cfg).unwrap();
    let mut caches = Vec::new();
    let mut log = Vec::new();
    for (i, &x) in truth.iter().enumerate() {
        let t = i as f64 * cfg.update_interval_s;
        du.measure(t, x, ru.state());
        for d in du.deliver_due(t) {
            ru.apply(&d.msg).unwrap();
            log.push(d.msg);
        }
        caches.push(ru.state().cached_two_way);
    }
    (caches, log)
}

fn instant() -> CachingConfig {
    CachingConfig {
        transport_latency_s: 0.0,
        ..CachingConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The wrap-free oracle is the raw cumulative drift itself: with steps
    /// below `UI/2 - 3σ` the cache must never leave it by more than one PI
    /// step plus the noise of the latest measurement.
    #[test]
    fn cache_follows_unwrapped_truth(
        steps in prop::collection::vec(-1.0..1.0f64, 1..400),
        scale in 0.0..1.0f64,
        seed in any::<u64>(),
    ) {
        let cfg = instant();
        let limit = cfg.unit_interval_s / 2.0 - 6.0 * cfg.measurement_noise_sigma_s;
        let mut truth = Vec::with_capacity(steps.len());
        let mut x = 0.0;
        for s in &steps {
            x += s * scale * limit;
            truth.push(x);
        }
        let (caches, _) = track(&truth, cfg, seed);
        let bound = cfg.pi_resolution_s / 2.0 + 6.0 * cfg.measurement_noise_sigma_s;
        for (c, t) in caches.iter().zip(&truth) {
            prop_assert!((c - t).abs() <= bound, "cache {c} truth {t}");
        }
    }

    #[test]
    fn clock_interpolator_stays_within_half_step(
        steps in prop::collection::vec(-150e-12..150e-12f64, 1..200),
        seed in any::<u64>(),
    ) {
        let cfg = instant();
        let mut du = DuSession::new(cfg, seed).unwrap();
        let mut ru = RuSession::new(cfg).unwrap();
        let mut x = 0.0;
        for (i, s) in steps.iter().enumerate() {
            x += s;
            du.measure(i as f64 * 0.1, x, ru.state());
            for d in du.deliver_due(i as f64 * 0.1) {
                let st = ru.apply(&d.msg).unwrap();
                prop_assert!((st.clock_pi_setting + st.cached_two_way / 2.0).abs() <= cfg.pi_resolution_s / 2.0 + 1e-24);
            }
        }
    }

    #[test]
    fn uncompensated_estimate_is_linear(
        pairs in prop::collection::vec((-1e-9..1e-9f64, -1e-9..1e-9f64), 0..50),
        exp in -4i32..4,
    ) {
        let scale = 2f64.powi(exp);
        let (s, w): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let base = estimate_uncompensated(&s, &w).unwrap();
        let ss: Vec<f64> = s.iter().map(|x| x * scale).collect();
        let ws: Vec<f64> = w.iter().map(|x| x * scale).collect();
        let scaled = estimate_uncompensated(&ss, &ws).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert_eq!(a * scale, *b);
        }
    }
}

#[test]
fn identical_seeds_give_identical_trajectories() {
    let truth: Vec<f64> = (0..500).map(|i| (i as f64 * 0.01).sin() * 1e-9).collect();
    let a = track(&truth, instant(), 11);
    let b = track(&truth, instant(), 11);
    let c = track(&truth, instant(), 12);
    assert_eq!(a, b);
    assert_ne!(a.0, c.0);
}

#[test]
fn logged_updates_replay_to_the_same_store() {
    let truth: Vec<f64> = (0..300).map(|i| i as f64 * 37e-12).collect();
    let (caches, log) = track(&truth, instant(), 5);
    let bytes = encode_log(&log).unwrap();
    assert_eq!(bytes.len(), 20 * log.len());
    let decoded = decode_log(&bytes).unwrap();
    let states = replay(&decoded, &instant()).unwrap();
    for (s, c) in states.iter().zip(&caches) {
        // residuals travel in whole femtoseconds
        assert!((s.cached_two_way - c).abs() < 1e-15 * log.len() as f64);
    }
}

#[test]
fn replay_rejects_reordered_log() {
    let truth: Vec<f64> = (0..3).map(|i| i as f64 * 1e-12).collect();
    let (_, mut log) = track(&truth, instant(), 1);
    log.swap(1, 2);
    assert!(replay(&log, &instant()).is_err());
}

#[test]
fn latency_does_not_double_count() {
    let cfg = CachingConfig {
        transport_latency_s: 0.3,
        measurement_noise_sigma_s: 0.0,
        ..CachingConfig::default()
    };
    let mut du = DuSession::new(cfg, 0).unwrap();
    let mut ru = RuSession::new(cfg).unwrap();
    let step = 100e-12;
    for i in 0..200 {
        let t = i as f64 * cfg.update_interval_s;
        for d in du.deliver_due(t) {
            ru.apply(&d.msg).unwrap();
        }
        du.measure(t, step, ru.state());
    }
    assert!((ru.state().cached_two_way - step).abs() <= cfg.pi_resolution_s / 2.0);
}
