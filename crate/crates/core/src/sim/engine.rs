use super::jitter::scenario_jitter_table;
use super::report::{ReportSummary, RuMetrics, RuSeries, ScenarioReport};
use super::{histogram, Result, Scenario};
use crate::fiber::{one_way_shift, FiberLink};
use crate::noise::{record::mean_removed_rms, PresetLibrary};
use crate::protocol::{DuSession, EventRecord, RuSession};

/// Recorded values are snapped to this dyadic grid (2^-60 s ≈ 0.87 as) so
/// `estimated - synchronized == two_way / 2` holds bit-exactly in f64 for
/// offsets below a few milliseconds.
const GRID: f64 = 1.0 / (1u64 << 60) as f64;

fn snap(x: f64, grid: f64) -> f64 {
    (x / grid).round() * grid
}

/// Runs `s` with the built-in noise presets.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioReport> {
    run_scenario_with(s, &PresetLibrary::builtin())
}

pub fn run_scenario_with(s: &Scenario, presets: &PresetLibrary) -> Result<ScenarioReport> {
    s.validate(presets)?;
    let mut rus = Vec::with_capacity(s.n_rus);
    let mut per_ru = Vec::with_capacity(s.n_rus);
    for (i, feeder) in s.feeders.iter().enumerate() {
        let (series, metrics) = run_ru(s, i, feeder)?;
        rus.push(series);
        per_ru.push(metrics);
    }
    let rms_wander_s = per_ru.iter().map(|m| m.rms_wander_s).fold(0.0, f64::max);
    let max_abs_offset_s = per_ru
        .iter()
        .map(|m| m.max_abs_offset_s)
        .fold(0.0, f64::max);
    let summary = ReportSummary {
        scenario: s.name.clone(),
        seed: s.seed,
        config_hash: s.config_hash(),
        duration_s: s.duration_s,
        update_interval_s: s.caching.update_interval_s,
        eval_rate_hz: s.caching.eval_rate_hz,
        caching_enabled: s.caching_enabled,
        rms_wander_s,
        max_abs_offset_s,
        per_ru,
        histogram: histogram(&rus[0].synchronized_offset, s.histogram_bin_width_s)?,
        jitter: scenario_jitter_table(s, presets)?,
    };
    Ok(ScenarioReport { summary, rus })
}

fn session_seed(seed: u64, ru: usize) -> u64 {
    seed ^ (ru as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Outbound and return drift of one RU path at time `t`.
struct Path<'a> {
    trunk: &'a FiberLink,
    feeder: &'a FiberLink,
    asymmetry: f64,
}

impl Path<'_> {
    fn shifts(&self, t: f64) -> Result<(f64, f64)> {
        let trunk = one_way_shift(self.trunk, t)?;
        let feeder = one_way_shift(self.feeder, t)?;
        let forward = (1.0 + self.asymmetry) * trunk + feeder;
        let back = (1.0 - self.asymmetry) * trunk;
        Ok((forward, back))
    }

    fn two_way(&self, t: f64) -> Result<f64> {
        let (f, b) = self.shifts(t)?;
        Ok(f + b)
    }
}

struct SlipTracker {
    ui: f64,
    branch: i64,
    slips: u64,
    max_error: f64,
}

impl SlipTracker {
    fn observe(&mut self, cached: f64, truth: f64) {
        let err = cached - truth;
        self.max_error = self.max_error.max(err.abs());
        let branch = (err / self.ui).round() as i64;
        if branch != self.branch {
            self.slips += 1;
            self.branch = branch;
        }
    }
}

fn run_ru(s: &Scenario, index: usize, feeder: &FiberLink) -> Result<(RuSeries, RuMetrics)> {
    let cfg = s.caching;
    let path = Path {
        trunk: &s.trunk,
        feeder,
        asymmetry: s.asymmetry,
    };
    let dt = cfg.update_interval_s;
    let steps = (s.duration_s / dt).round() as usize;
    let n_eval = (s.duration_s * cfg.eval_rate_hz).round() as usize;
    let eps = 1e-9 * dt;

    let mut du = DuSession::new(cfg, session_seed(s.seed, index))?;
    let mut ru = RuSession::new(cfg)?;
    let mut slip = SlipTracker {
        ui: cfg.unit_interval_s,
        branch: 0,
        slips: 0,
        max_error: 0.0,
    };
    let mut series = RuSeries {
        time_s: Vec::with_capacity(n_eval),
        true_one_way: Vec::with_capacity(n_eval),
        two_way_measured: Vec::with_capacity(n_eval),
        synchronized_offset: Vec::with_capacity(n_eval),
        estimated_uncompensated: Vec::with_capacity(n_eval),
        ..Default::default()
    };
    let (mut sent, mut lost) = (0u64, 0u64);

    let mut deliver = |du: &mut DuSession,
                       ru: &mut RuSession,
                       series: &mut RuSeries,
                       t: f64,
                       lost: &mut u64|
     -> Result<()> {
        for d in du.deliver_due(t) {
            if d.lost {
                *lost += 1;
            } else {
                ru.apply(&d.msg)?;
                series.updates.push(d.msg);
                slip.observe(ru.state().cached_two_way, path.two_way(d.msg.timestamp)?);
            }
            let st = ru.state();
            series.events.push(EventRecord {
                time_s: t,
                sequence_number: d.msg.sequence_number,
                residual_s: d.msg.residual_two_way,
                delivered: !d.lost,
                cached_two_way_s: st.cached_two_way,
                return_pi_s: st.return_pi_setting,
                clock_pi_s: st.clock_pi_setting,
            });
        }
        Ok(())
    };

    let mut j = 0usize;
    for i in 0..steps {
        let t = i as f64 * dt;
        if s.caching_enabled {
            deliver(&mut du, &mut ru, &mut series, t, &mut lost)?;
            du.measure(t, path.two_way(t)?, ru.state());
            sent += 1;
            // zero-latency transport delivers within the same step
            deliver(&mut du, &mut ru, &mut series, t, &mut lost)?;
        }
        let t_next = (i + 1) as f64 * dt;
        while j < n_eval && (j as f64 / cfg.eval_rate_hz) < t_next - eps {
            record(&mut series, &path, &ru, j as f64 / cfg.eval_rate_hz)?;
            j += 1;
        }
    }
    while j < n_eval {
        record(&mut series, &path, &ru, j as f64 / cfg.eval_rate_hz)?;
        j += 1;
    }

    let sync = &series.synchronized_offset;
    let metrics = RuMetrics {
        ru: index,
        rms_wander_s: mean_removed_rms(sync).unwrap_or(0.0),
        mean_offset_s: if sync.is_empty() {
            0.0
        } else {
            sync.iter().sum::<f64>() / sync.len() as f64
        },
        max_abs_offset_s: sync.iter().fold(0.0, |m, x| m.max(x.abs())),
        rms_uncompensated_s: mean_removed_rms(&series.estimated_uncompensated).unwrap_or(0.0),
        rms_true_one_way_s: mean_removed_rms(&series.true_one_way).unwrap_or(0.0),
        updates_sent: sent,
        updates_lost: lost,
        wrap_slips: slip.slips,
        max_tracking_error_s: slip.max_error,
    };
    Ok((series, metrics))
}

fn record(series: &mut RuSeries, path: &Path, ru: &RuSession, t: f64) -> Result<()> {
    let (forward, _) = path.shifts(t)?;
    let sync = snap(ru.clock_offset(forward), GRID);
    let two_way = snap(ru.state().cached_two_way, 2.0 * GRID);
    series.time_s.push(t);
    series.true_one_way.push(forward);
    series.two_way_measured.push(two_way);
    series.synchronized_offset.push(sync);
    series.estimated_uncompensated.push(sync + two_way / 2.0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::TemperatureProfile;

    fn short(duration: f64) -> Scenario {
        Scenario {
            duration_s: duration,
            ..Scenario::default()
        }
    }

    #[test]
    fn zero_drift_zero_noise_is_silent() {
        let mut s = short(600.0);
        s.trunk.profile = TemperatureProfile::constant(293.0);
        for f in &mut s.feeders {
            f.profile = TemperatureProfile::constant(293.0);
        }
        s.caching.measurement_noise_sigma_s = 0.0;
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.summary.rms_wander_s, 0.0);
        assert!(r
            .rus
            .iter()
            .all(|ru| ru.synchronized_offset.iter().all(|x| *x == 0.0)));
    }

    #[test]
    fn series_lengths_follow_eval_rate() {
        let mut s = short(60.0);
        s.caching.eval_rate_hz = 9540.0;
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.rus[0].time_s.len(), 572_400);
        assert_eq!(r.summary.per_ru[0].updates_sent, 600);
        assert_eq!(r.rus[0].updates.len(), 599);
    }

    #[test]
    fn snapping_makes_identity_exact() {
        let a = snap(1.234_567e-10, GRID);
        let w = snap(-3.3e-9, 2.0 * GRID);
        assert_eq!((a + w / 2.0) - a, w / 2.0);
    }

    #[test]
    fn loss_is_self_healing() {
        let mut s = short(600.0);
        s.caching.loss_probability = 0.3;
        let r = run_scenario(&s).unwrap();
        let m = &r.summary.per_ru[0];
        assert!(m.updates_lost > 100);
        assert_eq!(m.wrap_slips, 0);
        assert!(m.rms_wander_s < 30e-12);
    }

    #[test]
    fn longer_latency_stays_stable() {
        let mut s = short(600.0);
        s.caching.transport_latency_s = 0.35;
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.summary.per_ru[0].wrap_slips, 0);
        assert!(r.summary.rms_wander_s < 10e-12);
    }
}
