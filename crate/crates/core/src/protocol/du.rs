use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{CachingConfig, CachingState, PhaseUpdateMsg, Result};

/// Maps `x` into the half-open interval `(-ui/2, ui/2]`.
pub fn wrap_residual(x: f64, ui: f64) -> f64 {
    x - ui * (x / ui - 0.5).ceil()
}

fn gaussian<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma)
        .expect("sigma validated as finite and non-negative")
        .sample(rng)
}

/// One DU phase measurement of data returned by an RU whose return
/// interpolator currently sits at `state.return_pi_setting`.
///
/// The detector sees `true_two_way + return_pi_setting` plus Gaussian noise,
/// and only modulo one unit interval.
pub fn du_measure<R: Rng + ?Sized>(
    true_two_way: f64,
    state: &CachingState,
    cfg: &CachingConfig,
    sequence_number: u32,
    timestamp: f64,
    rng: &mut R,
) -> PhaseUpdateMsg {
    let observed =
        true_two_way + state.return_pi_setting + gaussian(cfg.measurement_noise_sigma_s, rng);
    PhaseUpdateMsg {
        sequence_number,
        residual_two_way: wrap_residual(observed, cfg.unit_interval_s),
        timestamp,
    }
}

/// A message reaching the end of the transport, possibly lost on the way.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delivery {
    pub msg: PhaseUpdateMsg,
    pub lost: bool,
}

#[derive(Debug, Clone)]
struct InFlight {
    arrival: f64,
    msg: PhaseUpdateMsg,
    lost: bool,
}

/// DU side of one DU–RU session, including the update transport.
///
/// Messages are delivered in order after a fixed latency. Until a message's
/// arrival time the DU treats its residual as pending and subtracts it from
/// new measurements, so a latency longer than the update interval does not
/// double count corrections.
#[derive(Debug, Clone)]
pub struct DuSession {
    cfg: CachingConfig,
    noise_rng: ChaCha8Rng,
    loss_rng: ChaCha8Rng,
    next_sequence: u32,
    in_flight: VecDeque<InFlight>,
}

impl DuSession {
    pub fn new(cfg: CachingConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let noise_rng = ChaCha8Rng::seed_from_u64(seed);
        let mut loss_rng = ChaCha8Rng::seed_from_u64(seed);
        loss_rng.set_stream(1);
        Ok(DuSession {
            cfg,
            noise_rng,
            loss_rng,
            next_sequence: 0,
            in_flight: VecDeque::new(),
        })
    }

    pub fn config(&self) -> &CachingConfig {
        &self.cfg
    }

    fn arrived(&self, entry: &InFlight, t: f64) -> bool {
        entry.arrival <= t + 1e-9 * self.cfg.update_interval_s
    }

    /// Pops every message due by `t`, lost ones included so callers can log
    /// them. The DU stops counting them as pending either way.
    pub fn deliver_due(&mut self, t: f64) -> Vec<Delivery> {
        let mut out = Vec::new();
        while let Some(front) = self.in_flight.front() {
            if !self.arrived(front, t) {
                break;
            }
            let entry = self.in_flight.pop_front().expect("front exists");
            out.push(Delivery {
                msg: entry.msg,
                lost: entry.lost,
            });
        }
        out
    }

    pub fn pending_residual(&self) -> f64 {
        self.in_flight.iter().map(|e| e.msg.residual_two_way).sum()
    }

    /// Measures at time `t` against the RU's applied state and queues the
    /// resulting update.
    pub fn measure(
        &mut self,
        t: f64,
        true_two_way: f64,
        ru_state: &CachingState,
    ) -> PhaseUpdateMsg {
        let pending = self.pending_residual();
        let mut msg = du_measure(
            true_two_way - pending,
            ru_state,
            &self.cfg,
            self.next_sequence,
            t,
            &mut self.noise_rng,
        );
        msg.timestamp = t;
        self.next_sequence = self.next_sequence.wrapping_add(1);
        let lost = self.cfg.loss_probability > 0.0
            && self.loss_rng.random::<f64>() < self.cfg.loss_probability;
        self.in_flight.push_back(InFlight {
            arrival: t + self.cfg.transport_latency_s,
            msg,
            lost,
        });
        msg
    }
}
