//! Joint picosecond clock synchronisation and low-noise RF carrier
//! distribution over fibre fronthaul.
//!
//! The crate is split by subsystem:
//!
//! * [`noise`]: phase-noise profiles, PSD to RMS jitter integration, colored
//!   phase synthesis and frequency-divider transforms.
//! * [`optics`]: optical comb model, square-law detection into an RF comb,
//!   dispersion fading of beat tones and a scalar BER estimate.
//! * [`fiber`]: temperature-driven propagation delay drift.
//! * [`protocol`]: the clock phase caching state machines (DU measurement,
//!   RU phase store and interpolator settings, wire format).
//! * [`sim`]: the scenario engine tying everything together.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod fiber;
pub mod noise;
pub mod optics;
pub mod protocol;
pub mod sim;
pub mod units;

pub use fiber::{FiberLink, TemperatureProfile, TwoWayShift};
pub use noise::{JitterFigure, PhaseNoiseProfile, PhaseRecord, PresetLibrary, Segment};
pub use optics::{CombSpec, DispersiveSpan, Harmonic, LinkBudget, PhotodetectorSpec};
pub use protocol::{CachingConfig, CachingState, DuSession, PhaseUpdateMsg, RuSession};

pub use sim::{run_scenario, Scenario, ScenarioReport};
