//! Discrete-event simulation of stochastic production flow lines.
//!
//! A flow line is a set of stations (sources, processes, assemblies,
//! switches, sinks) connected by finite FIFO buffers. Stations draw their
//! processing times from shifted-exponential distributions and can be
//! actively controlled at fixed time intervals: source waiting times,
//! switch routing, worker assignments, and on/off switching.
//!
//! The crate is organized as:
//!
//! - [`calendar`], [`time`], [`rng`], [`dist`]: the event-driven kernel —
//!   clock, event calendar, named random streams, processing-time laws.
//! - [`layout`], [`line`], [`sim`]: the production-line object model and
//!   its process-interaction dynamics (blocking, starving, scrapping,
//!   rework, worker traversal, deadlocks).
//! - [`observe`]: fixed-shape named observation vectors and validated
//!   action commands.
//! - [`score`]: the cost model, aggregated line value, per-step reward
//!   decomposition, and OEE.
//! - [`scenario`]: parameterized factories for the five benchmark lines
//!   (WT, WTJ, PD, WA, CL).
//! - [`analysis`]: closed-form optima and the exhaustive worker-assignment
//!   solver used to verify the simulation.
//! - [`agents`]: scripted baseline controllers.
//! - [`env`]: episodic reset/step semantics on the control grid, episode
//!   bookkeeping, and curriculum scheduling.
//!
//! The crate is `no_std`-compatible (requires `alloc`); IO, file formats,
//! and the benchmark CLI live in the companion `takt` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod agents;
pub mod analysis;
pub mod calendar;
pub mod dist;
pub mod env;
mod error;
pub mod layout;
pub mod line;
pub mod observe;
pub mod rng;
pub mod scenario;
pub mod score;
pub mod sim;
pub mod sweep;
pub mod time;

pub use agents::{Agent, LineInfo};
pub use calendar::{Event, EventCalendar, EventKind};
pub use dist::{performance_coefficient, Distribution};
pub use env::{
    derive_seed, run_episode, CurriculumSchedule, Env, EpisodeConfig, EpisodeResult, Step, StepInfo,
};
pub use error::{ActionError, AnalysisError, BuildError, EnvError, ScenarioError};
pub use layout::{BufferSpec, LayoutSpec, PartSpec, PoolSpec, ProcessingSpec, StationSpec};
pub use line::{BufferId, Line, PoolId, StationId, StationMode, WorkerId};
pub use observe::{
    ActionCommand, Observation, ObservabilityMask, SpaceCatalog, StateDescriptor, StateKind, Value,
};
pub use rng::RandomStream;
pub use scenario::{jump_factor, Blueprint, JumpProfile, ScenarioKind, ScenarioSpec};
pub use score::{oee, CostModel, RewardLedger};
pub use sim::{EventNote, EventRecord, Sim};
pub use time::SimTime;

pub(crate) mod math {
    //! Float math routed through `libm` so results are identical with and
    //! without `std` (and across platforms).
    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
}
