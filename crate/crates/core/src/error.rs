//! Error types.

use alloc::string::String;
use core::fmt;

/// A layout description failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    DuplicateId(String),
    UnknownStation { referenced_by: String, id: String },
    NoSink,
    NoStations,
    AssemblyWithoutComponentInput(String),
    MissingConnection { station: String, what: &'static str },
    MultipleConnections { station: String, what: &'static str },
    InvalidParameter { object: String, reason: String },
    UnsupportedVersion(u32),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::DuplicateId(id) => write!(f, "duplicate object id `{id}`"),
            BuildError::UnknownStation { referenced_by, id } => {
                write!(f, "`{referenced_by}` references unknown station `{id}`")
            }
            BuildError::NoSink => write!(f, "layout has no sink"),
            BuildError::NoStations => write!(f, "layout has no stations"),
            BuildError::AssemblyWithoutComponentInput(id) => {
                write!(f, "assembly `{id}` has no component input buffer")
            }
            BuildError::MissingConnection { station, what } => {
                write!(f, "station `{station}` is missing a {what} connection")
            }
            BuildError::MultipleConnections { station, what } => {
                write!(f, "station `{station}` has more than one {what} connection")
            }
            BuildError::InvalidParameter { object, reason } => {
                write!(f, "invalid parameter on `{object}`: {reason}")
            }
            BuildError::UnsupportedVersion(v) => write!(f, "unsupported layout version {v}"),
        }
    }
}

impl core::error::Error for BuildError {}

/// An action command was rejected before touching the line.
#[derive(Clone, Debug, PartialEq)]
pub enum ActionError {
    UnknownObject { object: String },
    UnknownState { object: String, state: String },
    NotActionable { object: String, state: String },
    OutOfRange { object: String, state: String, value: f64, lo: f64, hi: f64 },
    IndexOutOfRange { object: String, state: String, index: usize, len: usize },
    WrongValueType { object: String, state: String },
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::UnknownObject { object } => write!(f, "unknown object `{object}`"),
            ActionError::UnknownState { object, state } => {
                write!(f, "object `{object}` has no state `{state}`")
            }
            ActionError::NotActionable { object, state } => {
                write!(f, "state `{object}.{state}` is not actionable")
            }
            ActionError::OutOfRange { object, state, value, lo, hi } => {
                write!(f, "value {value} for `{object}.{state}` outside [{lo}, {hi}]")
            }
            ActionError::IndexOutOfRange { object, state, index, len } => {
                write!(f, "index {index} for `{object}.{state}` outside 0..{len}")
            }
            ActionError::WrongValueType { object, state } => {
                write!(f, "wrong value type for `{object}.{state}`")
            }
        }
    }
}

impl core::error::Error for ActionError {}

/// Episode-level failures.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvError {
    EpisodeFinished,
    Action(ActionError),
}

impl fmt::Display for EnvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvError::EpisodeFinished => write!(f, "episode already finished"),
            EnvError::Action(e) => write!(f, "rejected action: {e}"),
        }
    }
}

impl core::error::Error for EnvError {}

impl From<ActionError> for EnvError {
    fn from(e: ActionError) -> Self {
        EnvError::Action(e)
    }
}

/// A scenario was requested with invalid parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioError {
    InvalidParameter { name: &'static str, reason: String },
    /// The jump window is too short to stretch throughput down to the
    /// requested ratio.
    JumpWindowTooShort { t_jump: f64, ratio: f64 },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::InvalidParameter { name, reason } => {
                write!(f, "invalid scenario parameter `{name}`: {reason}")
            }
            ScenarioError::JumpWindowTooShort { t_jump, ratio } => {
                write!(f, "jump window {t_jump} too short for throughput ratio {ratio}")
            }
        }
    }
}

impl core::error::Error for ScenarioError {}

/// Closed-form analysis called with inputs outside its assumptions.
#[derive(Clone, Debug, PartialEq)]
pub enum AnalysisError {
    /// The closed-form share formula assumes a common noise scale; use the
    /// general rate ratio instead.
    UnequalNoiseScales,
    EmptyInput,
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::UnequalNoiseScales => {
                write!(f, "closed-form shares need equal noise scales; use the general rate ratio")
            }
            AnalysisError::EmptyInput => write!(f, "empty input"),
        }
    }
}

impl core::error::Error for AnalysisError {}
