//! Named state vectors and validated actuator commands.
//!
//! Every line object contributes a fixed set of states (the catalog).
//! States are observable (part of the observation vector) unless masked,
//! and a few are actionable: source waiting times, switch buffer indices,
//! worker station assignments, and the per-station on/off flag.
//!
//! The descriptor list is ordered by topology (stations, then buffers,
//! then workers, each in layout order) and is identical for every episode
//! of a layout, so observation vectors have a constant shape. Masked
//! entries are absent from the vector, not zeroed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::ActionError;
use crate::line::{Kind, Line, StationMode, WorkerId};
use crate::sim::Sim;
use crate::time::SimTime;

/// State names used by the catalog.
pub mod states {
    pub const MODE: &str = "mode";
    pub const PROCESSING_TIME: &str = "processing_time";
    pub const WAITING_TIME: &str = "waiting_time";
    pub const N_WORKERS: &str = "n_workers";
    pub const N_OK: &str = "n_ok";
    pub const N_NOK: &str = "n_nok";
    pub const ON: &str = "on";
    pub const IN_INDEX: &str = "in_index";
    pub const OUT_INDEX: &str = "out_index";
    pub const FILL: &str = "fill";
    pub const ASSIGNMENT: &str = "assignment";
}

/// Station modes in label-encoding order.
pub const MODE_LABELS: [&str; 3] = ["working", "failing", "waiting"];

pub fn encode_mode(mode: StationMode) -> f64 {
    match mode {
        StationMode::Working => 0.0,
        StationMode::Failing => 1.0,
        StationMode::Waiting => 2.0,
    }
}

/// Value domain of a state.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    /// Label-encoded categorical value; the labels give the valid range.
    Discrete { labels: Vec<String> },
    /// Cumulative non-negative integer.
    Count,
    /// Continuous value bounded by `[lo, hi]` (`hi` may be infinite).
    Numeric { lo: f64, hi: f64 },
}

/// One named state of one line object.
#[derive(Clone, Debug)]
pub struct StateDescriptor {
    pub object: String,
    pub state: &'static str,
    pub kind: StateKind,
    pub observable: bool,
    pub actionable: bool,
}

/// States hidden from the observation vector (sensor-failure ablations).
/// Masking never affects the dynamics, only what agents see.
#[derive(Clone, Debug, Default)]
pub struct ObservabilityMask {
    hidden: BTreeSet<(String, String)>,
}

impl ObservabilityMask {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn hide(&mut self, object: &str, state: &str) {
        self.hidden.insert((String::from(object), String::from(state)));
    }

    pub fn is_hidden(&self, object: &str, state: &str) -> bool {
        self.hidden.contains(&(String::from(object), String::from(state)))
    }
}

/// A flattened snapshot of every observable state.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    pub values: Vec<f64>,
    /// `object.state` labels, parallel to `values`.
    pub names: Arc<Vec<String>>,
    pub time: SimTime,
}

impl Observation {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Looks an entry up by its `object.state` label.
    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }
}

/// New values for actionable states, keyed by object and state name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ActionCommand {
    entries: BTreeMap<(String, String), Value>,
}

/// A value for one actionable state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    /// For numeric states.
    Real(f64),
    /// Label index for discrete states.
    Index(usize),
}

impl ActionCommand {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, object: &str, state: &str, value: Value) -> &mut Self {
        self.entries.insert((String::from(object), String::from(state)), value);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, String), &Value)> {
        self.entries.iter()
    }
}

/// The full state catalog of a layout plus the derived observation layout.
#[derive(Clone, Debug)]
pub struct SpaceCatalog {
    descriptors: Vec<StateDescriptor>,
    /// Positions into `descriptors` for each observation-vector entry.
    observation_slots: Vec<usize>,
    names: Arc<Vec<String>>,
    lookup: BTreeMap<(String, String), usize>,
}

impl SpaceCatalog {
    /// Enumerates the catalog in topology order: stations, buffers,
    /// workers, each with a fixed per-variant state order.
    pub fn build(line: &Line, mask: &ObservabilityMask) -> SpaceCatalog {
        let mut descriptors = Vec::new();
        let labels = |v: [&str; 2]| -> Vec<String> {
            v.iter().map(|s| String::from(*s)).collect()
        };
        for st in &line.stations {
            let object = st.name.clone();
            let push = |descriptors: &mut Vec<StateDescriptor>,
                        state: &'static str,
                        kind: StateKind,
                        actionable: bool| {
                descriptors.push(StateDescriptor {
                    object: object.clone(),
                    state,
                    kind,
                    observable: !mask.is_hidden(&object, state),
                    actionable,
                });
            };
            push(
                &mut descriptors,
                states::MODE,
                StateKind::Discrete {
                    labels: MODE_LABELS.iter().map(|s| String::from(*s)).collect(),
                },
                false,
            );
            push(
                &mut descriptors,
                states::PROCESSING_TIME,
                StateKind::Numeric { lo: 0.0, hi: f64::INFINITY },
                false,
            );
            match &st.kind {
                Kind::Source { actionable_waiting, .. } => {
                    push(
                        &mut descriptors,
                        states::WAITING_TIME,
                        StateKind::Numeric { lo: 0.0, hi: f64::INFINITY },
                        *actionable_waiting,
                    );
                    push(&mut descriptors, states::N_OK, StateKind::Count, false);
                }
                Kind::Process { .. } => {
                    if covered_by_pool(line, &st.name) {
                        push(&mut descriptors, states::N_WORKERS, StateKind::Count, false);
                    }
                    push(&mut descriptors, states::N_OK, StateKind::Count, false);
                }
                Kind::Assembly { .. } => {
                    if covered_by_pool(line, &st.name) {
                        push(&mut descriptors, states::N_WORKERS, StateKind::Count, false);
                    }
                    push(&mut descriptors, states::N_OK, StateKind::Count, false);
                    push(&mut descriptors, states::N_NOK, StateKind::Count, false);
                }
                Kind::Switch { inputs, outputs, .. } => {
                    let in_labels: Vec<String> =
                        inputs.iter().map(|b| String::from(&*line.buffers[b.0].name)).collect();
                    let out_labels: Vec<String> =
                        outputs.iter().map(|b| String::from(&*line.buffers[b.0].name)).collect();
                    push(
                        &mut descriptors,
                        states::IN_INDEX,
                        StateKind::Discrete { labels: in_labels },
                        true,
                    );
                    push(
                        &mut descriptors,
                        states::OUT_INDEX,
                        StateKind::Discrete { labels: out_labels },
                        true,
                    );
                }
                Kind::Sink { .. } => {
                    push(&mut descriptors, states::N_OK, StateKind::Count, false);
                }
                Kind::Magazine { .. } => {}
            }
            if st.switchable {
                push(
                    &mut descriptors,
                    states::ON,
                    StateKind::Discrete { labels: labels(["off", "on"]) },
                    true,
                );
            }
        }
        for b in &line.buffers {
            descriptors.push(StateDescriptor {
                object: b.name.clone(),
                state: states::FILL,
                kind: StateKind::Numeric { lo: 0.0, hi: 1.0 },
                observable: !mask.is_hidden(&b.name, states::FILL),
                actionable: false,
            });
        }
        for w in &line.workers {
            let stations: Vec<String> = line.pools[w.pool.0]
                .stations
                .iter()
                .map(|s| String::from(&*line.stations[s.0].name))
                .collect();
            descriptors.push(StateDescriptor {
                object: w.name.clone(),
                state: states::ASSIGNMENT,
                kind: StateKind::Discrete { labels: stations },
                observable: !mask.is_hidden(&w.name, states::ASSIGNMENT),
                actionable: true,
            });
        }

        let observation_slots: Vec<usize> = descriptors
            .iter()
            .enumerate()
            .filter(|(_, d)| d.observable)
            .map(|(i, _)| i)
            .collect();
        let names = Arc::new(
            observation_slots
                .iter()
                .map(|&i| {
                    let d = &descriptors[i];
                    alloc::format!("{}.{}", d.object, d.state)
                })
                .collect(),
        );
        let lookup = descriptors
            .iter()
            .enumerate()
            .map(|(i, d)| ((d.object.clone(), String::from(d.state)), i))
            .collect();
        SpaceCatalog { descriptors, observation_slots, names, lookup }
    }

    pub fn descriptors(&self) -> &[StateDescriptor] {
        &self.descriptors
    }

    pub fn observables(&self) -> impl Iterator<Item = &StateDescriptor> {
        self.observation_slots.iter().map(|&i| &self.descriptors[i])
    }

    pub fn actionables(&self) -> impl Iterator<Item = &StateDescriptor> {
        self.descriptors.iter().filter(|d| d.actionable)
    }

    pub fn observation_len(&self) -> usize {
        self.observation_slots.len()
    }

    pub fn observation_names(&self) -> &Arc<Vec<String>> {
        &self.names
    }

    /// Position of `object.state` in the observation vector.
    pub fn observation_slot(&self, object: &str, state: &str) -> Option<usize> {
        let di = *self.lookup.get(&(String::from(object), String::from(state)))?;
        self.observation_slots.iter().position(|&i| i == di)
    }

    pub fn descriptor(&self, object: &str, state: &str) -> Option<&StateDescriptor> {
        self.lookup
            .get(&(String::from(object), String::from(state)))
            .map(|&i| &self.descriptors[i])
    }
}

fn covered_by_pool(line: &Line, station: &str) -> bool {
    let sid = line.station_id(station).unwrap();
    line.pools.iter().any(|p| p.stations.contains(&sid))
}

/// The split demanded by consumers: what can be seen, what can be set.
pub fn space_descriptors(
    line: &Line,
    mask: &ObservabilityMask,
) -> (Vec<StateDescriptor>, Vec<StateDescriptor>) {
    let catalog = SpaceCatalog::build(line, mask);
    let obs = catalog.observables().cloned().collect();
    let act = catalog.actionables().cloned().collect();
    (obs, act)
}

/// Reads every observable state. Fill levels and counts are
/// instantaneous; processing times are lagged (last completed step, `0`
/// until a first completion).
pub fn snapshot(line: &Line, catalog: &SpaceCatalog, at: SimTime) -> Observation {
    let mut values = Vec::with_capacity(catalog.observation_len());
    for d in catalog.observables() {
        values.push(read_state(line, d));
    }
    Observation { values, names: Arc::clone(catalog.observation_names()), time: at }
}

fn read_state(line: &Line, d: &StateDescriptor) -> f64 {
    match d.state {
        states::FILL => {
            let b = line.buffer_id(&d.object).expect("buffer disappeared");
            line.buffers[b.0].fill()
        }
        states::ASSIGNMENT => {
            let w = worker_by_name(line, &d.object).expect("worker disappeared");
            let worker = &line.workers[w.0];
            let pool = &line.pools[worker.pool.0];
            pool.stations.iter().position(|s| *s == worker.assigned).unwrap() as f64
        }
        _ => {
            let sid = line.station_id(&d.object).expect("station disappeared");
            let st = &line.stations[sid.0];
            match d.state {
                states::MODE => encode_mode(st.mode()),
                states::PROCESSING_TIME => st.last_processing.unwrap_or(0.0),
                states::WAITING_TIME => match &st.kind {
                    Kind::Source { waiting_time, .. } => *waiting_time,
                    _ => 0.0,
                },
                states::N_WORKERS => f64::from(st.present_workers),
                states::N_OK => st.n_ok as f64,
                states::N_NOK => st.n_nok as f64,
                states::ON => {
                    if st.on {
                        1.0
                    } else {
                        0.0
                    }
                }
                states::IN_INDEX => match &st.kind {
                    Kind::Switch { in_index, .. } => *in_index as f64,
                    _ => 0.0,
                },
                states::OUT_INDEX => match &st.kind {
                    Kind::Switch { out_index, .. } => *out_index as f64,
                    _ => 0.0,
                },
                other => unreachable!("unknown state `{other}`"),
            }
        }
    }
}

fn worker_by_name(line: &Line, name: &str) -> Option<WorkerId> {
    line.workers.iter().position(|w| w.name == name).map(WorkerId)
}

/// Validates a command against the catalog and applies it. Validation is
/// atomic: any invalid entry rejects the whole command untouched.
///
/// Effects are deferred to the dynamics' natural decision points: waiting
/// times apply from the source's next iteration, switch indices at the
/// next routing decision, worker reassignment after task completion and
/// traversal, on/off at the next cycle boundary.
pub fn apply(sim: &mut Sim, catalog: &SpaceCatalog, cmd: &ActionCommand) -> Result<(), ActionError> {
    for ((object, state), value) in cmd.iter() {
        let d = catalog.descriptor(object, state).ok_or_else(|| {
            if catalog.descriptors().iter().any(|d| &d.object == object) {
                ActionError::UnknownState { object: object.clone(), state: state.clone() }
            } else {
                ActionError::UnknownObject { object: object.clone() }
            }
        })?;
        if !d.actionable {
            return Err(ActionError::NotActionable { object: object.clone(), state: state.clone() });
        }
        match (&d.kind, value) {
            (StateKind::Numeric { lo, hi }, Value::Real(v)) => {
                if !(v.is_finite() && *lo <= *v && *v <= *hi) {
                    return Err(ActionError::OutOfRange {
                        object: object.clone(),
                        state: state.clone(),
                        value: *v,
                        lo: *lo,
                        hi: *hi,
                    });
                }
            }
            (StateKind::Discrete { labels }, Value::Index(i)) => {
                if *i >= labels.len() {
                    return Err(ActionError::IndexOutOfRange {
                        object: object.clone(),
                        state: state.clone(),
                        index: *i,
                        len: labels.len(),
                    });
                }
            }
            _ => {
                return Err(ActionError::WrongValueType {
                    object: object.clone(),
                    state: state.clone(),
                })
            }
        }
    }
    for ((object, state), value) in cmd.iter() {
        match state.as_str() {
            states::WAITING_TIME => {
                let sid = sim.line().station_id(object).unwrap();
                let Value::Real(v) = value else { unreachable!() };
                sim.set_waiting_time(sid, *v);
            }
            states::IN_INDEX | states::OUT_INDEX => {
                let sid = sim.line().station_id(object).unwrap();
                let Value::Index(i) = value else { unreachable!() };
                sim.set_switch_index(sid, state == states::OUT_INDEX, *i);
            }
            states::ON => {
                let sid = sim.line().station_id(object).unwrap();
                let Value::Index(i) = value else { unreachable!() };
                sim.set_on(sid, *i == 1);
            }
            states::ASSIGNMENT => {
                let wid = worker_by_name(sim.line(), object).unwrap();
                let Value::Index(i) = value else { unreachable!() };
                let pool = sim.line().workers[wid.0].pool;
                let target = sim.line().pools[pool.0].stations[*i];
                sim.reassign_worker(wid, target);
            }
            other => unreachable!("actionable state `{other}` without an actuator"),
        }
    }
    Ok(())
}
