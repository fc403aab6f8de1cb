//! Scripted baseline controllers.
//!
//! Agents are functions from observations to action commands with
//! whatever internal memory they need. `begin` runs at every episode
//! start and must clear that memory; it also hands the agent the layout
//! summary and catalog so it can resolve the observation slots it reads.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::observe::{states, ActionCommand, Observation, SpaceCatalog, StateKind, Value};
use crate::rng::RandomStream;

/// Upper bound used when sampling unbounded numeric actions at random.
pub const RANDOM_NUMERIC_CAP: f64 = 60.0;

/// Switch topology as seen by controllers.
#[derive(Clone, Debug)]
pub struct SwitchInfo {
    pub name: String,
    pub in_buffers: Vec<String>,
    pub out_buffers: Vec<String>,
    pub out_capacities: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct PoolInfo {
    pub name: String,
    pub workers: Vec<String>,
    pub stations: Vec<String>,
}

/// Layout summary handed to agents at episode start.
#[derive(Clone, Debug)]
pub struct LineInfo {
    pub switches: Vec<SwitchInfo>,
    /// Sources with an actionable waiting time.
    pub sources: Vec<String>,
    pub pools: Vec<PoolInfo>,
}

/// An episode controller.
pub trait Agent {
    /// Called at every episode start; must reset internal memory.
    fn begin(&mut self, _info: &LineInfo, _catalog: &SpaceCatalog) {}

    /// One decision on the control grid.
    fn act(&mut self, observation: &Observation) -> ActionCommand;
}

/// Emits empty commands; the line runs open-loop.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullAgent;

impl Agent for NullAgent {
    fn act(&mut self, _observation: &Observation) -> ActionCommand {
        ActionCommand::new()
    }
}

/// Holds one source at a fixed waiting time.
#[derive(Clone, Debug)]
pub struct StaticWaitingAgent {
    pub source: String,
    pub waiting: f64,
}

impl StaticWaitingAgent {
    pub fn new(source: &str, waiting: f64) -> Self {
        StaticWaitingAgent { source: String::from(source), waiting }
    }
}

impl Agent for StaticWaitingAgent {
    fn act(&mut self, _observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        cmd.set(&self.source, states::WAITING_TIME, Value::Real(self.waiting));
        cmd
    }
}

/// Tracks the assembly's processing time with a rolling mean of the last
/// `lookback` completed cycles and sets
/// `waiting = mean + 2 E[T_g] - E[T_SC]` each step. Before the first
/// completion it falls back to the static optimum.
#[derive(Clone, Debug)]
pub struct RollingMeanAgent {
    pub source: String,
    pub assembly: String,
    pub lookback: usize,
    /// `2 E[T_g] - E[T_SC]`, the constant part of the target.
    pub offset: f64,
    pub fallback: f64,
    history: VecDeque<f64>,
    time_slot: usize,
    count_slot: usize,
    last_count: f64,
}

impl RollingMeanAgent {
    pub fn new(source: &str, assembly: &str, lookback: usize, offset: f64, fallback: f64) -> Self {
        assert!(lookback >= 1);
        RollingMeanAgent {
            source: String::from(source),
            assembly: String::from(assembly),
            lookback,
            offset,
            fallback,
            history: VecDeque::new(),
            time_slot: 0,
            count_slot: 0,
            last_count: 0.0,
        }
    }

    /// The benchmark wiring: watch `Assembly`, steer `SourceComp`.
    pub fn benchmark(lookback: usize) -> Self {
        // 2 * 1 - 5.5 against a fallback of the static optimum 18.5.
        RollingMeanAgent::new("SourceComp", "Assembly", lookback, 2.0 - 5.5, 18.5)
    }
}

impl Agent for RollingMeanAgent {
    fn begin(&mut self, _info: &LineInfo, catalog: &SpaceCatalog) {
        self.history.clear();
        self.last_count = 0.0;
        self.time_slot = catalog
            .observation_slot(&self.assembly, states::PROCESSING_TIME)
            .expect("assembly processing time observable");
        self.count_slot = catalog
            .observation_slot(&self.assembly, states::N_OK)
            .expect("assembly cycle count observable");
    }

    fn act(&mut self, observation: &Observation) -> ActionCommand {
        let count = observation.values[self.count_slot];
        if count > self.last_count {
            // One or more cycles finished since the last look; the lagged
            // state carries the most recent duration.
            self.history.push_back(observation.values[self.time_slot]);
            while self.history.len() > self.lookback {
                self.history.pop_front();
            }
            self.last_count = count;
        }
        let waiting = if self.history.is_empty() {
            self.fallback
        } else {
            let mean: f64 = self.history.iter().sum::<f64>() / self.history.len() as f64;
            (mean + self.offset).max(0.0)
        };
        let mut cmd = ActionCommand::new();
        cmd.set(&self.source, states::WAITING_TIME, Value::Real(waiting));
        cmd
    }
}

struct SwitchSlots {
    name: String,
    in_fills: Vec<usize>,
    out_fills: Vec<usize>,
    out_capacities: Vec<u32>,
}

fn resolve_switches(info: &LineInfo, catalog: &SpaceCatalog) -> Vec<SwitchSlots> {
    info.switches
        .iter()
        .map(|sw| SwitchSlots {
            name: sw.name.clone(),
            in_fills: sw
                .in_buffers
                .iter()
                .map(|b| catalog.observation_slot(b, states::FILL).expect("fill observable"))
                .collect(),
            out_fills: sw
                .out_buffers
                .iter()
                .map(|b| catalog.observation_slot(b, states::FILL).expect("fill observable"))
                .collect(),
            out_capacities: sw.out_capacities.clone(),
        })
        .collect()
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for (i, v) in values.enumerate() {
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best_v = v;
            best = i;
        }
    }
    best
}

/// Pushes to the emptiest out-buffer and fetches from the fullest
/// in-buffer of every switch; ties go to the lowest index.
#[derive(Default)]
pub struct GreedySwitchAgent {
    switches: Vec<SwitchSlots>,
}

impl GreedySwitchAgent {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Agent for GreedySwitchAgent {
    fn begin(&mut self, info: &LineInfo, catalog: &SpaceCatalog) {
        self.switches = resolve_switches(info, catalog);
    }

    fn act(&mut self, observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        for sw in &self.switches {
            if sw.in_fills.len() > 1 {
                let i = argmax(sw.in_fills.iter().map(|&s| observation.values[s]));
                cmd.set(&sw.name, states::IN_INDEX, Value::Index(i));
            }
            if sw.out_fills.len() > 1 {
                let o = argmin(sw.out_fills.iter().map(|&s| observation.values[s]));
                cmd.set(&sw.name, states::OUT_INDEX, Value::Index(o));
            }
        }
        cmd
    }
}

/// Cycles every switch's indices one position per step.
#[derive(Default)]
pub struct RoundRobinSwitchAgent {
    switches: Vec<(String, usize, usize)>,
    tick: usize,
}

impl RoundRobinSwitchAgent {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Agent for RoundRobinSwitchAgent {
    fn begin(&mut self, info: &LineInfo, _catalog: &SpaceCatalog) {
        self.tick = 0;
        self.switches = info
            .switches
            .iter()
            .map(|sw| (sw.name.clone(), sw.in_buffers.len(), sw.out_buffers.len()))
            .collect();
    }

    fn act(&mut self, _observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        for (name, n_in, n_out) in &self.switches {
            if *n_in > 1 {
                cmd.set(name, states::IN_INDEX, Value::Index(self.tick % n_in));
            }
            if *n_out > 1 {
                cmd.set(name, states::OUT_INDEX, Value::Index(self.tick % n_out));
            }
        }
        self.tick += 1;
        cmd
    }
}

/// Samples a fresh value for every actionable state each step.
pub struct RandomAgent {
    seed: u64,
    episode: u64,
    stream: RandomStream,
    actions: Vec<(String, &'static str, StateKind)>,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent { seed, episode: 0, stream: RandomStream::new(seed, "agent"), actions: Vec::new() }
    }
}

impl Agent for RandomAgent {
    fn begin(&mut self, _info: &LineInfo, catalog: &SpaceCatalog) {
        // Fresh, episode-indexed stream so reuse across episodes stays
        // deterministic.
        self.stream = RandomStream::new(self.seed.wrapping_add(self.episode), "agent");
        self.episode += 1;
        self.actions = catalog
            .actionables()
            .map(|d| (d.object.clone(), d.state, d.kind.clone()))
            .collect();
    }

    fn act(&mut self, _observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        for (object, state, kind) in &self.actions {
            match kind {
                StateKind::Numeric { lo, hi } => {
                    let hi = hi.min(RANDOM_NUMERIC_CAP);
                    cmd.set(object, state, Value::Real(self.stream.uniform_in(*lo, hi)));
                }
                StateKind::Discrete { labels } => {
                    cmd.set(object, state, Value::Index(self.stream.index(labels.len())));
                }
                StateKind::Count => {}
            }
        }
        cmd
    }
}

/// The complex-line heuristic: a fixed source waiting time, a fixed
/// worker distribution issued from the first step, and switch routing
/// that prefers the emptiest component buffer — with ties and near-ties
/// (within one slot) broken toward later assembly stages.
pub struct ClHeuristicAgent {
    pub waiting: f64,
    pub partition: Vec<u32>,
    source: String,
    switches: Vec<SwitchSlots>,
    workers: Vec<(String, usize)>,
}

impl ClHeuristicAgent {
    pub fn new(waiting: f64, partition: Vec<u32>) -> Self {
        ClHeuristicAgent {
            waiting,
            partition,
            source: String::new(),
            switches: Vec::new(),
            workers: Vec::new(),
        }
    }
}

impl Agent for ClHeuristicAgent {
    fn begin(&mut self, info: &LineInfo, catalog: &SpaceCatalog) {
        self.switches = resolve_switches(info, catalog);
        self.source = info
            .sources
            .iter()
            .find(|s| s.contains("Component"))
            .cloned()
            .unwrap_or_else(|| info.sources.first().cloned().unwrap_or_default());
        self.workers.clear();
        if let Some(pool) = info.pools.first() {
            assert_eq!(pool.stations.len(), self.partition.len(), "partition does not fit the pool");
            let mut slot = 0usize;
            let mut placed = 0u32;
            for w in &pool.workers {
                while slot < self.partition.len() && placed >= self.partition[slot] {
                    slot += 1;
                    placed = 0;
                }
                if slot == self.partition.len() {
                    break;
                }
                self.workers.push((w.clone(), slot));
                placed += 1;
            }
        }
    }

    fn act(&mut self, observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        if !self.source.is_empty() {
            cmd.set(&self.source, states::WAITING_TIME, Value::Real(self.waiting));
        }
        for (worker, slot) in &self.workers {
            cmd.set(worker, states::ASSIGNMENT, Value::Index(*slot));
        }
        for sw in &self.switches {
            if sw.out_fills.len() > 1 {
                let fills: Vec<f64> = sw.out_fills.iter().map(|&s| observation.values[s]).collect();
                let min = fills.iter().copied().fold(f64::INFINITY, f64::min);
                // Near-tie: anything within one slot of the emptiest;
                // the latest stage among them wins.
                let mut choice = 0;
                for (i, f) in fills.iter().enumerate() {
                    let slot = 1.0 / f64::from(sw.out_capacities[i].max(1));
                    if *f <= min + slot + 1e-12 {
                        choice = i;
                    }
                }
                cmd.set(&sw.name, states::OUT_INDEX, Value::Index(choice));
            }
        }
        cmd
    }
}

/// Routes every switch to a fixed output index (the line-jamming probe).
pub struct FixedRouteAgent {
    pub out_index: usize,
    switches: Vec<(String, usize)>,
    waiting: Option<(String, f64)>,
}

impl FixedRouteAgent {
    pub fn new(out_index: usize) -> Self {
        FixedRouteAgent { out_index, switches: Vec::new(), waiting: None }
    }

    /// Also hold the first actionable source at a fixed waiting time.
    pub fn with_waiting(mut self, waiting: f64) -> Self {
        self.waiting = Some((String::new(), waiting));
        self
    }
}

impl Agent for FixedRouteAgent {
    fn begin(&mut self, info: &LineInfo, _catalog: &SpaceCatalog) {
        self.switches = info
            .switches
            .iter()
            .map(|sw| (sw.name.clone(), sw.out_buffers.len()))
            .collect();
        if let Some((name, _)) = &mut self.waiting {
            *name = info.sources.first().cloned().unwrap_or_default();
        }
    }

    fn act(&mut self, _observation: &Observation) -> ActionCommand {
        let mut cmd = ActionCommand::new();
        for (name, n_out) in &self.switches {
            if *n_out > 0 {
                cmd.set(name, states::OUT_INDEX, Value::Index(self.out_index.min(n_out - 1)));
            }
        }
        if let Some((name, w)) = &self.waiting {
            if !name.is_empty() {
                cmd.set(name, states::WAITING_TIME, Value::Real(*w));
            }
        }
        cmd
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;

    fn obs(names: &[&str], values: &[f64]) -> Observation {
        Observation {
            values: values.to_vec(),
            names: Arc::new(names.iter().map(|s| String::from(*s)).collect()),
            time: crate::time::SimTime::ZERO,
        }
    }

    #[test]
    fn greedy_breaks_ties_to_lowest_index() {
        let mut agent = GreedySwitchAgent::new();
        agent.switches = alloc::vec![SwitchSlots {
            name: String::from("Sw"),
            in_fills: alloc::vec![0, 1],
            out_fills: alloc::vec![2, 3],
            out_capacities: alloc::vec![2, 2],
        }];
        let o = obs(&["a", "b", "c", "d"], &[0.5, 0.5, 0.25, 0.25]);
        let cmd = agent.act(&o);
        let entries: Vec<_> = cmd.iter().collect();
        assert!(entries.iter().any(|((obj, st), v)| {
            obj == "Sw" && st == states::IN_INDEX && **v == Value::Index(0)
        }));
        assert!(entries.iter().any(|((obj, st), v)| {
            obj == "Sw" && st == states::OUT_INDEX && **v == Value::Index(0)
        }));
    }

    #[test]
    fn cl_routing_prefers_later_stage_on_near_tie() {
        let mut agent = ClHeuristicAgent::new(1.0, alloc::vec![]);
        agent.switches = alloc::vec![SwitchSlots {
            name: String::from("Switch"),
            in_fills: alloc::vec![],
            out_fills: alloc::vec![0, 1, 2],
            out_capacities: alloc::vec![2, 2, 2],
        }];
        // Fills 0.0 and 0.5 are within one slot (0.5): pick the later.
        let o = obs(&["a", "b", "c"], &[0.0, 0.5, 1.0]);
        let cmd = agent.act(&o);
        assert!(cmd
            .iter()
            .any(|((_, st), v)| st == states::OUT_INDEX && *v == Value::Index(1)));
    }

    #[test]
    fn round_robin_alternates() {
        let mut agent = RoundRobinSwitchAgent::new();
        agent.switches = alloc::vec![(String::from("Sw"), 1, 2)];
        let o = obs(&[], &[]);
        let first = agent.act(&o);
        let second = agent.act(&o);
        let third = agent.act(&o);
        let out = |cmd: &ActionCommand| {
            cmd.iter()
                .find(|((_, st), _)| st == states::OUT_INDEX)
                .map(|(_, v)| *v)
                .unwrap()
        };
        assert_eq!(out(&first), Value::Index(0));
        assert_eq!(out(&second), Value::Index(1));
        assert_eq!(out(&third), Value::Index(0));
    }
}
