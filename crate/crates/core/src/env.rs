//! Episodic control interface: reset/step on a fixed time grid.
//!
//! An episode lasts `T_sim` time units; the controller interacts every
//! `T_step`, giving `T = T_sim / T_step` equally spaced decisions and a
//! fixed trajectory length. A step applies the command, advances the
//! engine, and returns the next observation plus the reward
//! `C(t_{k+1}) - C(t_k)`; episode rewards therefore sum exactly to the
//! final aggregated value.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::agents::{Agent, LineInfo, PoolInfo, SwitchInfo};
use crate::error::{BuildError, EnvError, ScenarioError};
use crate::line::{Kind, Line};
use crate::observe::{self, ActionCommand, Observation, ObservabilityMask, SpaceCatalog};
use crate::scenario::{Blueprint, ScenarioSpec};
use crate::score::{CostModel, RewardLedger};
use crate::sim::{EventRecord, Sim};
use crate::time::SimTime;

/// Horizon and control grid of an episode.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeConfig {
    pub t_sim: f64,
    pub t_step: f64,
}

impl EpisodeConfig {
    /// Requires `t_sim / t_step` to be a positive integer.
    pub fn new(t_sim: f64, t_step: f64) -> Self {
        assert!(t_sim > 0.0 && t_step > 0.0, "times must be positive");
        let steps = t_sim / t_step;
        assert!(
            (steps - libm::round(steps)).abs() < 1e-9 && steps >= 1.0,
            "t_sim must be an integer multiple of t_step"
        );
        EpisodeConfig { t_sim, t_step }
    }

    /// Trajectory length `T`.
    pub fn steps(&self) -> usize {
        libm::round(self.t_sim / self.t_step) as usize
    }
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig::new(crate::scenario::DEFAULT_T_SIM, crate::scenario::DEFAULT_T_STEP)
    }
}

/// Step outcome.
#[derive(Clone, Debug)]
pub struct Step {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Raw counters for consumers that shape their own rewards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub n_ok: u64,
    pub n_nok: u64,
    pub deadlocked: bool,
}

/// Bookkeeping of one completed episode.
#[derive(Clone, Debug)]
pub struct EpisodeResult {
    pub total_reward: f64,
    pub n_ok: u64,
    pub n_nok: BTreeMap<String, u64>,
    pub n_nok_total: u64,
    pub step_rewards: Vec<f64>,
    pub deadlocked: bool,
}

/// An episodic environment over one scenario blueprint.
#[derive(Debug)]
pub struct Env {
    blueprint: Blueprint,
    cfg: EpisodeConfig,
    mask: ObservabilityMask,
    sim: Sim,
    catalog: SpaceCatalog,
    cost: CostModel,
    ledger: RewardLedger,
    scrap_weight: f64,
    step_index: usize,
    done: bool,
    audit: bool,
    log_events: bool,
    seed: u64,
}

impl Env {
    /// Validates the blueprint once and prepares an episode with the
    /// given seed (equivalent to an initial `reset`).
    pub fn from_blueprint(
        blueprint: Blueprint,
        cfg: EpisodeConfig,
        seed: u64,
    ) -> Result<Env, BuildError> {
        Self::with_mask(blueprint, cfg, ObservabilityMask::none(), seed)
    }

    pub fn with_mask(
        blueprint: Blueprint,
        cfg: EpisodeConfig,
        mask: ObservabilityMask,
        seed: u64,
    ) -> Result<Env, BuildError> {
        let line = Line::build(&blueprint.layout)?;
        let catalog = SpaceCatalog::build(&line, &mask);
        let cost = CostModel::from_named(&blueprint.station_costs, &line, blueprint.t_c, cfg.t_sim);
        let scrap_weight = blueprint.scrap_weight;
        let mut env = Env {
            blueprint,
            cfg,
            mask,
            sim: Sim::new(line, seed),
            catalog,
            cost,
            ledger: RewardLedger::new(scrap_weight),
            scrap_weight,
            step_index: 0,
            done: false,
            audit: false,
            log_events: false,
            seed,
        };
        env.reset(seed);
        Ok(env)
    }

    /// Builds the environment for a benchmark scenario.
    pub fn from_spec(spec: &ScenarioSpec) -> Result<Env, ScenarioError> {
        let blueprint = crate::scenario::blueprint(spec)?;
        let cfg = EpisodeConfig::new(spec.t_sim, spec.t_step);
        Ok(Env::from_blueprint(blueprint, cfg, spec.seed)
            .expect("scenario blueprints always build"))
    }

    /// Starts a fresh episode: new line, counters at zero, clock at zero.
    /// Scenario-level randomness (the jump window) is resampled from the
    /// seed's scenario stream.
    pub fn reset(&mut self, seed: u64) -> Observation {
        self.seed = seed;
        let line = Line::build(&self.blueprint.layout).expect("blueprint validated at construction");
        self.catalog = SpaceCatalog::build(&line, &self.mask);
        self.cost =
            CostModel::from_named(&self.blueprint.station_costs, &line, self.blueprint.t_c, self.cfg.t_sim);
        self.sim = Sim::new(line, seed);
        self.sim.set_event_logging(self.log_events);
        if let Some(jump) = &self.blueprint.jump {
            let profile = jump
                .sample_for(&mut self.sim.scenario_stream, self.cfg.t_sim)
                .expect("jump ranges validated at construction");
            let sid = self
                .sim
                .line()
                .station_id(&jump.station)
                .expect("jump station exists");
            self.sim.line_mut().set_jump(sid, profile);
        }
        self.ledger = RewardLedger::new(self.scrap_weight);
        self.step_index = 0;
        self.done = false;
        observe::snapshot(self.sim.line(), &self.catalog, self.sim.now())
    }

    /// Applies a command at the current boundary without advancing time
    /// (several applications per boundary compose; re-applying the same
    /// command is a no-op).
    pub fn apply(&mut self, cmd: &ActionCommand) -> Result<(), EnvError> {
        if self.done {
            return Err(EnvError::EpisodeFinished);
        }
        observe::apply(&mut self.sim, &self.catalog, cmd)?;
        Ok(())
    }

    /// Applies the command, advances to the next grid point, and scores
    /// the elapsed interval.
    pub fn step(&mut self, cmd: &ActionCommand) -> Result<Step, EnvError> {
        if self.done {
            return Err(EnvError::EpisodeFinished);
        }
        observe::apply(&mut self.sim, &self.catalog, cmd)?;
        let steps = self.cfg.steps();
        let next = if self.step_index + 1 == steps {
            self.cfg.t_sim
        } else {
            (self.step_index as f64 + 1.0) * self.cfg.t_step
        };
        self.sim.run_until(SimTime::new(next));
        self.step_index += 1;
        self.done = self.step_index == steps;
        self.ledger.sync(self.sim.line());
        let reward = self.ledger.step_reward(&self.cost);
        if self.audit {
            if let Err(v) = self.sim.line().audit() {
                panic!("invariant violated at t = {}: {v}", self.sim.now());
            }
        }
        let info = StepInfo {
            n_ok: self.sim.line().total_ok(),
            n_nok: self.sim.line().total_nok(),
            deadlocked: self.sim.detect_deadlock(),
        };
        Ok(Step {
            observation: observe::snapshot(self.sim.line(), &self.catalog, self.sim.now()),
            reward,
            done: self.done,
            info,
        })
    }

    pub fn catalog(&self) -> &SpaceCatalog {
        &self.catalog
    }

    pub fn line(&self) -> &Line {
        self.sim.line()
    }

    pub fn sim(&self) -> &Sim {
        &self.sim
    }

    pub fn config(&self) -> EpisodeConfig {
        self.cfg
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    pub fn ledger(&self) -> &RewardLedger {
        &self.ledger
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Overrides the scrap weight (curriculum); applies immediately and
    /// to subsequent resets.
    pub fn set_scrap_weight(&mut self, w: f64) {
        self.scrap_weight = w;
        self.ledger.scrap_weight = w;
    }

    /// Hard-asserts the conservation invariants after every step.
    pub fn set_audit(&mut self, on: bool) {
        self.audit = on;
    }

    /// Records the engine's event log (from the next reset on).
    pub fn set_event_logging(&mut self, on: bool) {
        self.log_events = on;
        self.sim.set_event_logging(on);
    }

    pub fn take_event_log(&mut self) -> Vec<EventRecord> {
        self.sim.take_event_log()
    }

    /// Topology summary for scripted controllers.
    pub fn line_info(&self) -> LineInfo {
        let line = self.sim.line();
        let mut switches = Vec::new();
        let mut sources = Vec::new();
        for sid in line.station_ids() {
            match &line.stations[sid.0].kind {
                Kind::Switch { inputs, outputs, .. } => switches.push(SwitchInfo {
                    name: String::from(line.station_name(sid)),
                    in_buffers: inputs.iter().map(|b| String::from(line.buffer_name(*b))).collect(),
                    out_buffers: outputs.iter().map(|b| String::from(line.buffer_name(*b))).collect(),
                    out_capacities: outputs.iter().map(|b| line.buffer_capacity(*b)).collect(),
                }),
                Kind::Source { actionable_waiting, .. } => {
                    if *actionable_waiting {
                        sources.push(String::from(line.station_name(sid)));
                    }
                }
                _ => {}
            }
        }
        let pools = line
            .pool_ids()
            .map(|pid| PoolInfo {
                name: String::from(line.pool_name(pid)),
                workers: line
                    .pool_workers(pid)
                    .iter()
                    .map(|w| String::from(line.worker_name(*w)))
                    .collect(),
                stations: line
                    .pool_stations(pid)
                    .iter()
                    .map(|s| String::from(line.station_name(*s)))
                    .collect(),
            })
            .collect();
        LineInfo { switches, sources, pools }
    }

    /// Scrap counts per station, by name.
    pub fn nok_by_station(&self) -> BTreeMap<String, u64> {
        let line = self.sim.line();
        line.station_ids()
            .filter(|&id| line.n_nok(id) > 0)
            .map(|id| (String::from(line.station_name(id)), line.n_nok(id)))
            .collect()
    }
}

/// Runs one full episode under the agent. Deterministic for a given
/// `(blueprint, seed)` and agent state.
pub fn run_episode(
    env: &mut Env,
    agent: &mut dyn Agent,
    seed: u64,
) -> Result<EpisodeResult, EnvError> {
    let mut obs = env.reset(seed);
    let info = env.line_info();
    agent.begin(&info, env.catalog());
    let mut step_rewards = Vec::with_capacity(env.config().steps());
    let deadlocked;
    loop {
        let cmd = agent.act(&obs);
        let step = env.step(&cmd)?;
        step_rewards.push(step.reward);
        obs = step.observation;
        if step.done {
            deadlocked = step.info.deadlocked;
            break;
        }
    }
    let total_reward = step_rewards.iter().sum();
    Ok(EpisodeResult {
        total_reward,
        n_ok: env.line().total_ok(),
        n_nok: env.nok_by_station(),
        n_nok_total: env.line().total_nok(),
        step_rewards,
        deadlocked,
    })
}

/// Stable per-episode seed derivation (splitmix over the packed pair).
pub fn derive_seed(base: u64, episode: u64) -> u64 {
    let mut z = base ^ episode.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mean/std/max summary in the evaluation-table convention.
#[derive(Clone, Debug)]
pub struct EvalSummary {
    pub group_means: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub max: f64,
}

/// The evaluation protocol: the mean reward of `episodes_per_group`
/// episodes, repeated `groups` times; reported as mean ± std (max) over
/// the group means.
pub fn evaluate_protocol(
    env: &mut Env,
    mut make_agent: impl FnMut() -> Box<dyn Agent>,
    groups: u64,
    episodes_per_group: u64,
    base_seed: u64,
) -> Result<EvalSummary, EnvError> {
    let mut group_means = Vec::new();
    let mut max = f64::NEG_INFINITY;
    for g in 0..groups {
        let mut sum = 0.0;
        for e in 0..episodes_per_group {
            let seed = derive_seed(base_seed.wrapping_add(g), e);
            let mut agent = make_agent();
            let result = run_episode(env, agent.as_mut(), seed)?;
            sum += result.total_reward;
            max = max.max(result.total_reward);
        }
        group_means.push(sum / episodes_per_group as f64);
    }
    let mean = group_means.iter().sum::<f64>() / group_means.len() as f64;
    let var = group_means.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>()
        / group_means.len() as f64;
    Ok(EvalSummary { group_means, mean, std: libm::sqrt(var), max })
}

/// The scrap-weight curriculum: once the evaluation reward exceeds the
/// threshold in `required` consecutive evaluations, the weight is
/// multiplied by `factor`, capped at `cap`. Any miss resets the streak.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurriculumSchedule {
    pub weight: f64,
    pub factor: f64,
    pub cap: f64,
    pub threshold: f64,
    pub required: u32,
    streak: u32,
}

impl CurriculumSchedule {
    /// Benchmark rule: threshold 100, five consecutive evaluations.
    pub fn new(start_weight: f64, factor: f64, cap: f64) -> Self {
        assert!(factor >= 1.0 && start_weight >= 0.0 && cap >= start_weight);
        CurriculumSchedule { weight: start_weight, factor, cap, threshold: 100.0, required: 5, streak: 0 }
    }

    /// Feeds one evaluation reward, returns the (possibly updated) weight.
    pub fn tick(&mut self, eval_reward: f64) -> f64 {
        if eval_reward > self.threshold {
            self.streak += 1;
            if self.streak >= self.required {
                self.weight = (self.weight * self.factor).min(self.cap);
                self.streak = 0;
            }
        } else {
            self.streak = 0;
        }
        self.weight
    }

    pub fn streak(&self) -> u32 {
        self.streak
    }
}
