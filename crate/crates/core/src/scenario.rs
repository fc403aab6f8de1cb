//! The five benchmark scenarios.
//!
//! - `WT`: find the waiting time of a component source feeding an assembly
//!   under an expiry constraint.
//! - `WTJ`: same line, but the assembly's minimal processing time jumps to
//!   `f * T` inside a window sampled per episode. `f` is constructed from
//!   the sampled window so the expected attainable part count is always
//!   `R * N`, for a fixed ratio `R` and the no-jump expectation `N`.
//! - `PD`: distribute carriers over `k` parallel processes through two
//!   switches.
//! - `WA`: distribute a pool of `N` workers over `k` sequential stations.
//! - `CL`: all of the above combined — `k` sequential assemblies fed by a
//!   component switch and one worker pool, with expiring components.
//!
//! Factories return a [`Blueprint`]; [`crate::env::Env`] builds the line,
//! resolves costs, and (for `WTJ`) samples the jump profile from the
//! scenario-level random stream on every reset.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::Distribution;
use crate::error::ScenarioError;
use crate::layout::{
    AssemblySpec, BufferRole, BufferSpec, LayoutSpec, ProcessSpec, ProcessingSpec, PoolSpec,
    SinkSpec, SourceSpec, StationSpec, SwitchSpec,
};
use crate::rng::RandomStream;

/// Default episode horizon.
pub const DEFAULT_T_SIM: f64 = 4000.0;
/// Default control-grid spacing.
pub const DEFAULT_T_STEP: f64 = 1.0;
/// Default throughput ratio for `WTJ`.
pub const DEFAULT_JUMP_RATIO: f64 = 0.75;
/// Performance coefficient used by every staffed benchmark station.
pub const WORKER_COEFFICIENT: f64 = 0.3;

/// Which benchmark, with its shape parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ScenarioKind {
    /// `WT`
    WaitingTime,
    /// `WTJ(R)`
    WaitingTimeJump { ratio: f64 },
    /// `PD_k`
    PartDistribution { k: usize },
    /// `WA_{k,N}`
    WorkerAssignment { k: usize, workers: u32 },
    /// `CL_k`
    ComplexLine { k: usize },
}

impl ScenarioKind {
    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::WaitingTime => "WT",
            ScenarioKind::WaitingTimeJump { .. } => "WTJ",
            ScenarioKind::PartDistribution { .. } => "PD",
            ScenarioKind::WorkerAssignment { .. } => "WA",
            ScenarioKind::ComplexLine { .. } => "CL",
        }
    }
}

/// A fully parameterized benchmark instance.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub t_sim: f64,
    pub t_step: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, seed: u64) -> Self {
        ScenarioSpec { kind, t_sim: DEFAULT_T_SIM, t_step: DEFAULT_T_STEP, seed }
    }
}

/// A processing-time jump: inside `[trigger_at, trigger_at + duration]`
/// the law's minimum is multiplied by `factor`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JumpProfile {
    pub trigger_at: f64,
    pub duration: f64,
    pub factor: f64,
}

impl JumpProfile {
    pub fn active(&self, t: f64) -> bool {
        t >= self.trigger_at && t <= self.trigger_at + self.duration
    }

    /// The effective law at time `t`.
    pub fn applied(&self, base: Distribution, t: f64) -> Distribution {
        if self.active(t) {
            Distribution { minimum: self.factor * base.minimum, exp_mean: base.exp_mean }
        } else {
            base
        }
    }

    /// Wall time needed for `work` units of minimum processing starting
    /// at `start`: speed is `1` outside the window and `1/factor`
    /// inside, so cycles that straddle a window edge pro-rate instead of
    /// committing to one regime. A cycle lying fully inside takes exactly
    /// `factor * work`.
    pub fn stretched_minimum(&self, start: f64, work: f64) -> f64 {
        let a = self.trigger_at;
        let b = self.trigger_at + self.duration;
        let mut t = start;
        let mut w = work;
        if t >= b || w <= 0.0 {
            return w;
        }
        let mut elapsed = 0.0;
        if t < a {
            let head = a - t;
            if w <= head {
                return w;
            }
            elapsed += head;
            w -= head;
            t = a;
        }
        // Inside the window the same work takes `factor` times as long.
        let span = b - t;
        let needed = w * self.factor;
        if needed <= span {
            return elapsed + needed;
        }
        elapsed += span;
        w -= span / self.factor;
        elapsed + w
    }
}

/// Computes the jump factor `f` for a sampled window length so that the
/// expected attainable part count over the episode equals `ratio * N`,
/// where `N = t_sim / (t + s + e)` and `e` is the expected per-cycle
/// handling overhead (gets plus put).
///
/// `f = (1/t) * (t_jump * (t + s + e) / ((ratio - 1) * t_sim + t_jump) - s - e)`
pub fn jump_factor(
    t_jump: f64,
    ratio: f64,
    t: f64,
    s: f64,
    e: f64,
    t_sim: f64,
) -> Result<f64, ScenarioError> {
    let denom = (ratio - 1.0) * t_sim + t_jump;
    if denom <= 0.0 {
        return Err(ScenarioError::JumpWindowTooShort { t_jump, ratio });
    }
    let cycle = t + s + e;
    Ok((t_jump * cycle / denom - s - e) / t)
}

/// How a scenario samples its jump profile at reset.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JumpConfig {
    pub station: String,
    pub ratio: f64,
    /// `T_trigger ~ U[lo, hi]`.
    pub trigger_range: (f64, f64),
    /// `T_jump ~ U[lo, hi]`.
    pub duration_range: (f64, f64),
    /// Minimal processing time of the jumped station.
    pub base_minimum: f64,
    /// Exponential mean of the jumped station.
    pub base_exp_mean: f64,
    /// Expected handling overhead per cycle (gets plus put).
    pub handling_mean: f64,
}

impl JumpConfig {
    /// Draws the episode's profile from the scenario stream.
    pub fn sample(&self, stream: &mut RandomStream) -> Result<JumpProfile, ScenarioError> {
        let trigger_at = stream.uniform_in(self.trigger_range.0, self.trigger_range.1);
        let duration = stream.uniform_in(self.duration_range.0, self.duration_range.1);
        let factor = jump_factor(
            duration,
            self.ratio,
            self.base_minimum,
            self.base_exp_mean,
            self.handling_mean,
            DEFAULT_T_SIM.max(trigger_at + duration),
        )?;
        Ok(JumpProfile { trigger_at, duration, factor })
    }

    /// Same, but for an explicit horizon.
    pub fn sample_for(
        &self,
        stream: &mut RandomStream,
        t_sim: f64,
    ) -> Result<JumpProfile, ScenarioError> {
        let trigger_at = stream.uniform_in(self.trigger_range.0, self.trigger_range.1);
        let duration = stream.uniform_in(self.duration_range.0, self.duration_range.1);
        let factor = jump_factor(
            duration,
            self.ratio,
            self.base_minimum,
            self.base_exp_mean,
            self.handling_mean,
            t_sim,
        )?;
        Ok(JumpProfile { trigger_at, duration, factor })
    }
}

/// Everything the environment needs to instantiate episodes of a scenario.
#[derive(Clone, Debug)]
pub struct Blueprint {
    pub layout: LayoutSpec,
    /// Station work costs, keyed by station id. Part value is their sum.
    pub station_costs: BTreeMap<String, f64>,
    /// Minimal time per part (the reward normalizer's numerator).
    pub t_c: f64,
    /// Multiplier on scrap costs.
    pub scrap_weight: f64,
    /// Jump sampling, if the scenario has one.
    pub jump: Option<JumpConfig>,
}

fn costs_for(layout: &LayoutSpec) -> BTreeMap<String, f64> {
    use crate::layout::StationKindSpec as K;
    layout
        .stations
        .iter()
        .filter(|s| matches!(s.kind, K::Source(_) | K::Process(_) | K::Assembly(_)))
        .map(|s| (s.id.clone(), 1.0))
        .collect()
}

/// `WT`: two sources feed an assembly; components of the component source
/// expire after `T_AC = 35`. All gets take one time unit.
pub fn make_wt() -> Blueprint {
    let mut layout = LayoutSpec::new();
    let src = Distribution::new(5.0, 0.5);
    layout.stations.push(StationSpec::source(
        "SourceMain",
        SourceSpec::new(src).with_carrier_capacity(2).non_actionable(),
    ));
    layout.stations.push(StationSpec::source(
        "SourceComp",
        SourceSpec::new(src).with_carrier_capacity(1).with_assembly_condition(35.0),
    ));
    layout.stations.push(StationSpec::assembly(
        "Assembly",
        AssemblySpec {
            processing: ProcessingSpec::Fixed(Distribution::new(20.0, 2.0)),
            nok_error_time: 5.0,
        },
    ));
    layout.stations.push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));

    let get = Distribution::constant(1.0);
    layout.buffers.push(BufferSpec::between("SourceMain", "Assembly", 3).with_get_time(get));
    layout.buffers.push(
        BufferSpec::between("SourceComp", "Assembly", 2)
            .with_role(BufferRole::Component)
            .with_get_time(get),
    );
    layout.buffers.push(BufferSpec::between("Assembly", "Sink", 2).with_get_time(get));

    let station_costs = costs_for(&layout);
    // Bottleneck minimal cycle: both assembly gets plus its minimal time.
    Blueprint { layout, station_costs, t_c: 22.0, scrap_weight: 1.0, jump: None }
}

/// `WTJ(R)`: the `WT` line with a per-episode jump of the assembly's
/// minimal processing time; requires `0.5 < R < 1.0`.
pub fn make_wtj(ratio: f64) -> Result<Blueprint, ScenarioError> {
    if !(0.5 < ratio && ratio < 1.0) {
        return Err(ScenarioError::InvalidParameter {
            name: "ratio",
            reason: format!("must satisfy 0.5 < R < 1.0, got {ratio}"),
        });
    }
    let mut bp = make_wt();
    bp.jump = Some(JumpConfig {
        station: String::from("Assembly"),
        ratio,
        trigger_range: (500.0, 1500.0),
        duration_range: (1600.0, 2000.0),
        base_minimum: 20.0,
        base_exp_mean: 2.0,
        handling_mean: 2.0,
    });
    Ok(bp)
}

/// `PD_k`: a source feeds a switch that distributes over `k` parallel
/// processes with minimal times `10 * (i + 1)`; a second switch collects
/// into the sink.
pub fn make_pd(k: usize) -> Result<Blueprint, ScenarioError> {
    if k < 2 {
        return Err(ScenarioError::InvalidParameter {
            name: "k",
            reason: format!("need at least 2 parallel processes, got {k}"),
        });
    }
    let mut layout = LayoutSpec::new();
    layout.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::constant(1.0)).with_carrier_capacity(1).non_actionable(),
    ));
    layout
        .stations
        .push(StationSpec::switch("SwitchIn", SwitchSpec { processing: Distribution::constant(1.0) }));
    for i in 1..=k {
        layout.stations.push(StationSpec::process(
            &format!("P{i}"),
            ProcessSpec {
                processing: ProcessingSpec::Fixed(Distribution::new(10.0 * (i as f64 + 1.0), 0.1)),
                rework_probability: 0.0,
            },
        ));
    }
    layout
        .stations
        .push(StationSpec::switch("SwitchOut", SwitchSpec { processing: Distribution::constant(1.0) }));
    layout.stations.push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));

    layout.buffers.push(BufferSpec::between("Source", "SwitchIn", 2));
    for i in 1..=k {
        layout.buffers.push(BufferSpec::between("SwitchIn", &format!("P{i}"), 2));
    }
    for i in 1..=k {
        layout.buffers.push(BufferSpec::between(&format!("P{i}"), "SwitchOut", 2));
    }
    layout.buffers.push(BufferSpec::between("SwitchOut", "Sink", 3));

    let station_costs = costs_for(&layout);
    let t_c = 10.0 * (k as f64 + 1.0);
    Ok(Blueprint { layout, station_costs, t_c, scrap_weight: 1.0, jump: None })
}

/// `WA_{k,N}`: `k` sequential staffed stations with minimal times
/// `16 + 4i`, one pool of `N` workers (round-robin initial placement).
pub fn make_wa(k: usize, workers: u32) -> Result<Blueprint, ScenarioError> {
    make_wa_assigned(k, workers, None)
}

/// `WA_{k,N}` with an explicit initial worker placement.
pub fn make_wa_assigned(
    k: usize,
    workers: u32,
    initial: Option<Vec<u32>>,
) -> Result<Blueprint, ScenarioError> {
    if k < 2 {
        return Err(ScenarioError::InvalidParameter {
            name: "k",
            reason: format!("need at least 2 stations, got {k}"),
        });
    }
    if let Some(v) = &initial {
        if v.len() != k || v.iter().sum::<u32>() != workers {
            return Err(ScenarioError::InvalidParameter {
                name: "initial",
                reason: String::from("placement must cover every station and sum to the pool size"),
            });
        }
    }
    let mut layout = LayoutSpec::new();
    layout.stations.push(StationSpec::source(
        "Source",
        SourceSpec::new(Distribution::new(2.0, 0.2)).with_carrier_capacity(1).non_actionable(),
    ));
    for i in 1..=k {
        layout.stations.push(StationSpec::process(
            &format!("A{i}"),
            ProcessSpec {
                processing: ProcessingSpec::WorkerScaled {
                    minimum: 16.0 + 4.0 * i as f64,
                    noise_scale: 0.1,
                    coefficient: WORKER_COEFFICIENT,
                },
                rework_probability: 0.0,
            },
        ));
    }
    layout.stations.push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));

    layout.buffers.push(BufferSpec::between("Source", "A1", 2));
    for i in 1..k {
        layout.buffers.push(BufferSpec::between(&format!("A{i}"), &format!("A{}", i + 1), 2));
    }
    layout.buffers.push(BufferSpec::between(&format!("A{k}"), "Sink", 3));

    layout.pools.push(PoolSpec {
        id: String::from("Pool"),
        stations: (1..=k).map(|i| format!("A{i}")).collect(),
        size: workers,
        traversal_time: 5.0,
        initial_assignment: initial,
    });

    let station_costs = costs_for(&layout);
    // Fully staffed bottleneck minimum.
    let t_c = (16.0 + 4.0 * k as f64) * crate::dist::performance_coefficient(WORKER_COEFFICIENT, workers);
    Ok(Blueprint { layout, station_costs, t_c: t_c.max(2.0), scrap_weight: 1.0, jump: None })
}

/// `CL_k`: a carrier source feeds `k` chained assemblies; a component
/// source feeds them through a switch; components expire after
/// `T_AC = 35`; one pool of `3k` workers spans the assemblies. Scrap is
/// weighted `1/k` (the saturated curriculum weight).
pub fn make_cl(k: usize) -> Result<Blueprint, ScenarioError> {
    if k < 2 {
        return Err(ScenarioError::InvalidParameter {
            name: "k",
            reason: format!("need at least 2 assemblies, got {k}"),
        });
    }
    let mut layout = LayoutSpec::new();
    layout.stations.push(StationSpec::source(
        "CarrierSource",
        SourceSpec::new(Distribution::new(2.0, 0.2))
            .with_carrier_capacity(k as u32 + 1)
            .non_actionable(),
    ));
    layout.stations.push(StationSpec::source(
        "ComponentSource",
        SourceSpec::new(Distribution::new(2.0, 0.2))
            .with_carrier_capacity(1)
            .with_assembly_condition(35.0),
    ));
    layout
        .stations
        .push(StationSpec::switch("Switch", SwitchSpec { processing: Distribution::constant(1.0) }));
    for i in 1..=k {
        layout.stations.push(StationSpec::assembly(
            &format!("A{i}"),
            AssemblySpec {
                processing: ProcessingSpec::WorkerScaled {
                    minimum: 20.0,
                    noise_scale: 0.1,
                    coefficient: WORKER_COEFFICIENT,
                },
                nok_error_time: 5.0,
            },
        ));
    }
    layout.stations.push(StationSpec::sink("Sink", SinkSpec { processing: Distribution::constant(0.0) }));

    layout.buffers.push(BufferSpec::between("CarrierSource", "A1", 2));
    for i in 1..k {
        layout.buffers.push(BufferSpec::between(&format!("A{i}"), &format!("A{}", i + 1), 2));
    }
    layout.buffers.push(BufferSpec::between(&format!("A{k}"), "Sink", 3));
    layout.buffers.push(BufferSpec::between("ComponentSource", "Switch", 3));
    for i in 1..=k {
        layout.buffers.push(
            BufferSpec::between("Switch", &format!("A{i}"), 2).with_role(BufferRole::Component),
        );
    }

    layout.pools.push(PoolSpec {
        id: String::from("Pool"),
        stations: (1..=k).map(|i| format!("A{i}")).collect(),
        size: 3 * k as u32,
        traversal_time: 5.0,
        initial_assignment: None,
    });

    let station_costs = costs_for(&layout);
    Ok(Blueprint {
        layout,
        station_costs,
        t_c: 2.0,
        scrap_weight: 1.0 / k as f64,
        jump: None,
    })
}

/// Curriculum starting weight for `CL_k` (`0.006` at `k = 3`, scaled).
pub fn cl_curriculum_start(k: usize) -> f64 {
    0.006 * 3.0 / k as f64
}

/// Builds the blueprint for a spec.
pub fn blueprint(spec: &ScenarioSpec) -> Result<Blueprint, ScenarioError> {
    match spec.kind {
        ScenarioKind::WaitingTime => Ok(make_wt()),
        ScenarioKind::WaitingTimeJump { ratio } => make_wtj(ratio),
        ScenarioKind::PartDistribution { k } => make_pd(k),
        ScenarioKind::WorkerAssignment { k, workers } => make_wa(k, workers),
        ScenarioKind::ComplexLine { k } => make_cl(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::Line;

    #[test]
    fn jump_factor_direct_evaluation() {
        // T + S + E = 24; denominator (0.75 - 1) * 4000 + 1800 = 800;
        // 1800 * 24 / 800 = 54; (54 - 2 - 2) / 20 = 2.5.
        let f = jump_factor(1800.0, 0.75, 20.0, 2.0, 2.0, 4000.0).unwrap();
        assert!((f - 2.5).abs() < 1e-12, "{f}");
    }

    /// Plugging the factor back must give expected parts of exactly R * N.
    #[test]
    fn jump_factor_plugback_identity() {
        let (t, s, e, t_sim) = (20.0, 2.0, 2.0, 4000.0);
        let n = t_sim / (t + s + e);
        for &ratio in &[0.6, 0.75, 0.9, 0.99] {
            for &t_jump in &[1600.0, 1700.0, 1800.0, 2000.0] {
                let Ok(f) = jump_factor(t_jump, ratio, t, s, e, t_sim) else {
                    // Window too short to realize the ratio at all.
                    assert!((ratio - 1.0) * t_sim + t_jump <= 0.0);
                    continue;
                };
                let parts = (t_sim - t_jump) / (t + s + e) + t_jump / (f * t + s + e);
                assert!(
                    (parts - ratio * n).abs() < 1e-9,
                    "ratio {ratio} t_jump {t_jump}: {parts} vs {}",
                    ratio * n
                );
            }
        }
    }

    #[test]
    fn jump_factor_no_jump_limit() {
        // R = 1 collapses to f = 1 regardless of the window.
        let f = jump_factor(1700.0, 1.0, 20.0, 2.0, 2.0, 4000.0).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jump_factor_guards_window() {
        assert!(matches!(
            jump_factor(900.0, 0.75, 20.0, 2.0, 2.0, 4000.0),
            Err(ScenarioError::JumpWindowTooShort { .. })
        ));
    }

    #[test]
    fn jumped_law_is_piecewise() {
        let p = JumpProfile { trigger_at: 700.0, duration: 1800.0, factor: 2.6 };
        let base = Distribution::new(20.0, 2.0);
        assert_eq!(p.applied(base, 699.0), base);
        assert_eq!(p.applied(base, 700.0).minimum, 52.0);
        assert_eq!(p.applied(base, 2500.0).minimum, 52.0);
        assert_eq!(p.applied(base, 2500.1), base);
    }

    #[test]
    fn wt_parameters() {
        let bp = make_wt();
        let line = Line::build(&bp.layout).unwrap();
        assert_eq!(line.station_count(), 4);
        assert_eq!(line.buffer_count(), 3);
        // The component source carries the expiry; all gets cost one unit.
        let comp = bp
            .layout
            .stations
            .iter()
            .find(|s| s.id == "ComponentSource" || s.id == "SourceComp")
            .unwrap();
        match &comp.kind {
            crate::layout::StationKindSpec::Source(s) => {
                assert_eq!(s.processing, Distribution::new(5.0, 0.5));
                assert_eq!(s.part.assembly_condition, Some(35.0));
            }
            _ => panic!("expected a source"),
        }
        for b in &bp.layout.buffers {
            assert_eq!(b.get_time, Distribution::constant(1.0));
        }
    }

    #[test]
    fn pd_parameters() {
        let bp = make_pd(3).unwrap();
        Line::build(&bp.layout).unwrap();
        let minima: Vec<f64> = bp
            .layout
            .stations
            .iter()
            .filter_map(|s| match &s.kind {
                crate::layout::StationKindSpec::Process(p) => Some(p.processing.minimum()),
                _ => None,
            })
            .collect();
        assert_eq!(minima, alloc::vec![20.0, 30.0, 40.0]);
        assert!(make_pd(1).is_err());
    }

    #[test]
    fn wa_parameters() {
        let bp = make_wa(3, 9).unwrap();
        let line = Line::build(&bp.layout).unwrap();
        assert_eq!(line.worker_count(), 9);
        let minima: Vec<f64> = bp
            .layout
            .stations
            .iter()
            .filter_map(|s| match &s.kind {
                crate::layout::StationKindSpec::Process(p) => Some(p.processing.minimum()),
                _ => None,
            })
            .collect();
        assert_eq!(minima, alloc::vec![20.0, 24.0, 28.0]);
    }

    #[test]
    fn wtj_validates_ratio() {
        assert!(make_wtj(0.75).is_ok());
        assert!(make_wtj(0.5).is_err());
        assert!(make_wtj(1.0).is_err());
    }

    #[test]
    fn cl_builds_and_weights_scrap() {
        let bp = make_cl(3).unwrap();
        let line = Line::build(&bp.layout).unwrap();
        assert_eq!(line.worker_count(), 9);
        assert!((bp.scrap_weight - 1.0 / 3.0).abs() < 1e-12);
        assert!((cl_curriculum_start(3) - 0.006).abs() < 1e-12);
    }

    /// Same seed, same sampled jump profile.
    #[test]
    fn jump_sampling_is_deterministic() {
        let cfg = make_wtj(0.75).unwrap().jump.unwrap();
        let a = cfg.sample_for(&mut RandomStream::new(11, "scenario"), 4000.0).unwrap();
        let b = cfg.sample_for(&mut RandomStream::new(11, "scenario"), 4000.0).unwrap();
        assert_eq!(a, b);
        assert!((500.0..=1500.0).contains(&a.trigger_at));
        assert!((1600.0..=2000.0).contains(&a.duration));
        assert!(a.factor > 1.0);
    }
}
