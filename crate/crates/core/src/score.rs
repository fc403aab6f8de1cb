//! The line's economic score.
//!
//! Applying work at a station costs `c_i`; a finished part is worth the
//! sum `c` of all station costs. A component scrapped at a station burns
//! the value accumulated so far, i.e. the cost of its origin. At any time
//! the line has produced the aggregated value
//!
//! `C(t) = (T_C / T_sim) * (c * n_ok(t) - w * sum_i cost(scraps at i))`
//!
//! where `T_C` is the minimal time per part, `T_sim` the fixed horizon,
//! and `w` a scrap weight (a curriculum hook; `1` by default). The
//! normalizer is the constant `T_sim`, which makes the per-step reward a
//! pure count delta and the episode sum telescope exactly to `C(T_sim)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::line::{Line, StationId};
use crate::time::SimTime;

/// Per-station work costs plus the reward normalizer.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    station_costs: BTreeMap<StationId, f64>,
    /// Minimal possible time the line needs per part.
    pub t_c: f64,
    /// Fixed episode horizon used as normalizer.
    pub t_sim: f64,
}

impl CostModel {
    pub fn new(station_costs: BTreeMap<StationId, f64>, t_c: f64, t_sim: f64) -> Self {
        assert!(t_c > 0.0 && t_sim > 0.0, "normalizer times must be positive");
        assert!(station_costs.values().all(|c| *c >= 0.0), "costs must be non-negative");
        CostModel { station_costs, t_c, t_sim }
    }

    /// Resolves name-keyed costs against a built line.
    pub fn from_named(
        named: &BTreeMap<String, f64>,
        line: &Line,
        t_c: f64,
        t_sim: f64,
    ) -> CostModel {
        let costs = named
            .iter()
            .filter_map(|(name, c)| line.station_id(name).map(|id| (id, *c)))
            .collect();
        CostModel::new(costs, t_c, t_sim)
    }

    /// Every part-touching station (sources, processes, assemblies) costs
    /// one unit; transport and removal are free.
    pub fn unit_costs(line: &Line, t_c: f64, t_sim: f64) -> CostModel {
        let costs = line
            .station_ids()
            .filter(|&id| {
                matches!(line.station_kind_name(id), "source" | "process" | "assembly")
            })
            .map(|id| (id, 1.0))
            .collect();
        CostModel::new(costs, t_c, t_sim)
    }

    pub fn cost_of(&self, id: StationId) -> f64 {
        self.station_costs.get(&id).copied().unwrap_or(0.0)
    }

    /// Value of a finished part: the sum of all station costs.
    pub fn part_value(&self) -> f64 {
        self.station_costs.values().sum()
    }

    pub fn normalizer(&self) -> f64 {
        self.t_c / self.t_sim
    }
}

/// Cumulative production counters plus the reward bookkeeping of one
/// episode.
#[derive(Clone, Debug, Default)]
pub struct RewardLedger {
    /// Finished parts per sink.
    ok_per_sink: BTreeMap<StationId, u64>,
    /// Scraps per `(station, part origin)`.
    nok: BTreeMap<(StationId, StationId), u64>,
    /// Multiplier on scrap costs (curriculum hook).
    pub scrap_weight: f64,
    /// Aggregated value at each step boundary seen so far.
    history: Vec<f64>,
}

impl RewardLedger {
    pub fn new(scrap_weight: f64) -> Self {
        RewardLedger {
            ok_per_sink: BTreeMap::new(),
            nok: BTreeMap::new(),
            scrap_weight,
            history: Vec::new(),
        }
    }

    /// Copies the line's counters into the ledger. Counters only grow.
    pub fn sync(&mut self, line: &Line) {
        for id in line.station_ids() {
            if line.is_sink(id) {
                let e = self.ok_per_sink.entry(id).or_insert(0);
                debug_assert!(*e <= line.n_ok(id));
                *e = line.n_ok(id);
            }
            for (origin, count) in line.nok_by_origin(id) {
                let e = self.nok.entry((id, *origin)).or_insert(0);
                debug_assert!(*e <= *count);
                *e = *count;
            }
        }
    }

    pub fn total_ok(&self) -> u64 {
        self.ok_per_sink.values().sum()
    }

    pub fn total_nok(&self) -> u64 {
        self.nok.values().sum()
    }

    pub fn nok_at(&self, station: StationId) -> u64 {
        self.nok.iter().filter(|((s, _), _)| *s == station).map(|(_, n)| *n).sum()
    }

    /// `C(t)` for the current counters.
    pub fn aggregate_value(&self, cost: &CostModel) -> f64 {
        let ok_value = cost.part_value() * self.total_ok() as f64;
        let scrap_cost: f64 = self
            .nok
            .iter()
            .map(|((_, origin), n)| cost.cost_of(*origin) * *n as f64)
            .sum();
        cost.normalizer() * (ok_value - self.scrap_weight * scrap_cost)
    }

    /// Closes a step boundary: returns `C(t_{k+1}) - C(t_k)` and records
    /// the new value. The sum of all step rewards telescopes to the final
    /// aggregated value.
    pub fn step_reward(&mut self, cost: &CostModel) -> f64 {
        let value = self.aggregate_value(cost);
        let prev = self.history.last().copied().unwrap_or(0.0);
        self.history.push(value);
        value - prev
    }

    pub fn value_history(&self) -> &[f64] {
        &self.history
    }
}

/// Overall equipment effectiveness of one station at time `t`:
/// `(T_i / t) * n_ok(t, i)` with `T_i` the station's minimal processing
/// time (fully staffed where workers apply). Bounded by `1`.
pub fn oee(line: &Line, station: StationId, t: SimTime) -> f64 {
    let t = t.as_f64();
    assert!(t > 0.0, "OEE needs a positive time");
    line.min_processing(station) / t * line.n_ok(station) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;
    use crate::layout::{BufferSpec, LayoutSpec, SinkSpec, SourceSpec, StationSpec};

    fn two_station_line() -> Line {
        let mut spec = LayoutSpec::new();
        spec.stations.push(StationSpec::source(
            "Src",
            SourceSpec::new(Distribution::constant(1.0)).with_carrier_capacity(1),
        ));
        spec.stations
            .push(StationSpec::sink("Snk", SinkSpec { processing: Distribution::constant(0.0) }));
        spec.buffers.push(BufferSpec::between("Src", "Snk", 2));
        Line::build(&spec).unwrap()
    }

    #[test]
    fn zero_counters_zero_value() {
        let line = two_station_line();
        let cost = CostModel::unit_costs(&line, 1.0, 4000.0);
        let ledger = RewardLedger::new(1.0);
        assert_eq!(ledger.aggregate_value(&cost), 0.0);
    }

    #[test]
    fn direct_evaluation() {
        // Two costed stations at 1 each, 10 OK parts, no scrap,
        // T_C / T_sim = 0.005: C = 0.005 * (2 * 10) = 0.1.
        let line = two_station_line();
        let mut costs = BTreeMap::new();
        costs.insert(line.station_id("Src").unwrap(), 1.0);
        costs.insert(line.station_id("Snk").unwrap(), 1.0);
        let cost = CostModel::new(costs, 20.0, 4000.0);
        let mut ledger = RewardLedger::new(1.0);
        ledger.ok_per_sink.insert(line.station_id("Snk").unwrap(), 10);
        let v = ledger.aggregate_value(&cost);
        assert!((v - 0.1).abs() < 1e-15, "{v}");
    }

    #[test]
    fn scrap_costs_the_origin() {
        let line = two_station_line();
        let src = line.station_id("Src").unwrap();
        let snk = line.station_id("Snk").unwrap();
        let mut costs = BTreeMap::new();
        costs.insert(src, 3.0);
        let cost = CostModel::new(costs, 1.0, 100.0);
        let mut ledger = RewardLedger::new(0.5);
        ledger.nok.insert((snk, src), 4);
        // 1/100 * (0 - 0.5 * 3 * 4)
        assert!((ledger.aggregate_value(&cost) + 0.06).abs() < 1e-15);
    }

    #[test]
    fn step_rewards_telescope() {
        let line = two_station_line();
        let snk = line.station_id("Snk").unwrap();
        let cost = CostModel::unit_costs(&line, 2.0, 1000.0);
        let mut ledger = RewardLedger::new(1.0);
        let mut sum = 0.0;
        for k in 0..50u64 {
            ledger.ok_per_sink.insert(snk, k * 3 / 2);
            sum += ledger.step_reward(&cost);
        }
        let total = ledger.aggregate_value(&cost);
        assert!((sum - total).abs() < 1e-12, "{sum} vs {total}");
    }

    #[test]
    fn one_part_step_delta() {
        // One OK part in a step with c = 2, T_C / T_sim = 0.005 -> 0.01.
        let line = two_station_line();
        let snk = line.station_id("Snk").unwrap();
        let mut costs = BTreeMap::new();
        costs.insert(line.station_id("Src").unwrap(), 2.0);
        let cost = CostModel::new(costs, 20.0, 4000.0);
        let mut ledger = RewardLedger::new(1.0);
        assert_eq!(ledger.step_reward(&cost), 0.0);
        ledger.ok_per_sink.insert(snk, 1);
        let r = ledger.step_reward(&cost);
        assert!((r - 0.01).abs() < 1e-15, "{r}");
    }

    #[test]
    fn ok_never_decreases_value_scrap_never_increases() {
        let line = two_station_line();
        let src = line.station_id("Src").unwrap();
        let snk = line.station_id("Snk").unwrap();
        let cost = CostModel::unit_costs(&line, 2.0, 100.0);
        let mut ledger = RewardLedger::new(0.3);
        let v0 = ledger.aggregate_value(&cost);
        ledger.ok_per_sink.insert(snk, 1);
        let v1 = ledger.aggregate_value(&cost);
        assert!(v1 >= v0);
        ledger.nok.insert((snk, src), 1);
        let v2 = ledger.aggregate_value(&cost);
        assert!(v2 <= v1);
    }
}
