//! Closed-form optima used to verify the simulation.
//!
//! Everything here is derived analytically from the line parameters and
//! deliberately independent of the engine, so simulated results can be
//! checked against it.

use alloc::vec::Vec;

use crate::dist::{performance_coefficient, Distribution};
use crate::error::AnalysisError;
use crate::math;

/// Expected parameters of the waiting-time line, for the throughput bound.
#[derive(Clone, Copy, Debug)]
pub struct WaitingTimeParams {
    pub t_sim: f64,
    /// Component source processing time.
    pub source_comp: Distribution,
    /// Main-carrier source processing time.
    pub source_main: Distribution,
    /// Assembly processing time.
    pub assembly: Distribution,
    /// Sink processing time.
    pub sink: Distribution,
    /// Buffer get time (applies to every get).
    pub get: Distribution,
    /// Buffer put time.
    pub put: Distribution,
    /// Buffer traversal times on the three legs.
    pub traversal_comp: f64,
    pub traversal_main: f64,
    pub traversal_out: f64,
}

impl WaitingTimeParams {
    /// The benchmark parameterization.
    pub fn benchmark() -> Self {
        WaitingTimeParams {
            t_sim: 4000.0,
            source_comp: Distribution::new(5.0, 0.5),
            source_main: Distribution::new(5.0, 0.5),
            assembly: Distribution::new(20.0, 2.0),
            sink: Distribution::constant(0.0),
            get: Distribution::constant(1.0),
            put: Distribution::constant(0.0),
            traversal_comp: 0.0,
            traversal_main: 0.0,
            traversal_out: 0.0,
        }
    }
}

/// The statically optimal source waiting time: the gap between what the
/// assembly needs per cycle (two gets plus processing) and what the
/// component source needs per part,
/// `T_W* = E[T_A + 2 T_g - T_SC]`.
pub fn optimal_waiting_time(
    assembly: Distribution,
    get: Distribution,
    source_comp: Distribution,
) -> f64 {
    assembly.mean() + 2.0 * get.mean() - source_comp.mean()
}

/// `E[max(X, Y)]` of two shifted exponentials.
pub fn expected_max_shifted_exp(x: Distribution, y: Distribution) -> f64 {
    // E[max] = E[X] + E[Y] - E[min]; order so that a <= b.
    let (a, b) = if x.minimum <= y.minimum { (x, y) } else { (y, x) };
    let d = b.minimum - a.minimum;
    let (alpha, beta) = (a.exp_mean, b.exp_mean);
    let e_min = if alpha == 0.0 {
        // X is deterministic at a; Y >= b >= a.
        a.minimum
    } else {
        let head = alpha * (1.0 - math::exp(-d / alpha));
        let joint = if alpha + beta == 0.0 { 0.0 } else { alpha * beta / (alpha + beta) };
        a.minimum + head + math::exp(-d / alpha) * joint
    };
    a.mean() + b.mean() - e_min
}

/// Expected maximal part count of the waiting-time line: production is
/// paced by the assembly cycle after a ramp-up (both sources must deliver
/// once) and must clear the sink before the horizon,
/// `(T_sim - E[ramp] - tail) / E[T_A + 2 T_g + T_p]`.
pub fn expected_max_parts_wt(p: &WaitingTimeParams) -> f64 {
    let comp_path = Distribution::new(
        p.source_comp.minimum + p.put.mean() + p.traversal_comp,
        p.source_comp.exp_mean,
    );
    let main_path = Distribution::new(
        p.source_main.minimum + p.put.mean() + p.traversal_main,
        p.source_main.exp_mean,
    );
    let ramp = expected_max_shifted_exp(comp_path, main_path);
    let tail = p.traversal_out + p.get.mean() + p.sink.mean();
    let cycle = p.assembly.mean() + 2.0 * p.get.mean() + p.put.mean();
    ((p.t_sim - ramp - tail) / cycle).max(0.0)
}

/// Optimal fraction of parts each of `k` parallel processes should
/// receive: `rho_i = 1 / sum_j (T_i / T_j)`.
pub fn optimal_part_shares(minima: &[f64]) -> Vec<f64> {
    minima
        .iter()
        .map(|t_i| 1.0 / minima.iter().map(|t_j| t_i / t_j).sum::<f64>())
        .collect()
}

/// The closed-form shares, guarded: they describe the throughput-optimal
/// split only when every process has the same relative noise scale.
pub fn optimal_part_shares_checked(
    minima: &[f64],
    noise_scales: &[f64],
) -> Result<Vec<f64>, AnalysisError> {
    if minima.is_empty() || minima.len() != noise_scales.len() {
        return Err(AnalysisError::EmptyInput);
    }
    let first = noise_scales[0];
    if noise_scales.iter().any(|s| (s - first).abs() > 1e-12) {
        return Err(AnalysisError::UnequalNoiseScales);
    }
    Ok(optimal_part_shares(minima))
}

/// Shares from the exact service rates `1 / ((1 + S_i) T_i)`; agrees with
/// the closed form when all `S_i` are equal.
pub fn part_shares_general(minima: &[f64], noise_scales: &[f64]) -> Vec<f64> {
    let rates: Vec<f64> = minima
        .iter()
        .zip(noise_scales)
        .map(|(t, s)| 1.0 / ((1.0 + s) * t))
        .collect();
    let total: f64 = rates.iter().sum();
    rates.iter().map(|r| r / total).collect()
}

/// Expected maximal part count of `k` constantly fed parallel processes:
/// `sum_i T_sim / ((1 + S_i) T_i)`.
pub fn expected_total_parts(minima: &[f64], noise_scales: &[f64], t_sim: f64) -> f64 {
    minima
        .iter()
        .zip(noise_scales)
        .map(|(t, s)| t_sim / ((1.0 + s) * t))
        .sum()
}

/// A worker assignment: head counts per station, summing to the pool size.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl core::fmt::Display for Partition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Expected cycle time of a station with `n` workers:
/// `T * (exp(-c n) + S)`.
pub fn expected_worker_cycle(t: f64, s: f64, n: u32, c: f64) -> f64 {
    t * (performance_coefficient(c, n) + s)
}

/// Bottleneck objective of an assignment: the slowest expected cycle.
pub fn assignment_objective(minima: &[f64], noise_scales: &[f64], c: f64, p: &Partition) -> f64 {
    minima
        .iter()
        .zip(noise_scales)
        .zip(&p.0)
        .map(|((t, s), n)| expected_worker_cycle(*t, *s, *n, c))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Solves the min-max worker assignment exactly: enumerate every
/// composition of `n` into `minima.len()` parts and minimize the
/// bottleneck expectation. Ties break to the lexicographically smallest
/// assignment. Benchmark sizes keep the enumeration trivially small.
pub fn solve_worker_assignment(
    minima: &[f64],
    noise_scales: &[f64],
    n: u32,
    c: f64,
) -> (Partition, f64) {
    assert!(!minima.is_empty() && minima.len() == noise_scales.len());
    let mut best: Option<(Partition, f64)> = None;
    let mut current = alloc::vec![0u32; minima.len()];
    fn walk(
        slot: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        minima: &[f64],
        noise_scales: &[f64],
        c: f64,
        best: &mut Option<(Partition, f64)>,
    ) {
        if slot == current.len() - 1 {
            current[slot] = remaining;
            let p = Partition(current.clone());
            let obj = assignment_objective(minima, noise_scales, c, &p);
            let better = match best {
                None => true,
                Some((bp, bo)) => obj < *bo - 1e-12 || ((obj - *bo).abs() <= 1e-12 && p < *bp),
            };
            if better {
                *best = Some((p, obj));
            }
            return;
        }
        for take in 0..=remaining {
            current[slot] = take;
            walk(slot + 1, remaining - take, current, minima, noise_scales, c, best);
        }
    }
    walk(0, n, &mut current, minima, noise_scales, c, &mut best);
    best.unwrap()
}

/// All weakly increasing compositions of `n` into `k` parts (the
/// assignments worth simulating when stations are ordered by slowness).
pub fn enumerate_monotone_partitions(n: u32, k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = alloc::vec![0u32; k];
    fn walk(slot: usize, remaining: u32, floor: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if slot == current.len() - 1 {
            if remaining >= floor {
                current[slot] = remaining;
                out.push(Partition(current.clone()));
            }
            return;
        }
        // Weakly increasing and still able to sum up: the remaining slots
        // each need at least `take`.
        let slots_left = (current.len() - slot) as u32;
        for take in floor..=remaining / slots_left {
            current[slot] = take;
            walk(slot + 1, remaining - take, take, current, out);
        }
    }
    if k > 0 {
        walk(0, n, 0, &mut current, &mut out);
    }
    out
}
