//! Parameter sweeps over scripted controllers.

use alloc::vec::Vec;

use crate::agents::{ClHeuristicAgent, StaticWaitingAgent};
use crate::analysis::Partition;
use crate::env::{derive_seed, run_episode, Env, EpisodeConfig};
use crate::error::ScenarioError;
use crate::scenario;

/// Mean outcome of one static waiting time.
#[derive(Clone, Copy, Debug)]
pub struct SweepPoint {
    pub waiting: f64,
    pub mean_reward: f64,
    pub mean_parts: f64,
    pub mean_scrap: f64,
}

/// Sweeps static waiting times on the waiting-time line, averaging each
/// grid point over the given seeds.
pub fn waiting_time_sweep(grid: &[f64], seeds: &[u64], cfg: EpisodeConfig) -> Vec<SweepPoint> {
    let blueprint = scenario::make_wt();
    let mut env = Env::from_blueprint(blueprint, cfg, 0).expect("benchmark blueprint builds");
    let mut out = Vec::with_capacity(grid.len());
    for &waiting in grid {
        let mut reward = 0.0;
        let mut parts = 0.0;
        let mut scrap = 0.0;
        for &seed in seeds {
            let mut agent = StaticWaitingAgent::new("SourceComp", waiting);
            let r = run_episode(&mut env, &mut agent, derive_seed(seed, 0)).expect("valid agent");
            reward += r.total_reward;
            parts += r.n_ok as f64;
            scrap += r.n_nok_total as f64;
        }
        let n = seeds.len() as f64;
        out.push(SweepPoint {
            waiting,
            mean_reward: reward / n,
            mean_parts: parts / n,
            mean_scrap: scrap / n,
        });
    }
    out
}

/// Winner of a complex-line grid search.
#[derive(Clone, Debug)]
pub struct ClSearchResult {
    pub waiting: f64,
    pub partition: Partition,
    pub mean_reward: f64,
    /// Mean rewards of every evaluated combination, in grid order.
    pub evaluated: Vec<(f64, Partition, f64)>,
}

/// Evaluates every `(waiting, partition)` combination on the complex
/// line over the given seeds and returns the best by mean reward.
pub fn grid_search_cl(
    k: usize,
    waitings: &[f64],
    partitions: &[Partition],
    seeds: &[u64],
    cfg: EpisodeConfig,
) -> Result<ClSearchResult, ScenarioError> {
    assert!(!waitings.is_empty() && !partitions.is_empty() && !seeds.is_empty());
    let blueprint = scenario::make_cl(k)?;
    let mut env = Env::from_blueprint(blueprint, cfg, 0).expect("benchmark blueprint builds");
    let mut evaluated = Vec::new();
    let mut best: Option<(f64, Partition, f64)> = None;
    for &waiting in waitings {
        for partition in partitions {
            let mut sum = 0.0;
            for &seed in seeds {
                let mut agent = ClHeuristicAgent::new(waiting, partition.0.clone());
                let r = run_episode(&mut env, &mut agent, derive_seed(seed, 1)).expect("valid agent");
                sum += r.total_reward;
            }
            let mean = sum / seeds.len() as f64;
            evaluated.push((waiting, partition.clone(), mean));
            let better = match &best {
                None => true,
                Some((_, _, b)) => mean > *b,
            };
            if better {
                best = Some((waiting, partition.clone(), mean));
            }
        }
    }
    let (waiting, partition, mean_reward) = best.unwrap();
    Ok(ClSearchResult { waiting, partition, mean_reward, evaluated })
}
