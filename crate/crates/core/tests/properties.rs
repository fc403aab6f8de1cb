//! Property tests: the conservation invariants must survive arbitrary
//! (valid) action sequences, and masking any subset of states never
//! bends a trajectory.

use proptest::prelude::*;

use takt_core::agents::RandomAgent;
use takt_core::{run_episode, scenario, Env, EpisodeConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Part/worker conservation, buffer bounds, and FIFO order hold at
    /// every boundary of short random-agent episodes (the audit panics on
    /// the first violation).
    #[test]
    fn conservation_under_random_control(seed in any::<u64>(), agent_seed in any::<u64>(), k in 2usize..4) {
        let blueprint = scenario::make_cl(k).unwrap();
        let mut env = Env::from_blueprint(blueprint, EpisodeConfig::new(300.0, 1.0), 0).unwrap();
        env.set_audit(true);
        let mut agent = RandomAgent::new(agent_seed);
        let result = run_episode(&mut env, &mut agent, seed).unwrap();
        prop_assert_eq!(result.step_rewards.len(), 300);
    }

    /// Same, on the part-distribution line (switch-heavy routing).
    #[test]
    fn conservation_on_parallel_processes(seed in any::<u64>(), agent_seed in any::<u64>()) {
        let blueprint = scenario::make_pd(3).unwrap();
        let mut env = Env::from_blueprint(blueprint, EpisodeConfig::new(300.0, 1.0), 0).unwrap();
        env.set_audit(true);
        let mut agent = RandomAgent::new(agent_seed);
        run_episode(&mut env, &mut agent, seed).unwrap();
        let line = env.line();
        prop_assert_eq!(
            line.parts_created(),
            line.parts_in_flight() + line.parts_absorbed() + line.total_nok()
        );
    }

    /// The reward identity holds for any seed pair.
    #[test]
    fn reward_sum_identity(seed in any::<u64>(), agent_seed in any::<u64>()) {
        let blueprint = scenario::make_wa(3, 9).unwrap();
        let mut env = Env::from_blueprint(blueprint, EpisodeConfig::new(500.0, 1.0), 0).unwrap();
        let mut agent = RandomAgent::new(agent_seed);
        let result = run_episode(&mut env, &mut agent, seed).unwrap();
        let aggregate = env.ledger().aggregate_value(env.cost_model());
        prop_assert!((result.total_reward - aggregate).abs() < 1e-9);
    }
}
