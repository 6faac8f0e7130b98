use std::sync::Arc;
use std::time::Instant;

use predplay_core::engine::{
    derive_rng, run_simulation, ContextProcess, EtaSpec, LearnerSpec, LogisticProcess,
    PredictorSpec, RunConfig,
};
use predplay_core::games::{build_routing_game, parse_quantities, parse_tntp, RoutingConfig};
use predplay_core::metrics::{contextual_external_regret, misprediction_count};

fn main() {
    let net = std::fs::read_to_string("data/SiouxFalls_net.tntp").unwrap();
    let graph = parse_tntp(&net).unwrap();
    println!("{} nodes, {} edges", graph.num_nodes(), graph.num_edges());
    let q = std::fs::read_to_string("data/SiouxFalls_quantities.txt").unwrap();
    let quantities = parse_quantities(&q).unwrap();

    for threshold in [1.0, 2.0, 3.0, f64::INFINITY] {
        let config = RoutingConfig {
            num_contexts: 5,
            paths_per_agent: 5,
            noise_scale: 1e-2,
            filter_threshold: threshold,
        };
        let mut rng = derive_rng(7, "game", 0);
        let start = Instant::now();
        let (_, _, stats) = build_routing_game(graph.clone(), &quantities, &config, &mut rng).unwrap();
        println!(
            "threshold {threshold}: kept {} / {} (unreachable {}, filtered {}) in {} ms",
            stats.kept,
            stats.total_pairs,
            stats.unreachable,
            stats.filtered,
            start.elapsed().as_millis()
        );
    }

    // Separation probe: POMWU vs OMWU average regret at T = 2000.
    let t = 2000usize;
    for noise in [1e-2, 1.0, 10.0, 100.0] {
        for eta in [0.1, 0.5, 2.0] {
            let config = RoutingConfig {
                num_contexts: 5,
                paths_per_agent: 5,
                noise_scale: noise,
                filter_threshold: 2.0,
            };
            let mut rng = derive_rng(7, "game", 0);
            let (game, contexts, stats) =
                build_routing_game(graph.clone(), &quantities, &config, &mut rng).unwrap();
            let game = Arc::new(game);
            let process = LogisticProcess::sample(5, 10, &mut derive_rng(7, "model", 0));
            let run = |learner: LearnerSpec| {
                let mut cfg = RunConfig::uniform_agents(
                    game.clone(),
                    contexts.clone(),
                    ContextProcess::LogisticCovariate(process.clone()),
                    learner,
                    PredictorSpec::Logistic { step_size: 0.1 },
                    t,
                    7,
                );
                cfg.parallel = true;
                run_simulation(&cfg).unwrap()
            };
            let start = Instant::now();
            let pomwu = run(LearnerSpec::Pomwu(EtaSpec::Fixed(eta)));
            let omwu = run(LearnerSpec::Omwu(EtaSpec::Fixed(eta)));
            let avg = |trace: &predplay_core::Trace| {
                (0..trace.num_agents)
                    .map(|j| contextual_external_regret(trace, j).unwrap())
                    .sum::<f64>()
                    / trace.num_agents as f64
            };
            let rp = avg(&pomwu);
            let ro = avg(&omwu);
            let lp = misprediction_count(&pomwu, 0).unwrap();
            println!(
                "noise {noise} eta {eta}: J={} pomwu {rp:.4} omwu {ro:.4} ratio {:.3} L0={lp} ({} s)",
                stats.kept,
                rp / ro,
                start.elapsed().as_secs()
            );
        }
    }
}
