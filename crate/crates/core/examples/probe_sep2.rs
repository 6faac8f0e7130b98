use std::sync::Arc;
use std::time::Instant;

use predplay_core::engine::{
    derive_rng, run_simulation, ContextProcess, EtaSpec, LearnerSpec, LogisticProcess,
    PredictorSpec, RunConfig,
};
use predplay_core::games::{build_routing_game, parse_quantities, parse_tntp, RoutingConfig};
use predplay_core::metrics::{contextual_external_regret, misprediction_count, regret_curve};

fn main() {
    let net = std::fs::read_to_string("data/SiouxFalls_net.tntp").unwrap();
    let graph = parse_tntp(&net).unwrap();
    let q = std::fs::read_to_string("data/SiouxFalls_quantities.txt").unwrap();
    let quantities = parse_quantities(&q).unwrap();
    let t = 2000usize;
    for seed in [7u64, 21, 99] {
        for noise in [10.0] {
            for eta in [1.0, 2.0, 4.0] {
                let config = RoutingConfig {
                    num_contexts: 5,
                    paths_per_agent: 5,
                    noise_scale: noise,
                    filter_threshold: 3.0,
                };
                let mut rng = derive_rng(seed, "game", 0);
                let (game, contexts, stats) =
                    build_routing_game(graph.clone(), &quantities, &config, &mut rng).unwrap();
                let game = Arc::new(game);
                let process = LogisticProcess::sample(5, 10, &mut derive_rng(seed, "model", 0));
                let run = |learner: LearnerSpec| {
                    let mut cfg = RunConfig::uniform_agents(
                        game.clone(),
                        contexts.clone(),
                        ContextProcess::LogisticCovariate(process.clone()),
                        learner,
                        PredictorSpec::Logistic { step_size: 0.3 },
                        t,
                        seed,
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
                let l0 = misprediction_count(&pomwu, 0).unwrap();
                // prediction-error running rate: last quartile monotonicity
                let curve = regret_curve(&pomwu, 0).unwrap();
                let q3 = curve[t * 3 / 4 - 1].2;
                let qend = curve[t - 1].2;
                println!(
                    "seed {seed} noise {noise} eta {eta}: J={} ratio {:.3} (p {rp:.2} o {ro:.2}) L0={l0} errrate {q3:.3}->{qend:.3} ({} s)",
                    stats.kept, rp / ro, start.elapsed().as_secs()
                );
            }
        }
    }
}
