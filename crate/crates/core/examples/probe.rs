use std::sync::Arc;

use predplay_core::engine::{
    run_simulation, ContextProcess, EtaSpec, LearnerSpec, PredictorSpec, RunConfig,
};
use predplay_core::games::example1_game;
use predplay_core::metrics::contextual_external_regret;

fn main() {
    for eta in [0.05, 0.1, 0.2, 0.25, 0.3, 0.5] {
        let ex = example1_game(5000).unwrap();
        let config = RunConfig::uniform_agents(
            Arc::new(ex.game),
            ex.contexts,
            ContextProcess::Deterministic(ex.context_sequence),
            LearnerSpec::Pomwu(EtaSpec::Fixed(eta)),
            PredictorSpec::Oracle,
            5000,
            1,
        );
        let start = std::time::Instant::now();
        let trace = run_simulation(&config).unwrap();
        let r0 = contextual_external_regret(&trace, 0).unwrap();
        let r1 = contextual_external_regret(&trace, 1).unwrap();
        println!(
            "eta={eta}: pomwu regret p0={r0:.4} p1={r1:.4}  ({} ms)",
            start.elapsed().as_millis()
        );
    }

    // The context-blind baseline at the criterion's eta.
    let ex = example1_game(5000).unwrap();
    let config = RunConfig::uniform_agents(
        Arc::new(ex.game),
        ex.contexts,
        ContextProcess::Deterministic(ex.context_sequence),
        LearnerSpec::Omwu(EtaSpec::Fixed(0.1)),
        PredictorSpec::Oracle,
        5000,
        1,
    );
    let trace = run_simulation(&config).unwrap();
    let r0 = contextual_external_regret(&trace, 0).unwrap();
    let r1 = contextual_external_regret(&trace, 1).unwrap();
    println!("omwu eta=0.1: regret p0={r0:.4} p1={r1:.4}");
    let curve = predplay_core::metrics::regret_curve(&trace, 0).unwrap();
    let t0 = 2500usize;
    let pts: Vec<(f64, f64)> = (t0..5000).map(|i| (i as f64, curve[i].0)).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!("omwu p0 best-fit slope over last half: {slope:.4}");
}
