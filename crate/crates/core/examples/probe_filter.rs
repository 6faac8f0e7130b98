use predplay_core::engine::derive_rng;
use predplay_core::games::{build_routing_game, parse_quantities, parse_tntp, RoutingConfig};
use predplay_core::games::yen_k_shortest;

fn main() {
    let net = std::fs::read_to_string("data/SiouxFalls_net.tntp").unwrap();
    let graph = parse_tntp(&net).unwrap();
    let q = std::fs::read_to_string("data/SiouxFalls_quantities.txt").unwrap();
    let quantities = parse_quantities(&q).unwrap();

    for threshold in [2.0, 2.5, 3.0, 3.2, 3.4, 3.5, 3.6, 3.8, 4.0, 4.5, 5.0] {
        let config = RoutingConfig {
            num_contexts: 5,
            paths_per_agent: 5,
            noise_scale: 10.0,
            filter_threshold: threshold,
        };
        let mut rng = derive_rng(7, "game", 0);
        let (_, _, stats) = build_routing_game(graph.clone(), &quantities, &config, &mut rng).unwrap();
        println!("cost threshold {threshold}: kept {}", stats.kept);
    }

    // Hop-count spread as the alternative measure.
    for threshold in [0usize, 1, 2, 3] {
        let mut kept = 0;
        for &(o, d, _) in &quantities {
            let paths = yen_k_shortest(&graph, o, d, 5).unwrap();
            if paths.len() < 5 {
                continue;
            }
            let hops: Vec<usize> = paths.iter().map(|p| p.edges.len()).collect();
            let spread = hops.iter().max().unwrap() - hops.iter().min().unwrap();
            if spread <= threshold {
                kept += 1;
            }
        }
        println!("hop threshold {threshold}: kept {kept}");
    }
}
