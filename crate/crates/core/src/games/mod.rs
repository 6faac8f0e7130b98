//! Concrete game constructors: the alternating matrix game, seeded random
//! tabular games, and the contextual congestion routing game with its
//! network-format parser and k-shortest-path action sets.

pub mod example1;
pub mod graph;
pub mod random;
pub mod routing;
pub mod tntp;
pub mod yen;

pub use example1::{example1_game, Example1, MatrixGameSequence};
pub use graph::{Edge, Graph, Path};
pub use random::random_tabular_game;
pub use routing::{
    all_pairs_quantities, build_routing_game, RoutingAgent, RoutingBuildStats, RoutingConfig,
    RoutingGame,
};
pub use tntp::{parse_quantities, parse_tntp, serialize_tntp};
pub use yen::yen_k_shortest;
