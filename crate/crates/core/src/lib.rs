//! Prediction-aware uncoupled learning in time-varying multiplayer games.
//!
//! Agents predict a latent state of nature, play optimistic multiplicative
//! weights over per-context tables, and the library computes regrets,
//! equilibrium gaps, welfare quantities and the right-hand sides of the
//! regret inequalities so that runs can be audited against them.
//!
//! The crate splits into:
//!
//! * [`types`] and [`game`] — simplex arithmetic, context spaces and the
//!   expected-cost-matrix machinery shared by everything else;
//! * [`learners`] — the prediction-aware learner, its context-blind
//!   baseline, the swap-regret wrapper and two equivalence oracles;
//! * [`predictors`] — oracle/noisy/logistic context predictors plus the
//!   multiclass online-classification toolbox;
//! * [`games`] — the alternating matrix game, random tabular games and the
//!   congestion routing game with its network parser;
//! * [`engine`] — the seeded, deterministic round loop producing a
//!   [`trace::Trace`];
//! * [`metrics`] — everything computed from a finished trace.

pub mod engine;
pub mod error;
pub mod game;
pub mod games;
pub mod learners;
pub mod metrics;
pub mod predictors;
pub mod trace;
pub mod types;

pub use error::{Error, Result};
pub use game::{validate_and_normalize, Game, TabularGame};
pub use trace::{AgentMeta, RoundRecord, RunMetadata, Trace};
pub use types::{expected_cost, ContextSpace, CostMatrix, JointProfile, Strategy};
