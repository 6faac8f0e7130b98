//! The experiment-definition file: a TOML document describing the game, the
//! context process, learners, predictors and run parameters.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use predplay_core::engine::{
    derive_rng, ContextProcess, EtaSpec, LearnerSpec, LogisticProcess, PredictorSpec, RunConfig,
};
use predplay_core::game::Game;
use predplay_core::games::{
    build_routing_game, example1_game_with, parse_quantities, parse_tntp, random_tabular_game,
    MatrixGameSequence, RoutingBuildStats, RoutingConfig, RoutingGame,
};
use predplay_core::learners::EtaPreset;
use predplay_core::TabularGame;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub run: RunSection,
    pub game: GameSection,
    #[serde(default)]
    pub process: ProcessSection,
    #[serde(default)]
    pub learner: LearnerSection,
    #[serde(default)]
    pub predictor: PredictorSection,
    #[serde(default)]
    pub agents: Option<AgentsSection>,
}

fn default_schema() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(rename = "T")]
    pub rounds: usize,
    pub seed: u64,
    #[serde(default)]
    pub shared_predictions: bool,
    #[serde(default = "default_true")]
    pub shared_covariates: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub kind: GameKind,
    /// Alternating matrix game: zero-sum reading of the second player.
    #[serde(default = "default_true")]
    pub zero_sum: bool,
    /// Random tabular game shape.
    pub agents: Option<usize>,
    pub actions: Option<usize>,
    pub payoff_dim: Option<usize>,
    pub contexts: Option<usize>,
    /// Routing game inputs.
    pub network: Option<PathBuf>,
    pub quantities: Option<PathBuf>,
    pub paths: Option<usize>,
    pub noise_scale: Option<f64>,
    pub filter_threshold: Option<f64>,
    /// Optional smoothness parameters for welfare reporting on tabular games.
    pub smoothness_delta: Option<f64>,
    pub smoothness_mu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Example1,
    Random,
    Routing,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSection {
    #[serde(default)]
    pub kind: ProcessKind,
    pub sequence: Option<Vec<usize>>,
    pub probs: Option<Vec<f64>>,
    pub covariate_dim: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    /// Pick a natural process for the game: the alternating sequence for
    /// the matrix game, iid uniform otherwise.
    #[default]
    Auto,
    Sequence,
    Iid,
    Logistic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSection {
    #[serde(default)]
    pub kind: LearnerKind,
    pub eta: Option<f64>,
    pub eta_preset: Option<PresetName>,
    #[serde(default = "default_multiplier")]
    pub eta_multiplier: f64,
    /// Misprediction budget handed to the presets that need one.
    #[serde(default)]
    pub l_bar: f64,
}

fn default_multiplier() -> f64 {
    1.0
}

impl Default for LearnerSection {
    fn default() -> Self {
        Self { kind: LearnerKind::Pomwu, eta: Some(0.1), eta_preset: None, eta_multiplier: 1.0, l_bar: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    #[default]
    Pomwu,
    Omwu,
    Bm,
}

/// Named learning-rate rules (constants exposed via `eta_multiplier`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    /// `c J^{-1/2} T^{-1/4} [ln K (l_bar + m)]^{1/4}`
    Individual,
    /// `1 / (4 (J - 1))`
    SumOfRegrets,
    /// `c sqrt(ln K (l_bar + m) / (l_bar + T))`
    Adversarial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictorSection {
    #[serde(default)]
    pub kind: PredictorKind,
    #[serde(default)]
    pub error_rate: f64,
    #[serde(default = "default_step")]
    pub step_size: f64,
}

fn default_step() -> f64 {
    0.1
}

impl Default for PredictorSection {
    fn default() -> Self {
        Self { kind: PredictorKind::Oracle, error_rate: 0.0, step_size: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorKind {
    #[default]
    Oracle,
    Noisy,
    Logistic,
}

/// Optional per-agent overrides of the run-wide learner/predictor defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentsSection {
    pub learners: Option<Vec<LearnerKind>>,
    pub predictors: Option<Vec<PredictorKind>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ConfigFile =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema != 1 {
            return Err(CliError::Config(format!(
                "schema: unsupported version {} (expected 1)",
                self.schema
            )));
        }
        if self.run.rounds == 0 {
            return Err(CliError::Config("run.T: must be at least 1".into()));
        }
        match self.game.kind {
            GameKind::Example1 => {}
            GameKind::Random => {
                for (field, value) in [
                    ("game.agents", self.game.agents),
                    ("game.actions", self.game.actions),
                    ("game.payoff_dim", self.game.payoff_dim),
                    ("game.contexts", self.game.contexts),
                ] {
                    if value.unwrap_or(0) == 0 {
                        return Err(CliError::Config(format!("{field}: required and positive for random games")));
                    }
                }
            }
            GameKind::Routing => {
                if self.game.network.is_none() {
                    return Err(CliError::Config("game.network: required for routing games".into()));
                }
            }
        }
        if self.learner.eta.is_none() && self.learner.eta_preset.is_none() {
            return Err(CliError::Config("learner.eta or learner.eta_preset: one is required".into()));
        }
        if let Some(eta) = self.learner.eta {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(CliError::Config(format!("learner.eta: must be positive, got {eta}")));
            }
        }
        if !(0.0..=1.0).contains(&self.predictor.error_rate) {
            return Err(CliError::Config(format!(
                "predictor.error_rate: must lie in [0, 1], got {}",
                self.predictor.error_rate
            )));
        }
        match self.process.kind {
            ProcessKind::Sequence => {
                if self.process.sequence.as_ref().is_none_or(Vec::is_empty) {
                    return Err(CliError::Config("process.sequence: required and nonempty".into()));
                }
            }
            ProcessKind::Iid => {
                if self.process.probs.as_ref().is_none_or(Vec::is_empty) {
                    return Err(CliError::Config("process.probs: required and nonempty".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn eta_spec(&self) -> EtaSpec {
        if let Some(preset) = self.learner.eta_preset {
            let preset = match preset {
                PresetName::Individual => EtaPreset::Individual {
                    multiplier: self.learner.eta_multiplier,
                    l_bar: self.learner.l_bar,
                },
                PresetName::SumOfRegrets => EtaPreset::SumOfRegrets,
                PresetName::Adversarial => EtaPreset::Adversarial {
                    multiplier: self.learner.eta_multiplier,
                    l_bar: self.learner.l_bar,
                },
            };
            EtaSpec::Preset(preset)
        } else {
            EtaSpec::Fixed(self.learner.eta.expect("validated"))
        }
    }

    fn learner_spec(&self, kind: LearnerKind) -> LearnerSpec {
        let eta = self.eta_spec();
        match kind {
            LearnerKind::Pomwu => LearnerSpec::Pomwu(eta),
            LearnerKind::Omwu => LearnerSpec::Omwu(eta),
            LearnerKind::Bm => LearnerSpec::BlumMansour(eta),
        }
    }

    fn predictor_spec(&self, kind: PredictorKind) -> PredictorSpec {
        match kind {
            PredictorKind::Oracle => PredictorSpec::Oracle,
            PredictorKind::Noisy => PredictorSpec::Noisy { error_rate: self.predictor.error_rate },
            PredictorKind::Logistic => PredictorSpec::Logistic { step_size: self.predictor.step_size },
        }
    }
}

/// Everything built from a config: the engine run plus the side information
/// the outputs need (routing structure, smoothness parameters, the tabular
/// game for welfare checks).
pub struct BuiltRun {
    pub run: RunConfig,
    pub routing: Option<(Arc<RoutingGame>, RoutingBuildStats)>,
    pub tabular: Option<Arc<TabularGame>>,
    pub smoothness: Option<(f64, f64)>,
}

/// Instantiates the config: constructs the game (seeded from the master
/// seed), the context process and the per-agent specs.
pub fn build(config: &ConfigFile, seed_override: Option<u64>, parallel: bool) -> Result<BuiltRun, CliError> {
    let seed = seed_override.unwrap_or(config.run.seed);
    let rounds = config.run.rounds;

    let mut routing = None;
    let mut tabular: Option<Arc<TabularGame>> = None;
    let (game, contexts, label, normalization): (Arc<dyn Game>, _, _, f64) = match config.game.kind {
        GameKind::Example1 => {
            let sequence = MatrixGameSequence {
                zero_sum: config.game.zero_sum,
                ..MatrixGameSequence::standard(rounds)
            };
            let ex = example1_game_with(sequence).map_err(CliError::runtime)?;
            let game = Arc::new(ex.game);
            tabular = Some(game.clone());
            (game, ex.contexts, "example1".to_string(), 1.0)
        }
        GameKind::Random => {
            let mut rng = derive_rng(seed, "game", 0);
            let (game, contexts) = random_tabular_game(
                config.game.agents.expect("validated"),
                config.game.actions.expect("validated"),
                config.game.payoff_dim.expect("validated"),
                config.game.contexts.expect("validated"),
                &mut rng,
            )
            .map_err(CliError::runtime)?;
            let factor = game.normalization_factor();
            let game = Arc::new(game);
            tabular = Some(game.clone());
            (game, contexts, "random_tabular".to_string(), factor)
        }
        GameKind::Routing => {
            let network_path = config.game.network.as_ref().expect("validated");
            let text = std::fs::read_to_string(network_path)
                .map_err(|e| CliError::Config(format!("game.network: {e}")))?;
            let graph = parse_tntp(&text).map_err(CliError::runtime)?;
            let quantities = match &config.game.quantities {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Config(format!("game.quantities: {e}")))?;
                    parse_quantities(&text).map_err(CliError::runtime)?
                }
                None => predplay_core::games::all_pairs_quantities(&graph, 1.0),
            };
            let routing_config = RoutingConfig {
                num_contexts: config.game.contexts.unwrap_or(5),
                paths_per_agent: config.game.paths.unwrap_or(5),
                noise_scale: config.game.noise_scale.unwrap_or(1e-2),
                filter_threshold: config.game.filter_threshold.unwrap_or(2.0),
            };
            let mut rng = derive_rng(seed, "game", 0);
            let (game, contexts, stats) =
                build_routing_game(graph, &quantities, &routing_config, &mut rng)
                    .map_err(CliError::runtime)?;
            let factor = game.payoff_scale();
            let game = Arc::new(game);
            routing = Some((game.clone(), stats));
            (game, contexts, "routing".to_string(), factor)
        }
    };

    let m = contexts.len();
    let process = match config.process.kind {
        ProcessKind::Auto => match config.game.kind {
            GameKind::Example1 => {
                // Round t is 1-based; odd rounds realize the odd context.
                let seq = (1..=rounds)
                    .map(|t| if t % 2 == 0 { 0 } else { 1 })
                    .collect();
                ContextProcess::Deterministic(seq)
            }
            GameKind::Random => ContextProcess::IidCategorical(vec![1.0 / m as f64; m]),
            GameKind::Routing => {
                let b = config.process.covariate_dim.unwrap_or(10);
                let mut rng = derive_rng(seed, "process-model", 0);
                ContextProcess::LogisticCovariate(LogisticProcess::sample(m, b, &mut rng))
            }
        },
        ProcessKind::Sequence => {
            ContextProcess::Deterministic(config.process.sequence.clone().expect("validated"))
        }
        ProcessKind::Iid => ContextProcess::IidCategorical(config.process.probs.clone().expect("validated")),
        ProcessKind::Logistic => {
            let b = config.process.covariate_dim.unwrap_or(10);
            let mut rng = derive_rng(seed, "process-model", 0);
            ContextProcess::LogisticCovariate(LogisticProcess::sample(m, b, &mut rng))
        }
    };

    let agents = game.num_agents();
    let mut learners: Vec<LearnerSpec> = vec![config.learner_spec(config.learner.kind); agents];
    let mut predictors: Vec<PredictorSpec> = vec![config.predictor_spec(config.predictor.kind); agents];
    if let Some(overrides) = &config.agents {
        if let Some(kinds) = &overrides.learners {
            if kinds.len() != agents {
                return Err(CliError::Config(format!(
                    "agents.learners: expected {agents} entries, got {}",
                    kinds.len()
                )));
            }
            learners = kinds.iter().map(|k| config.learner_spec(*k)).collect();
        }
        if let Some(kinds) = &overrides.predictors {
            if kinds.len() != agents {
                return Err(CliError::Config(format!(
                    "agents.predictors: expected {agents} entries, got {}",
                    kinds.len()
                )));
            }
            predictors = kinds.iter().map(|k| config.predictor_spec(*k)).collect();
        }
    }

    let mut run = RunConfig::new(game, contexts, process, learners, predictors, rounds, seed);
    run.shared_predictions = config.run.shared_predictions;
    run.shared_covariates = config.run.shared_covariates;
    run.parallel = parallel;
    run.game_label = label;
    run.normalization_factor = normalization;

    let smoothness = match (config.game.smoothness_delta, config.game.smoothness_mu) {
        (Some(delta), Some(mu)) => Some((delta, mu)),
        (None, None) => None,
        _ => {
            return Err(CliError::Config(
                "game.smoothness_delta and game.smoothness_mu: both or neither".into(),
            ))
        }
    };

    Ok(BuiltRun { run, routing, tabular, smoothness })
}
