//! The round loop: predict, play, feedback, update, record.
//!
//! Per round the phases are strictly ordered with a barrier between acting
//! and feedback: every agent's strategy is fixed before any cost matrix is
//! computed, so no learner observes round-t information before all have
//! acted. Acting, feedback and updating may fan out across agents; the
//! results are identical to serial execution.

mod seed;

pub use seed::{derive_rng, derive_seed};

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::learners::{BlumMansour, EtaPreset, Learner, Omwu, Pomwu};
use crate::predictors::{ContextPredictor, LogisticModel, NoisyPredictor, Observation, OraclePredictor};
use crate::trace::{AgentMeta, RoundRecord, RunMetadata, Trace};
use crate::types::{expected_cost, ContextSpace, JointProfile, Strategy};

/// The covariate-driven context model: contexts are drawn from a softmax
/// over linear scores of a Gaussian covariate.
#[derive(Debug, Clone)]
pub struct LogisticProcess {
    /// Mean of the covariate distribution.
    pub mean: Vec<f64>,
    /// Per-coordinate variance of the covariate distribution.
    pub covariate_variance: f64,
    /// True coefficient vectors, one per context.
    pub betas: Vec<Vec<f64>>,
}

impl LogisticProcess {
    /// Draws the standard experimental model: mean uniform on `[1, 4]^b`,
    /// covariate variance 5, true coefficients Gaussian with variance 5.
    pub fn sample(num_contexts: usize, covariate_dim: usize, rng: &mut ChaCha12Rng) -> Self {
        let mean = (0..covariate_dim).map(|_| rng.random_range(1.0..4.0)).collect();
        let betas = (0..num_contexts)
            .map(|_| {
                (0..covariate_dim)
                    .map(|_| {
                        let n: f64 = StandardNormal.sample(rng);
                        n * 5f64.sqrt()
                    })
                    .collect()
            })
            .collect();
        Self { mean, covariate_variance: 5.0, betas }
    }
}

/// How the state of nature evolves.
#[derive(Debug, Clone)]
pub enum ContextProcess {
    /// An explicit context-index list, cycled when shorter than the run.
    Deterministic(Vec<usize>),
    /// Independent draws from a fixed categorical distribution.
    IidCategorical(Vec<f64>),
    /// Covariate-conditional draws; emits the covariate to predictors.
    LogisticCovariate(LogisticProcess),
}

impl ContextProcess {
    fn validate(&self, num_contexts: usize) -> Result<()> {
        match self {
            ContextProcess::Deterministic(seq) => {
                if seq.is_empty() {
                    return Err(Error::invalid("deterministic context sequence is empty"));
                }
                if let Some(bad) = seq.iter().find(|&&z| z >= num_contexts) {
                    return Err(Error::ContextIndex { index: *bad, m: num_contexts });
                }
            }
            ContextProcess::IidCategorical(probs) => {
                if probs.len() != num_contexts {
                    return Err(Error::DimensionMismatch {
                        what: "categorical context probabilities".into(),
                        expected: num_contexts,
                        actual: probs.len(),
                    });
                }
                if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::invalid("context probabilities must be nonnegative"));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::invalid(format!(
                        "context probabilities sum to {total}, expected 1"
                    )));
                }
            }
            ContextProcess::LogisticCovariate(model) => {
                if model.betas.len() != num_contexts {
                    return Err(Error::DimensionMismatch {
                        what: "logistic process coefficient count".into(),
                        expected: num_contexts,
                        actual: model.betas.len(),
                    });
                }
                let b = model.mean.len();
                if b == 0 || model.betas.iter().any(|beta| beta.len() != b) {
                    return Err(Error::invalid("logistic process dimensions disagree"));
                }
                if !(model.covariate_variance.is_finite() && model.covariate_variance >= 0.0) {
                    return Err(Error::invalid("covariate variance must be nonnegative"));
                }
            }
        }
        Ok(())
    }

    /// Emits `(context, covariate)` for 0-based round `index`.
    fn next(&self, index: usize, rng: &mut ChaCha12Rng) -> (usize, Option<Vec<f64>>) {
        match self {
            ContextProcess::Deterministic(seq) => (seq[index % seq.len()], None),
            ContextProcess::IidCategorical(probs) => {
                let draw: f64 = rng.random();
                let mut cumulative = 0.0;
                let mut chosen = probs.len() - 1;
                for (z, p) in probs.iter().enumerate() {
                    cumulative += p;
                    if draw < cumulative {
                        chosen = z;
                        break;
                    }
                }
                (chosen, None)
            }
            ContextProcess::LogisticCovariate(model) => {
                let std = model.covariate_variance.sqrt();
                let x: Vec<f64> = model
                    .mean
                    .iter()
                    .map(|m| {
                        let n: f64 = StandardNormal.sample(rng);
                        m + std * n
                    })
                    .collect();
                let scores: Vec<f64> = model.betas.iter().map(|b| crate::types::dot(b, &x)).collect();
                let peak = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = scores.iter().map(|s| (s - peak).exp()).collect();
                let total: f64 = exps.iter().sum();
                let draw: f64 = rng.random::<f64>() * total;
                let mut cumulative = 0.0;
                let mut chosen = exps.len() - 1;
                for (z, e) in exps.iter().enumerate() {
                    cumulative += e;
                    if draw < cumulative {
                        chosen = z;
                        break;
                    }
                }
                (chosen, Some(x))
            }
        }
    }
}

/// Learning-rate selection for one agent.
#[derive(Debug, Clone, Copy)]
pub enum EtaSpec {
    Fixed(f64),
    Preset(EtaPreset),
}

impl EtaSpec {
    pub fn resolve(&self, agents: usize, actions: usize, contexts: usize, rounds: usize) -> Result<f64> {
        match self {
            EtaSpec::Fixed(eta) => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(Error::invalid(format!("eta must be positive, got {eta}")));
                }
                Ok(*eta)
            }
            EtaSpec::Preset(preset) => preset.resolve(agents, actions, contexts, rounds),
        }
    }
}

/// Which play algorithm an agent runs.
#[derive(Debug, Clone, Copy)]
pub enum LearnerSpec {
    Pomwu(EtaSpec),
    Omwu(EtaSpec),
    BlumMansour(EtaSpec),
}

impl LearnerSpec {
    fn name(&self) -> &'static str {
        match self {
            LearnerSpec::Pomwu(_) => "pomwu",
            LearnerSpec::Omwu(_) => "omwu",
            LearnerSpec::BlumMansour(_) => "bm",
        }
    }

    fn eta_spec(&self) -> EtaSpec {
        match self {
            LearnerSpec::Pomwu(e) | LearnerSpec::Omwu(e) | LearnerSpec::BlumMansour(e) => *e,
        }
    }

    fn build(&self, eta: f64, actions: usize, contexts: &ContextSpace) -> Result<Box<dyn Learner>> {
        Ok(match self {
            LearnerSpec::Pomwu(_) => Box::new(Pomwu::new(eta, actions, contexts.clone())?),
            LearnerSpec::Omwu(_) => Box::new(Omwu::new(eta, actions)?),
            LearnerSpec::BlumMansour(_) => Box::new(BlumMansour::new(eta, actions, contexts.clone())?),
        })
    }
}

/// Which context predictor an agent uses.
#[derive(Debug, Clone, Copy)]
pub enum PredictorSpec {
    Oracle,
    Noisy { error_rate: f64 },
    Logistic { step_size: f64 },
}

impl PredictorSpec {
    fn name(&self) -> &'static str {
        match self {
            PredictorSpec::Oracle => "oracle",
            PredictorSpec::Noisy { .. } => "noisy",
            PredictorSpec::Logistic { .. } => "logistic",
        }
    }

    fn build(
        &self,
        num_contexts: usize,
        covariate_dim: Option<usize>,
        rng: ChaCha12Rng,
    ) -> Result<Box<dyn ContextPredictor>> {
        Ok(match self {
            PredictorSpec::Oracle => Box::new(OraclePredictor),
            PredictorSpec::Noisy { error_rate } => {
                Box::new(NoisyPredictor::new(*error_rate, num_contexts, rng)?)
            }
            PredictorSpec::Logistic { step_size } => {
                let b = covariate_dim.ok_or_else(|| {
                    Error::invalid("logistic predictors need a covariate-emitting context process")
                })?;
                Box::new(LogisticModel::new(num_contexts, b, *step_size)?)
            }
        })
    }
}

/// A fully specified run.
pub struct RunConfig {
    pub game: Arc<dyn Game>,
    pub contexts: ContextSpace,
    pub process: ContextProcess,
    pub learners: Vec<LearnerSpec>,
    pub predictors: Vec<PredictorSpec>,
    /// One predictor instance queried once per round, broadcast to all.
    pub shared_predictions: bool,
    /// All agents observe the same covariate draw (the process emits one
    /// per round). With the flag off each agent sees the shared draw plus
    /// its own Gaussian perturbation.
    pub shared_covariates: bool,
    /// Standard deviation of the per-agent covariate perturbation used
    /// when covariates are not shared.
    pub covariate_noise: f64,
    pub rounds: usize,
    pub master_seed: u64,
    /// Parallel fan-out across agents; results are identical either way.
    pub parallel: bool,
    /// Metadata: how the game was built.
    pub game_label: String,
    /// Metadata: the payoff normalization factor recorded at construction.
    pub normalization_factor: f64,
}

impl RunConfig {
    pub fn new(
        game: Arc<dyn Game>,
        contexts: ContextSpace,
        process: ContextProcess,
        learners: Vec<LearnerSpec>,
        predictors: Vec<PredictorSpec>,
        rounds: usize,
        master_seed: u64,
    ) -> Self {
        Self {
            game,
            contexts,
            process,
            learners,
            predictors,
            shared_predictions: false,
            shared_covariates: true,
            covariate_noise: 1.0,
            rounds,
            master_seed,
            parallel: false,
            game_label: "custom".into(),
            normalization_factor: 1.0,
        }
    }

    /// The same learner and predictor for every agent.
    pub fn uniform_agents(
        game: Arc<dyn Game>,
        contexts: ContextSpace,
        process: ContextProcess,
        learner: LearnerSpec,
        predictor: PredictorSpec,
        rounds: usize,
        master_seed: u64,
    ) -> Self {
        let agents = game.num_agents();
        Self::new(
            game,
            contexts,
            process,
            vec![learner; agents],
            vec![predictor; agents],
            rounds,
            master_seed,
        )
    }

    fn validate(&self) -> Result<()> {
        let agents = self.game.num_agents();
        if self.rounds == 0 {
            return Err(Error::invalid("a run needs at least one round"));
        }
        if self.learners.len() != agents {
            return Err(Error::DimensionMismatch {
                what: "learner specs".into(),
                expected: agents,
                actual: self.learners.len(),
            });
        }
        if self.predictors.len() != agents {
            return Err(Error::DimensionMismatch {
                what: "predictor specs".into(),
                expected: agents,
                actual: self.predictors.len(),
            });
        }
        if self.contexts.dim() != self.game.payoff_dim() {
            return Err(Error::DimensionMismatch {
                what: "context dimension vs payoff dimension".into(),
                expected: self.game.payoff_dim(),
                actual: self.contexts.dim(),
            });
        }
        self.process.validate(self.contexts.len())?;
        if self.shared_predictions {
            let first = self.predictors[0].name();
            if self.predictors.iter().any(|p| p.name() != first) {
                return Err(Error::invalid(
                    "shared predictions require a single predictor kind",
                ));
            }
        }
        Ok(())
    }

    fn covariate_dim(&self) -> Option<usize> {
        match &self.process {
            ContextProcess::LogisticCovariate(model) => Some(model.mean.len()),
            _ => None,
        }
    }
}

fn at_round<T>(t: usize, result: Result<T>) -> Result<T> {
    result.map_err(|e| Error::InvalidInput(format!("round {t}: {e}")))
}

/// Runs the three-stage protocol for `T` rounds and returns the trace.
pub fn run_simulation(config: &RunConfig) -> Result<Trace> {
    config.validate()?;
    let agents = self_agents(config);
    let actions = config.game.num_actions();
    let m = config.contexts.len();
    let covariate_dim = config.covariate_dim();

    let mut learners: Vec<Box<dyn Learner>> = Vec::with_capacity(agents);
    let mut metas: Vec<AgentMeta> = Vec::with_capacity(agents);
    for (j, spec) in config.learners.iter().enumerate() {
        let eta = spec.eta_spec().resolve(agents, actions, m, config.rounds)?;
        learners.push(spec.build(eta, actions, &config.contexts)?);
        metas.push(AgentMeta {
            learner: spec.name().into(),
            predictor: config.predictors[j].name().into(),
            eta,
        });
    }

    let mut predictors: Vec<Box<dyn ContextPredictor>> = Vec::new();
    if config.shared_predictions {
        let rng = derive_rng(config.master_seed, "predictor-shared", 0);
        predictors.push(config.predictors[0].build(m, covariate_dim, rng)?);
    } else {
        for (j, spec) in config.predictors.iter().enumerate() {
            let rng = derive_rng(config.master_seed, "predictor", j as u64);
            predictors.push(spec.build(m, covariate_dim, rng)?);
        }
    }

    let mut process_rng = derive_rng(config.master_seed, "process", 0);
    let mut covariate_rngs: Vec<ChaCha12Rng> = (0..agents)
        .map(|j| derive_rng(config.master_seed, "covariate", j as u64))
        .collect();

    let mut records = Vec::with_capacity(config.rounds);
    for index in 0..config.rounds {
        let t = index + 1;
        let (z_index, covariate) = config.process.next(index, &mut process_rng);
        let z = config.contexts.vector(z_index)?.to_vec();

        // Per-agent covariate views.
        let views: Vec<Option<Vec<f64>>> = if let Some(x0) = &covariate {
            if config.shared_covariates {
                vec![Some(x0.clone()); agents]
            } else {
                covariate_rngs
                    .iter_mut()
                    .map(|rng| {
                        Some(
                            x0.iter()
                                .map(|v| {
                                    let n: f64 = StandardNormal.sample(rng);
                                    v + config.covariate_noise * n
                                })
                                .collect(),
                        )
                    })
                    .collect()
            }
        } else {
            vec![None; agents]
        };

        // Phase 1: predictions.
        let mut predicted = vec![0usize; agents];
        if config.shared_predictions {
            let obs = Observation { true_context: z_index, covariate: views[0].as_deref() };
            let p = at_round(t, predictors[0].predict(&obs))?;
            predicted.fill(p);
        } else {
            for (j, predictor) in predictors.iter_mut().enumerate() {
                let obs = Observation { true_context: z_index, covariate: views[j].as_deref() };
                predicted[j] = at_round(t, predictor.predict(&obs))?;
            }
        }

        // Phase 2: every agent acts on its prediction (barrier after).
        let strategies: Vec<Strategy> = if config.parallel {
            at_round(
                t,
                learners
                    .par_iter_mut()
                    .zip(&predicted)
                    .map(|(learner, &p)| learner.act(p))
                    .collect::<Result<Vec<_>>>(),
            )?
        } else {
            at_round(
                t,
                learners
                    .iter_mut()
                    .zip(&predicted)
                    .map(|(learner, &p)| learner.act(p))
                    .collect::<Result<Vec<_>>>(),
            )?
        };
        let profile = at_round(t, JointProfile::new(strategies))?;

        // Phase 3: feedback from the full profile snapshot.
        let cost_matrices = at_round(t, config.game.profile_cost_matrices(&profile))?;
        let costs: Vec<f64> = if config.parallel {
            at_round(
                t,
                cost_matrices
                    .par_iter()
                    .zip(profile.strategies().par_iter())
                    .map(|(phi, w)| expected_cost(phi, w, &z))
                    .collect::<Result<Vec<_>>>(),
            )?
        } else {
            at_round(
                t,
                cost_matrices
                    .iter()
                    .zip(profile.strategies())
                    .map(|(phi, w)| expected_cost(phi, w, &z))
                    .collect::<Result<Vec<_>>>(),
            )?
        };

        // Phase 4: updates.
        if config.parallel {
            at_round(
                t,
                learners
                    .par_iter_mut()
                    .zip(&cost_matrices)
                    .map(|(learner, phi)| learner.update(z_index, phi, &z))
                    .collect::<Result<Vec<_>>>(),
            )?;
        } else {
            at_round(
                t,
                learners
                    .iter_mut()
                    .zip(&cost_matrices)
                    .map(|(learner, phi)| learner.update(z_index, phi, &z))
                    .collect::<Result<Vec<_>>>(),
            )?;
        }
        if config.shared_predictions {
            let obs = Observation { true_context: z_index, covariate: views[0].as_deref() };
            at_round(t, predictors[0].update(&obs, z_index))?;
        } else {
            for (j, predictor) in predictors.iter_mut().enumerate() {
                let obs = Observation { true_context: z_index, covariate: views[j].as_deref() };
                at_round(t, predictor.update(&obs, z_index))?;
            }
        }

        records.push(RoundRecord {
            t,
            context: z_index,
            predicted,
            strategies: profile.strategies().to_vec(),
            cost_matrices,
            costs,
        });
    }

    Ok(Trace {
        schema_version: 1,
        contexts: config.contexts.clone(),
        num_agents: agents,
        num_actions: actions,
        payoff_dim: config.game.payoff_dim(),
        records,
        metadata: RunMetadata {
            master_seed: config.master_seed,
            game: config.game_label.clone(),
            agents: metas,
            shared_predictions: config.shared_predictions,
            normalization_factor: config.normalization_factor,
        },
    })
}

fn self_agents(config: &RunConfig) -> usize {
    config.game.num_agents()
}
