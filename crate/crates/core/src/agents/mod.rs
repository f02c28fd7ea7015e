//! Baseline policies and the batch evaluation harness.

mod eval;
mod heuristic;
mod random;
pub mod stats;

pub use eval::{run_episode, run_evaluation, EvalOptions, EvalTask, EvaluationReport, ReportRow, REPORT_HEADER};
pub use heuristic::{heuristic_policy_step, Exploration, HeuristicMemory, HeuristicPolicyParams, ShapeMismatch};
pub use random::{random_policy_step, Duration, RandomMemory, RandomPolicyParams};
pub use stats::{rank_sum_test, RankSumResult, StatsError};

use crate::episode::Action;
use crate::observations::{Observation, ObservationSpec, RaycastObservation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum AgentSpec {
    Random(RandomPolicyParams),
    Heuristic(HeuristicPolicyParams),
}

impl AgentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AgentSpec::Random(_) => "random",
            AgentSpec::Heuristic(_) => "heuristic",
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            AgentSpec::Random(p) => p.validate(),
            AgentSpec::Heuristic(p) => p.validate(),
        }
    }

    /// Channels the policy reads.
    pub fn obs_spec(&self) -> ObservationSpec {
        match self {
            AgentSpec::Random(_) => ObservationSpec::default(),
            AgentSpec::Heuristic(p) => ObservationSpec { raycast: Some(p.ray_spec()), camera: None, vector: true },
        }
    }

    /// A fresh policy whose private RNG is derived from the episode seed on a
    /// separate ChaCha stream, so it never aliases the world's draws.
    pub fn policy(&self, seed: u64) -> Policy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        match self {
            AgentSpec::Random(p) => Policy::Random { params: p.clone(), rng, memory: RandomMemory::default() },
            AgentSpec::Heuristic(p) => Policy::Heuristic { params: p.clone(), memory: HeuristicMemory::new(rng) },
        }
    }
}

#[derive(Clone, Debug)]
pub enum Policy {
    Random { params: RandomPolicyParams, rng: ChaCha8Rng, memory: RandomMemory },
    Heuristic { params: HeuristicPolicyParams, memory: HeuristicMemory },
}

impl Policy {
    pub fn act(&mut self, obs: &Observation) -> Result<Action, ShapeMismatch> {
        match self {
            Policy::Random { params, rng, memory } => Ok(random_policy_step(params, rng, memory)),
            Policy::Heuristic { params, memory } => {
                let blank;
                let rays = match &obs.raycast {
                    Some(r) => r,
                    None => {
                        blank = RaycastObservation::zeros(params.ray_count);
                        &blank
                    }
                };
                heuristic_policy_step(params, rays, obs.vector.as_ref(), memory)
            }
        }
    }
}
