use crate::episode::Action;
use rand::Rng;
use rand_distr::{Distribution, Geometric, Normal};
use serde::{Deserialize, Serialize};

/// How many consecutive steps an action is held.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Duration {
    Fixed {
        steps: u64,
    },
    /// Rounded to the nearest integer and clipped to at least 1.
    Normal {
        mean: f64,
        sd: f64,
    },
    /// Number of trials up to and including the first success.
    Geometric {
        p: f64,
    },
}

impl Duration {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Duration::Fixed { steps } if steps == 0 => Err("fixed duration must be at least 1".into()),
            Duration::Normal { mean, sd } if !mean.is_finite() || !(sd >= 0.0 && sd.is_finite()) => Err(format!("bad normal duration ({mean}, {sd})")),
            Duration::Geometric { p } if !(p > 0.0 && p <= 1.0) => Err(format!("geometric p must be in (0, 1], got {p}")),
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            Duration::Fixed { steps } => steps.max(1),
            Duration::Normal { mean, sd } => {
                let x = Normal::new(mean, sd).map(|n| n.sample(rng)).unwrap_or(mean);
                x.round().max(1.0) as u64
            }
            Duration::Geometric { p } => Geometric::new(p).map(|g| g.sample(rng) + 1).unwrap_or(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomPolicyParams {
    pub action_weights: [f64; 9],
    pub duration: Duration,
    /// Probability of keeping the previous action when a hold runs out.
    #[serde(default)]
    pub correlation: f64,
}

impl Default for RandomPolicyParams {
    /// Uniform over the nine actions, each held for round(N(5, 1)) steps.
    fn default() -> Self {
        Self { action_weights: [1.0; 9], duration: Duration::Normal { mean: 5.0, sd: 1.0 }, correlation: 0.0 }
    }
}

impl RandomPolicyParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.action_weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) || self.action_weights.iter().sum::<f64>() <= 0.0 {
            return Err("action weights must be non-negative and not all zero".into());
        }
        if !(0.0..=1.0).contains(&self.correlation) {
            return Err(format!("correlation must be in [0, 1], got {}", self.correlation));
        }
        self.duration.validate()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RandomMemory {
    pub current: Option<Action>,
    pub remaining: u64,
}

pub fn random_policy_step<R: Rng + ?Sized>(params: &RandomPolicyParams, rng: &mut R, memory: &mut RandomMemory) -> Action {
    if let (Some(a), true) = (memory.current, memory.remaining > 0) {
        memory.remaining -= 1;
        return a;
    }
    let action = match memory.current {
        Some(prev) if params.correlation > 0.0 && rng.random::<f64>() < params.correlation => prev,
        _ => Action::ALL[crate::entities::sample_weighted(&params.action_weights, rng)],
    };
    memory.current = Some(action);
    memory.remaining = params.duration.sample(rng) - 1;
    action
}
