use crate::episode::Action;
use crate::observations::{RaySpec, RaycastObservation, VectorObservation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// What to do when no target is in sight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exploration {
    /// Forwards, with an occasional 90 degree turn.
    ForwardTurns,
    /// Forwards or backwards with equal probability, held for 1 to 10 steps.
    ForwardBackward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicPolicyParams {
    pub ray_count: usize,
    pub fov_degrees: f64,
    /// Raycast rows to steer towards.
    pub target_rows: Vec<usize>,
    /// Once any of these rows lights up the agent pursues them instead of
    /// `target_rows` for the rest of the episode.
    #[serde(default)]
    pub then_rows: Vec<usize>,
    pub exploration: Exploration,
    /// Chance per step of starting a turn burst while exploring.
    pub turn_probability: f64,
    pub stuck_speed_epsilon: f64,
    pub stuck_window: u64,
    pub unstick_duration: u64,
}

impl Default for HeuristicPolicyParams {
    /// Foraging set-up: 15 rays over 60 degrees chasing both good-goal rows.
    fn default() -> Self {
        Self {
            ray_count: 15,
            fov_degrees: 60.0,
            target_rows: vec![3, 4],
            then_rows: Vec::new(),
            exploration: Exploration::ForwardTurns,
            turn_probability: 0.1,
            stuck_speed_epsilon: 0.01,
            stuck_window: 10,
            unstick_duration: 15,
        }
    }
}

impl HeuristicPolicyParams {
    /// Button set-up: 101 rays over 358 degrees, chase the button, then the
    /// good goal it produces.
    pub fn button() -> Self {
        Self { ray_count: 101, fov_degrees: 358.0, target_rows: vec![7], then_rows: vec![3], exploration: Exploration::ForwardBackward, ..Self::default() }
    }

    pub fn ray_spec(&self) -> RaySpec {
        RaySpec::new(self.ray_count, self.fov_degrees)
    }

    pub fn validate(&self) -> Result<(), String> {
        self.ray_spec().validate().map_err(|e| e.to_string())?;
        if !(self.stuck_speed_epsilon > 0.0) {
            return Err("stuck_speed_epsilon must be positive".into());
        }
        if self.target_rows.iter().chain(&self.then_rows).any(|r| *r >= RaycastObservation::ROWS) {
            return Err("target rows must be in 0..8".into());
        }
        if !(0.0..=1.0).contains(&self.turn_probability) {
            return Err("turn_probability must be in [0, 1]".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct HeuristicMemory {
    pub rng: ChaCha8Rng,
    /// Unsticking manoeuvre being held and for how many more steps.
    pub unstick: Option<(Action, u64)>,
    /// Exploration move being held; dropped as soon as a target shows up.
    pub explore: Option<(Action, u64)>,
    pub slow_steps: u64,
    pub switched: bool,
}

impl HeuristicMemory {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self { rng, unstick: None, explore: None, slow_steps: 0, switched: false }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("raycast observation has {found} rays, the policy expects {expected}")]
pub struct ShapeMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Ray whose target entry is largest (the nearest target), if any.
fn nearest_target(obs: &RaycastObservation, rows: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for ray in 0..obs.rays {
        for &row in rows {
            let v = obs.get(row, ray);
            if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
                best = Some((ray, v));
            }
        }
    }
    best.map(|(ray, _)| ray)
}

fn hold(slot: &mut Option<(Action, u64)>) -> Option<Action> {
    let (action, left) = (*slot)?;
    *slot = (left > 1).then_some((action, left - 1));
    Some(action)
}

/// Turns one step's observations into an action.
pub fn heuristic_policy_step(
    params: &HeuristicPolicyParams,
    rays: &RaycastObservation,
    vector: Option<&VectorObservation>,
    memory: &mut HeuristicMemory,
) -> Result<Action, ShapeMismatch> {
    if rays.rays != params.ray_count {
        return Err(ShapeMismatch { expected: params.ray_count, found: rays.rays });
    }
    if !memory.switched && !params.then_rows.is_empty() && nearest_target(rays, &params.then_rows).is_some() {
        memory.switched = true;
    }

    let speed = vector.map_or(f64::INFINITY, |v| v.velocity.length());
    memory.slow_steps = if speed < params.stuck_speed_epsilon { memory.slow_steps + 1 } else { 0 };
    if memory.slow_steps >= params.stuck_window {
        memory.slow_steps = 0;
        let turn = if memory.rng.random::<bool>() { Action::ForwardsLeft } else { Action::ForwardsRight };
        memory.unstick = Some((turn, params.unstick_duration));
    }
    if let Some(action) = hold(&mut memory.unstick) {
        return Ok(action);
    }

    let rows = if memory.switched { &params.then_rows } else { &params.target_rows };
    if let Some(ray) = nearest_target(rays, rows) {
        memory.explore = None;
        let angle = params.ray_spec().angle(ray);
        return Ok(if angle < 0.0 {
            Action::ForwardsLeft
        } else if angle > 0.0 {
            Action::ForwardsRight
        } else {
            Action::Forwards
        });
    }

    if let Some(action) = hold(&mut memory.explore) {
        return Ok(action);
    }
    Ok(match params.exploration {
        Exploration::ForwardTurns => {
            if memory.rng.random::<f64>() < params.turn_probability {
                // 15 turns of 6 degrees make a quarter turn
                let turn = if memory.rng.random::<bool>() { Action::Left } else { Action::Right };
                memory.explore = Some((turn, 14));
                turn
            } else {
                Action::Forwards
            }
        }
        Exploration::ForwardBackward => {
            let action = if memory.rng.random::<bool>() { Action::Forwards } else { Action::Backwards };
            let hold = memory.rng.random_range(1..=10);
            memory.explore = (hold > 1).then_some((action, hold - 1));
            action
        }
    })
}
