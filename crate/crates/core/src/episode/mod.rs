//! The episodic loop: actions, reward and health accounting, freezing,
//! lights-out, termination and trajectory logging.

mod action;
mod replay;
mod trajectory;

pub use action::{Action, UnknownAction};
pub use replay::{replay, ReplayError, Verdict};
pub use trajectory::{row_line, TrajectoryError, TrajectoryLog, TrajectoryMeta, TrajectoryRow, TRAJECTORY_HEADER};

use crate::config::{instantiate_arena, ArenaConfigFile, ArenaSpec, Blackouts, InstantiationError};
use crate::entities::{combine_outcomes, is_face_press, on_agent_contact, press_button, EndCause, EntityId, EntityKind};
use crate::math::{forward, Vec3};
use crate::observations::{observe, Observation, ObservationError, ObservationSpec};
use crate::physics::{PhysicsParams, Pose, SimulationFault};
use crate::world::{AgentContact, World};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_HEALTH: f64 = 100.0;
/// Reward-to-health factor: a goal worth 0.5 heals 50.
pub const HEALTH_PER_REWARD: f64 = 100.0;
/// Hot zones drain reward this many times faster than time alone.
pub const HOT_ZONE_FACTOR: f64 = 10.0;
/// Health within this distance of a bound snaps onto it, absorbing rounding
/// left over from summing per-step decrements.
const HEALTH_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoneReason {
    Goal,
    BadGoal,
    DeathZone,
    Timeout,
    HealthZero,
    UserSkip,
}

impl DoneReason {
    pub const ALL: [DoneReason; 6] =
        [DoneReason::Goal, DoneReason::BadGoal, DoneReason::DeathZone, DoneReason::Timeout, DoneReason::HealthZero, DoneReason::UserSkip];

    pub fn name(self) -> &'static str {
        match self {
            DoneReason::Goal => "goal",
            DoneReason::BadGoal => "bad_goal",
            DoneReason::DeathZone => "death_zone",
            DoneReason::Timeout => "timeout",
            DoneReason::HealthZero => "health_zero",
            DoneReason::UserSkip => "user_skip",
        }
    }
}

impl fmt::Display for DoneReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DoneReason {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| format!("unknown done reason `{s}`"))
    }
}

impl From<EndCause> for DoneReason {
    fn from(c: EndCause) -> Self {
        match c {
            EndCause::Goal => DoneReason::Goal,
            EndCause::BadGoal => DoneReason::BadGoal,
            EndCause::DeathZone => DoneReason::DeathZone,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeState {
    pub step: u64,
    pub t: u64,
    pub pass_mark: f64,
    pub reward: f64,
    pub health: f64,
    pub prev_episode_reward: f64,
    pub frozen_remaining: u64,
    pub lights_on: bool,
    pub done: bool,
    pub done_reason: Option<DoneReason>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepInfo {
    pub step: u64,
    pub health: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub yaw: f64,
    pub reward: f64,
    pub in_hot_zone: bool,
    pub lights_on: bool,
    pub done_reason: Option<DoneReason>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub observation: Observation,
    pub reward_delta: f64,
    pub done: bool,
    pub info: StepInfo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub final_reward: f64,
    pub passed: bool,
    pub steps: u64,
    pub done_reason: DoneReason,
    pub trajectory: TrajectoryLog,
}

#[derive(Debug, thiserror::Error)]
pub enum EpisodeError {
    #[error("arena index {index} out of range: the file defines {count} arena(s)")]
    NoArena { index: usize, count: usize },
    #[error("invalid blackout schedule: {0}")]
    Blackouts(String),
    #[error(transparent)]
    Instantiation(#[from] InstantiationError),
    #[error(transparent)]
    Observation(#[from] ObservationError),
    #[error(transparent)]
    Fault(#[from] SimulationFault),
    #[error("the episode is already over")]
    AlreadyDone,
    #[error("the episode is still running")]
    NotDone,
}

/// Whether the lights are on at `step`.
pub fn lights_state(step: u64, schedule: &Blackouts) -> bool {
    match schedule {
        Blackouts::Never => true,
        Blackouts::Alternating(0) => true,
        Blackouts::Alternating(n) => (step / n) % 2 == 0,
        Blackouts::Intervals(bounds) => {
            // dark iff an odd number of boundaries are <= step
            bounds.iter().take_while(|b| **b <= step).count() % 2 == 0
        }
    }
}

/// Per-step time penalty: `1/t`, or ten times that in a hot zone. Untimed
/// arenas and frozen steps pay nothing.
pub fn time_decrement(t: u64, hot: bool, frozen: bool) -> f64 {
    if t == 0 || frozen {
        0.0
    } else if hot {
        -HOT_ZONE_FACTOR / t as f64
    } else {
        -1.0 / t as f64
    }
}

/// New health after a reward change, clamped to `[0, 100]`.
pub fn update_health(health: f64, reward_delta: f64) -> f64 {
    let h = (health + HEALTH_PER_REWARD * reward_delta).clamp(0.0, MAX_HEALTH);
    if h < HEALTH_EPSILON {
        0.0
    } else if h > MAX_HEALTH - HEALTH_EPSILON {
        MAX_HEALTH
    } else {
        h
    }
}

/// One live episode in one arena.
#[derive(Clone, Debug)]
pub struct Episode {
    pub world: World,
    /// Readable names for entities placed from the file.
    pub labels: BTreeMap<EntityId, String>,
    pub state: EpisodeState,
    pub obs_spec: ObservationSpec,
    pub trajectory: TrajectoryLog,
    blackouts: Blackouts,
}

impl Episode {
    /// Instantiates `arena_index` of `config` with `seed` and returns the
    /// episode with its first observation.
    pub fn reset(
        config: &ArenaConfigFile,
        arena_index: usize,
        seed: u64,
        params: &PhysicsParams,
        obs_spec: ObservationSpec,
    ) -> Result<(Episode, Observation), EpisodeError> {
        let arena = config.arenas.get(arena_index).ok_or(EpisodeError::NoArena { index: arena_index, count: config.arenas.len() })?;
        Self::reset_arena(arena, arena_index, seed, params, obs_spec)
    }

    pub fn reset_arena(
        arena: &ArenaSpec,
        arena_index: usize,
        seed: u64,
        params: &PhysicsParams,
        obs_spec: ObservationSpec,
    ) -> Result<(Episode, Observation), EpisodeError> {
        obs_spec.validate()?;
        let blackouts = arena.blackout_schedule().map_err(EpisodeError::Blackouts)?;
        let placed = instantiate_arena(arena, params, seed)?;
        let frozen = placed.world.agent().frozen_delay;
        let state = EpisodeState {
            step: 0,
            t: arena.t,
            pass_mark: arena.pass_mark,
            reward: 0.0,
            health: MAX_HEALTH,
            prev_episode_reward: 0.0,
            frozen_remaining: frozen,
            lights_on: lights_state(0, &blackouts),
            done: false,
            done_reason: None,
        };
        let meta = TrajectoryMeta { version: crate::VERSION.to_string(), seed, arena: arena_index, config: String::new() };
        let episode = Episode { world: placed.world, labels: placed.labels, state, obs_spec, trajectory: TrajectoryLog::new(meta), blackouts };
        let obs = episode.observe()?;
        Ok((episode, obs))
    }

    pub fn observe(&self) -> Result<Observation, ObservationError> {
        observe(&self.world, &self.obs_spec, self.state.health, self.state.lights_on)
    }

    pub fn info(&self, in_hot_zone: bool) -> StepInfo {
        let body = &self.world.agent().body;
        StepInfo {
            step: self.state.step,
            health: self.state.health,
            position: body.pose.position,
            velocity: body.velocity,
            yaw: body.pose.yaw,
            reward: self.state.reward,
            in_hot_zone,
            lights_on: self.state.lights_on,
            done_reason: self.state.done_reason,
        }
    }

    /// Advances one step. Errors once the episode is over.
    pub fn step(&mut self, action: Action) -> Result<StepResult, EpisodeError> {
        if self.state.done {
            return Err(EpisodeError::AlreadyDone);
        }
        let frozen = self.state.frozen_remaining > 0;
        let params = self.world.params.clone();
        let mut impulse = Vec3::ZERO;
        if frozen {
            self.state.frozen_remaining -= 1;
        } else {
            let agent = self.world.agent_mut();
            let pose = agent.body.pose;
            agent.body.pose = Pose::new(pose.position, pose.yaw + action.turn() * params.turn_degrees);
            impulse = forward(agent.body.pose.yaw) * (action.drive() * params.drive_impulse);
        }

        let contacts = match self.world.physics_step(impulse) {
            Ok(c) => c,
            Err(fault) => {
                log::error!("episode aborted at step {}: {fault}", self.state.step);
                return Err(fault.into());
            }
        };
        for request in self.world.tick_entities() {
            self.world.place_spawn(&request);
        }

        let outcome = self.resolve_contacts(&contacts);
        // the death step pays exactly -1
        let decrement = if outcome.ends_episode == Some(EndCause::DeathZone) { 0.0 } else { time_decrement(self.state.t, outcome.hot_zone, frozen) };
        let reward_delta = outcome.reward_delta + decrement;

        let state = &mut self.state;
        state.reward += reward_delta;
        state.health = update_health(state.health, reward_delta);
        let acted_at = state.step;
        state.step += 1;
        state.lights_on = lights_state(state.step, &self.blackouts);
        let reason = if let Some(cause) = outcome.ends_episode {
            Some(DoneReason::from(cause))
        } else if state.t > 0 && state.step >= state.t {
            Some(DoneReason::Timeout)
        } else if state.health <= 0.0 {
            Some(DoneReason::HealthZero)
        } else {
            None
        };
        state.done = reason.is_some();
        state.done_reason = reason;

        let pose = self.world.agent().body.pose;
        self.trajectory.rows.push(TrajectoryRow {
            step: acted_at,
            x: pose.position.x,
            y: pose.position.y,
            z: pose.position.z,
            yaw: pose.yaw,
            action,
            reward_delta,
            reward: self.state.reward,
            health: self.state.health,
        });
        Ok(StepResult { observation: self.observe()?, reward_delta, done: self.state.done, info: self.info(outcome.hot_zone) })
    }

    /// Applies rewards, consumes collected goals and presses buttons.
    fn resolve_contacts(&mut self, contacts: &[AgentContact]) -> crate::entities::ContactOutcome {
        // one outcome per touched entity, in id order
        let mut touched: BTreeMap<EntityId, Vec<Vec3>> = BTreeMap::new();
        for c in contacts {
            touched.entry(c.other).or_default().push(c.normal);
        }
        let mut outcomes = Vec::new();
        let mut consumed = Vec::new();
        let mut spawns = Vec::new();
        for (id, normals) in &touched {
            let Some(entity) = self.world.get(*id) else { continue };
            let outcome = on_agent_contact(entity);
            if outcome.consume_entity {
                consumed.push(*id);
            }
            outcomes.push(outcome);
            if entity.kind == EntityKind::SpawnerButton && normals.iter().any(|n| is_face_press(entity, *n)) {
                let mut rng = self.world.rng.clone();
                if let Some(e) = self.world.get_mut(*id) {
                    spawns.extend(press_button(e, &mut rng));
                }
                self.world.rng = rng;
            }
        }
        for id in consumed {
            self.world.remove(id);
        }
        for request in &spawns {
            self.world.place_spawn(request);
        }
        combine_outcomes(outcomes)
    }

    /// Ends the episode at the participant's request.
    pub fn skip(&mut self) -> Result<(), EpisodeError> {
        if self.state.done {
            return Err(EpisodeError::AlreadyDone);
        }
        self.state.done = true;
        self.state.done_reason = Some(DoneReason::UserSkip);
        Ok(())
    }

    pub fn passed(&self) -> bool {
        self.state.reward >= self.state.pass_mark
    }

    pub fn finish(&self) -> Result<Summary, EpisodeError> {
        let Some(done_reason) = self.state.done_reason.filter(|_| self.state.done) else { return Err(EpisodeError::NotDone) };
        Ok(Summary { final_reward: self.state.reward, passed: self.passed(), steps: self.state.step, done_reason, trajectory: self.trajectory.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blackout_intervals_are_half_open() {
        let s = Blackouts::Intervals(vec![5, 10]);
        assert!(lights_state(4, &s));
        assert!(!lights_state(5, &s));
        assert!(!lights_state(7, &s));
        assert!(lights_state(10, &s));
        let open_ended = Blackouts::Intervals(vec![5, 10, 20]);
        assert!(!lights_state(1000, &open_ended));
    }

    #[test]
    fn alternating_blackouts() {
        let s = Blackouts::Alternating(20);
        assert!(lights_state(0, &s));
        assert!(lights_state(19, &s));
        assert!(!lights_state(25, &s));
        assert!(lights_state(40, &s));
    }

    #[test]
    fn health_clamps() {
        assert_eq!(update_health(40.0, 0.5), 90.0);
        assert_eq!(update_health(80.0, 0.5), 100.0);
        assert_eq!(update_health(0.5, -1.0), 0.0);
    }

    #[test]
    fn decrements() {
        assert_eq!(time_decrement(0, true, false), 0.0);
        assert_eq!(time_decrement(100, false, true), 0.0);
        assert!((time_decrement(500, true, false) + 0.02).abs() < 1e-15);
    }

    #[test]
    fn actions_round_trip() {
        for (i, a) in Action::ALL.iter().enumerate() {
            assert_eq!(a.index(), i);
            assert_eq!(a.name().parse::<Action>().unwrap(), *a);
        }
        assert!(Action::from_index(9).is_none());
    }
}
