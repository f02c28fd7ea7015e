use super::entity::{constants, ButtonState, Entity, EntityId};
use super::kind::EntityKind;
use crate::math::{forward, Vec3};
use crate::physics::{Collider, Pose, Shape};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A goal some entity wants to place in the world this step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpawnRequest {
    pub source: EntityId,
    pub kind: EntityKind,
    /// Bottom-centre of the new goal.
    pub position: Vec3,
    pub size: f64,
}

/// Why a contact ended the episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndCause {
    Goal,
    BadGoal,
    DeathZone,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContactOutcome {
    pub reward_delta: f64,
    pub ends_episode: Option<EndCause>,
    pub consume_entity: bool,
    /// The agent is inside a hot zone this step.
    pub hot_zone: bool,
}

/// Reward semantics of the agent touching `entity`.
pub fn on_agent_contact(entity: &Entity) -> ContactOutcome {
    use EntityKind::*;
    let value = entity.value();
    match entity.kind {
        GoodGoal | GoodGoalBounce => ContactOutcome { reward_delta: value, ends_episode: Some(EndCause::Goal), consume_entity: true, hot_zone: false },
        GoodGoalMulti | GoodGoalMultiBounce | DecayGoal | RipenGoal | GrowGoal | ShrinkGoal => {
            ContactOutcome { reward_delta: value, ends_episode: None, consume_entity: true, hot_zone: false }
        }
        BadGoal | BadGoalBounce => ContactOutcome { reward_delta: -value, ends_episode: Some(EndCause::BadGoal), consume_entity: true, hot_zone: false },
        DeathZone => ContactOutcome { reward_delta: -1.0, ends_episode: Some(EndCause::DeathZone), consume_entity: false, hot_zone: false },
        HotZone => ContactOutcome { hot_zone: true, ..ContactOutcome::default() },
        _ => ContactOutcome::default(),
    }
}

/// Folds the outcomes of every contact in one step. A death zone overrides the
/// hot-zone rate and any other end cause; goal valences collected on the same
/// step still count.
pub fn combine_outcomes<I: IntoIterator<Item = ContactOutcome>>(outcomes: I) -> ContactOutcome {
    let mut total = ContactOutcome::default();
    for o in outcomes {
        total.reward_delta += o.reward_delta;
        total.hot_zone |= o.hot_zone;
        total.ends_episode = match (total.ends_episode, o.ends_episode) {
            (Some(EndCause::DeathZone), _) | (_, Some(EndCause::DeathZone)) => Some(EndCause::DeathZone),
            (Some(EndCause::BadGoal), _) | (_, Some(EndCause::BadGoal)) => Some(EndCause::BadGoal),
            (a, b) => a.or(b),
        };
    }
    if total.ends_episode == Some(EndCause::DeathZone) {
        total.hot_zone = false;
    }
    total
}

/// Advances an entity's own clock by one step: valence schedules, dispenser
/// countdowns and button cooldowns. `blocked` reports whether a collider at a
/// pose would overlap some other solid; growth is skipped when it would.
pub fn tick_entity<R: Rng + ?Sized>(entity: &mut Entity, rng: &mut R, blocked: &dyn Fn(&Collider, &Pose) -> bool) -> Vec<SpawnRequest> {
    let mut spawns = Vec::new();
    if let Some(schedule) = entity.schedule.as_mut() {
        schedule.age += 1;
        if schedule.age > schedule.delay && !schedule.is_finished() {
            let next = schedule.value_after(schedule.active_steps + 1);
            if schedule.size_tracks_valence {
                let d = next.max(constants::MIN_GOAL_SIZE);
                let grown = Collider::solid(Shape::Sphere { radius: d / 2.0 });
                let growing = d > entity.size.x;
                if !growing || !blocked(&grown, &entity.body.pose) {
                    schedule.active_steps += 1;
                    entity.size = Vec3::splat(d);
                    entity.collider = grown;
                }
            } else {
                schedule.active_steps += 1;
            }
        }
    }
    let kind = entity.kind;
    let pose = entity.body.pose;
    if let Some(d) = entity.dispenser.as_mut() {
        if let Some(button) = d.button.as_mut() {
            button.cooldown_remaining = button.cooldown_remaining.saturating_sub(1);
        } else if d.time_between_spawns > 0 && d.remaining_spawn_count != Some(0) {
            d.countdown = d.countdown.saturating_sub(1);
            if d.countdown == 0 {
                d.countdown = d.time_between_spawns;
                if let Some(n) = d.remaining_spawn_count.as_mut() {
                    *n -= 1;
                }
                let size = d.spawned_goal_size;
                let position = match kind {
                    EntityKind::SpawnerTree => tree_drop_position(pose, size, rng),
                    _ => hatch_position(kind, pose, size),
                };
                spawns.push(SpawnRequest { source: entity.id, kind: EntityKind::GoodGoalMulti, position, size });
            }
        }
    }
    spawns
}

/// Uniform point on the branch disc, outside the trunk, with the goal centred
/// at branch height.
fn tree_drop_position<R: Rng + ?Sized>(pose: Pose, size: f64, rng: &mut R) -> Vec3 {
    let outer = constants::TREE_BRANCH_RADIUS;
    let trunk = constants::TREE_TRUNK_SIZE.x.max(constants::TREE_TRUNK_SIZE.z) * std::f64::consts::FRAC_1_SQRT_2;
    let inner = (trunk + size / 2.0).min(outer);
    let u: f64 = rng.random();
    let rho = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    Vec3::new(pose.position.x + rho * theta.cos(), pose.position.y + constants::TREE_BRANCH_HEIGHT - size / 2.0, pose.position.z + rho * theta.sin())
}

/// Just outside the hatch on the dispenser's front (local -z) face.
fn hatch_position(kind: EntityKind, pose: Pose, size: f64) -> Vec3 {
    let (body, hatch) = match kind {
        EntityKind::SpawnerDispenserTall => (constants::DISPENSER_TALL_SIZE, constants::DISPENSER_TALL_HATCH),
        _ => (constants::DISPENSER_SHORT_SIZE, constants::DISPENSER_SHORT_HATCH),
    };
    let out = -forward(pose.yaw) * (body.z / 2.0 + size / 2.0 + 0.05);
    Vec3::new(pose.position.x + out.x, pose.position.y + hatch, pose.position.z + out.z)
}

/// Whether a contact with normal `normal_to_agent` (pointing from the button to
/// the agent) is a press on the button's face.
pub fn is_face_press(button: &Entity, normal_to_agent: Vec3) -> bool {
    button.kind == EntityKind::SpawnerButton && normal_to_agent.dot(button.button_face_normal()) > constants::BUTTON_FACE_COS
}

/// Samples an index proportionally to `weights`.
pub fn sample_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

/// Presses a button. No-op while cooling down; otherwise restarts the cooldown
/// and with the configured probability asks for one goal.
pub fn press_button<R: Rng + ?Sized>(entity: &mut Entity, rng: &mut R) -> Option<SpawnRequest> {
    let id = entity.id;
    let dispenser = entity.dispenser.as_mut()?;
    let size = dispenser.spawned_goal_size;
    let button = dispenser.button.as_mut()?;
    if button.cooldown_remaining > 0 {
        return None;
    }
    button.cooldown_remaining = button.reset_duration;
    let roll: f64 = rng.random();
    if roll >= button.spawn_probability {
        return None;
    }
    let kind = ButtonState::REWARD_KINDS[sample_weighted(&button.reward_weights, rng)];
    Some(SpawnRequest { source: id, kind, position: button.reward_spawn_position, size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entities::entity::{build_entity, EntitySpec};
    use crate::physics::PhysicsParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn make(spec: EntitySpec, size: Option<Vec3>) -> Entity {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        build_entity(EntityId(5), &spec, Pose::new(Vec3::new(20.0, 0.0, 20.0), 0.0), size, &PhysicsParams::default(), &mut rng).unwrap()
    }

    fn free(_: &Collider, _: &Pose) -> bool {
        false
    }

    fn decay() -> Entity {
        make(
            EntitySpec {
                initial_value: Some(2.5),
                final_value: Some(0.0),
                delay: Some(100),
                change_rate: Some(-0.003),
                ..EntitySpec::of(EntityKind::DecayGoal)
            },
            None,
        )
    }

    #[test]
    fn decay_waits_for_delay_then_moves_linearly() {
        let mut e = decay();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            tick_entity(&mut e, &mut rng, &free);
        }
        assert_eq!(e.value(), 2.5);
        for _ in 50..150 {
            tick_entity(&mut e, &mut rng, &free);
        }
        assert!((e.value() - 2.35).abs() < 1e-12);
        for _ in 0..2000 {
            tick_entity(&mut e, &mut rng, &free);
        }
        assert_eq!(e.value(), 0.0);
    }

    #[test]
    fn dispenser_emits_exactly_its_count() {
        let mut e = make(EntitySpec { time_between_spawns: Some(25), spawn_count: Some(2), ..EntitySpec::of(EntityKind::SpawnerDispenserTall) }, None);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut at = Vec::new();
        for step in 1..=500 {
            for s in tick_entity(&mut e, &mut rng, &free) {
                assert_eq!(s.kind, EntityKind::GoodGoalMulti);
                at.push(step);
            }
        }
        assert_eq!(at, vec![25, 50]);
    }

    #[test]
    fn tree_drops_fall_on_the_branch_disc() {
        let mut e = make(EntitySpec { time_between_spawns: Some(1), ..EntitySpec::of(EntityKind::SpawnerTree) }, None);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let s = tick_entity(&mut e, &mut rng, &free).pop().unwrap();
            let rho = (s.position - Vec3::new(20.0, 0.0, 20.0)).horizontal().length();
            assert!(rho <= constants::TREE_BRANCH_RADIUS + 1e-12 && rho > 0.4);
            assert!((s.position.y + s.size / 2.0 - constants::TREE_BRANCH_HEIGHT).abs() < 1e-12);
        }
    }

    #[test]
    fn grow_goal_stops_when_blocked() {
        let mut e = make(EntitySpec { initial_value: Some(1.0), final_value: Some(3.0), change_rate: Some(0.1), ..EntitySpec::of(EntityKind::GrowGoal) }, None);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let wall = |c: &Collider, _: &Pose| matches!(c.shape, Shape::Sphere { radius } if radius > 0.75);
        for _ in 0..100 {
            tick_entity(&mut e, &mut rng, &wall);
        }
        assert!((e.size.x - 1.5).abs() < 1e-9, "{}", e.size.x);
        assert_eq!(e.collider.shape, Shape::Sphere { radius: e.size.x / 2.0 });
    }

    #[test]
    fn button_cooldown_and_probability() {
        let mut e = make(EntitySpec { reset_duration: Some(3), spawn_probability: Some(0.0), ..EntitySpec::of(EntityKind::SpawnerButton) }, None);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(press_button(&mut e, &mut rng).is_none());
        let snapshot = e.clone();
        assert!(press_button(&mut e, &mut rng).is_none());
        assert_eq!(e, snapshot);
        for _ in 0..3 {
            tick_entity(&mut e, &mut rng, &free);
        }
        assert_eq!(e.dispenser.as_ref().unwrap().button.as_ref().unwrap().cooldown_remaining, 0);
    }

    #[test]
    fn death_overrides_hot_zone() {
        let hot = ContactOutcome { hot_zone: true, ..Default::default() };
        let death = ContactOutcome { reward_delta: -1.0, ends_episode: Some(EndCause::DeathZone), ..Default::default() };
        let c = combine_outcomes([hot, death]);
        assert_eq!(c.reward_delta, -1.0);
        assert!(!c.hot_zone);
        assert_eq!(c.ends_episode, Some(EndCause::DeathZone));
    }

    #[test]
    fn wall_contact_is_neutral() {
        let e = make(EntitySpec::of(EntityKind::Wall), None);
        assert_eq!(on_agent_contact(&e), ContactOutcome::default());
        let g = make(EntitySpec::of(EntityKind::GoodGoal), Some(Vec3::splat(2.0)));
        let o = on_agent_contact(&g);
        assert_eq!((o.reward_delta, o.ends_episode, o.consume_entity), (2.0, Some(EndCause::Goal), true));
    }
}
