use super::schema::{pick, ArenaSpec, ItemSpec, NumAttr};
use crate::entities::{build_entity, Entity, EntityError, EntityId, EntityKind, EntitySpec, Rgb};
use crate::math::Vec3;
use crate::physics::{collider_contact, Collider, PhysicsParams, Pose, ARENA_SIZE};
use crate::world::{World, OVERLAP_TOLERANCE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Attempts at a random placement before giving up.
pub const PLACEMENT_ATTEMPTS: usize = 100;
/// Range of randomised size components.
pub const RANDOM_SIZE: (f64, f64) = crate::entities::constants::RANDOM_SIZE_RANGE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstantiationError {
    #[error("{item}: no free position found after {attempts} attempts")]
    PlacementImpossible { item: String, attempts: usize },
    #[error("{item} overlaps {other}")]
    Overlap { item: String, other: String },
    #[error("{item}: {source}")]
    Entity { item: String, source: EntityError },
}

/// A world ready for an episode, with a readable label for every entity.
#[derive(Clone, Debug)]
pub struct Instantiated {
    pub world: World,
    pub labels: BTreeMap<EntityId, String>,
}

fn label(item: &ItemSpec, index: Option<usize>, instance: usize) -> String {
    match index {
        Some(i) => format!("{} (item {i}, instance {instance})", item.kind()),
        None => format!("{} (default)", item.kind()),
    }
}

fn number(item: &ItemSpec, attr: NumAttr, i: usize) -> Option<f64> {
    pick(item.number(attr), i).map(|v| v.value)
}

/// Everything about instance `i` that does not need the RNG.
fn base_spec(item: &ItemSpec, i: usize) -> EntitySpec {
    let u = |a| number(item, a, i).map(|x: f64| x.max(0.0) as u64);
    EntitySpec {
        kind: Some(item.kind()),
        color: None,
        skin: pick(&item.skins, i).map(|s| s.value),
        frozen_agent_delay: u(NumAttr::FrozenAgentDelays),
        initial_value: number(item, NumAttr::InitialValues, i),
        final_value: number(item, NumAttr::FinalValues, i),
        delay: u(NumAttr::Delays),
        change_rate: number(item, NumAttr::ChangeRates, i),
        symbol: pick(&item.symbol_names, i).map(|s| s.value.clone()),
        spawn_count: number(item, NumAttr::SpawnCount, i).map(|x| x as i64),
        time_between_spawns: u(NumAttr::TimeBetweenSpawns),
        spawn_size: number(item, NumAttr::SpawnSize, i),
        spawn_probability: number(item, NumAttr::SpawnProbability, i),
        reward_weights: pick(&item.reward_weights, i).map(|w| w.value),
        reward_spawn_position: pick(&item.reward_spawn_pos, i).map(|p| p.value),
        reset_duration: u(NumAttr::ResetDuration),
    }
}

/// Fully specified instances can be built without touching the RNG.
fn is_fixed(item: &ItemSpec, i: usize) -> bool {
    let position = pick(&item.positions, i).is_some_and(|p| p.value.x != -1.0 && p.value.z != -1.0);
    let rotation = match pick(&item.rotations, i) {
        Some(r) => r.value != -1.0,
        None => !item.kind().is_bounce(),
    };
    let size = pick(&item.sizes, i).is_none_or(|s| s.value.x != -1.0 && s.value.y != -1.0 && s.value.z != -1.0);
    let color = pick(&item.colors, i).is_none_or(|c| !c.value.contains(&-1.0));
    position && rotation && size && color
}

struct Candidate {
    spec: EntitySpec,
    size: Option<Vec3>,
    yaw: f64,
    /// Components equal to -1 are still to be drawn.
    position: Vec3,
}

fn resolve_attributes<R: Rng + ?Sized>(item: &ItemSpec, i: usize, rng: &mut R) -> Candidate {
    let mut spec = base_spec(item, i);
    let size = pick(&item.sizes, i).map(|s| {
        let mut draw = |v: f64| if v == -1.0 { rng.random_range(RANDOM_SIZE.0..=RANDOM_SIZE.1) } else { v };
        let x = draw(s.value.x);
        let y = draw(s.value.y);
        let z = draw(s.value.z);
        Vec3::new(x, y, z)
    });
    let yaw = match pick(&item.rotations, i).map(|r| r.value) {
        Some(r) if r != -1.0 => r,
        Some(_) => rng.random_range(0.0..360.0),
        None if item.kind().is_bounce() => rng.random_range(0.0..360.0),
        None => 0.0,
    };
    spec.color = pick(&item.colors, i).map(|c| {
        let mut ch = |v: f64| if v == -1.0 { rng.random_range(0..=255u8) } else { v as u8 };
        let r = ch(c.value[0]);
        let g = ch(c.value[1]);
        let b = ch(c.value[2]);
        Rgb::new(r, g, b)
    });
    let position = pick(&item.positions, i).map_or(Vec3::new(-1.0, 0.0, -1.0), |p| p.value);
    Candidate { spec, size, yaw, position }
}

/// The collider an instance will have, built with a throwaway RNG.
fn probe_collider(c: &Candidate, params: &PhysicsParams) -> Result<Collider, EntityError> {
    let mut scratch = ChaCha8Rng::seed_from_u64(0);
    build_entity(EntityId(u32::MAX), &c.spec, Pose::new(Vec3::ZERO, c.yaw), c.size, params, &mut scratch).map(|e| e.collider)
}

fn draw_position<R: Rng + ?Sized>(template: Vec3, half: Vec3, rng: &mut R) -> Option<Vec3> {
    let mut axis = |v: f64, h: f64| -> Option<f64> {
        if v != -1.0 {
            return Some(v);
        }
        if h > ARENA_SIZE - h {
            return None;
        }
        Some(rng.random_range(h..=ARENA_SIZE - h))
    };
    let x = axis(template.x, half.x)?;
    let z = axis(template.z, half.z)?;
    let y = if template.y == -1.0 { 0.0 } else { template.y };
    Some(Vec3::new(x, y, z))
}

fn penetrates(a: &Collider, pa: &Pose, b: &Collider, pb: &Pose) -> bool {
    a.solid && b.solid && collider_contact(a, pa, b, pb).is_some_and(|c| c.depth > OVERLAP_TOLERANCE)
}

/// Resolves randomised attributes and places every item. The agent goes
/// first whatever its position in the list; the rest follow in file order.
pub fn instantiate_arena(spec: &ArenaSpec, params: &PhysicsParams, seed: u64) -> Result<Instantiated, InstantiationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = World::new(params.clone(), ChaCha8Rng::seed_from_u64(seed));
    let mut labels = BTreeMap::new();

    let default_agent = ItemSpec::new(EntityKind::Agent);
    let agent_index = spec.items.iter().position(|it| it.kind() == EntityKind::Agent);
    let agent_item = agent_index.map_or(&default_agent, |i| &spec.items[i]);

    // Solids that are fully determined by the file; the agent must avoid
    // them, and knowing them up front keeps the agent's draws independent of
    // where it is listed.
    let mut fixed: Vec<(Collider, Pose, String)> = Vec::new();
    for (idx, item) in spec.items.iter().enumerate() {
        if item.kind() == EntityKind::Agent {
            continue;
        }
        for i in 0..item.instance_count() {
            if !is_fixed(item, i) {
                continue;
            }
            let mut scratch = ChaCha8Rng::seed_from_u64(0);
            let c = resolve_attributes(item, i, &mut scratch);
            if let Ok(collider) = probe_collider(&c, params) {
                if collider.solid {
                    fixed.push((collider, Pose::new(c.position, c.yaw), label(item, Some(idx), i)));
                }
            }
        }
    }

    let agent_label = label(agent_item, agent_index, 0);
    let agent = place(agent_item, 0, &agent_label, params, &mut rng, &mut world, |collider, pose, _| {
        fixed.iter().find(|(c, p, _)| penetrates(collider, pose, c, p)).map(|(_, _, l)| l.clone())
    })?;
    labels.insert(agent.id, agent_label);
    world.insert(agent);

    for (idx, item) in spec.items.iter().enumerate() {
        if Some(idx) == agent_index {
            continue;
        }
        for i in 0..item.instance_count() {
            let item_label = label(item, Some(idx), i);
            let entity = place(item, i, &item_label, params, &mut rng, &mut world, |collider, pose, world| {
                world.overlapping_solid(collider, pose, None).map(|id| labels.get(&id).cloned().unwrap_or_else(|| id.to_string()))
            })?;
            labels.insert(entity.id, item_label);
            world.insert(entity);
        }
    }
    world.rng = rng;
    Ok(Instantiated { world, labels })
}

fn place<F>(
    item: &ItemSpec,
    i: usize,
    item_label: &str,
    params: &PhysicsParams,
    rng: &mut ChaCha8Rng,
    world: &mut World,
    blocker: F,
) -> Result<Entity, InstantiationError>
where
    F: Fn(&Collider, &Pose, &World) -> Option<String>,
{
    let wrap = |source| InstantiationError::Entity { item: item_label.to_string(), source };
    let c = resolve_attributes(item, i, rng);
    let collider = probe_collider(&c, params).map_err(wrap)?;
    let random = c.position.x == -1.0 || c.position.z == -1.0;
    let half = collider.footprint_half(c.yaw);
    let mut chosen = None;
    for _ in 0..if random { PLACEMENT_ATTEMPTS } else { 1 } {
        let Some(position) = draw_position(c.position, half, rng) else { break };
        let pose = Pose::new(position, c.yaw);
        match blocker(&collider, &pose, world) {
            None => {
                chosen = Some(pose);
                break;
            }
            Some(other) if !random => return Err(InstantiationError::Overlap { item: item_label.to_string(), other }),
            Some(_) => {}
        }
    }
    let pose = chosen.ok_or_else(|| InstantiationError::PlacementImpossible { item: item_label.to_string(), attempts: PLACEMENT_ATTEMPTS })?;
    let id = world.allocate_id();
    build_entity(id, &c.spec, pose, c.size, params, rng).map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn arena(items: &str) -> ArenaSpec {
        let text = format!("!ArenaConfig\narenas:\n  0: !Arena\n    t: 100\n    items:\n{items}");
        parse_config(&text).unwrap().0.arenas.remove(0)
    }

    #[test]
    fn same_seed_same_agent_yaw() {
        let a = arena("    - !Item\n      name: Agent\n      rotations: [-1]\n");
        let p = PhysicsParams::default();
        let w1 = instantiate_arena(&a, &p, 7).unwrap();
        let w2 = instantiate_arena(&a, &p, 7).unwrap();
        assert_eq!(w1.world.agent().body.pose, w2.world.agent().body.pose);
        let w3 = instantiate_arena(&a, &p, 8).unwrap();
        assert_ne!(w1.world.agent().body.pose, w3.world.agent().body.pose);
    }

    #[test]
    fn coincident_walls_are_rejected() {
        let a = arena("    - !Item\n      name: Wall\n      positions:\n      - !Vector3 {x: 20, y: 0, z: 20}\n      - !Vector3 {x: 20, y: 0, z: 20}\n");
        match instantiate_arena(&a, &PhysicsParams::default(), 1) {
            Err(InstantiationError::Overlap { item, other }) => {
                assert!(item.contains("instance 1"), "{item}");
                assert!(other.contains("instance 0"), "{other}");
            }
            other => panic!("expected overlap, got {other:?}"),
        }
    }

    #[test]
    fn random_goal_stays_inside_by_its_radius() {
        let a = arena("    - !Item\n      name: GoodGoalMulti\n      positions:\n      - !Vector3 {x: -1, y: 0, z: -1}\n      sizes:\n      - !Vector3 {x: 3, y: 3, z: 3}\n");
        for seed in 0..200 {
            let w = instantiate_arena(&a, &PhysicsParams::default(), seed).unwrap().world;
            let g = w.entities.iter().find(|e| e.kind == EntityKind::GoodGoalMulti).unwrap();
            let p = g.body.pose.position;
            assert!((1.5..=38.5).contains(&p.x) && (1.5..=38.5).contains(&p.z), "{p:?}");
        }
    }

    #[test]
    fn missing_agent_is_added() {
        let a = arena("    - !Item\n      name: Wall\n      positions:\n      - !Vector3 {x: 5, y: 0, z: 5}\n");
        let w = instantiate_arena(&a, &PhysicsParams::default(), 3).unwrap().world;
        assert_eq!(w.entities[0].kind, EntityKind::Agent);
        assert_eq!(w.entities.len(), 2);
    }
}
