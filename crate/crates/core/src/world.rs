//! Live arena state: the entity table, the episode RNG and the glue between
//! entities and the physics kernel.

use crate::entities::{build_entity, tick_entity, Entity, EntityId, EntityKind, EntitySpec, RayCategory, SpawnRequest};
use crate::math::Vec3;
use crate::physics::{collider_contact, step_bodies, Collider, PhysicsParams, Pose, RayTarget, SimulationFault, ARENA_SIZE};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Penetration deeper than this counts as an overlap; touching is allowed.
pub const OVERLAP_TOLERANCE: f64 = 1e-6;

/// A contact involving the agent, resolved to entity ids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentContact {
    pub other: EntityId,
    /// Points from the other entity towards the agent.
    pub normal: Vec3,
    pub depth: f64,
    pub solid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct World {
    /// Ordered by id; the agent is always present.
    pub entities: Vec<Entity>,
    pub params: PhysicsParams,
    #[serde(skip)]
    pub rng: ChaCha8Rng,
    next_id: u32,
}

impl World {
    pub fn new(params: PhysicsParams, rng: ChaCha8Rng) -> Self {
        Self { entities: Vec::new(), params, rng, next_id: 0 }
    }

    pub fn allocate_id(&mut self) -> EntityId {
        let id = EntityId(self.next_id);
        self.next_id += 1;
        id
    }

    /// Appends an entity. Ids must be allocated by this world so the table stays sorted.
    pub fn insert(&mut self, entity: Entity) {
        debug_assert!(self.entities.last().is_none_or(|e| e.id < entity.id));
        self.entities.push(entity);
    }

    pub fn agent_index(&self) -> Option<usize> {
        self.entities.iter().position(|e| e.kind == EntityKind::Agent)
    }

    pub fn agent(&self) -> &Entity {
        let i = self.agent_index().expect("world has no agent");
        &self.entities[i]
    }

    pub fn agent_mut(&mut self) -> &mut Entity {
        let i = self.agent_index().expect("world has no agent");
        &mut self.entities[i]
    }

    pub fn get(&self, id: EntityId) -> Option<&Entity> {
        self.index_of(id).map(|i| &self.entities[i])
    }

    pub fn get_mut(&mut self, id: EntityId) -> Option<&mut Entity> {
        self.index_of(id).map(move |i| &mut self.entities[i])
    }

    fn index_of(&self, id: EntityId) -> Option<usize> {
        self.entities.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn remove(&mut self, id: EntityId) -> Option<Entity> {
        self.index_of(id).map(|i| self.entities.remove(i))
    }

    /// First solid entity (other than `ignore`) that `collider` at `pose`
    /// would penetrate.
    pub fn overlapping_solid(&self, collider: &Collider, pose: &Pose, ignore: Option<EntityId>) -> Option<EntityId> {
        if !collider.solid {
            return None;
        }
        self.entities
            .iter()
            .filter(|e| e.collider.solid && Some(e.id) != ignore)
            .find(|e| collider_contact(collider, pose, &e.collider, &e.body.pose).is_some_and(|c| c.depth > OVERLAP_TOLERANCE))
            .map(|e| e.id)
    }

    /// Whether the collider lies within the arena footprint.
    pub fn within_arena(collider: &Collider, pose: &Pose) -> bool {
        let (lo, hi) = collider.aabb(pose);
        let eps = OVERLAP_TOLERANCE;
        lo.x >= -eps && lo.z >= -eps && hi.x <= ARENA_SIZE + eps && hi.z <= ARENA_SIZE + eps && lo.y >= -eps
    }

    /// One physics tick. `agent_impulse` drives the agent; everything else coasts.
    pub fn physics_step(&mut self, agent_impulse: Vec3) -> Result<Vec<AgentContact>, SimulationFault> {
        let agent = self.agent_index();
        let mut bodies: Vec<_> = self.entities.iter().map(|e| e.body.clone()).collect();
        let colliders: Vec<_> = self.entities.iter().map(|e| e.collider.clone()).collect();
        let mut applied = vec![Vec3::ZERO; bodies.len()];
        if let Some(a) = agent {
            applied[a] = agent_impulse;
        }
        let events = step_bodies(&mut bodies, &colliders, &applied, &self.params, agent)?;
        for (e, b) in self.entities.iter_mut().zip(bodies) {
            e.body = b;
        }
        let Some(a) = agent else { return Ok(Vec::new()) };
        Ok(events
            .into_iter()
            .filter_map(|ev| {
                let other = ev.other(a)?;
                Some(AgentContact { other: self.entities[other].id, normal: ev.normal_towards(a), depth: ev.depth, solid: ev.solid })
            })
            .collect())
    }

    /// Runs every entity's clock in ascending id order and returns the spawn
    /// requests in that order.
    pub fn tick_entities(&mut self) -> Vec<SpawnRequest> {
        let mut spawns = Vec::new();
        for i in 0..self.entities.len() {
            if self.entities[i].schedule.is_none() && self.entities[i].dispenser.is_none() {
                continue;
            }
            let mut entity = self.entities[i].clone();
            let id = entity.id;
            let mut rng = self.rng.clone();
            let blocked = |c: &Collider, p: &Pose| self.overlapping_solid(c, p, Some(id)).is_some();
            spawns.extend(tick_entity(&mut entity, &mut rng, &blocked));
            self.rng = rng;
            self.entities[i] = entity;
        }
        spawns
    }

    /// Places a requested goal unless the spot is taken by a solid; returns
    /// the new id. Positions past the fence are pulled back inside it.
    pub fn place_spawn(&mut self, request: &SpawnRequest) -> Option<EntityId> {
        let spec = EntitySpec::of(request.kind);
        let r = (request.size / 2.0).min(ARENA_SIZE / 2.0);
        let mut position = request.position;
        position.x = position.x.clamp(r, ARENA_SIZE - r);
        position.z = position.z.clamp(r, ARENA_SIZE - r);
        let pose = Pose::new(position, 0.0);
        let size = Some(Vec3::splat(request.size));
        let id = EntityId(self.next_id);
        let entity = match build_entity(id, &spec, pose, size, &self.params, &mut self.rng) {
            Ok(e) => e,
            Err(err) => {
                log::warn!("spawn from {} rejected: {err}", request.source);
                return None;
            }
        };
        if let Some(blocker) = self.overlapping_solid(&entity.collider, &pose, None) {
            log::debug!("spawn of {} from {} dropped: position occupied by {}", request.kind, request.source, blocker);
            return None;
        }
        self.next_id += 1;
        self.insert(entity);
        Some(id)
    }

    /// Every entity a sight ray can hit, excluding the agent itself.
    pub fn ray_targets(&self) -> Vec<RayTarget<'_, (EntityId, RayCategory)>> {
        self.entities
            .iter()
            .filter(|e| e.kind != EntityKind::Agent)
            .map(|e| RayTarget { collider: &e.collider, pose: e.body.pose, tag: (e.id, e.kind.ray_category()) })
            .collect()
    }
}
