use super::body::{Body, PhysicsParams};
use super::integrate::{update_velocities, FLOOR_EPS};
use super::shape::{collider_contact, Collider, Contact};
use super::SimulationFault;
use crate::math::Vec3;
use std::collections::BTreeMap;

/// Side length of the square arena floor.
pub const ARENA_SIZE: f64 = 40.0;

/// A touching or overlapping pair found during resolution. Indices refer to
/// the body slice; `normal` points from `b` towards `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactEvent {
    pub a: usize,
    pub b: usize,
    pub normal: Vec3,
    pub depth: f64,
    /// False for overlaps with non-solid zones (no impulse was exchanged).
    pub solid: bool,
}

impl ContactEvent {
    /// The index on the other side of the pair, if `index` is part of it.
    pub fn other(&self, index: usize) -> Option<usize> {
        if self.a == index {
            Some(self.b)
        } else if self.b == index {
            Some(self.a)
        } else {
            None
        }
    }

    /// Contact normal oriented to point towards `index`.
    pub fn normal_towards(&self, index: usize) -> Vec3 {
        if self.a == index {
            self.normal
        } else {
            -self.normal
        }
    }
}

/// Removes the approaching component of the relative normal velocity with an
/// inelastic impulse split by inverse mass. Returns the impulse magnitude.
pub fn apply_contact_impulse(a: &mut Body, b: &mut Body, normal: Vec3) -> f64 {
    let (wa, wb) = (a.inverse_mass(), b.inverse_mass());
    let w = wa + wb;
    if w == 0.0 {
        return 0.0;
    }
    let vn = (a.velocity - b.velocity).dot(normal);
    if vn >= 0.0 {
        return 0.0;
    }
    let j = -vn / w;
    a.velocity += normal * (j * wa);
    b.velocity -= normal * (j * wb);
    j
}

fn pair_mut<T>(items: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    debug_assert!(i < j);
    let (lo, hi) = items.split_at_mut(j);
    (&mut lo[i], &mut hi[0])
}

fn enforce_bounds(bodies: &mut [Body], colliders: &[Collider]) {
    for (body, collider) in bodies.iter_mut().zip(colliders) {
        if body.immovable {
            continue;
        }
        let (lo, hi) = collider.aabb(&body.pose);
        let p = &mut body.pose.position;
        let v = &mut body.velocity;
        if lo.y < FLOOR_EPS {
            if lo.y < 0.0 {
                p.y -= lo.y;
                v.y = v.y.max(0.0);
            }
            body.grounded = true;
        }
        if lo.x < 0.0 {
            p.x -= lo.x;
            v.x = v.x.max(0.0);
        } else if hi.x > ARENA_SIZE {
            p.x -= hi.x - ARENA_SIZE;
            v.x = v.x.min(0.0);
        }
        if lo.z < 0.0 {
            p.z -= lo.z;
            v.z = v.z.max(0.0);
        } else if hi.z > ARENA_SIZE {
            p.z -= hi.z - ARENA_SIZE;
            v.z = v.z.min(0.0);
        }
    }
}

fn overlaps(a: &(Vec3, Vec3), b: &(Vec3, Vec3), margin: f64) -> bool {
    a.0.x <= b.1.x + margin
        && b.0.x <= a.1.x + margin
        && a.0.y <= b.1.y + margin
        && b.0.y <= a.1.y + margin
        && a.0.z <= b.1.z + margin
        && b.0.z <= a.1.z + margin
}

/// Separates penetrating solid pairs and exchanges impulses, iterating
/// `params.iterations` times. Overlaps between `sensor` (normally the agent)
/// and non-solid colliders are reported without any response.
///
/// Pairs are processed deepest first; equal depths fall back to index order.
pub fn resolve_collisions(bodies: &mut [Body], colliders: &[Collider], params: &PhysicsParams, sensor: Option<usize>) -> Vec<ContactEvent> {
    assert_eq!(bodies.len(), colliders.len());
    let n = bodies.len();
    let mut events: BTreeMap<(usize, usize), ContactEvent> = BTreeMap::new();
    let mut record = |i: usize, j: usize, c: Contact, solid: bool| {
        let ev = ContactEvent { a: i, b: j, normal: c.normal, depth: c.depth, solid };
        events
            .entry((i, j))
            .and_modify(|e| {
                if c.depth > e.depth {
                    *e = ev;
                }
            })
            .or_insert(ev);
    };

    for _ in 0..params.iterations.max(1) {
        enforce_bounds(bodies, colliders);
        let bounds: Vec<(Vec3, Vec3)> = bodies.iter().zip(colliders).map(|(b, c)| c.aabb(&b.pose)).collect();
        let mut pairs: Vec<(usize, usize, Contact)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let solid = colliders[i].solid && colliders[j].solid;
                if solid {
                    if bodies[i].immovable && bodies[j].immovable {
                        continue;
                    }
                } else {
                    let tracked = match sensor {
                        Some(s) if s == i => colliders[i].solid && !colliders[j].solid,
                        Some(s) if s == j => colliders[j].solid && !colliders[i].solid,
                        _ => false,
                    };
                    if !tracked {
                        continue;
                    }
                }
                if !overlaps(&bounds[i], &bounds[j], 1e-6) {
                    continue;
                }
                if let Some(c) = collider_contact(&colliders[i], &bodies[i].pose, &colliders[j], &bodies[j].pose) {
                    pairs.push((i, j, c));
                }
            }
        }
        pairs.sort_by(|x, y| y.2.depth.total_cmp(&x.2.depth).then((x.0, x.1).cmp(&(y.0, y.1))));

        for (i, j, first) in pairs {
            if !(colliders[i].solid && colliders[j].solid) {
                if first.depth > 0.0 {
                    record(i, j, first, false);
                }
                continue;
            }
            let Some(c) = collider_contact(&colliders[i], &bodies[i].pose, &colliders[j], &bodies[j].pose) else {
                continue;
            };
            record(i, j, c, true);
            let (a, b) = pair_mut(bodies, i, j);
            if c.normal.y > 0.5 {
                a.grounded = true;
            } else if c.normal.y < -0.5 {
                b.grounded = true;
            }
            if c.depth <= 0.0 {
                continue;
            }
            let (wa, wb) = (a.inverse_mass(), b.inverse_mass());
            let w = wa + wb;
            if w == 0.0 {
                continue;
            }
            a.pose.position += c.normal * (c.depth * wa / w);
            b.pose.position -= c.normal * (c.depth * wb / w);
            apply_contact_impulse(a, b, c.normal);
        }
    }
    enforce_bounds(bodies, colliders);
    events.into_values().collect()
}

/// Advances every body by one environment step: velocity update, then
/// position advance in sub-steps short enough that nothing skips through a
/// thin wall, with collision resolution after each sub-step.
pub fn step_bodies(
    bodies: &mut [Body],
    colliders: &[Collider],
    applied: &[Vec3],
    params: &PhysicsParams,
    sensor: Option<usize>,
) -> Result<Vec<ContactEvent>, SimulationFault> {
    let was_supported: Vec<bool> = bodies.iter().map(|b| b.grounded || b.pose.position.y <= FLOOR_EPS).collect();
    update_velocities(bodies, applied, params);
    for b in bodies.iter_mut() {
        if !b.immovable {
            b.grounded = false;
        }
    }
    let max_travel = bodies.iter().filter(|b| !b.immovable).map(|b| b.velocity.length()).fold(0.0, f64::max);
    if !max_travel.is_finite() {
        let body = bodies.iter().position(|b| !b.is_finite()).unwrap_or(0);
        return Err(SimulationFault::NonFinite { body });
    }
    let substeps = ((max_travel / params.max_substep_travel).ceil() as usize).clamp(1, 64);
    let mut events: BTreeMap<(usize, usize), ContactEvent> = BTreeMap::new();
    for _ in 0..substeps {
        for b in bodies.iter_mut().filter(|b| !b.immovable) {
            b.pose.position += b.velocity / substeps as f64;
        }
        for ev in resolve_collisions(bodies, colliders, params, sensor) {
            events
                .entry((ev.a, ev.b))
                .and_modify(|e| {
                    if ev.depth > e.depth {
                        *e = ev;
                    }
                })
                .or_insert(ev);
        }
    }
    // walking over a crest does not launch: climb speed is dropped on leaving the surface
    for (b, supported) in bodies.iter_mut().zip(was_supported) {
        if supported && !b.grounded && !b.immovable {
            b.velocity.y = b.velocity.y.min(0.0);
        }
    }
    if let Some(body) = bodies.iter().position(|b| !b.is_finite()) {
        return Err(SimulationFault::NonFinite { body });
    }
    Ok(events.into_values().collect())
}
