//! A frozen snapshot of everything visible, with primitives and bounds
//! precomputed so many rays can be cast cheaply against one world state.

use crate::entities::{EntityId, EntityKind, RayCategory, Rgb};
use crate::math::Vec3;
use crate::physics::shape::MAX_PRIMS;
use crate::physics::Prim;
use crate::world::World;
use arrayvec::ArrayVec;

#[derive(Clone, Debug)]
pub struct SightEntry {
    pub id: EntityId,
    pub kind: EntityKind,
    pub category: RayCategory,
    pub color: Rgb,
    pub transparent: bool,
    prims: ArrayVec<Prim, MAX_PRIMS>,
    lo: Vec3,
    hi: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SightHit {
    pub distance: f64,
    /// Index into [`SightScene::entries`].
    pub entry: usize,
    /// Surface normal facing the ray origin.
    pub normal: Vec3,
}

#[derive(Clone, Debug, Default)]
pub struct SightScene {
    pub entries: Vec<SightEntry>,
}

impl SightScene {
    /// Everything except the agent.
    pub fn new(world: &World) -> Self {
        let entries = world
            .entities
            .iter()
            .filter(|e| e.kind != EntityKind::Agent)
            .map(|e| {
                let prims = e.collider.prims(&e.body.pose);
                let (lo, hi) = e.collider.aabb(&e.body.pose);
                SightEntry {
                    id: e.id,
                    kind: e.kind,
                    category: e.kind.ray_category(),
                    color: e.display_color(),
                    transparent: e.kind.is_transparent(),
                    prims,
                    lo,
                    hi,
                }
            })
            .collect();
        Self { entries }
    }

    /// Nearest surface the ray enters from outside within `max_range`.
    /// Volumes containing the origin are not reported, and `filter` can
    /// exclude entries (e.g. transparent ones). Ties go to the earlier entry.
    pub fn cast(&self, origin: Vec3, dir: Vec3, max_range: f64, filter: impl Fn(&SightEntry) -> bool) -> Option<SightHit> {
        self.cast_among(0..self.entries.len(), origin, dir, max_range, filter)
    }

    /// [`cast`](Self::cast) restricted to the entries at `candidates`, which
    /// must be in increasing order for ties to resolve the same way.
    pub fn cast_among(
        &self,
        candidates: impl IntoIterator<Item = usize>,
        origin: Vec3,
        dir: Vec3,
        max_range: f64,
        filter: impl Fn(&SightEntry) -> bool,
    ) -> Option<SightHit> {
        let inv = Vec3::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut best: Option<SightHit> = None;
        for i in candidates {
            let entry = &self.entries[i];
            let limit = best.map_or(max_range, |b| b.distance);
            if !slab(origin, inv, entry.lo, entry.hi, limit) || !filter(entry) {
                continue;
            }
            for prim in &entry.prims {
                let Some(hit) = prim.intersect_ray(origin, dir) else { continue };
                if hit.t_enter <= 0.0 {
                    continue;
                }
                if hit.t_enter <= max_range && best.is_none_or(|b| hit.t_enter < b.distance) {
                    best = Some(SightHit { distance: hit.t_enter, entry: i, normal: hit.normal });
                }
            }
        }
        best
    }

    /// Entries whose footprint lies on the horizontal half-line from
    /// `origin` along `heading`. Any ray whose horizontal part points along
    /// `heading` can only hit these.
    pub fn column_candidates(&self, origin: Vec3, heading: Vec3) -> Vec<usize> {
        let inv = Vec3::new(1.0 / heading.x, f64::INFINITY, 1.0 / heading.z);
        let flat = Vec3::new(origin.x, 0.0, origin.z);
        (0..self.entries.len())
            .filter(|&i| {
                let e = &self.entries[i];
                let pad = 1e-9;
                slab(flat, inv, Vec3::new(e.lo.x - pad, 0.0, e.lo.z - pad), Vec3::new(e.hi.x + pad, 0.0, e.hi.z + pad), f64::INFINITY)
            })
            .collect()
    }
}

/// Whether the ray meets the box `[lo, hi]` before `limit`.
fn slab(origin: Vec3, inv: Vec3, lo: Vec3, hi: Vec3, limit: f64) -> bool {
    let mut t0 = 0.0f64;
    let mut t1 = limit;
    for (o, i, l, h) in [(origin.x, inv.x, lo.x, hi.x), (origin.y, inv.y, lo.y, hi.y), (origin.z, inv.z, lo.z, hi.z)] {
        if i.is_infinite() {
            if o < l || o > h {
                return false;
            }
            continue;
        }
        let (a, b) = ((l - o) * i, (h - o) * i);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        t0 = t0.max(a);
        t1 = t1.min(b);
        if t0 > t1 {
            return false;
        }
    }
    true
}
