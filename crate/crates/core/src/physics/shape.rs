//! Collider shapes and the narrow-phase queries over them.
//!
//! Every collider is described in a local frame whose origin is the centre of
//! its footprint on the ground (bottom-centre). A [`Pose`] places that origin
//! in the world and rotates the shape about the vertical axis.

use crate::math::{Mat3, Vec3};
use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

/// Height-to-length ratio above which a ramp stops being walkable.
pub const MAX_WALKABLE_RAMP_RATIO: f64 = 4.0;

/// Penetration tolerance: contacts shallower than this are reported but not corrected.
pub const CONTACT_SLOP: f64 = 1e-6;

pub const MAX_PRIMS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    /// Bottom-centre of the collider.
    pub position: Vec3,
    /// Degrees in `[0, 360)`.
    pub yaw: f64,
}

impl Pose {
    pub fn new(position: Vec3, yaw: f64) -> Self {
        Self { position, yaw: crate::math::normalize_yaw(yaw) }
    }
}

/// One box of a compound collider, relative to the collider origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxPart {
    pub offset: Vec3,
    pub half: Vec3,
    /// Rotation about the local `z` axis in degrees.
    pub roll: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Sphere {
        radius: f64,
    },
    Box {
        half: Vec3,
    },
    /// Right-angled prism: rises from ground level at local `+z` to full
    /// height at local `-z`.
    Ramp {
        half: Vec3,
    },
    Compound(Vec<BoxPart>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Collider {
    pub shape: Shape,
    /// Non-solid colliders (zones) are overlapped, never pushed.
    pub solid: bool,
}

impl Collider {
    pub fn solid(shape: Shape) -> Self {
        Self { shape, solid: true }
    }

    pub fn zone(half: Vec3) -> Self {
        Self { shape: Shape::Box { half }, solid: false }
    }

    /// Checks the structural invariants: positive extents, non-empty compounds.
    pub fn is_valid(&self) -> bool {
        let positive = |h: Vec3| h.x > 0.0 && h.y > 0.0 && h.z > 0.0 && h.is_finite();
        match &self.shape {
            Shape::Sphere { radius } => *radius > 0.0 && radius.is_finite(),
            Shape::Box { half } | Shape::Ramp { half } => positive(*half),
            Shape::Compound(parts) => !parts.is_empty() && parts.iter().all(|p| positive(p.half)),
        }
    }

    /// World-space primitives used for rendering and raycasts.
    pub fn prims(&self, pose: &Pose) -> ArrayVec<Prim, MAX_PRIMS> {
        self.build_prims(pose, false)
    }

    /// World-space primitives used for collision. Ramps too steep to walk on
    /// collide as their bounding box so they behave like walls.
    pub fn collision_prims(&self, pose: &Pose) -> ArrayVec<Prim, MAX_PRIMS> {
        self.build_prims(pose, true)
    }

    fn build_prims(&self, pose: &Pose, collision: bool) -> ArrayVec<Prim, MAX_PRIMS> {
        let mut out = ArrayVec::new();
        let rot = Mat3::yaw(pose.yaw);
        match &self.shape {
            Shape::Sphere { radius } => out.push(Prim::Sphere { center: pose.position + Vec3::new(0.0, *radius, 0.0), radius: *radius }),
            Shape::Box { half } => out.push(Prim::Convex(Convex { center: pose.position + Vec3::new(0.0, half.y, 0.0), rot, half: *half, ramp: false })),
            Shape::Ramp { half } => {
                let steep = half.y / half.z > MAX_WALKABLE_RAMP_RATIO;
                out.push(Prim::Convex(Convex { center: pose.position + Vec3::new(0.0, half.y, 0.0), rot, half: *half, ramp: !(collision && steep) }))
            }
            Shape::Compound(parts) => {
                for part in parts.iter().take(MAX_PRIMS) {
                    out.push(Prim::Convex(Convex {
                        center: pose.position + rot.mul_vec(part.offset),
                        rot: rot.mul_mat(&Mat3::roll(part.roll)),
                        half: part.half,
                        ramp: false,
                    }));
                }
            }
        }
        out
    }

    /// Axis-aligned bounds `(min, max)` at the given pose.
    pub fn aabb(&self, pose: &Pose) -> (Vec3, Vec3) {
        let mut lo = Vec3::splat(f64::INFINITY);
        let mut hi = Vec3::splat(f64::NEG_INFINITY);
        for prim in self.prims(pose) {
            let (a, b) = prim.aabb();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// Horizontal half-extents of the axis-aligned footprint at this yaw.
    pub fn footprint_half(&self, yaw: f64) -> Vec3 {
        let (lo, hi) = self.aabb(&Pose::new(Vec3::ZERO, yaw));
        Vec3::new((hi.x - lo.x) / 2.0, hi.y - lo.y, (hi.z - lo.z) / 2.0)
    }

    pub fn contains_point(&self, pose: &Pose, p: Vec3) -> bool {
        self.prims(pose).iter().any(|prim| prim.contains(p))
    }
}

/// Contact between two primitives. `normal` points from the second shape
/// towards the first, i.e. the direction the first must move to separate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub normal: Vec3,
    pub depth: f64,
}

/// Ray/primitive intersection in world space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimHit {
    pub t_enter: f64,
    pub t_exit: f64,
    pub normal: Vec3,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Prim {
    Sphere { center: Vec3, radius: f64 },
    Convex(Convex),
}

impl Prim {
    pub fn aabb(&self) -> (Vec3, Vec3) {
        match self {
            Prim::Sphere { center, radius } => (*center - Vec3::splat(*radius), *center + Vec3::splat(*radius)),
            Prim::Convex(c) => {
                let mut lo = Vec3::splat(f64::INFINITY);
                let mut hi = Vec3::splat(f64::NEG_INFINITY);
                for v in c.vertices() {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            }
        }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        match self {
            Prim::Sphere { center, radius } => (p - *center).length_squared() <= radius * radius,
            Prim::Convex(c) => c.contains(p),
        }
    }

    pub fn intersect_ray(&self, origin: Vec3, dir: Vec3) -> Option<PrimHit> {
        match self {
            Prim::Sphere { center, radius } => ray_sphere(origin, dir, *center, *radius),
            Prim::Convex(c) => c.intersect_ray(origin, dir),
        }
    }
}

/// Contact between two world-space primitives, if they overlap or touch
/// within [`CONTACT_SLOP`].
pub fn prim_contact(a: &Prim, b: &Prim) -> Option<Contact> {
    match (a, b) {
        (Prim::Sphere { center: ca, radius: ra }, Prim::Sphere { center: cb, radius: rb }) => {
            let d = *ca - *cb;
            let dist = d.length();
            let depth = ra + rb - dist;
            (depth > -CONTACT_SLOP).then(|| Contact { normal: d.normalize_or(Vec3::UP), depth })
        }
        (Prim::Sphere { center, radius }, Prim::Convex(c)) => c.sphere_contact(*center, *radius),
        (Prim::Convex(c), Prim::Sphere { center, radius }) => c.sphere_contact(*center, *radius).map(|k| Contact { normal: -k.normal, depth: k.depth }),
        (Prim::Convex(ca), Prim::Convex(cb)) => sat_contact(ca, cb),
    }
}

/// Deepest contact between any primitive pair of two colliders.
pub fn collider_contact(a: &Collider, pa: &Pose, b: &Collider, pb: &Pose) -> Option<Contact> {
    let prims_a = a.collision_prims(pa);
    let prims_b = b.collision_prims(pb);
    let mut best: Option<Contact> = None;
    for x in &prims_a {
        for y in &prims_b {
            if let Some(c) = prim_contact(x, y) {
                if best.map_or(true, |b| c.depth > b.depth) {
                    best = Some(c);
                }
            }
        }
    }
    best
}

fn ray_sphere(origin: Vec3, dir: Vec3, center: Vec3, radius: f64) -> Option<PrimHit> {
    let oc = origin - center;
    let b = oc.dot(dir);
    let c = oc.length_squared() - radius * radius;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let (t0, t1) = (-b - sq, -b + sq);
    if t1 < 0.0 {
        return None;
    }
    if t0 >= 0.0 {
        let normal = (origin + dir * t0 - center) / radius;
        Some(PrimHit { t_enter: t0, t_exit: t1, normal })
    } else {
        Some(PrimHit { t_enter: 0.0, t_exit: t1, normal: -dir })
    }
}

/// Oriented box or ramp prism in world space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convex {
    /// Centre of the bounding box.
    pub center: Vec3,
    pub rot: Mat3,
    pub half: Vec3,
    pub ramp: bool,
}

/// Half-space `normal . p <= offset` in the local frame.
#[derive(Clone, Copy, Debug)]
struct Plane {
    normal: Vec3,
    offset: f64,
}

impl Convex {
    pub fn to_local(&self, p: Vec3) -> Vec3 {
        self.rot.mul_transpose_vec(p - self.center)
    }

    pub fn to_world(&self, p: Vec3) -> Vec3 {
        self.center + self.rot.mul_vec(p)
    }

    fn slope_normal(&self) -> Vec3 {
        let h = self.half;
        Vec3::new(0.0, h.z, h.y).normalize_or(Vec3::UP)
    }

    fn planes(&self) -> ArrayVec<Plane, 6> {
        let h = self.half;
        let mut planes = ArrayVec::new();
        planes.push(Plane { normal: Vec3::new(1.0, 0.0, 0.0), offset: h.x });
        planes.push(Plane { normal: Vec3::new(-1.0, 0.0, 0.0), offset: h.x });
        planes.push(Plane { normal: Vec3::new(0.0, -1.0, 0.0), offset: h.y });
        planes.push(Plane { normal: Vec3::new(0.0, 0.0, -1.0), offset: h.z });
        if self.ramp {
            // passes through the low edge (y = -hy, z = +hz) and the high edge (y = +hy, z = -hz)
            planes.push(Plane { normal: self.slope_normal(), offset: 0.0 });
        } else {
            planes.push(Plane { normal: Vec3::new(0.0, 1.0, 0.0), offset: h.y });
            planes.push(Plane { normal: Vec3::new(0.0, 0.0, 1.0), offset: h.z });
        }
        planes
    }

    pub fn vertices(&self) -> ArrayVec<Vec3, 8> {
        let h = self.half;
        let mut out = ArrayVec::new();
        if self.ramp {
            for sx in [-1.0, 1.0] {
                for (y, z) in [(-h.y, -h.z), (-h.y, h.z), (h.y, -h.z)] {
                    out.push(self.to_world(Vec3::new(sx * h.x, y, z)));
                }
            }
        } else {
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    for sz in [-1.0, 1.0] {
                        out.push(self.to_world(Vec3::new(sx * h.x, sy * h.y, sz * h.z)));
                    }
                }
            }
        }
        out
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let l = self.to_local(p);
        self.planes().iter().all(|pl| pl.normal.dot(l) <= pl.offset)
    }

    /// Closest point of the solid to `l`, both in local coordinates.
    fn closest_local(&self, l: Vec3) -> Vec3 {
        let h = self.half;
        let x = l.x.clamp(-h.x, h.x);
        if !self.ramp {
            return Vec3::new(x, l.y.clamp(-h.y, h.y), l.z.clamp(-h.z, h.z));
        }
        // the prism is an x-interval times a triangle in the (z, y) plane
        let (z, y) = closest_on_triangle((l.z, l.y), [(-h.z, -h.y), (h.z, -h.y), (-h.z, h.y)]);
        Vec3::new(x, y, z)
    }

    fn sphere_contact(&self, center: Vec3, radius: f64) -> Option<Contact> {
        let l = self.to_local(center);
        let q = self.closest_local(l);
        let d = l - q;
        let dist = d.length();
        if dist > 1e-12 {
            let depth = radius - dist;
            if depth <= -CONTACT_SLOP {
                return None;
            }
            return Some(Contact { normal: self.rot.mul_vec(d / dist), depth });
        }
        // centre inside: leave through the nearest face
        let (normal, exit) =
            self.planes()
                .iter()
                .map(|pl| (pl.normal, pl.offset - pl.normal.dot(l)))
                .fold((Vec3::UP, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best });
        Some(Contact { normal: self.rot.mul_vec(normal), depth: radius + exit })
    }

    fn face_normals(&self) -> ArrayVec<Vec3, 4> {
        let mut out = ArrayVec::new();
        for i in 0..3 {
            out.push(self.rot.axis(i));
        }
        if self.ramp {
            out.push(self.rot.mul_vec(self.slope_normal()));
        }
        out
    }

    fn edge_dirs(&self) -> ArrayVec<Vec3, 4> {
        let mut out = ArrayVec::new();
        for i in 0..3 {
            out.push(self.rot.axis(i));
        }
        if self.ramp {
            let h = self.half;
            out.push(self.rot.mul_vec(Vec3::new(0.0, h.y, -h.z).normalize_or(Vec3::UP)));
        }
        out
    }

    fn project(&self, axis: Vec3) -> (f64, f64) {
        self.vertices().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            let d = v.dot(axis);
            (lo.min(d), hi.max(d))
        })
    }

    pub fn intersect_ray(&self, origin: Vec3, dir: Vec3) -> Option<PrimHit> {
        let o = self.to_local(origin);
        let d = self.rot.mul_transpose_vec(dir);
        let mut t_enter = f64::NEG_INFINITY;
        let mut t_exit = f64::INFINITY;
        let mut enter_normal = -d;
        for pl in self.planes() {
            let denom = pl.normal.dot(d);
            let dist = pl.offset - pl.normal.dot(o);
            if denom.abs() < 1e-15 {
                if dist < 0.0 {
                    return None;
                }
                continue;
            }
            let t = dist / denom;
            if denom < 0.0 {
                if t > t_enter {
                    t_enter = t;
                    enter_normal = pl.normal;
                }
            } else if t < t_exit {
                t_exit = t;
            }
            if t_enter > t_exit {
                return None;
            }
        }
        if t_exit < 0.0 {
            return None;
        }
        if t_enter >= 0.0 {
            Some(PrimHit { t_enter, t_exit, normal: self.rot.mul_vec(enter_normal) })
        } else {
            Some(PrimHit { t_enter: 0.0, t_exit, normal: -dir })
        }
    }
}

/// Closest point on a solid triangle to `p` (2-D).
fn closest_on_triangle(p: (f64, f64), tri: [(f64, f64); 3]) -> (f64, f64) {
    let sub = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0, a.1 - b.1);
    let dot = |a: (f64, f64), b: (f64, f64)| a.0 * b.0 + a.1 * b.1;
    let [a, b, c] = tri;
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a.0 + ab.0 * v, a.1 + ab.1 * v);
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a.0 + ac.0 * w, a.1 + ac.1 * w);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b.0 + (c.0 - b.0) * w, b.1 + (c.1 - b.1) * w);
    }
    p
}

/// Separating-axis test between two convex solids.
fn sat_contact(a: &Convex, b: &Convex) -> Option<Contact> {
    let mut axes: ArrayVec<Vec3, 32> = ArrayVec::new();
    for n in a.face_normals().into_iter().chain(b.face_normals()) {
        axes.push(n);
    }
    for ea in a.edge_dirs() {
        for eb in b.edge_dirs() {
            if let Some(n) = ea.cross(eb).try_normalize() {
                if n.length_squared() > 0.5 && axes.len() < axes.capacity() {
                    axes.push(n);
                }
            }
        }
    }
    let mut best = Contact { normal: Vec3::UP, depth: f64::INFINITY };
    for axis in axes {
        let (amin, amax) = a.project(axis);
        let (bmin, bmax) = b.project(axis);
        // a pushed towards -axis or +axis
        let push_neg = amax - bmin;
        let push_pos = bmax - amin;
        let (depth, normal) = if push_pos < push_neg { (push_pos, axis) } else { (push_neg, -axis) };
        if depth <= -CONTACT_SLOP {
            return None;
        }
        if depth < best.depth {
            best = Contact { normal, depth };
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(half: Vec3) -> Collider {
        Collider::solid(Shape::Box { half })
    }

    #[test]
    fn sphere_resting_on_box_touches_with_upward_normal() {
        let b = boxed(Vec3::new(1.0, 0.5, 1.0));
        let s = Collider::solid(Shape::Sphere { radius: 0.5 });
        let c = collider_contact(&s, &Pose::new(Vec3::new(0.0, 1.0, 0.0), 0.0), &b, &Pose::new(Vec3::ZERO, 0.0)).unwrap();
        assert!(c.depth.abs() < 1e-12);
        assert!((c.normal - Vec3::UP).length() < 1e-12);
    }

    #[test]
    fn sphere_inside_box_exits_nearest_face() {
        let b = boxed(Vec3::new(2.0, 2.0, 2.0));
        let s = Collider::solid(Shape::Sphere { radius: 0.5 });
        // sphere centre at (1.8, 2, 0) in a box spanning x in [-2, 2]
        let c = collider_contact(&s, &Pose::new(Vec3::new(1.8, 1.5, 0.0), 0.0), &b, &Pose::new(Vec3::ZERO, 0.0)).unwrap();
        assert!((c.normal - Vec3::new(1.0, 0.0, 0.0)).length() < 1e-12);
        assert!((c.depth - 0.7).abs() < 1e-12);
    }

    #[test]
    fn yawed_boxes_separate_along_minimum_axis() {
        let a = boxed(Vec3::new(0.5, 0.5, 0.5));
        let b = boxed(Vec3::new(0.5, 0.5, 0.5));
        let c = collider_contact(&a, &Pose::new(Vec3::new(0.9, 0.0, 0.0), 0.0), &b, &Pose::new(Vec3::ZERO, 90.0)).unwrap();
        assert!((c.depth - 0.1).abs() < 1e-9);
        assert!((c.normal - Vec3::new(1.0, 0.0, 0.0)).length() < 1e-9);
        assert!(collider_contact(&a, &Pose::new(Vec3::new(1.2, 0.0, 0.0), 0.0), &b, &Pose::new(Vec3::ZERO, 0.0)).is_none());
    }

    #[test]
    fn ramp_slope_normal_points_up_and_towards_low_end() {
        let ramp = Collider::solid(Shape::Ramp { half: Vec3::new(2.0, 1.0, 1.0) });
        let s = Collider::solid(Shape::Sphere { radius: 0.5 });
        // above the middle of a 1:1 slope
        let c = collider_contact(&s, &Pose::new(Vec3::new(0.0, 0.8, 0.2), 0.0), &ramp, &Pose::new(Vec3::ZERO, 0.0)).unwrap();
        let expected = Vec3::new(0.0, 1.0, 1.0).normalize_or(Vec3::UP);
        assert!((c.normal - expected).length() < 1e-9, "{:?}", c.normal);
    }

    #[test]
    fn steep_ramp_collides_as_box() {
        let ramp = Collider::solid(Shape::Ramp { half: Vec3::new(1.0, 2.5, 0.5) });
        let prims = ramp.collision_prims(&Pose::new(Vec3::ZERO, 0.0));
        assert!(matches!(prims[0], Prim::Convex(Convex { ramp: false, .. })));
        let prims = ramp.prims(&Pose::new(Vec3::ZERO, 0.0));
        assert!(matches!(prims[0], Prim::Convex(Convex { ramp: true, .. })));
    }

    #[test]
    fn ray_hits_box_face_and_sphere() {
        let b = Prim::Convex(Convex { center: Vec3::new(0.0, 0.5, 10.5), rot: Mat3::IDENTITY, half: Vec3::splat(0.5), ramp: false });
        let hit = b.intersect_ray(Vec3::new(0.0, 0.5, 0.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert!((hit.t_enter - 10.0).abs() < 1e-12);
        assert!((hit.normal - Vec3::new(0.0, 0.0, -1.0)).length() < 1e-12);
        let s = Prim::Sphere { center: Vec3::new(0.0, 0.5, 5.0), radius: 1.0 };
        let hit = s.intersect_ray(Vec3::new(0.0, 0.5, 0.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert!((hit.t_enter - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ray_hits_ramp_slope() {
        // 1:1 ramp, high edge at -z; a ray travelling -z at mid height meets the slope at z = 0
        let r = Prim::Convex(Convex { center: Vec3::new(0.0, 1.0, 0.0), rot: Mat3::IDENTITY, half: Vec3::splat(1.0), ramp: true });
        let hit = r.intersect_ray(Vec3::new(0.0, 1.0, 5.0), Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert!((hit.t_enter - 5.0).abs() < 1e-12);
        // above the high edge: miss
        assert!(r.intersect_ray(Vec3::new(0.0, 2.1, 5.0), Vec3::new(0.0, 0.0, -1.0)).is_none());
    }

    #[test]
    fn triangle_closest_point_regions() {
        let tri = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)];
        assert_eq!(closest_on_triangle((-1.0, -1.0), tri), (0.0, 0.0));
        assert_eq!(closest_on_triangle((1.0, -1.0), tri), (1.0, 0.0));
        assert_eq!(closest_on_triangle((0.5, 0.5), tri), (0.5, 0.5));
        let (x, y) = closest_on_triangle((2.0, 2.0), tri);
        assert!((x - 1.0).abs() < 1e-12 && (y - 1.0).abs() < 1e-12);
    }
}
