use super::collide::ARENA_SIZE;
use super::shape::{Collider, Pose};
use crate::math::Vec3;

/// Longest possible horizontal sight line: the arena diagonal.
pub const MAX_RAY_RANGE: f64 = 56.568_542_494_923_8;

/// Something a ray can hit, tagged with caller data (entity id, category).
#[derive(Clone, Copy, Debug)]
pub struct RayTarget<'a, T> {
    pub collider: &'a Collider,
    pub pose: Pose,
    pub tag: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayHit<T> {
    pub distance: f64,
    pub tag: T,
    /// Surface normal at the hit, facing the ray origin.
    pub normal: Vec3,
}

/// Nearest hit among `targets` within `max_range`. Ties go to the earlier target.
pub fn raycast<T: Copy>(targets: &[RayTarget<'_, T>], origin: Vec3, direction: Vec3, max_range: f64) -> Option<RayHit<T>> {
    let mut best: Option<RayHit<T>> = None;
    for target in targets {
        for prim in target.collider.prims(&target.pose) {
            if let Some(hit) = prim.intersect_ray(origin, direction) {
                if hit.t_enter <= max_range && best.map_or(true, |b| hit.t_enter < b.distance) {
                    best = Some(RayHit { distance: hit.t_enter, tag: target.tag, normal: hit.normal });
                }
            }
        }
    }
    best
}

/// Distance along a horizontal ray to the arena fence, which is treated as
/// unbounded in height for sight lines.
pub fn arena_wall_distance(origin: Vec3, direction: Vec3) -> Option<(f64, Vec3)> {
    let mut best: Option<(f64, Vec3)> = None;
    let mut consider = |t: f64, n: Vec3| {
        if t >= 0.0 && best.map_or(true, |b| t < b.0) {
            best = Some((t, n));
        }
    };
    if direction.x > 1e-15 {
        consider((ARENA_SIZE - origin.x) / direction.x, Vec3::new(-1.0, 0.0, 0.0));
    } else if direction.x < -1e-15 {
        consider(-origin.x / direction.x, Vec3::new(1.0, 0.0, 0.0));
    }
    if direction.z > 1e-15 {
        consider((ARENA_SIZE - origin.z) / direction.z, Vec3::new(0.0, 0.0, -1.0));
    } else if direction.z < -1e-15 {
        consider(-origin.z / direction.z, Vec3::new(0.0, 0.0, 1.0));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::shape::Shape;

    #[test]
    fn wall_ten_units_ahead() {
        let wall = Collider::solid(Shape::Box { half: Vec3::new(5.0, 1.0, 0.5) });
        let targets = [RayTarget { collider: &wall, pose: Pose::new(Vec3::new(20.0, 0.0, 30.5), 0.0), tag: 1u32 }];
        let hit = raycast(&targets, Vec3::new(20.0, 0.5, 20.0), Vec3::new(0.0, 0.0, 1.0), MAX_RAY_RANGE).unwrap();
        assert!((hit.distance - 10.0).abs() < 1e-6);
        assert_eq!(hit.tag, 1);
    }

    #[test]
    fn empty_arena_has_no_target_hit() {
        let targets: [RayTarget<'_, u32>; 0] = [];
        assert!(raycast(&targets, Vec3::new(20.0, 0.5, 20.0), Vec3::new(0.0, 0.0, 1.0), MAX_RAY_RANGE).is_none());
        let (d, _) = arena_wall_distance(Vec3::new(20.0, 0.5, 20.0), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        assert!((d - 20.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_five_ahead_hits_at_four() {
        let ball = Collider::solid(Shape::Sphere { radius: 1.0 });
        let targets = [RayTarget { collider: &ball, pose: Pose::new(Vec3::new(20.0, -0.5, 25.0), 0.0), tag: () }];
        let hit = raycast(&targets, Vec3::new(20.0, 0.5, 20.0), Vec3::new(0.0, 0.0, 1.0), MAX_RAY_RANGE).unwrap();
        assert!((hit.distance - 4.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_hits_are_ignored() {
        let ball = Collider::solid(Shape::Sphere { radius: 1.0 });
        let targets = [RayTarget { collider: &ball, pose: Pose::new(Vec3::new(20.0, -0.5, 25.0), 0.0), tag: () }];
        assert!(raycast(&targets, Vec3::new(20.0, 0.5, 20.0), Vec3::new(0.0, 0.0, 1.0), 3.0).is_none());
    }
}
