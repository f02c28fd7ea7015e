use super::sight::SightScene;
use super::ObservationError;
use crate::entities::{EntityId, RayCategory, Rgb};
use crate::math::{forward, Vec3};
use crate::physics::{arena_wall_distance, MAX_RAY_RANGE};
use crate::world::World;
use serde::{Deserialize, Serialize};

/// Height of the sight rays above the agent's footprint.
pub const EYE_HEIGHT: f64 = 0.5;
/// Colour reported for the arena fence.
pub const FENCE_COLOR: Rgb = Rgb::new(120, 110, 100);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaySpec {
    /// Number of rays; must be odd.
    pub count: usize,
    /// Total angular spread in degrees, `(0, 360]`.
    pub fov: f64,
}

impl RaySpec {
    pub const fn new(count: usize, fov: f64) -> Self {
        Self { count, fov }
    }

    pub fn validate(&self) -> Result<(), ObservationError> {
        if self.count == 0 || self.count % 2 == 0 {
            return Err(ObservationError::RayCount(self.count));
        }
        if !(self.fov > 0.0 && self.fov <= 360.0) {
            return Err(ObservationError::FieldOfView(self.fov));
        }
        Ok(())
    }

    /// Yaw offset of ray `i` relative to the agent's heading. Ray 0 points
    /// straight ahead; odd rays fan out to the left (negative offsets), even
    /// rays to the right.
    pub fn angle(&self, i: usize) -> f64 {
        if self.count <= 1 {
            return 0.0;
        }
        let spacing = self.fov / (self.count - 1) as f64;
        let k = i.div_ceil(2) as f64;
        if i % 2 == 1 {
            -k * spacing
        } else {
            k * spacing
        }
    }

    /// Ray indices ordered from leftmost to rightmost.
    pub fn left_to_right(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.count).collect();
        order.sort_by(|&a, &b| self.angle(a).total_cmp(&self.angle(b)));
        order
    }
}

/// The 8×r matrix of nearest-hit encodings, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaycastObservation {
    pub rays: usize,
    pub data: Vec<f64>,
}

impl RaycastObservation {
    pub const ROWS: usize = RayCategory::COUNT;

    pub fn zeros(rays: usize) -> Self {
        Self { rays, data: vec![0.0; Self::ROWS * rays] }
    }

    pub fn get(&self, row: usize, ray: usize) -> f64 {
        self.data[row * self.rays + ray]
    }

    fn set(&mut self, row: usize, ray: usize, v: f64) {
        self.data[row * self.rays + ray] = v;
    }

    /// The category row and value of the hit seen by `ray`, if any.
    pub fn hit(&self, ray: usize) -> Option<(usize, f64)> {
        (0..Self::ROWS).map(|r| (r, self.get(r, ray))).find(|&(_, v)| v > 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }
}

/// Distance to value: 1 at contact, falling linearly to 0 at the maximum range.
pub fn encode_distance(distance: f64) -> f64 {
    (1.0 - distance / MAX_RAY_RANGE).clamp(0.0, 1.0)
}

/// What one sight ray sees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanHit {
    pub distance: f64,
    pub category: RayCategory,
    /// `None` for the arena fence.
    pub entity: Option<EntityId>,
    pub color: Rgb,
}

/// Origin of the agent's sight rays.
pub fn eye(world: &World) -> Vec3 {
    world.agent().body.pose.position + Vec3::new(0.0, EYE_HEIGHT, 0.0)
}

/// Nearest hit along a horizontal ray, including the fence.
pub fn sight_ray(scene: &SightScene, origin: Vec3, dir: Vec3) -> Option<FanHit> {
    let entity = scene.cast(origin, dir, MAX_RAY_RANGE, |_| true);
    let fence = arena_wall_distance(origin, dir).filter(|(d, _)| *d <= MAX_RAY_RANGE);
    match (entity, fence) {
        (Some(h), f) if f.is_none_or(|(d, _)| h.distance <= d) => {
            let e = &scene.entries[h.entry];
            Some(FanHit { distance: h.distance, category: e.category, entity: Some(e.id), color: e.color })
        }
        (_, Some((d, _))) => Some(FanHit { distance: d, category: RayCategory::ArenaBoundary, entity: None, color: FENCE_COLOR }),
        _ => None,
    }
}

/// Hits for each ray of the fan, in ray-index order.
pub fn fan_hits(world: &World, spec: &RaySpec) -> Result<Vec<Option<FanHit>>, ObservationError> {
    spec.validate()?;
    let scene = SightScene::new(world);
    let origin = eye(world);
    let yaw = world.agent().body.pose.yaw;
    Ok((0..spec.count).map(|i| sight_ray(&scene, origin, forward(yaw + spec.angle(i)))).collect())
}

/// The raycast channel. With the lights off every entry is zero.
pub fn raycast_observation(world: &World, spec: &RaySpec, lights_on: bool) -> Result<RaycastObservation, ObservationError> {
    spec.validate()?;
    let mut obs = RaycastObservation::zeros(spec.count);
    if !lights_on {
        return Ok(obs);
    }
    for (i, hit) in fan_hits(world, spec)?.into_iter().enumerate() {
        if let Some(h) = hit {
            obs.set(h.category.row(), i, encode_distance(h.distance));
        }
    }
    Ok(obs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_alternates_left_then_right() {
        let s = RaySpec::new(5, 60.0);
        let angles: Vec<f64> = (0..5).map(|i| s.angle(i)).collect();
        assert_eq!(angles, vec![0.0, -15.0, 15.0, -30.0, 30.0]);
        assert_eq!(s.left_to_right(), vec![3, 1, 0, 2, 4]);
    }

    #[test]
    fn even_counts_are_rejected() {
        assert!(RaySpec::new(4, 60.0).validate().is_err());
        assert!(RaySpec::new(3, 0.0).validate().is_err());
    }

    #[test]
    fn half_range_encodes_to_one_half() {
        assert!((encode_distance(MAX_RAY_RANGE / 2.0) - 0.5).abs() < 1e-12);
    }
}
