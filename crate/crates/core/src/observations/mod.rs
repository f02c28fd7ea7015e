//! The three observation channels: raycasts, camera pixels and the vector of
//! health, velocity and position.

pub mod camera;
pub mod rays;
pub mod sight;

pub use camera::{camera_observation, luminance, CameraObservation, CameraSpec};
pub use rays::{encode_distance, fan_hits, raycast_observation, sight_ray, FanHit, RaySpec, RaycastObservation, EYE_HEIGHT};
pub use sight::{SightHit, SightScene};

use crate::math::Vec3;
use crate::world::World;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ObservationError {
    #[error("ray count must be odd and positive, got {0}")]
    RayCount(usize),
    #[error("ray field of view must be in (0, 360], got {0}")]
    FieldOfView(f64),
    #[error("camera resolution must be in [4, 512], got {0}")]
    Resolution(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorObservation {
    pub health: f64,
    pub velocity: Vec3,
    pub position: Vec3,
}

impl VectorObservation {
    pub fn of(world: &World, health: f64) -> Self {
        let body = &world.agent().body;
        Self { health, velocity: body.velocity, position: body.pose.position }
    }

    /// `[health, vx, vy, vz, x, y, z]`
    pub fn to_array(&self) -> [f64; 7] {
        let (v, p) = (self.velocity, self.position);
        [self.health, v.x, v.y, v.z, p.x, p.y, p.z]
    }
}

/// Which channels to produce; any combination is allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservationSpec {
    #[serde(default)]
    pub raycast: Option<RaySpec>,
    #[serde(default)]
    pub camera: Option<CameraSpec>,
    #[serde(default)]
    pub vector: bool,
}

impl ObservationSpec {
    pub fn validate(&self) -> Result<(), ObservationError> {
        if let Some(r) = &self.raycast {
            r.validate()?;
        }
        if let Some(c) = &self.camera {
            c.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub raycast: Option<RaycastObservation>,
    pub camera: Option<CameraObservation>,
    pub vector: Option<VectorObservation>,
}

/// Builds every requested channel. The vector channel ignores the lights.
pub fn observe(world: &World, spec: &ObservationSpec, health: f64, lights_on: bool) -> Result<Observation, ObservationError> {
    Ok(Observation {
        raycast: spec.raycast.as_ref().map(|r| raycast_observation(world, r, lights_on)).transpose()?,
        camera: spec.camera.as_ref().map(|c| camera_observation(world, c, lights_on)).transpose()?,
        vector: spec.vector.then(|| VectorObservation::of(world, health)),
    })
}
