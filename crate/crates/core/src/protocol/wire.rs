//! JSON shapes of observations, step info and world snapshots.

use crate::entities::{Entity, EntityId, RayCategory};
use crate::episode::{EpisodeState, StepInfo};
use crate::math::Vec3;
use crate::observations::{CameraObservation, FanHit, Observation, RaycastObservation, VectorObservation};
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WireError {
    #[error("raycast data has {found} values, expected {expected}")]
    RaycastShape { expected: usize, found: usize },
    #[error("camera data has {found} bytes, expected {expected}")]
    CameraShape { expected: usize, found: usize },
    #[error("camera data is not base64: {0}")]
    Base64(String),
    #[error("unsupported camera encoding `{0}`")]
    Encoding(String),
}

fn arr(v: Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// 8 rows by `rays` columns, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaycastWire {
    pub rows: usize,
    pub rays: usize,
    pub data: Vec<f64>,
}

/// Raw row-major bytes, RGB interleaved, base64 encoded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraWire {
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub encoding: String,
    pub data: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ObservationWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raycast: Option<RaycastWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraWire>,
    /// `[health, vx, vy, vz, x, y, z]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<[f64; 7]>,
}

impl From<&Observation> for ObservationWire {
    fn from(o: &Observation) -> Self {
        Self {
            raycast: o.raycast.as_ref().map(|r| RaycastWire { rows: RaycastObservation::ROWS, rays: r.rays, data: r.data.clone() }),
            camera: o.camera.as_ref().map(|c| CameraWire {
                height: c.resolution,
                width: c.resolution,
                channels: c.channels,
                encoding: "base64".into(),
                data: STANDARD.encode(&c.data),
            }),
            vector: o.vector.map(|v| v.to_array()),
        }
    }
}

impl ObservationWire {
    /// Rebuilds the matrices a server serialized.
    pub fn decode(&self) -> Result<Observation, WireError> {
        let raycast = match &self.raycast {
            Some(r) => {
                let expected = RaycastObservation::ROWS * r.rays;
                if r.rows != RaycastObservation::ROWS || r.data.len() != expected {
                    return Err(WireError::RaycastShape { expected, found: r.data.len() });
                }
                Some(RaycastObservation { rays: r.rays, data: r.data.clone() })
            }
            None => None,
        };
        let camera = match &self.camera {
            Some(c) => {
                if c.encoding != "base64" {
                    return Err(WireError::Encoding(c.encoding.clone()));
                }
                let data = STANDARD.decode(&c.data).map_err(|e| WireError::Base64(e.to_string()))?;
                let expected = c.height * c.width * c.channels;
                if data.len() != expected || c.height != c.width {
                    return Err(WireError::CameraShape { expected, found: data.len() });
                }
                Some(CameraObservation { resolution: c.width, channels: c.channels, data })
            }
            None => None,
        };
        let vector = self.vector.map(|a| VectorObservation { health: a[0], velocity: Vec3::new(a[1], a[2], a[3]), position: Vec3::new(a[4], a[5], a[6]) });
        Ok(Observation { raycast, camera, vector })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoWire {
    pub step: u64,
    pub health: f64,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
    pub yaw: f64,
    pub reward: f64,
    pub in_hot_zone: bool,
    pub lights_on: bool,
    pub done_reason: Option<String>,
    /// Present once the episode is over and the file asks for notifications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl InfoWire {
    pub fn new(info: &StepInfo, passed: Option<bool>) -> Self {
        Self {
            step: info.step,
            health: info.health,
            position: arr(info.position),
            velocity: arr(info.velocity),
            yaw: info.yaw,
            reward: info.reward,
            in_hot_zone: info.in_hot_zone,
            lights_on: info.lights_on,
            done_reason: info.done_reason.map(|d| d.name().to_string()),
            passed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeWire {
    pub step: u64,
    pub t: u64,
    pub pass_mark: f64,
    pub reward: f64,
    pub health: f64,
    pub prev_episode_reward: f64,
    pub frozen_remaining: u64,
    pub lights_on: bool,
    pub done: bool,
    pub done_reason: Option<String>,
}

impl From<&EpisodeState> for EpisodeWire {
    fn from(s: &EpisodeState) -> Self {
        Self {
            step: s.step,
            t: s.t,
            pass_mark: s.pass_mark,
            reward: s.reward,
            health: s.health,
            prev_episode_reward: s.prev_episode_reward,
            frozen_remaining: s.frozen_remaining,
            lights_on: s.lights_on,
            done: s.done,
            done_reason: s.done_reason.map(|d| d.name().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityWire {
    pub id: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Bottom-centre of the footprint.
    pub position: [f64; 3],
    pub yaw: f64,
    pub size: [f64; 3],
    pub color: [u8; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skin: Option<String>,
    /// Current reward magnitude for goals, 0 otherwise.
    pub value: f64,
}

impl EntityWire {
    pub fn new(e: &Entity, labels: &BTreeMap<EntityId, String>) -> Self {
        let c = e.display_color();
        Self {
            id: e.id.0,
            kind: e.kind.name().to_string(),
            label: labels.get(&e.id).cloned(),
            position: arr(e.body.pose.position),
            yaw: e.body.pose.yaw,
            size: arr(e.size),
            color: [c.r, c.g, c.b],
            skin: e.skin.map(|s| s.name().to_string()),
            value: e.value(),
        }
    }
}

/// Everything alive in the arena plus the episode counters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateWire {
    pub episode: EpisodeWire,
    pub entities: Vec<EntityWire>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnWire {
    pub distance: Option<f64>,
    pub rgb: Option<[u8; 3]>,
    pub category: Option<RayCategory>,
}

impl From<Option<FanHit>> for ColumnWire {
    fn from(hit: Option<FanHit>) -> Self {
        match hit {
            Some(h) => Self { distance: Some(h.distance), rgb: Some([h.color.r, h.color.g, h.color.b]), category: Some(h.category) },
            None => Self { distance: None, rgb: None, category: None },
        }
    }
}

/// First-person column scan, left to right across `fov` degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewWire {
    pub fov: f64,
    pub lights_on: bool,
    pub columns: Vec<ColumnWire>,
    pub episode: EpisodeWire,
}
