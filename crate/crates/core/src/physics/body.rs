use super::shape::Pose;
use crate::math::Vec3;
use serde::{Deserialize, Serialize};

/// Rigid body state. Velocity is measured in arena units per step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub pose: Pose,
    pub velocity: Vec3,
    /// Dimensionless; the agent has mass 1.
    pub mass: f64,
    pub immovable: bool,
    /// Kinetic friction applies when grounded and unpowered. Goals roll
    /// instead and only feel drag.
    pub sliding: bool,
    /// Supported by the floor or another body at the end of the last step.
    pub grounded: bool,
}

impl Body {
    pub fn dynamic(pose: Pose, mass: f64) -> Self {
        Self { pose, velocity: Vec3::ZERO, mass, immovable: false, sliding: true, grounded: false }
    }

    pub fn fixed(pose: Pose) -> Self {
        Self { pose, velocity: Vec3::ZERO, mass: f64::INFINITY, immovable: true, sliding: false, grounded: true }
    }

    pub fn inverse_mass(&self) -> f64 {
        if self.immovable {
            0.0
        } else {
            1.0 / self.mass
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pose.position.is_finite() && self.velocity.is_finite() && self.pose.yaw.is_finite()
    }
}

/// Tunable constants of the physics kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsParams {
    /// Downward acceleration, units/step².
    pub gravity: f64,
    /// Horizontal velocity retained per step, in (0, 1).
    pub drag: f64,
    /// Kinetic friction coefficient; deceleration is `friction * gravity`.
    pub friction: f64,
    /// Impulse of a forwards/backwards action, units/step.
    pub drive_impulse: f64,
    /// Degrees per turn action.
    pub turn_degrees: f64,
    /// Launch speed of bounce goals, units/step.
    pub bounce_speed: f64,
    /// Collision relaxation passes per sub-step.
    pub iterations: usize,
    /// Longest distance any body may travel in one sub-step.
    pub max_substep_travel: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self { gravity: 0.02, drag: 0.9, friction: 12.5, drive_impulse: 0.15, turn_degrees: 6.0, bounce_speed: 1.0, iterations: 4, max_substep_travel: 0.25 }
    }
}

impl PhysicsParams {
    /// Steady-state speed under a held drive: the fixed point of `v = drag * v + impulse`.
    pub fn terminal_speed(&self) -> f64 {
        self.drive_impulse / (1.0 - self.drag)
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = self.gravity >= 0.0
            && self.drag > 0.0
            && self.drag < 1.0
            && self.friction >= 0.0
            && self.drive_impulse >= 0.0
            && self.turn_degrees.is_finite()
            && self.bounce_speed >= 0.0
            && self.iterations >= 1
            && self.max_substep_travel > 0.0;
        if ok {
            Ok(())
        } else {
            Err(format!("invalid physics parameters: {self:?}"))
        }
    }
}
