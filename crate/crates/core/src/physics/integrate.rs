use super::body::{Body, PhysicsParams};
use super::SimulationFault;
use crate::math::Vec3;

/// Bodies whose base is within this distance of the floor count as supported.
pub(crate) const FLOOR_EPS: f64 = 1e-9;

/// Semi-implicit Euler velocity update: drag, applied impulse, gravity or the
/// normal force, and kinetic friction.
///
/// `applied` holds one impulse per body (momentum units; divided by mass).
pub fn update_velocities(bodies: &mut [Body], applied: &[Vec3], params: &PhysicsParams) {
    for (i, body) in bodies.iter_mut().enumerate() {
        if body.immovable {
            body.velocity = Vec3::ZERO;
            continue;
        }
        let dv = applied.get(i).copied().unwrap_or(Vec3::ZERO) / body.mass;
        let supported = body.grounded || body.pose.position.y <= FLOOR_EPS;
        let mut v = body.velocity;
        v.x = v.x * params.drag + dv.x;
        v.z = v.z * params.drag + dv.z;
        if supported {
            // normal force cancels gravity and any downward motion
            v.y = v.y.max(0.0) * params.drag + dv.y;
        } else {
            v.y += dv.y - params.gravity;
        }
        let powered = dv.x != 0.0 || dv.z != 0.0;
        if supported && body.sliding && !powered {
            let speed = v.horizontal().length();
            let decel = params.friction * params.gravity;
            if speed <= decel {
                v.x = 0.0;
                v.z = 0.0;
            } else {
                let k = (speed - decel) / speed;
                v.x *= k;
                v.z *= k;
            }
        }
        body.velocity = v;
    }
}

/// One unconstrained integration step: velocities update, then positions
/// advance by the new velocity. Collisions are not considered.
pub fn integrate_step(bodies: &[Body], applied: &[Vec3], params: &PhysicsParams) -> Result<Vec<Body>, SimulationFault> {
    let mut out = bodies.to_vec();
    update_velocities(&mut out, applied, params);
    for (i, b) in out.iter_mut().enumerate() {
        b.pose.position += b.velocity;
        if !b.is_finite() {
            return Err(SimulationFault::NonFinite { body: i });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::shape::Pose;

    #[test]
    fn resting_body_is_unchanged() {
        let body = Body::dynamic(Pose::new(Vec3::new(5.0, 0.0, 5.0), 0.0), 1.0);
        let out = integrate_step(&[body.clone()], &[Vec3::ZERO], &PhysicsParams::default()).unwrap();
        assert_eq!(out[0], body);
    }

    #[test]
    fn free_fall_gains_one_gravity_quantum() {
        let body = Body::dynamic(Pose::new(Vec3::new(5.0, 5.0, 5.0), 0.0), 1.0);
        let out = integrate_step(&[body], &[Vec3::ZERO], &PhysicsParams::default()).unwrap();
        assert_eq!(out[0].velocity.y, -0.02);
        assert_eq!(out[0].pose.position.y, 5.0 - 0.02);
    }

    #[test]
    fn immovable_bodies_stay_put() {
        let mut body = Body::fixed(Pose::new(Vec3::new(5.0, 0.0, 5.0), 0.0));
        body.velocity = Vec3::new(1.0, 0.0, 0.0);
        let out = integrate_step(&[body], &[Vec3::new(3.0, 0.0, 0.0)], &PhysicsParams::default()).unwrap();
        assert_eq!(out[0].velocity, Vec3::ZERO);
        assert_eq!(out[0].pose.position, Vec3::new(5.0, 0.0, 5.0));
    }

    #[test]
    fn unpowered_block_stops_within_five_steps() {
        let params = PhysicsParams::default();
        let mut bodies = vec![Body::dynamic(Pose::new(Vec3::new(5.0, 0.0, 5.0), 0.0), 1.0)];
        bodies[0].velocity = Vec3::new(params.terminal_speed(), 0.0, 0.0);
        for _ in 0..5 {
            bodies = integrate_step(&bodies, &[Vec3::ZERO], &params).unwrap();
        }
        assert_eq!(bodies[0].velocity, Vec3::ZERO);
    }

    #[test]
    fn nan_state_is_a_fault() {
        let mut body = Body::dynamic(Pose::new(Vec3::new(5.0, 5.0, 5.0), 0.0), 1.0);
        body.velocity.x = f64::NAN;
        assert!(integrate_step(&[body], &[Vec3::ZERO], &PhysicsParams::default()).is_err());
    }
}
