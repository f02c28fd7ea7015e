//! Deterministic fixed-timestep rigid-body kernel.
//!
//! One physics tick per environment step. Bodies carry velocities in
//! units/step; the kernel applies drag, the drive impulse, gravity (or the
//! normal force when supported) and kinetic friction, then advances positions
//! in sub-steps with positional projection and inelastic impulses.
//!
//! Floating-point profile: plain IEEE-754 binary64 arithmetic with
//! round-to-nearest, no fused multiply-add and no parallel reductions, so runs
//! are bitwise reproducible on any platform that compiles to the same
//! instruction semantics (x86-64 SSE2, AArch64). Trigonometry goes through the
//! platform `libm`, which is the one place results may differ across
//! operating systems.

mod body;
mod collide;
mod integrate;
pub mod ray;
pub mod shape;

pub use body::{Body, PhysicsParams};
pub use collide::{apply_contact_impulse, resolve_collisions, step_bodies, ContactEvent, ARENA_SIZE};
pub use integrate::{integrate_step, update_velocities};
pub use ray::{arena_wall_distance, raycast, RayHit, RayTarget, MAX_RAY_RANGE};
pub use shape::{collider_contact, BoxPart, Collider, Contact, Pose, Prim, Shape};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimulationFault {
    #[error("body {body} reached a non-finite state")]
    NonFinite { body: usize },
}
