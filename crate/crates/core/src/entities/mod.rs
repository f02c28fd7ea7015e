//! The arena's object ontology: kinds, construction, per-step behaviour and
//! what touching each object means for the agent.

mod behaviour;
mod entity;
mod kind;

pub use behaviour::{combine_outcomes, is_face_press, on_agent_contact, press_button, sample_weighted, tick_entity, ContactOutcome, EndCause, SpawnRequest};
pub use entity::{
    build_entity, collider_for, constants, effective_size, tunnel_collider, ButtonState, DispenserState, Entity, EntityError, EntityId, EntitySpec, Rgb,
    SignCell, SignContent, Skin, ValenceSchedule, SIGN_SYMBOLS,
};
pub use kind::{EntityKind, RayCategory, UnknownKind};
