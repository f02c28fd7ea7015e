//! Headless, deterministic arena simulator for embodied reinforcement
//! learning experiments.

pub mod agents;
pub mod config;
pub mod entities;
pub mod episode;
pub mod math;
pub mod observations;
pub mod physics;
pub mod procgen;
pub mod protocol;
pub mod world;

/// Build version written into every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
