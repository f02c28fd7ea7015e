//! Shared scenes for the benchmarks.

use arena_lab::config::{load_config, ArenaConfigFile};
use arena_lab::episode::{Action, Episode};
use arena_lab::observations::{CameraSpec, ObservationSpec, RaySpec};
use arena_lab::physics::PhysicsParams;

pub const FORAGING: &str = include_str!("../../../configs/foraging.yml");
pub const MAZE: &str = include_str!("../../../configs/radial_arm_maze.yml");

pub fn config(text: &str) -> ArenaConfigFile {
    load_config(text).expect("bundled configs are valid").0
}

pub fn rays15() -> ObservationSpec {
    ObservationSpec { raycast: Some(RaySpec::new(15, 60.0)), camera: None, vector: true }
}

pub fn camera64() -> ObservationSpec {
    ObservationSpec { raycast: None, camera: Some(CameraSpec { resolution: 64, grayscale: false }), vector: false }
}

pub fn episode(cfg: &ArenaConfigFile, spec: ObservationSpec, seed: u64) -> Episode {
    Episode::reset(cfg, 0, seed, &PhysicsParams::default(), spec).expect("episode starts").0
}

/// A fixed, wandering action pattern.
pub fn action(i: u64) -> Action {
    const PATTERN: [usize; 8] = [1, 1, 4, 1, 5, 1, 1, 2];
    Action::from_index(PATTERN[(i % 8) as usize]).expect("valid index")
}

/// Steps `n` times, restarting the episode when it ends.
pub fn run_steps(cfg: &ArenaConfigFile, spec: ObservationSpec, n: u64) -> u64 {
    let mut ep = episode(cfg, spec, 0);
    let mut seed = 0;
    for i in 0..n {
        if ep.state.done {
            seed += 1;
            ep = episode(cfg, spec, seed);
        }
        ep.step(action(i)).expect("no faults");
    }
    seed
}
