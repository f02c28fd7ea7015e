//! Scene generators and independent oracles shared by the integration tests
//! and the acceptance harness.
#![allow(dead_code)]

use arena_lab::config::{instantiate_arena, load_config};
use arena_lab::entities::{EntityKind, RayCategory};
use arena_lab::episode::{Action, Episode};
use arena_lab::math::{forward, Vec3};
use arena_lab::observations::{raycast_observation, ObservationSpec, RaySpec, RaycastObservation, EYE_HEIGHT};
use arena_lab::physics::{PhysicsParams, ARENA_SIZE, MAX_RAY_RANGE};
use arena_lab::world::World;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MARCH_STEP: f64 = 1e-3;
pub const RAY_TOLERANCE: f64 = 2e-3;

pub fn arena(t: u64, items: &str) -> String {
    format!("!ArenaConfig\narenas:\n  0: !Arena\n    pass_mark: 0\n    t: {t}\n    items:\n{items}")
}

pub fn agent_at(x: f64, z: f64, yaw: f64) -> String {
    format!("    - !Item\n      name: Agent\n      positions:\n      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n      rotations: [{yaw}]\n")
}

pub fn item(name: &str, x: f64, z: f64, rot: f64, size: (f64, f64, f64)) -> String {
    format!(
        "    - !Item\n      name: {name}\n      positions:\n      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n      rotations: [{rot}]\n      sizes:\n      - !Vector3 {{x: {}, y: {}, z: {}}}\n",
        size.0, size.1, size.2
    )
}

pub fn start(text: &str, seed: u64) -> Episode {
    let (cfg, _) = load_config(text).unwrap();
    Episode::reset(&cfg, 0, seed, &PhysicsParams::default(), ObservationSpec::default()).unwrap().0
}

const SCENE_KINDS: &[EntityKind] = &[
    EntityKind::Wall,
    EntityKind::WallTransparent,
    EntityKind::Ramp,
    EntityKind::CylinderTunnel,
    EntityKind::CylinderTunnelTransparent,
    EntityKind::LightBlock,
    EntityKind::HeavyBlock,
    EntityKind::UBlock,
    EntityKind::LBlock,
    EntityKind::JBlock,
    EntityKind::GoodGoal,
    EntityKind::GoodGoalMulti,
    EntityKind::BadGoal,
    EntityKind::GoodGoalBounce,
    EntityKind::DecayGoal,
    EntityKind::GrowGoal,
    EntityKind::HotZone,
    EntityKind::DeathZone,
    EntityKind::SpawnerTree,
    EntityKind::SpawnerDispenserTall,
    EntityKind::SpawnerDispenserShort,
    EntityKind::SpawnerButton,
    EntityKind::SignBoard,
];

/// Config text for a random cluttered arena with everything placed at random.
pub fn random_scene_text(rng: &mut impl Rng) -> String {
    let mut items = String::from("    - !Item\n      name: Agent\n      positions:\n      - !Vector3 {x: -1, y: 0, z: -1}\n      rotations: [-1]\n");
    for _ in 0..rng.random_range(2..=14) {
        let kind = SCENE_KINDS[rng.random_range(0..SCENE_KINDS.len())];
        items.push_str(&format!("    - !Item\n      name: {kind}\n      positions:\n      - !Vector3 {{x: -1, y: 0, z: -1}}\n      rotations: [-1]\n"));
        if kind.accepts_attribute("sizes") {
            items.push_str("      sizes:\n      - !Vector3 {x: -1, y: -1, z: -1}\n");
        }
    }
    arena(0, &items)
}

/// A random scene advanced by a few random actions so bodies are in motion.
pub fn random_world(seed: u64) -> Option<World> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = random_scene_text(&mut rng);
    let (cfg, _) = load_config(&text).unwrap();
    let params = PhysicsParams::default();
    let mut ep = Episode::reset(&cfg, 0, seed, &params, ObservationSpec::default()).ok()?.0;
    for _ in 0..rng.random_range(0..15) {
        if ep.step(Action::from_index(rng.random_range(0..9)).unwrap()).ok()?.done {
            return None;
        }
    }
    Some(ep.world)
}

pub fn random_instantiated(seed: u64) -> Option<World> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = random_scene_text(&mut rng);
    let (cfg, _) = load_config(&text).unwrap();
    instantiate_arena(&cfg.arenas[0], &PhysicsParams::default(), seed).ok().map(|i| i.world)
}

/// Parameter interval where the ray is inside the box, if any.
fn slab_interval(origin: Vec3, dir: Vec3, lo: Vec3, hi: Vec3) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (o, d, l, h) in [(origin.x, dir.x, lo.x, hi.x), (origin.y, dir.y, lo.y, hi.y), (origin.z, dir.z, lo.z, hi.z)] {
        if d.abs() < 1e-15 {
            if o < l || o > h {
                return None;
            }
        } else {
            let (a, b) = ((l - o) / d, (h - o) / d);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
    }
    (t1 >= t0.max(0.0)).then_some((t0.max(0.0), t1))
}

fn fence_distance(origin: Vec3, dir: Vec3) -> f64 {
    let axis = |o: f64, d: f64| {
        if d > 0.0 {
            (ARENA_SIZE - o) / d
        } else if d < 0.0 {
            -o / d
        } else {
            f64::INFINITY
        }
    };
    axis(origin.x, dir.x).min(axis(origin.z, dir.z))
}

/// First entries along a ray, found by fixed-step point sampling. Every
/// surface within `slack` of the nearest is returned, nearest first.
pub fn march(world: &World, origin: Vec3, dir: Vec3, slack: f64) -> Vec<(f64, RayCategory)> {
    let mut hits = vec![(fence_distance(origin, dir), RayCategory::ArenaBoundary)];
    let mut best = hits[0].0;
    for e in world.entities.iter().filter(|e| e.kind != EntityKind::Agent) {
        let pose = &e.body.pose;
        if e.collider.contains_point(pose, origin) {
            continue;
        }
        let (lo, hi) = e.collider.aabb(pose);
        let Some((t0, t1)) = slab_interval(origin, dir, lo, hi) else { continue };
        let end = t1.min(best + slack) + MARCH_STEP;
        let mut t = t0;
        while t <= end {
            if e.collider.contains_point(pose, origin + dir * t) {
                hits.push((t, e.kind.ray_category()));
                best = best.min(t);
                break;
            }
            t += MARCH_STEP;
        }
    }
    hits.retain(|h| h.0 <= best + slack);
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    hits
}

/// Checks one raycast observation against the march oracle.
pub fn check_rays(world: &World, spec: &RaySpec) -> Result<(), String> {
    let obs = raycast_observation(world, spec, true).map_err(|e| e.to_string())?;
    check_shape(&obs, spec)?;
    let agent = world.agent();
    let origin = agent.body.pose.position + Vec3::new(0.0, EYE_HEIGHT, 0.0);
    for i in 0..spec.count {
        let dir = forward(agent.body.pose.yaw + spec.angle(i));
        let oracle = march(world, origin, dir, 2.0 * RAY_TOLERANCE);
        let nearest = oracle[0].0;
        let Some((row, v)) = obs.hit(i) else {
            return Err(format!("ray {i}: nothing reported, oracle has {nearest}"));
        };
        let reported = (1.0 - v) * MAX_RAY_RANGE;
        if (reported - nearest).abs() > RAY_TOLERANCE {
            return Err(format!("ray {i}: reported {reported}, oracle {nearest} ({:?})", oracle[0].1));
        }
        if !oracle.iter().any(|h| h.1.row() == row) {
            return Err(format!("ray {i}: row {row} not among oracle hits {oracle:?}"));
        }
    }
    let dark = raycast_observation(world, spec, false).map_err(|e| e.to_string())?;
    if !dark.is_zero() {
        return Err("lights-out observation is not all zero".into());
    }
    Ok(())
}

pub fn check_shape(obs: &RaycastObservation, spec: &RaySpec) -> Result<(), String> {
    if obs.rays != spec.count || obs.rays % 2 == 0 || obs.data.len() != 8 * obs.rays {
        return Err(format!("bad shape: {} rays, {} values", obs.rays, obs.data.len()));
    }
    if let Some(v) = obs.data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(format!("value {v} outside [0, 1]"));
    }
    for i in 0..obs.rays {
        let nonzero = (0..8).filter(|&r| obs.get(r, i) != 0.0).count();
        if nonzero > 1 {
            return Err(format!("ray {i} has {nonzero} nonzero rows"));
        }
    }
    Ok(())
}

pub fn random_ray_spec(rng: &mut impl Rng) -> RaySpec {
    RaySpec::new(2 * rng.random_range(0..16) + 1, rng.random_range(5.0..=360.0))
}

/// Highest foot height reached holding Forwards from the start.
pub fn max_height_forwards(text: &str, steps: usize) -> f64 {
    let mut ep = start(text, 1);
    let mut top: f64 = 0.0;
    for _ in 0..steps {
        ep.step(Action::Forwards).unwrap();
        top = top.max(ep.world.agent().body.pose.position.y);
    }
    top
}

/// Agent facing a ramp of the given height and length, rising toward it.
pub fn ramp_scene(height: f64, length: f64) -> String {
    arena(0, &(agent_at(20.0, 20.0 + length / 2.0 + 3.0, 180.0) + &item("Ramp", 20.0, 20.0, 0.0, (4.0, height, length))))
}

/// A fuzzed procgen template and the number of Choice alternatives at each
/// choice site.
pub struct FuzzTemplate {
    pub text: String,
    pub cardinalities: Vec<u128>,
}

fn num_choice(rng: &mut impl Rng, lo: f64, hi: f64, cards: &mut Vec<u128>) -> String {
    let n = rng.random_range(1..=4);
    cards.push(n as u128);
    let opts: Vec<String> = (0..n).map(|_| format!("{}", (rng.random_range(lo..hi) * 10.0f64).round() / 10.0)).collect();
    format!("!Choice [{}]", opts.join(", "))
}

/// Templates mixing Choice in value, vector and item-name positions with
/// labelled choices and conditionals, capped at 4096 expansions.
pub fn fuzz_template(rng: &mut impl Rng) -> FuzzTemplate {
    loop {
        let t = fuzz_template_once(rng);
        if t.cardinalities.iter().product::<u128>() <= 4096 {
            return t;
        }
    }
}

fn fuzz_template_once(rng: &mut impl Rng) -> FuzzTemplate {
    let mut cards = Vec::new();
    let mut s = String::from("!ArenaConfig\narenas:\n");
    let arenas = rng.random_range(1..=2);
    for a in 0..arenas {
        s.push_str(&format!("  {a}: !Arena\n"));
        if rng.random_bool(0.5) {
            let n = rng.random_range(1..=4);
            cards.push(n as u128);
            let opts: Vec<String> = (0..n).map(|_| rng.random_range(100..1000).to_string()).collect();
            s.push_str(&format!("    t: !Choice [{}]\n", opts.join(", ")));
        } else {
            s.push_str("    t: 250\n");
        }
        s.push_str("    pass_mark: 0\n    items:\n");
        s.push_str("    - !Item\n      name: Agent\n      positions:\n      - !Vector3 {x: 20, y: 0, z: 5}\n");
        for _ in 0..rng.random_range(1..=4) {
            let name = if rng.random_bool(0.3) {
                let n = rng.random_range(2..=3);
                cards.push(n as u128);
                let names: Vec<&str> = ["Wall", "GoodGoal", "BadGoal"].iter().copied().take(n).collect();
                format!("!Choice [{}]", names.join(", "))
            } else {
                ["Wall", "GoodGoal", "LightBlock", "HotZone"][rng.random_range(0..4)].to_string()
            };
            s.push_str(&format!("    - !Item\n      name: {name}\n      positions:\n"));
            let x = if rng.random_bool(0.4) { num_choice(rng, 1.0, 39.0, &mut cards) } else { "10".into() };
            let z = rng.random_range(8..32);
            s.push_str(&format!("      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n"));
            if rng.random_bool(0.4) {
                s.push_str(&format!("      rotations: [{}]\n", num_choice(rng, 0.0, 360.0, &mut cards)));
            }
            if rng.random_bool(0.3) {
                s.push_str(&format!("      sizes:\n      - !Vector3 {{x: {}, y: 1, z: 1}}\n", num_choice(rng, 0.5, 5.0, &mut cards)));
            }
        }
        if rng.random_bool(0.3) {
            let n = rng.random_range(2..=3);
            cards.push(n as u128);
            let label = format!("side{a}");
            let opts: Vec<String> = (0..n).map(|i| (90 * i).to_string()).collect();
            s.push_str(&format!(
                "    - !Item\n      name: Wall\n      positions:\n      - !Vector3 {{x: !If {{label: {label}, equals: 0, then: 3, else: 37}}, y: 0, z: 37}}\n      rotations: [!Label {{name: {label}, value: !Choice [{}]}}]\n",
                opts.join(", ")
            ));
        }
    }
    FuzzTemplate { text: s, cardinalities: cards }
}
