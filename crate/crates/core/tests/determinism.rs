use arena_lab::config::{load_config, ArenaConfigFile};
use arena_lab::episode::{replay, Action, Episode, Verdict};
use arena_lab::observations::{ObservationSpec, RaySpec};
use arena_lab::physics::PhysicsParams;
use arena_lab::protocol::{Envelope, Session, SessionOptions, PROTOCOL_VERSION};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const FORAGING: &str = include_str!("../../../configs/foraging.yml");
const MAZE: &str = include_str!("../../../configs/radial_arm_maze.yml");

fn actions(n: usize, seed: u64) -> Vec<Action> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Action::from_index(rng.random_range(0..9)).unwrap()).collect()
}

fn run(cfg: &ArenaConfigFile, seed: u64, acts: &[Action]) -> String {
    let spec = ObservationSpec { raycast: Some(RaySpec::new(15, 60.0)), camera: None, vector: true };
    let (mut ep, _) = Episode::reset(cfg, 0, seed, &PhysicsParams::default(), spec).unwrap();
    for &a in acts {
        if ep.step(a).unwrap().done {
            break;
        }
    }
    ep.trajectory.to_csv()
}

#[test]
fn thousand_action_replay_is_bitwise_identical() {
    for text in [FORAGING, MAZE] {
        let (cfg, _) = load_config(text).unwrap();
        let acts = actions(1000, 9);
        let log = run(&cfg, 42, &acts);
        assert_eq!(run(&cfg, 42, &acts), log);
        let (verdict, again) = replay(&cfg, &log, &PhysicsParams::default()).unwrap();
        assert_eq!(verdict, Verdict::Exact);
        assert_eq!(again.to_csv(), log);
    }
}

#[test]
fn foraging_log_has_all_thousand_steps() {
    let (cfg, _) = load_config(FORAGING).unwrap();
    let log = run(&cfg, 3, &actions(1000, 1));
    assert_eq!(log.lines().filter(|l| !l.starts_with('#')).count(), 1001);
}

#[test]
fn seeds_change_the_episode() {
    let (cfg, _) = load_config(FORAGING).unwrap();
    let acts = actions(50, 2);
    assert_ne!(run(&cfg, 1, &acts), run(&cfg, 2, &acts));
}

#[test]
fn perturbed_physics_is_detected() {
    let (cfg, _) = load_config(FORAGING).unwrap();
    let log = run(&cfg, 5, &actions(300, 4));
    let params = PhysicsParams { drag: 0.89, ..PhysicsParams::default() };
    assert!(matches!(replay(&cfg, &log, &params).unwrap().0, Verdict::Mismatch { .. }));
}

fn session_transcript(config: &str, seed: u64, acts: &[Action]) -> Vec<String> {
    let mut s = Session::new(1, SessionOptions::default());
    let mut out = Vec::new();
    let mut send = |kind: &str, payload: serde_json::Value, seq: u64| {
        let reply = s.handle(&Envelope::new(Some(seq), kind, payload).to_line());
        out.push(reply.to_line());
    };
    send("hello", json!({ "version": PROTOCOL_VERSION }), 0);
    send("load_config", json!({ "text": config }), 1);
    send("reset", json!({ "seed": seed, "obs_spec": { "raycast": { "count": 15, "fov": 60.0 }, "vector": true } }), 2);
    for (i, a) in acts.iter().enumerate() {
        send("step", json!({ "action": a.index() }), 3 + i as u64);
    }
    send("trajectory_request", json!({}), 9999);
    out.retain(|line| !line.contains("\"type\":\"hello\""));
    out
}

#[test]
fn protocol_sessions_agree_byte_for_byte() {
    let acts = actions(400, 8);
    let a = session_transcript(FORAGING, 17, &acts);
    let b = session_transcript(FORAGING, 17, &acts);
    assert_eq!(a.len(), 403);
    assert_eq!(a, b);
    assert!(a.last().unwrap().contains("\"type\":\"trajectory\""));
}
