use arena_lab::config::load_config;
use arena_lab::episode::{Action, DoneReason, Episode, EpisodeError};
use arena_lab::observations::ObservationSpec;
use arena_lab::physics::PhysicsParams;

fn arena(t: u64, items: &str) -> String {
    format!("!ArenaConfig\narenas:\n  0: !Arena\n    pass_mark: 0\n    t: {t}\n    items:\n{items}")
}

fn agent_at(x: f64, z: f64, yaw: f64) -> String {
    format!("    - !Item\n      name: Agent\n      positions:\n      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n      rotations: [{yaw}]\n")
}

fn item(name: &str, x: f64, z: f64, size: (f64, f64, f64)) -> String {
    format!(
        "    - !Item\n      name: {name}\n      positions:\n      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n      sizes:\n      - !Vector3 {{x: {}, y: {}, z: {}}}\n",
        size.0, size.1, size.2
    )
}

fn start(text: &str, seed: u64) -> Episode {
    let (cfg, _) = load_config(text).unwrap();
    Episode::reset(&cfg, 0, seed, &PhysicsParams::default(), ObservationSpec::default()).unwrap().0
}

#[test]
fn idle_episode_times_out_with_minus_one() {
    let mut ep = start(&arena(100, &agent_at(20.0, 20.0, 0.0)), 1);
    assert_eq!(ep.state.health, 100.0);
    for _ in 0..100 {
        ep.step(Action::NoAction).unwrap();
    }
    assert!(ep.state.done);
    assert!((ep.state.reward + 1.0).abs() < 1e-9, "{}", ep.state.reward);
    assert_eq!(ep.state.health, 0.0);
    assert_eq!(ep.state.done_reason, Some(DoneReason::Timeout));
    assert!(matches!(ep.step(Action::NoAction), Err(EpisodeError::AlreadyDone)));
}

#[test]
fn goal_heals_by_its_value() {
    for (before, after) in [(40.0, 90.0), (80.0, 100.0)] {
        let text = arena(0, &(agent_at(20.0, 20.0, 0.0) + &item("GoodGoalMulti", 20.0, 23.0, (0.5, 0.5, 0.5))));
        let mut ep = start(&text, 1);
        ep.state.health = before;
        let mut steps = 0;
        while ep.state.reward == 0.0 {
            ep.step(Action::Forwards).unwrap();
            steps += 1;
            assert!(steps < 50, "goal never reached");
        }
        assert!((ep.state.reward - 0.5).abs() < 1e-12);
        assert_eq!(ep.state.health, after);
        assert!(!ep.state.done);
    }
}

#[test]
fn hot_zone_drains_ten_times_faster() {
    let text = arena(500, &(agent_at(20.0, 20.0, 0.0) + &item("HotZone", 20.0, 20.0, (6.0, 2.0, 6.0))));
    let mut ep = start(&text, 1);
    for _ in 0..50 {
        ep.step(Action::NoAction).unwrap();
    }
    assert!((ep.state.reward + 1.0).abs() < 1e-9, "{}", ep.state.reward);
    assert_eq!(ep.state.done_reason, Some(DoneReason::HealthZero));
}

#[test]
fn death_zone_wins_over_hot_zone() {
    let items = agent_at(20.0, 20.0, 0.0) + &item("HotZone", 20.0, 20.0, (6.0, 2.0, 6.0)) + &item("DeathZone", 21.0, 20.0, (4.0, 2.0, 4.0));
    let mut ep = start(&arena(0, &items), 1);
    let r = ep.step(Action::NoAction).unwrap();
    assert!(r.done);
    assert_eq!(r.reward_delta, -1.0);
    assert_eq!(ep.state.done_reason, Some(DoneReason::DeathZone));
    assert!(!ep.finish().unwrap().passed);
}

#[test]
fn frozen_agent_does_not_pay_or_move() {
    let text = arena(100, &(agent_at(20.0, 20.0, 0.0) + "      frozenAgentDelays: [5]\n"));
    let mut ep = start(&text, 1);
    assert_eq!(ep.state.frozen_remaining, 5);
    for _ in 0..5 {
        ep.step(Action::Forwards).unwrap();
    }
    assert_eq!(ep.state.reward, 0.0);
    assert_eq!(ep.world.agent().body.pose.position.z, 20.0);
    ep.step(Action::Forwards).unwrap();
    assert!(ep.world.agent().body.pose.position.z > 20.0);
    assert!((ep.state.reward + 0.01).abs() < 1e-12);
}

#[test]
fn sixty_left_turns_come_full_circle() {
    let mut ep = start(&arena(0, &agent_at(20.0, 20.0, 30.0)), 1);
    for _ in 0..60 {
        ep.step(Action::Left).unwrap();
    }
    let yaw = ep.world.agent().body.pose.yaw;
    assert!((yaw - 30.0).abs() < 1e-9, "{yaw}");
}

#[test]
fn bad_arena_index_is_an_error() {
    let (cfg, _) = load_config(&arena(0, &agent_at(20.0, 20.0, 0.0))).unwrap();
    assert!(matches!(Episode::reset(&cfg, 3, 0, &PhysicsParams::default(), ObservationSpec::default()), Err(EpisodeError::NoArena { index: 3, count: 1 })));
}
