use arena_lab::config::{load_config, parse_config, serialize_config, validate, NumAttr};
use arena_lab::entities::EntityKind;
use proptest::prelude::*;
use std::collections::BTreeMap;

const MAZE: &str = include_str!("../../../configs/radial_arm_maze.yml");

fn kind_counts(text: &str) -> BTreeMap<String, usize> {
    let (cfg, _) = load_config(text).unwrap();
    let mut counts = BTreeMap::new();
    for item in &cfg.arenas[0].items {
        *counts.entry(item.kind().name().to_string()).or_default() += item.instance_count();
    }
    counts
}

#[test]
fn radial_maze_parses_exactly() {
    let (cfg, diags) = load_config(MAZE).unwrap();
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(cfg.arenas.len(), 1);
    let arena = &cfg.arenas[0];
    assert_eq!((arena.pass_mark, arena.t), (8.0, 500));
    let expected: BTreeMap<String, usize> = [("Agent", 1), ("Wall", 8), ("Ramp", 8), ("GoodGoal", 1), ("GoodGoalMulti", 1), ("DecayGoal", 1), ("RipenGoal", 1)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    assert_eq!(kind_counts(MAZE), expected);
    let decay = arena.items.iter().find(|i| i.kind() == EntityKind::DecayGoal).unwrap();
    let first = |a: NumAttr| decay.number(a)[0].value;
    assert_eq!(first(NumAttr::InitialValues), 2.5);
    assert_eq!(first(NumAttr::FinalValues), 0.0);
    assert_eq!(first(NumAttr::Delays), 100.0);
    assert_eq!(first(NumAttr::ChangeRates).abs(), 0.003);
}

#[test]
fn shipped_configs_are_clean() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut seen = 0;
    for entry in walk(std::path::Path::new(dir)) {
        let text = std::fs::read_to_string(&entry).unwrap();
        let (_, diags) = load_config(&text).unwrap_or_else(|e| panic!("{}: {e}", entry.display()));
        assert!(diags.iter().all(|d| !d.is_error()), "{}", entry.display());
        seen += 1;
    }
    assert!(seen >= 10, "{seen}");
}

fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else if p.extension().is_some_and(|x| x == "yml" || x == "yaml") {
            out.push(p);
        }
    }
    out
}

#[test]
fn errors_point_at_the_offending_value() {
    let head = "!ArenaConfig\narenas:\n  0: !Arena\n    t: 100\n    items:\n    - !Item\n";
    let first_error = |text: String| load_config(&text).unwrap_err().0.into_iter().find(|d| d.is_error()).unwrap();
    let e = first_error(format!("{head}      name: GoodGoal\n      positions:\n      - !Vector3 {{x: 5, y: 0, z: 50}}\n"));
    assert_eq!((e.line, e.column), (9, 9), "{e:?}");
    assert!(e.message.contains("out of arena bounds"));
    let e = first_error(format!("{head}      name: Wal\n"));
    assert_eq!((e.line, e.column), (7, 13), "{e:?}");
    assert!(e.message.contains("`Wal`"));
}

#[test]
fn duplicate_keys_and_unknown_tags_are_errors() {
    for text in [
        "!ArenaConfig\narenas:\n  0: !Arena\n    t: 100\n    t: 200\n",
        "!ArenaConfig\narenas:\n  0: !Arena\n    items:\n    - !Item\n      name: Wall\n      positions:\n      - !Vector4 {x: 1, y: 0, z: 1}\n",
        "!ArenaConfig\narenas:\n  0: !Arena\n    items:\n    - !Item\n      name: Wall\n      sizes:\n      - !Vector3 {x: 0, y: 1, z: 1}\n",
    ] {
        assert!(load_config(text).is_err(), "{text}");
    }
}

#[test]
fn missing_agent_is_only_a_warning() {
    let text = "!ArenaConfig\narenas:\n  0: !Arena\n    items:\n    - !Item\n      name: Wall\n";
    let (_, diags) = load_config(text).unwrap();
    assert_eq!(diags.len(), 1);
    assert!(!diags[0].is_error());
}

fn number(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_map(|x| (x * 100.0).round() / 100.0)
}

fn item_text() -> impl Strategy<Value = String> {
    let kinds = prop::sample::select(vec!["Wall", "GoodGoal", "BadGoal", "Ramp", "HotZone", "LightBlock", "DecayGoal", "SpawnerButton", "SignBoard"]);
    (kinds, prop::collection::vec((number(0.0, 40.0), number(0.0, 40.0), number(0.0, 360.0)), 1..4), number(0.5, 5.0), any::<bool>()).prop_map(
        |(kind, places, size, colored)| {
            let mut s = format!("    - !Item\n      name: {kind}\n      positions:\n");
            for (x, z, _) in &places {
                s.push_str(&format!("      - !Vector3 {{x: {x}, y: 0, z: {z}}}\n"));
            }
            let rots: Vec<String> = places.iter().map(|p| p.2.to_string()).collect();
            s.push_str(&format!("      rotations: [{}]\n", rots.join(", ")));
            if kind != "SignBoard" && kind != "SpawnerButton" {
                s.push_str(&format!("      sizes:\n      - !Vector3 {{x: {size}, y: {size}, z: {size}}}\n"));
            }
            if colored && matches!(kind, "Wall" | "Ramp") {
                s.push_str("      colors:\n      - !RGB {r: 10, g: 200, b: -1}\n");
            }
            match kind {
                "DecayGoal" => s.push_str(&format!("      initialValues: [{size}]\n      finalValues: [0]\n      delays: [10]\n      changeRates: [-0.01]\n")),
                "SpawnerButton" => {
                    s.push_str("      rewardWeights: [1, 0, 2]\n      spawnProbability: [0.5]\n      rewardSpawnPos:\n      - !Vector3 {x: 20, y: 0, z: 35}\n")
                }
                "SignBoard" => s.push_str("      symbolNames: [\"left-arrow\"]\n"),
                _ => {}
            }
            s
        },
    )
}

fn config_text() -> impl Strategy<Value = String> {
    (prop::collection::vec((0u64..1000, number(-5.0, 5.0), prop::collection::vec(item_text(), 0..6)), 1..3), any::<bool>()).prop_map(|(arenas, notify)| {
        let mut s = format!("!ArenaConfig\nshowNotification: {notify}\narenas:\n");
        for (i, (t, pass, items)) in arenas.iter().enumerate() {
            s.push_str(&format!("  {i}: !Arena\n    t: {t}\n    pass_mark: {pass}\n    items:\n{}", items.concat()));
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn serialize_then_parse_is_identity(text in config_text()) {
        let (cfg, diags) = parse_config(&text).unwrap();
        let mut all = diags;
        all.extend(validate(&cfg));
        prop_assert!(all.iter().all(|d| !d.is_error()), "{:?}\n{}", all, text);
        let emitted = serialize_config(&cfg);
        let (again, _) = parse_config(&emitted).unwrap();
        prop_assert_eq!(serde_json::to_value(&cfg).unwrap(), serde_json::to_value(&again).unwrap());
        prop_assert_eq!(serialize_config(&again), emitted);
    }

    #[test]
    fn parser_never_panics(text in "[ -~\n]{0,200}") {
        let _ = parse_config(&text);
    }
}
