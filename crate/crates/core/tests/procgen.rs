mod common;

use arena_lab::config::load_config;
use arena_lab::procgen::{exhaustive_count, expand_template, write_battery, Mode, ProcgenError};
use common::fuzz_template;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[test]
fn fuzzed_templates_expand_to_the_product_and_validate() {
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = fuzz_template(&mut rng);
        let product: u128 = t.cardinalities.iter().product();
        assert_eq!(exhaustive_count(&t.text).unwrap(), product, "seed {seed}\n{}", t.text);
        let out = expand_template(&t.text, Mode::Exhaustive).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{}", t.text));
        assert_eq!(out.len() as u128, product);
        for e in &out {
            assert!(load_config(&e.text).is_ok(), "seed {seed}:\n{}", e.text);
        }
    }
}

#[test]
fn distinct_choices_give_distinct_files() {
    let template = "!ArenaConfig\narenas:\n  0: !Arena\n    t: !Choice [100, 200, 300]\n    items:\n    - !Item\n      name: !Choice [Wall, GoodGoal]\n";
    let out = expand_template(template, Mode::Exhaustive).unwrap();
    let texts: BTreeSet<&str> = out.iter().map(|e| e.text.as_str()).collect();
    assert_eq!(texts.len(), 6);
}

#[test]
fn labels_drive_conditionals() {
    let template = "!ArenaConfig\narenas:\n  0: !Arena\n    t: !Label {name: len, value: !Choice [100, 200]}\n    pass_mark: !If {label: len, equals: 100, then: 1, else: 2}\n";
    let out = expand_template(template, Mode::Exhaustive).unwrap();
    let pairs: Vec<(u64, f64)> = out
        .iter()
        .map(|e| {
            let (cfg, _) = load_config(&e.text).unwrap();
            (cfg.arenas[0].t, cfg.arenas[0].pass_mark)
        })
        .collect();
    assert_eq!(pairs, vec![(100, 1.0), (200, 2.0)]);
}

#[test]
fn sampling_is_seeded() {
    let template =
        "!ArenaConfig\narenas:\n  0: !Arena\n    t: !RandomRange [100, 900]\n    items:\n    - !Item\n      name: Wall\n      colors:\n      - !RandomColor\n";
    assert!(matches!(expand_template(template, Mode::Exhaustive), Err(ProcgenError::InfiniteDomain { .. })));
    let a = expand_template(template, Mode::Sample { count: 20, seed: 4 }).unwrap();
    let b = expand_template(template, Mode::Sample { count: 20, seed: 4 }).unwrap();
    let c = expand_template(template, Mode::Sample { count: 20, seed: 5 }).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for e in &a {
        let (cfg, _) = load_config(&e.text).unwrap();
        assert!((100..=900).contains(&cfg.arenas[0].t));
    }
}

#[test]
fn oversized_expansions_are_refused() {
    let choice = "!Choice [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]";
    let template = format!(
        "!ArenaConfig\narenas:\n  0: !Arena\n    items:\n    - !Item\n      name: Wall\n      positions:\n      - !Vector3 {{x: {choice}, y: {choice}, z: {choice}}}\n      rotations: [{choice}, {choice}, {choice}]\n"
    );
    assert!(matches!(expand_template(&template, Mode::Exhaustive), Err(ProcgenError::TooLarge(n)) if n == 1_000_000));
}

#[test]
fn battery_files_and_manifest() {
    let template = "!ArenaConfig\narenas:\n  0: !Arena\n    t: !Choice [100, 200]\n";
    let out = expand_template(template, Mode::Exhaustive).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_battery("tiny", &out, dir.path()).unwrap();
    let text = std::fs::read_to_string(manifest).unwrap();
    assert_eq!(text.lines().next().unwrap(), "file,directive,value,seed");
    assert_eq!(text.lines().count(), 3);
    for name in ["tiny_000.yml", "tiny_001.yml"] {
        let body = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(load_config(&body).is_ok());
    }
}
