use arena_lab::config::{instantiate_arena, load_config};
use arena_lab::physics::PhysicsParams;
use arena_lab::procgen::{expand_template, Mode};
use arena_lab_bench::{config, MAZE};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn parse(c: &mut Criterion) {
    c.bench_function("load_config/radial_arm_maze", |b| b.iter(|| black_box(load_config(MAZE).unwrap())));
    let cfg = config(MAZE);
    let params = PhysicsParams::default();
    c.bench_function("instantiate/radial_arm_maze", |b| b.iter(|| black_box(instantiate_arena(&cfg.arenas[0], &params, 3).unwrap())));
    let template = MAZE.replacen("t: 500", "t: !Choice [250, 500, 750, 1000]", 1).replacen("pass_mark: 8", "pass_mark: !Choice [4, 8]", 1);
    c.bench_function("procgen/maze_8", |b| b.iter(|| black_box(expand_template(&template, Mode::Exhaustive).unwrap())));
}

criterion_group!(benches, parse);
criterion_main!(benches);
