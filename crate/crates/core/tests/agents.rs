use arena_lab::agents::{random_policy_step, rank_sum_test, Duration, RandomMemory, RandomPolicyParams};
use arena_lab::entities::{build_entity, press_button, ButtonState, Entity, EntityId, EntityKind, EntitySpec};
use arena_lab::math::Vec3;
use arena_lab::physics::{PhysicsParams, Pose};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn button(weights: [f64; 3], probability: f64) -> Entity {
    let spec = EntitySpec { reward_weights: Some(weights), spawn_probability: Some(probability), ..EntitySpec::of(EntityKind::SpawnerButton) };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    build_entity(EntityId(1), &spec, Pose::new(Vec3::new(20.0, 0.0, 20.0), 0.0), None, &PhysicsParams::default(), &mut rng).unwrap()
}

/// Kind counts over `n` presses, with the cooldown cleared before each.
fn press_counts(entity: &mut Entity, n: usize, seed: u64) -> ([usize; 3], usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0; 3];
    let mut none = 0;
    for _ in 0..n {
        entity.dispenser.as_mut().unwrap().button.as_mut().unwrap().cooldown_remaining = 0;
        match press_button(entity, &mut rng) {
            Some(req) => counts[ButtonState::REWARD_KINDS.iter().position(|k| *k == req.kind).unwrap()] += 1,
            None => none += 1,
        }
    }
    (counts, none)
}

#[test]
fn equal_weights_give_equal_kind_frequencies() {
    let mut b = button([1.0, 1.0, 1.0], 1.0);
    let (counts, none) = press_counts(&mut b, 10_000, 3);
    assert_eq!(none, 0);
    for c in counts {
        let f = c as f64 / 10_000.0;
        assert!((f - 1.0 / 3.0).abs() <= 0.02, "{counts:?}");
    }
}

#[test]
fn single_weight_only_spawns_that_kind() {
    let mut b = button([1.0, 0.0, 0.0], 1.0);
    assert_eq!(press_counts(&mut b, 1000, 1), ([1000, 0, 0], 0));
}

#[test]
fn spawn_probability_thins_presses() {
    let mut b = button([1.0, 1.0, 1.0], 0.25);
    let (counts, none) = press_counts(&mut b, 10_000, 5);
    let spawned = counts.iter().sum::<usize>() as f64 / 10_000.0;
    assert!((spawned - 0.25).abs() < 0.02, "{spawned}");
    assert_eq!(counts.iter().sum::<usize>() + none, 10_000);
}

#[test]
fn cooldown_blocks_repeat_presses() {
    let mut b = button([1.0, 1.0, 1.0], 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(press_button(&mut b, &mut rng).is_some());
    assert!(press_button(&mut b, &mut rng).is_none());
}

#[test]
fn asymptotic_p_matches_reference_values() {
    // reference: two-sided asymptotic Mann-Whitney with continuity correction
    let a = [3.1, 4.5, 2.2, 8.0, 5.5, 6.1, 7.7, 1.0, 9.3, 4.4, 5.0, 6.6, 2.9, 3.3, 8.8, 7.1, 6.0, 5.2, 4.9, 3.0, 7.5, 8.1];
    let b = [1.2, 2.5, 0.2, 3.0, 4.5, 1.1, 2.7, 3.0, 5.3, 0.4, 2.0, 1.6, 0.9, 3.9, 2.8, 1.1, 4.0, 2.2, 1.9, 0.3, 2.6, 3.4, 1.0];
    let r = rank_sum_test(&a, &b).unwrap();
    assert!(!r.exact);
    assert_eq!(r.u, 446.5);
    assert!((r.p_value / 1.1685687537702043e-05 - 1.0).abs() < 1e-6, "{}", r.p_value);
}

#[test]
fn random_policy_is_uniform_with_normal_holds() {
    let params = RandomPolicyParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut memory = RandomMemory::default();
    let mut counts = [0usize; 9];
    let mut holds = Vec::new();
    let mut run = 0;
    for _ in 0..200_000 {
        let a = random_policy_step(&params, &mut rng, &mut memory);
        counts[a.index()] += 1;
        if memory.remaining == 0 {
            holds.push(run + 1);
            run = 0;
        } else {
            run += 1;
        }
    }
    for c in counts {
        assert!((c as f64 / 200_000.0 - 1.0 / 9.0).abs() < 0.01, "{counts:?}");
    }
    let mean = holds.iter().sum::<u64>() as f64 / holds.len() as f64;
    assert!((mean - 5.0).abs() < 0.05, "{mean}");
}

#[test]
fn duration_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        assert!(Duration::Normal { mean: 0.0, sd: 3.0 }.sample(&mut rng) >= 1);
        assert_eq!(Duration::Fixed { steps: 4 }.sample(&mut rng), 4);
    }
    let g = Duration::Geometric { p: 0.25 };
    let mean = (0..20_000).map(|_| g.sample(&mut rng)).sum::<u64>() as f64 / 20_000.0;
    assert!((mean - 4.0).abs() < 0.1, "{mean}");
}

/// Brute-force U: pairs won plus half the ties.
fn pair_u(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .flat_map(|x| {
            b.iter().map(move |y| {
                if x > y {
                    1.0
                } else if x == y {
                    0.5
                } else {
                    0.0
                }
            })
        })
        .sum()
}

/// Brute-force exact two-sided p by enumerating every relabelling.
fn permutation_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let centre = a.len() as f64 * b.len() as f64 / 2.0;
    let observed = (pair_u(a, b) - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (x, y): (Vec<(usize, f64)>, Vec<(usize, f64)>) = pooled.iter().copied().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
        let x: Vec<f64> = x.into_iter().map(|p| p.1).collect();
        let y: Vec<f64> = y.into_iter().map(|p| p.1).collect();
        total += 1;
        if (pair_u(&x, &y) - centre).abs() >= observed - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

proptest! {
    #[test]
    fn u_matches_pair_counting(a in proptest::collection::vec(0u8..20, 1..40), b in proptest::collection::vec(0u8..20, 1..40)) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        prop_assert!((r.u - pair_u(&a, &b)).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&r.p_value));
        let swapped = rank_sum_test(&b, &a).unwrap();
        prop_assert!((swapped.p_value - r.p_value).abs() < 1e-12);
    }

    #[test]
    fn exact_p_matches_enumeration(a in proptest::collection::vec(0u8..6, 1..7), b in proptest::collection::vec(0u8..6, 1..7)) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        prop_assert!(r.exact);
        let oracle = permutation_p(&a, &b);
        prop_assert!((r.p_value - oracle).abs() < 1e-9, "{} vs {}", r.p_value, oracle);
    }
}
