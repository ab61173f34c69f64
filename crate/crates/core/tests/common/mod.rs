//! Deterministic random-instance generators shared by the integration
//! suites. Values live on a 0.05 grid so that ties and duplicate outcome
//! vectors occur regularly.

// Not every test target uses every helper.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsdom::{CredalSet, Mtdp, StateSpace};

pub fn random_mtdp(seed: u64) -> Mtdp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_actions = rng.gen_range(2..=4);
    let num_states = rng.gen_range(1..=4);
    let num_targets = rng.gen_range(1..=3);
    let num_cardinal = rng.gen_range(0..=num_targets);
    let values: Vec<Vec<Vec<f64>>> = (0..num_actions)
        .map(|_| {
            (0..num_states)
                .map(|_| {
                    (0..num_targets)
                        .map(|_| rng.gen_range(0..=20) as f64 * 0.05)
                        .collect()
                })
                .collect()
        })
        .collect();
    let names = (0..num_actions).map(|i| format!("A{}", i + 1)).collect();
    Mtdp::new(
        StateSpace::of_size(num_states).unwrap(),
        names,
        values,
        num_cardinal,
    )
    .unwrap()
}

/// A credal set over `m` states, rotating through the ordered family, the
/// full simplex and random extreme-point sets.
pub fn random_credal(seed: u64, m: usize) -> CredalSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545f4914f6cdd1d));
    let space = StateSpace::of_size(m).unwrap();
    match rng.gen_range(0..3u8) {
        0 => CredalSet::ordered_family(space),
        1 => CredalSet::full_simplex(space),
        _ => {
            let k = rng.gen_range(1..=3usize);
            let points: Vec<Vec<f64>> = (0..k)
                .map(|_| {
                    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=10) as f64).collect();
                    let total: f64 = raw.iter().sum();
                    raw.into_iter().map(|w| w / total).collect()
                })
                .collect();
            CredalSet::from_extreme_points(space, vec![], points).unwrap()
        }
    }
}

/// Mix every extreme point with the uniform distribution so all of them
/// become strictly positive.
pub fn positive_perturbation(cs: &CredalSet, eps: f64) -> CredalSet {
    let m = cs.space().len();
    let uniform = 1.0 / m as f64;
    let points: Vec<Vec<f64>> = cs
        .extreme_points()
        .iter()
        .map(|p| p.iter().map(|&x| (1.0 - eps) * x + eps * uniform).collect())
        .collect();
    CredalSet::from_extreme_points(cs.space().clone(), vec![], points).unwrap()
}
