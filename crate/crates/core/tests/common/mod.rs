#![allow(dead_code)]

use nehari_core::nehari_solver::{evaluate, RadialBall, RadialPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth radial profile vanishing at `r = R`: a random cosine series.
fn random_profile(rng: &mut ChaCha8Rng, grid: &RadialBall, positive: bool) -> Vec<f64> {
    let modes: Vec<f64> = (0..5)
        .map(|k| {
            let a: f64 = rng.gen_range(-1.0..1.0) / (1.0 + k as f64);
            if k == 0 && positive {
                1.0 + a.abs()
            } else if positive {
                0.3 * a
            } else {
                a
            }
        })
        .collect();
    let scale: f64 = rng.gen_range(0.2..3.0);
    grid.radii()
        .iter()
        .map(|&r| {
            let x = r / grid.radius;
            let s: f64 = modes
                .iter()
                .enumerate()
                .map(|(k, a)| a * ((k as f64 + 0.5) * std::f64::consts::PI * x).cos())
                .sum();
            scale * s
        })
        .collect()
}

pub fn random_pair(rng: &mut ChaCha8Rng, grid: &RadialBall, positive: bool) -> RadialPair {
    let u = random_profile(rng, grid, positive);
    let v = random_profile(rng, grid, positive);
    RadialPair::new(*grid, u, v).unwrap()
}

/// Random pairs with a positive coupling mass.
pub fn admissible_pairs(seed: u64, grid: &RadialBall, lambda: f64, mu: f64, count: usize) -> Vec<RadialPair> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let positive = rng.gen_bool(0.5);
        let pair = random_pair(&mut rng, grid, positive);
        if evaluate(&pair, lambda, mu).admissible {
            out.push(pair);
        }
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
