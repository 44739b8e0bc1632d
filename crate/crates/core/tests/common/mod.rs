#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shellscat::{DoubleShellConfig, ShellConfig};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` sorted distinct radii in `(lo, hi)`.
pub fn radii(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut r: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        r.sort_by(f64::total_cmp);
        if r.windows(2).all(|w| w[1] > w[0]) {
            return r;
        }
    }
}

/// Up to five shells with radii in (0.1, 5) and strengths in (−5, 5).
pub fn random_config(rng: &mut ChaCha8Rng) -> ShellConfig {
    let n = rng.gen_range(1..=5);
    let r = radii(rng, n, 0.1, 5.0);
    let a = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    ShellConfig::new(r, a).unwrap()
}

pub fn random_double(rng: &mut ChaCha8Rng) -> DoubleShellConfig {
    let r = radii(rng, 2, 0.1, 5.0);
    DoubleShellConfig::new(
        r[0],
        r[1],
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
    )
    .unwrap()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// `points` log-spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let span = (hi / lo).ln();
    (0..points)
        .map(|i| lo * (span * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Reduces a phase into (−π/2, π/2].
pub fn mod_pi(d: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let r = d - PI * (d / PI).round();
    if r <= -FRAC_PI_2 {
        r + PI
    } else {
        r
    }
}
