//! Negative eigenvalues `−κ²` per channel, located as the zeros of
//! `det K_ℓ(−κ²)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::k_matrix_negative;
use crate::error::{Error, Result};
use crate::model::ShellConfig;

/// Lower end of the κ scan.
pub const KAPPA_MIN: f64 = 1e-6;
/// Largest ratio between neighbouring κ samples.
pub const MAX_GRID_RATIO: f64 = 1.05;
/// Relative bracket width at which bisection stops.
pub const ROOT_REL_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    pub ell: usize,
    pub kappa: f64,
    pub energy: f64,
    pub det_residual: f64,
}

/// `det(I + m_ℓ(−κ²)·Θ)`, a real number.
pub fn det_negative_energy(cfg: &ShellConfig, ell: usize, kappa: f64) -> Result<f64> {
    Ok(k_matrix_negative(cfg, ell, kappa)?.determinant().re)
}

/// Geometric κ grid on `[KAPPA_MIN, kappa_max]` with at least `points`
/// samples and ratio at most [`MAX_GRID_RATIO`].
fn kappa_grid(kappa_max: f64, points: usize) -> Vec<f64> {
    let span = (kappa_max / KAPPA_MIN).ln();
    let needed = (span / MAX_GRID_RATIO.ln()).ceil() as usize + 1;
    let n = points.max(needed).max(2);
    (0..n)
        .map(|i| KAPPA_MIN * (span * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Scans `det K_ℓ(−κ²)` for sign changes and refines each by bisection.
/// Roots are returned in descending order of κ (ascending energy).
///
/// Zeros of even multiplicity do not change sign and are not found.
pub fn find_bound_states(
    cfg: &ShellConfig,
    ell: usize,
    kappa_max: f64,
    grid_points: usize,
) -> Result<Vec<BoundState>> {
    if !(kappa_max > KAPPA_MIN && kappa_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kappa_max must exceed {KAPPA_MIN}, got {kappa_max}"
        )));
    }
    if grid_points < 64 {
        return Err(Error::InvalidArgument(format!(
            "need at least 64 grid points, got {grid_points}"
        )));
    }
    if cfg.is_free() {
        return Ok(Vec::new());
    }
    let grid = kappa_grid(kappa_max, grid_points);
    let dets: Vec<f64> = grid
        .par_iter()
        .map(|&kappa| det_negative_energy(cfg, ell, kappa))
        .collect::<Result<_>>()?;

    let mut roots = Vec::new();
    for i in 0..grid.len() - 1 {
        let (d_lo, d_hi) = (dets[i], dets[i + 1]);
        if d_lo == 0.0 {
            roots.push(grid[i]);
        } else if d_lo.signum() != d_hi.signum() && d_hi != 0.0 {
            roots.push(bisect(cfg, ell, grid[i], grid[i + 1], d_lo)?);
        }
    }
    if *dets.last().unwrap() == 0.0 {
        roots.push(*grid.last().unwrap());
    }
    let mut states = roots
        .into_iter()
        .map(|kappa| {
            Ok(BoundState {
                ell,
                kappa,
                energy: -kappa * kappa,
                det_residual: det_negative_energy(cfg, ell, kappa)?.abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    states.sort_by(|a, b| b.kappa.total_cmp(&a.kappa));
    Ok(states)
}

fn bisect(cfg: &ShellConfig, ell: usize, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > ROOT_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = det_negative_energy(cfg, ell, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
