//! Channel S-matrix coefficients, phase shifts and cross sections.
//!
//! `S_ℓ(k) = det K_ℓ(k² − i0) / det K_ℓ(k² + i0) = conj(D)/D` with
//! `D = det K_ℓ(k² + i0)`, so `δ_ℓ = −arg D` modulo π. The direct route
//! `1 − 2ik·bᵀΘK⁻¹b` gives the same number through the matrix determinant
//! lemma and is kept as an independent evaluation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary::{b_vector, k_matrix, BoundarySide};
use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::model::ShellConfig;

/// `|det K⁺|` below this fraction of the Hadamard bound is reported as
/// numerically singular.
pub const SINGULAR_DET_RATIO: f64 = 1e-13;

/// Largest ratio between adjacent wavenumbers before [`phase_curve`]
/// inserts intermediate points.
pub const MAX_GRID_RATIO: f64 = 1.1;

const MAX_REFINE_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DetRatio,
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResult {
    pub ell: usize,
    pub k: f64,
    pub s_value: Complex64,
    /// Principal value in (−π/2, π/2] for the direct route, (−π, π] for the
    /// determinant route.
    pub delta: f64,
    pub det_plus: Complex64,
    pub method: Method,
}

/// Product of row norms of `K`, an upper bound for `|det K|`.
fn hadamard_bound(k: &CMatrix) -> f64 {
    (0..k.dim())
        .map(|i| {
            (0..k.dim())
                .map(|j| k[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .product()
}

/// `S_ℓ(k)` from the ratio of boundary determinants.
pub fn s_coefficient(cfg: &ShellConfig, ell: usize, k: f64) -> Result<ChannelResult> {
    let kp = k_matrix(cfg, ell, k, BoundarySide::Plus)?;
    let det = kp.determinant();
    let threshold = SINGULAR_DET_RATIO * hadamard_bound(&kp);
    if det.norm() < threshold || !det.is_finite() {
        return Err(Error::NearSingularBoundary {
            det_abs: det.norm(),
            threshold,
        });
    }
    Ok(ChannelResult {
        ell,
        k,
        s_value: det.conj() / det,
        delta: -det.arg(),
        det_plus: det,
        method: Method::DetRatio,
    })
}

/// `S_ℓ(k) = 1 − 2ik·bᵀΘ·K_ℓ(k²+i0)⁻¹·b`.
pub fn s_coefficient_direct(cfg: &ShellConfig, ell: usize, k: f64) -> Result<ChannelResult> {
    let kp = k_matrix(cfg, ell, k, BoundarySide::Plus)?;
    let b: Vec<Complex64> = b_vector(cfg, ell, k)?
        .values
        .into_iter()
        .map(Complex64::from)
        .collect();
    let lu = kp.lu();
    let c = lu.solve(&b)?;
    let quad: Complex64 = b
        .iter()
        .zip(cfg.thetas())
        .zip(&c)
        .map(|((bi, th), ci)| bi * th * ci)
        .sum();
    let s_value = Complex64::new(1.0, 0.0) - Complex64::new(0.0, 2.0 * k) * quad;
    let mut delta = 0.5 * s_value.arg();
    if delta <= -FRAC_PI_2 {
        delta += PI;
    }
    Ok(ChannelResult {
        ell,
        k,
        s_value,
        delta,
        det_plus: lu.determinant(),
        method: Method::Direct,
    })
}

/// Evaluates [`s_coefficient`] at every `k`, in parallel, preserving order.
pub fn s_sweep(cfg: &ShellConfig, ell: usize, ks: &[f64]) -> Vec<Result<ChannelResult>> {
    ks.par_iter().map(|&k| s_coefficient(cfg, ell, k)).collect()
}

/// Continuous phase shift along an increasing wavenumber grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub ell: usize,
    pub k_grid: Vec<f64>,
    pub deltas: Vec<f64>,
    pub branch_anchor: String,
}

/// Reduces a phase increment modulo π into (−π/2, π/2].
fn reduce_mod_pi(d: f64) -> f64 {
    let r = d - PI * (d / PI).round();
    if r <= -FRAC_PI_2 {
        r + PI
    } else {
        r
    }
}

fn principal_delta(cfg: &ShellConfig, ell: usize, k: f64) -> Result<f64> {
    Ok(s_coefficient(cfg, ell, k)?.delta)
}

/// Continuous increment of δ from `(k_lo, d_lo)` to `(k_hi, d_hi)`, inserting
/// geometric midpoints until every sub-step is short and unambiguous.
fn tracked_increment(
    cfg: &ShellConfig,
    ell: usize,
    (k_lo, d_lo): (f64, f64),
    (k_hi, d_hi): (f64, f64),
    depth: u32,
) -> Result<f64> {
    let step = reduce_mod_pi(d_hi - d_lo);
    if step.abs() <= FRAC_PI_4 && k_hi / k_lo <= MAX_GRID_RATIO {
        return Ok(step);
    }
    if depth >= MAX_REFINE_DEPTH {
        if step.abs() < FRAC_PI_2 {
            return Ok(step);
        }
        return Err(Error::GridTooCoarse {
            k_lo,
            k_hi,
            jump: step.abs(),
        });
    }
    let k_mid = (k_lo * k_hi).sqrt();
    let d_mid = principal_delta(cfg, ell, k_mid)?;
    let left = tracked_increment(cfg, ell, (k_lo, d_lo), (k_mid, d_mid), depth + 1)?;
    let right = tracked_increment(cfg, ell, (k_mid, d_mid), (k_hi, d_hi), depth + 1)?;
    Ok(left + right)
}

/// Unwrapped phase shift on `k_grid`, shifted by a multiple of π so that the
/// value at the smallest wavenumber lies in (−π/2, π/2].
pub fn phase_curve(cfg: &ShellConfig, ell: usize, k_grid: &[f64]) -> Result<PhaseCurve> {
    if k_grid.is_empty() {
        return Err(Error::InvalidArgument("empty wavenumber grid".into()));
    }
    if k_grid[0] <= 0.0 || k_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "wavenumber grid must be positive and strictly increasing".into(),
        ));
    }
    let principal: Vec<f64> = k_grid
        .par_iter()
        .map(|&k| principal_delta(cfg, ell, k))
        .collect::<Result<_>>()?;
    let increments: Vec<f64> = (0..k_grid.len() - 1)
        .into_par_iter()
        .map(|i| {
            tracked_increment(
                cfg,
                ell,
                (k_grid[i], principal[i]),
                (k_grid[i + 1], principal[i + 1]),
                0,
            )
        })
        .collect::<Result<_>>()?;
    let mut deltas = Vec::with_capacity(k_grid.len());
    deltas.push(reduce_mod_pi(principal[0]));
    for inc in increments {
        let last = *deltas.last().unwrap();
        deltas.push(last + inc);
    }
    Ok(PhaseCurve {
        ell,
        k_grid: k_grid.to_vec(),
        deltas,
        branch_anchor: format!(
            "delta({:e}) shifted by a multiple of pi into (-pi/2, pi/2]",
            k_grid[0]
        ),
    })
}

/// `ℓ_max = ⌈k·R_N⌉ + 8`.
pub fn default_ell_max(cfg: &ShellConfig, k: f64) -> usize {
    (k * cfg.outer_radius()).ceil() as usize + 8
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub k: f64,
    pub ell_max: usize,
    pub total: f64,
    /// `(4π/k²)(2ℓ+1)·sin²δ_ℓ` for each ℓ.
    pub partial: Vec<f64>,
}

/// Total cross section `(4π/k²)·Σ (2ℓ+1) sin²δ_ℓ`, with `sin²δ = |S−1|²/4`.
pub fn total_cross_section(
    cfg: &ShellConfig,
    k: f64,
    ell_max: Option<usize>,
) -> Result<CrossSection> {
    let ell_max = ell_max.unwrap_or_else(|| default_ell_max(cfg, k));
    let partial = (0..=ell_max)
        .map(|ell| {
            let s = s_coefficient(cfg, ell, k)?.s_value;
            let sin2 = (s - 1.0).norm_sqr() / 4.0;
            Ok(4.0 * PI / (k * k) * (2 * ell + 1) as f64 * sin2)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CrossSection {
        k,
        ell_max,
        total: partial.iter().sum(),
        partial,
    })
}
