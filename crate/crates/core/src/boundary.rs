//! Reduced boundary matrices `m_ℓ` and `K_ℓ = I + m_ℓ Θ` for one channel.
//!
//! On the positive axis the `+i0` value is built from `j_ℓ` and `h¹_ℓ`; the
//! `−i0` value is its entrywise conjugate. On the negative axis `z = −κ²`
//! the square root is taken as `iκ`, and the entries are real.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::model::ShellConfig;
use crate::specfun::bessel_basis;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerated imaginary residue of `m_ℓ(−κ²)` entries, relative to the entry.
pub const BRANCH_TOLERANCE: f64 = 1e-10;

/// Which side of the positive real axis the energy approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundarySide {
    /// `k² + i0`
    Plus,
    /// `k² − i0`
    Minus,
}

/// `b_ℓ(k) = (j_ℓ(kR_1), …, j_ℓ(kR_N))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BVector {
    pub ell: usize,
    pub k: f64,
    pub values: Vec<f64>,
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be positive and finite, got {k}"
        )));
    }
    Ok(())
}

/// `(j_ℓ(s·R_j), h¹_ℓ(s·R_j))` for every radius, `s` real or imaginary.
fn radial_values(
    cfg: &ShellConfig,
    ell: usize,
    s: Complex64,
) -> Result<Vec<(Complex64, Complex64)>> {
    cfg.radii()
        .iter()
        .map(|&r| {
            let t = bessel_basis(ell, s * r)?;
            Ok((t.j[ell], t.hankel1(ell)))
        })
        .collect()
}

fn green_matrix(vals: &[(Complex64, Complex64)], prefactor: Complex64) -> CMatrix {
    // Radii are increasing, so min/max of (R_i, R_j) follow the index order.
    CMatrix::from_fn(vals.len(), |i, j| {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        prefactor * vals[lo].0 * vals[hi].1
    })
}

/// `m_ℓ(k² ± i0)`.
pub fn m_matrix(cfg: &ShellConfig, ell: usize, k: f64, side: BoundarySide) -> Result<CMatrix> {
    check_k(k)?;
    let vals = radial_values(cfg, ell, Complex64::from(k))?;
    let plus = green_matrix(&vals, I * k);
    Ok(match side {
        BoundarySide::Plus => plus,
        BoundarySide::Minus => plus.conj(),
    })
}

/// `m_ℓ(k² − i0)` evaluated through the branch `√(k² − i0) = −k` instead of
/// by conjugation. Used only to cross-check [`m_matrix`].
pub fn m_matrix_minus_by_branch(cfg: &ShellConfig, ell: usize, k: f64) -> Result<CMatrix> {
    check_k(k)?;
    let vals = radial_values(cfg, ell, Complex64::from(-k))?;
    Ok(green_matrix(&vals, -I * k))
}

/// `K_ℓ(k² ± i0) = I_N + m_ℓ(k² ± i0)·Θ`.
pub fn k_matrix(cfg: &ShellConfig, ell: usize, k: f64, side: BoundarySide) -> Result<CMatrix> {
    let m = m_matrix(cfg, ell, k, side)?;
    Ok(with_theta(&m, cfg))
}

/// `I + m·Θ` with `Θ` applied as a column scaling.
pub fn with_theta(m: &CMatrix, cfg: &ShellConfig) -> CMatrix {
    let mut out = m.scale_columns(cfg.thetas());
    for i in 0..out.dim() {
        out[(i, i)] += 1.0;
    }
    out
}

/// `m_ℓ(−κ²)`, real and symmetric.
pub fn m_matrix_negative(cfg: &ShellConfig, ell: usize, kappa: f64) -> Result<CMatrix> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kappa must be positive and finite, got {kappa}"
        )));
    }
    let s = Complex64::new(0.0, kappa);
    let vals = radial_values(cfg, ell, s)?;
    let mut m = green_matrix(&vals, I * s);
    for z in m.entries().iter() {
        let residual = z.im.abs();
        if !z.re.is_finite() || residual > BRANCH_TOLERANCE * z.norm() + f64::MIN_POSITIVE {
            return Err(Error::BranchResidual { residual });
        }
    }
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            m[(i, j)].im = 0.0;
        }
    }
    Ok(m)
}

/// `K_ℓ(−κ²) = I + m_ℓ(−κ²)·Θ`.
pub fn k_matrix_negative(cfg: &ShellConfig, ell: usize, kappa: f64) -> Result<CMatrix> {
    Ok(with_theta(&m_matrix_negative(cfg, ell, kappa)?, cfg))
}

pub fn b_vector(cfg: &ShellConfig, ell: usize, k: f64) -> Result<BVector> {
    check_k(k)?;
    let values = cfg
        .radii()
        .iter()
        .map(|&r| Ok(bessel_basis(ell, Complex64::from(k * r))?.j[ell].re))
        .collect::<Result<Vec<f64>>>()?;
    Ok(BVector { ell, k, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(r: f64, alpha: f64) -> ShellConfig {
        ShellConfig::new(vec![r], vec![alpha]).unwrap()
    }

    #[test]
    fn single_shell_entry() {
        let m = m_matrix(&single(1.0, 1.0), 0, 1.0, BoundarySide::Plus).unwrap();
        let want = 1f64.sin() * Complex64::new(1f64.cos(), 1f64.sin());
        assert!((m[(0, 0)] - want).norm() < 1e-15);
        assert!(
            (m[(0, 0)] - Complex64::new(0.454_648_713_412_840_9, 0.708_073_418_273_571_2)).norm()
                < 1e-15
        );
    }

    #[test]
    fn minus_is_conjugate_and_matches_branch_evaluation() {
        let cfg = ShellConfig::new(vec![0.4, 1.1, 2.5], vec![1.5, -2.0, 0.7]).unwrap();
        for ell in [0, 1, 3, 7] {
            for k in [0.03, 0.9, 6.0] {
                let plus = m_matrix(&cfg, ell, k, BoundarySide::Plus).unwrap();
                let minus = m_matrix(&cfg, ell, k, BoundarySide::Minus).unwrap();
                assert_eq!(minus, plus.conj());
                let branch = m_matrix_minus_by_branch(&cfg, ell, k).unwrap();
                let tol = 1e-12 * minus.max_abs();
                assert!((&branch - &minus).max_abs() <= tol, "ell={ell} k={k}");
            }
        }
    }

    #[test]
    fn symmetric() {
        let cfg = ShellConfig::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        for ell in 0..5 {
            let m = m_matrix(&cfg, ell, 1.7, BoundarySide::Plus).unwrap();
            assert_eq!(m[(0, 1)], m[(1, 0)]);
        }
    }

    #[test]
    fn k_matrix_examples() {
        let free = ShellConfig::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(
            k_matrix(&free, 2, 1.3, BoundarySide::Plus).unwrap(),
            CMatrix::identity(2)
        );
        let k = k_matrix(&single(1.0, 1.0), 0, 1.0, BoundarySide::Plus).unwrap();
        assert!(
            (k[(0, 0)] - Complex64::new(1.454_648_713_412_841, 0.708_073_418_273_571_2)).norm()
                < 1e-15
        );
    }

    #[test]
    fn negative_energy_single_shell() {
        let m = m_matrix_negative(&single(1.0, 1.0), 0, 1.0).unwrap();
        let want = 1f64.sinh() * (-1f64).exp();
        assert!((m[(0, 0)].re - want).abs() < 1e-15);
        assert!((m[(0, 0)].re - 0.432_332_358_381_693_6).abs() < 1e-15);
    }

    #[test]
    fn negative_energy_real_symmetric_and_decaying() {
        let cfg = ShellConfig::new(vec![0.5, 1.0, 3.0], vec![1.0, -1.0, 2.0]).unwrap();
        for ell in 0..4 {
            let mut prev: Option<CMatrix> = None;
            for step in 0..=45 {
                let kappa = 5.0 + step as f64;
                let m = m_matrix_negative(&cfg, ell, kappa).unwrap();
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(m[(i, j)].im, 0.0);
                        assert_eq!(m[(i, j)], m[(j, i)]);
                        if let Some(p) = &prev {
                            assert!(m[(i, j)].re.abs() < p[(i, j)].re.abs());
                        }
                    }
                }
                prev = Some(m);
            }
        }
    }

    #[test]
    fn b_vector_examples() {
        let cfg = ShellConfig::new(vec![1.0, 2.0], vec![0.0, 0.0]).unwrap();
        let b = b_vector(&cfg, 0, std::f64::consts::PI).unwrap();
        assert!(b.values.iter().all(|v| v.abs() < 1e-15));
        let b = b_vector(&single(1.0, 0.0), 0, 1.0).unwrap();
        assert!((b.values[0] - 1f64.sin()).abs() < 1e-16);
        for k in [1e-2, 1e-4, 1e-6] {
            let b = b_vector(&single(1.0, 0.0), 1, k).unwrap();
            assert!((b.values[0] / k - 1.0 / 3.0).abs() < k);
        }
    }

    #[test]
    fn rank_one_jump() {
        let cfg = ShellConfig::new(vec![0.3, 0.9, 1.4, 4.0], vec![2.0, -1.0, 0.5, -3.0]).unwrap();
        for ell in [0, 2, 5] {
            for k in [0.01, 1.0, 12.0] {
                let plus = m_matrix(&cfg, ell, k, BoundarySide::Plus).unwrap();
                let minus = m_matrix(&cfg, ell, k, BoundarySide::Minus).unwrap();
                let b = b_vector(&cfg, ell, k).unwrap().values;
                let diff = &minus - &plus;
                let scale = plus.max_abs().max(1e-300);
                for i in 0..4 {
                    for j in 0..4 {
                        let want = Complex64::new(0.0, -2.0 * k * b[i] * b[j]);
                        assert!((diff[(i, j)] - want).norm() <= 1e-12 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive_k() {
        assert!(m_matrix(&single(1.0, 1.0), 0, 0.0, BoundarySide::Plus).is_err());
        assert!(m_matrix_negative(&single(1.0, 1.0), 0, -1.0).is_err());
    }
}
