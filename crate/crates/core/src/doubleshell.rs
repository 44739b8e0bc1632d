//! Closed-form s-wave results for two shells: the real and imaginary parts of
//! the scaled boundary determinant, the threshold constants `C₀`, `Γ₀`, `C₂`,
//! the scattering length, and the zero-energy radial solution.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::DoubleShellConfig;
use crate::smatrix::SINGULAR_DET_RATIO;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Regular,
    ExceptionalNondegenerate,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "Gamma0")]
    pub gamma0: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub regime: Regime,
    pub scattering_length: Option<f64>,
}

/// Radial zero-energy solution `f(r)`: `a` inside, `b + c/r` between the
/// shells, `d + e/r` outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroEnergySolution {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl ZeroEnergySolution {
    pub fn eval(&self, cfg: &DoubleShellConfig, r: f64) -> f64 {
        if r < cfg.r1() {
            self.a
        } else if r < cfg.r2() {
            self.b + self.c / r
        } else {
            self.d + self.e / r
        }
    }
}

/// Dimensionless size of the couplings, `1 + |θ₁|/R₁ + |θ₂|/R₂`.
fn coupling_scale(cfg: &DoubleShellConfig) -> f64 {
    1.0 + cfg.theta1().abs() / cfg.r1() + cfg.theta2().abs() / cfg.r2()
}

/// Tolerance under which `C₀` counts as zero (units of length⁴).
pub fn tol_c0(cfg: &DoubleShellConfig) -> f64 {
    let (r1, r2) = (cfg.r1(), cfg.r2());
    1e-10 * r1 * r1 * r2 * r2 * coupling_scale(cfg).powi(2)
}

/// Tolerance under which `C₂` counts as zero (units of length⁶).
pub fn tol_c2(cfg: &DoubleShellConfig) -> f64 {
    let (r1, r2) = (cfg.r1(), cfg.r2());
    1e-10 * r1 * r1 * r2.powi(4) * coupling_scale(cfg).powi(2)
}

/// `(A₀(k), B₀(k))`, with `A₀ + iB₀ = k²R₁²R₂²·det K₀(k² + i0)`.
pub fn ab_coefficients(cfg: &DoubleShellConfig, k: f64) -> (f64, f64) {
    let (r1, r2, t1, t2) = (cfg.r1(), cfg.r2(), cfg.theta1(), cfg.theta2());
    let (s1, c1) = (k * r1).sin_cos();
    let (s2, c2) = (k * r2).sin_cos();
    let a0 = r1 * r1 * r2 * r2 * k * k
        + r1 * r1 * k * c2 * s2 * t2
        + r2 * r2 * k * c1 * s1 * t1
        + t1 * t2 * (c1 * c2 * s1 * s2 - c2 * c2 * s1 * s1);
    let b0 = r1 * r1 * k * s2 * s2 * t2
        + r2 * r2 * k * s1 * s1 * t1
        + t1 * t2 * s1 * s2 * (c1 * s2 - c2 * s1);
    (a0, b0)
}

pub fn c0(cfg: &DoubleShellConfig) -> f64 {
    let (r1, r2, t1, t2) = (cfg.r1(), cfg.r2(), cfg.theta1(), cfg.theta2());
    r1 * r1 * r2 * r2 + r1 * r1 * r2 * t2 + r1 * r2 * r2 * t1 + t1 * t2 * r1 * (r2 - r1)
}

pub fn gamma0(cfg: &DoubleShellConfig) -> f64 {
    let (r1, r2, t1, t2) = (cfg.r1(), cfg.r2(), cfg.theta1(), cfg.theta2());
    r1 * r1 * r2 * r2 * (t1 + t2) + t1 * t2 * r1 * r2 * (r2 - r1)
}

pub fn c2(cfg: &DoubleShellConfig) -> f64 {
    let (r1, r2, t1, t2) = (cfg.r1(), cfg.r2(), cfg.theta1(), cfg.theta2());
    -2.0 / 3.0 * r1 * r1 * r2.powi(3) * t2 - 2.0 / 3.0 * r1.powi(3) * r2 * r2 * t1
        + t1 * t2
            * (-2.0 / 3.0 * (r1.powi(3) * r2 + r1 * r2.powi(3))
                + r1 * r1 * r2 * r2
                + r1.powi(4) / 3.0)
}

/// Evaluates `C₀`, `Γ₀`, `C₂` and classifies the threshold.
pub fn threshold_constants(cfg: &DoubleShellConfig) -> ThresholdReport {
    let c0 = c0(cfg);
    let gamma0 = gamma0(cfg);
    let c2 = c2(cfg);
    let regime = if c0.abs() > tol_c0(cfg) {
        Regime::Regular
    } else if c2.abs() > tol_c2(cfg) {
        Regime::ExceptionalNondegenerate
    } else {
        Regime::Degenerate
    };
    ThresholdReport {
        c0,
        gamma0,
        c2,
        regime,
        scattering_length: (regime == Regime::Regular).then(|| gamma0 / c0),
    }
}

/// The `θ₂` at which `C₀` vanishes for fixed `(R₁, R₂, θ₁)`; `None` when
/// `C₀` does not depend on `θ₂`.
pub fn critical_theta2(r1: f64, r2: f64, theta1: f64) -> Result<Option<f64>> {
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < R1 < R2, got R1 = {r1}, R2 = {r2}"
        )));
    }
    let denom = r1 * r1 * r2 + theta1 * r1 * (r2 - r1);
    if denom.abs() <= 1e-14 * r1 * r1 * r2 {
        return Ok(None);
    }
    Ok(Some(-(r1 * r1 * r2 * r2 + r1 * r2 * r2 * theta1) / denom))
}

/// `a_s = Γ₀ / C₀`.
pub fn scattering_length(cfg: &DoubleShellConfig) -> Result<f64> {
    let c0 = c0(cfg);
    let tol = tol_c0(cfg);
    if c0.abs() <= tol {
        return Err(Error::ThresholdCritical { c0, tol });
    }
    Ok(gamma0(cfg) / c0)
}

/// Zero-energy radial solution regular at the origin with interior value `a`.
pub fn zero_energy_solution(cfg: &DoubleShellConfig, a: f64) -> Result<ZeroEnergySolution> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidArgument(
            "interior constant must be nonzero".into(),
        ));
    }
    let (r1, r2, t1, t2) = (cfg.r1(), cfg.r2(), cfg.theta1(), cfg.theta2());
    let c = -t1 * a;
    let b = a + t1 / r1 * a;
    // Continuity and the derivative jump at R₂.
    let e = c - t2 * (b + c / r2);
    let d = b + c / r2 - e / r2;
    Ok(ZeroEnergySolution { a, b, c, d, e })
}

/// `S₀(k) = (A₀ − iB₀)/(A₀ + iB₀)`.
pub fn s0_closed_form(cfg: &DoubleShellConfig, k: f64) -> Result<Complex64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let (a0, b0) = ab_coefficients(cfg, k);
    let den = Complex64::new(a0, b0);
    let (r1, r2) = (cfg.r1(), cfg.r2());
    let scale = k * k * r1 * r1 * r2 * r2;
    let threshold = SINGULAR_DET_RATIO * scale;
    if den.norm() < threshold {
        return Err(Error::NearSingularBoundary {
            det_abs: den.norm() / scale,
            threshold: SINGULAR_DET_RATIO,
        });
    }
    Ok(den.conj() / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{k_matrix, BoundarySide};
    use crate::smatrix::s_coefficient;

    fn cfg(t1: f64, t2: f64) -> DoubleShellConfig {
        DoubleShellConfig::from_thetas(1.0, 2.0, t1, t2).unwrap()
    }

    fn critical() -> DoubleShellConfig {
        cfg(1.0, -8.0 / 3.0)
    }

    #[test]
    fn free_coefficients() {
        let c = cfg(0.0, 0.0);
        let (a, b) = ab_coefficients(&c, 0.7);
        assert!((a - 4.0 * 0.49).abs() < 1e-15);
        assert_eq!(b, 0.0);
    }

    #[test]
    fn scaled_determinant_identity() {
        for &(t1, t2) in &[(1.0, 1.0), (-3.0, 2.5), (0.2, -8.0 / 3.0), (7.0, -0.1)] {
            let c = cfg(t1, t2);
            for &k in &[1e-3, 0.4, 1.0, 3.3, 11.0] {
                let (a, b) = ab_coefficients(&c, k);
                let det = k_matrix(c.config(), 0, k, BoundarySide::Plus)
                    .unwrap()
                    .determinant();
                let lhs = det * (k * k * 4.0);
                let rhs = Complex64::new(a, b);
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * rhs.norm().max(k * k * 4.0),
                    "k={k}"
                );
            }
        }
    }

    #[test]
    fn low_energy_limits() {
        let c = cfg(1.0, 1.0);
        let k = 1e-3;
        let (a, b) = ab_coefficients(&c, k);
        assert!((a / (k * k) / 11.0 - 1.0).abs() < 1e-3);
        assert!((b / k.powi(3) / 10.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn threshold_examples() {
        let r = threshold_constants(&cfg(1.0, 1.0));
        assert_eq!((r.c0, r.gamma0), (11.0, 10.0));
        assert_eq!(r.regime, Regime::Regular);
        assert!((r.scattering_length.unwrap() - 10.0 / 11.0).abs() < 1e-15);

        let r = threshold_constants(&critical());
        assert!(r.c0.abs() < 1e-14);
        assert!((r.gamma0 + 12.0).abs() < 1e-13);
        assert!((r.c2 - 160.0 / 9.0).abs() < 1e-12);
        assert_eq!(r.regime, Regime::ExceptionalNondegenerate);
        assert_eq!(r.scattering_length, None);

        let r = threshold_constants(&cfg(0.0, 0.0));
        assert_eq!((r.c0, r.gamma0), (4.0, 0.0));
        assert_eq!(r.scattering_length, Some(0.0));
    }

    #[test]
    fn critical_theta2_examples() {
        assert!((critical_theta2(1.0, 2.0, 1.0).unwrap().unwrap() + 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(critical_theta2(1.0, 2.0, 0.0).unwrap(), Some(-2.0));
        // θ₁ = −R₁R₂/(R₂ − R₁) = −2 removes θ₂ from C₀.
        assert_eq!(critical_theta2(1.0, 2.0, -2.0).unwrap(), None);
        assert!(critical_theta2(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn scattering_length_examples() {
        assert!(
            (scattering_length(&cfg(1.0, 1.0)).unwrap() - 0.909_090_909_090_909_1).abs() < 1e-15
        );
        for &(r1, r2, t2) in &[(0.5, 1.5, 0.7), (1.0, 3.0, -1.0), (0.2, 0.3, 5.0)] {
            let c = DoubleShellConfig::from_thetas(r1, r2, 0.0, t2).unwrap();
            let want = r2 * t2 / (r2 + t2);
            assert!((scattering_length(&c).unwrap() - want).abs() < 1e-13 * want.abs().max(1.0));
        }
        assert!(matches!(
            scattering_length(&critical()),
            Err(Error::ThresholdCritical { .. })
        ));
    }

    #[test]
    fn zero_energy_examples() {
        let z = zero_energy_solution(&cfg(0.0, 0.0), 1.0).unwrap();
        assert_eq!((z.a, z.b, z.c, z.d, z.e), (1.0, 1.0, 0.0, 1.0, 0.0));

        let z = zero_energy_solution(&cfg(1.0, 1.0), 1.0).unwrap();
        assert_eq!((z.c, z.b), (-1.0, 2.0));
        assert!((z.d - 11.0 / 4.0).abs() < 1e-15);
        assert!((z.e + 10.0 / 4.0).abs() < 1e-15);

        let z = zero_energy_solution(&critical(), 1.0).unwrap();
        assert!(z.d.abs() < 1e-14);
        assert!(zero_energy_solution(&critical(), 0.0).is_err());
    }

    #[test]
    fn zero_energy_invariants() {
        for &(t1, t2) in &[(1.0, 1.0), (-0.4, 3.0), (2.5, -0.5)] {
            let c = cfg(t1, t2);
            let z = zero_energy_solution(&c, 1.3).unwrap();
            assert_eq!(z.c, -t1 * z.a);
            assert_eq!(z.b, z.a + t1 / c.r1() * z.a);
            let want_d = c0(&c) * z.a / 4.0;
            assert!((z.d - want_d).abs() <= 1e-12 * want_d.abs().max(1.0));
            assert!((z.a - (z.b + z.c / c.r1())).abs() < 1e-12);
            assert!((z.b + z.c / c.r2() - (z.d + z.e / c.r2())).abs() < 1e-12);
            // −e/d, normalized, is the scattering length.
            let a_s = scattering_length(&c).unwrap();
            assert!((-z.e / z.d - a_s).abs() < 1e-12 * a_s.abs().max(1.0));
        }
    }

    #[test]
    fn closed_form_s0_matches_determinant_route() {
        let c = cfg(1.0, 1.0);
        assert_eq!(
            s0_closed_form(&cfg(0.0, 0.0), 0.3).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        for &k in &[1e-3, 0.5, 1.0, 4.0] {
            let closed = s0_closed_form(&c, k).unwrap();
            let general = s_coefficient(c.config(), 0, k).unwrap().s_value;
            assert!((closed - general).norm() < 1e-11);
        }
    }

    #[test]
    fn critical_s0_approaches_minus_one() {
        let s = s0_closed_form(&critical(), 1e-4).unwrap();
        assert!((s + 1.0).norm() <= 0.02);
    }

    #[test]
    fn degenerate_classification() {
        // Along the critical line C₀ = 0, C₂ changes sign between these θ₁.
        let (r1, r2) = (1.0, 2.0);
        let c2_at = |t1: f64| {
            let t2 = critical_theta2(r1, r2, t1).unwrap().unwrap();
            c2(&DoubleShellConfig::from_thetas(r1, r2, t1, t2).unwrap())
        };
        let (mut lo, mut hi) = (-1.9, 5.0);
        assert!(c2_at(lo) < 0.0 && c2_at(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if c2_at(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t2 = critical_theta2(r1, r2, lo).unwrap().unwrap();
        let c = DoubleShellConfig::from_thetas(r1, r2, lo, t2).unwrap();
        let report = threshold_constants(&c);
        assert_eq!(report.regime, Regime::Degenerate);
        assert!(report.gamma0.abs() > 0.0);
    }
}
