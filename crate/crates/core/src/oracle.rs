//! Independent checks of the boundary-matrix results.
//!
//! [`transfer_matrix_s`] matches the reduced radial function shell by shell
//! in the Riccati–Bessel basis; [`numerov_phase_shift`] integrates the radial
//! equation directly and only touches Bessel functions to read off the
//! asymptotic phase. Neither builds `m_ℓ` or takes a determinant.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ShellConfig;
use crate::specfun::sph_jy;

/// Reduced radial function `w = r·R(r)` and its derivative at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub r: f64,
    pub w: f64,
    pub wp: f64,
}

impl RadialState {
    /// Applies the δ-shell condition: `w` continuous, `w′` jumps by `α·w`.
    pub fn cross_shell(self, alpha: f64) -> Self {
        Self {
            wp: self.wp + alpha * self.w,
            ..self
        }
    }
}

/// Riccati–Bessel values `(k r j, (k r j)′, k r y, (k r y)′)` in `r`.
fn riccati(ell: usize, k: f64, r: f64) -> Result<[f64; 4]> {
    let t = k * r;
    let (j, y, jp, yp) = sph_jy(ell, t)?;
    Ok([t * j, k * (j + t * jp), t * y, k * (y + t * yp)])
}

/// `S_ℓ(k)` by shell-to-shell matching of `w = P·krj_ℓ + Q·kry_ℓ`.
pub fn transfer_matrix_s(cfg: &ShellConfig, ell: usize, k: f64) -> Result<Complex64> {
    let (p, q) = transfer_coefficients(cfg, ell, k)?;
    let den = Complex64::new(p, q);
    Ok(den.conj() / den)
}

/// Exterior coefficients `(P, Q)` of the regular solution normalized to
/// `P = 1, Q = 0` inside the first shell.
pub fn transfer_coefficients(cfg: &ShellConfig, ell: usize, k: f64) -> Result<(f64, f64)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let (mut p, mut q) = (1.0, 0.0);
    for (&r, &alpha) in cfg.radii().iter().zip(cfg.alphas()) {
        if alpha == 0.0 {
            continue;
        }
        let [uj, ujp, uy, uyp] = riccati(ell, k, r)?;
        let wronskian = uj * uyp - ujp * uy;
        if (wronskian / k - 1.0).abs() >= 1e-6 || !wronskian.is_finite() {
            return Err(Error::DegenerateBasis(wronskian));
        }
        let state = RadialState {
            r,
            w: p * uj + q * uy,
            wp: p * ujp + q * uyp,
        }
        .cross_shell(alpha);
        // Closed-form inverse of the 2×2 basis matrix; its determinant is k.
        p = (state.w * uyp - state.wp * uy) / k;
        q = (uj * state.wp - ujp * state.w) / k;
    }
    Ok((p, q))
}

/// Phase shift from exterior coefficients, reduced into (−π/2, π/2].
pub fn phase_from_coefficients(p: f64, q: f64) -> f64 {
    reduce_mod_pi((-q).atan2(p))
}

fn reduce_mod_pi(d: f64) -> f64 {
    let r = d - PI * (d / PI).round();
    if r <= -FRAC_PI_2 {
        r + PI
    } else {
        r
    }
}

/// Smallest total step count accepted by [`numerov_phase_shift`].
pub const MIN_NUMEROV_STEPS: usize = 256;

/// Reasonable outer radius for [`numerov_phase_shift`]: beyond `2·R_N`, plus
/// up to a quarter wavelength so the two fit points are well separated.
pub fn default_r_max(cfg: &ShellConfig, k: f64) -> f64 {
    let outer = cfg.outer_radius();
    2.0 * outer + (FRAC_PI_2 / k).min(outer.max(1.0)) * 1.05
}

struct Potential {
    l: f64,
    k2: f64,
}

impl Potential {
    fn f(&self, r: f64) -> f64 {
        self.l / (r * r) - self.k2
    }

    /// `(f, f′, f″, f‴)`
    fn derivs(&self, r: f64) -> [f64; 4] {
        let l = self.l;
        [
            self.f(r),
            -2.0 * l / r.powi(3),
            6.0 * l / r.powi(4),
            -24.0 * l / r.powi(5),
        ]
    }

    /// `w(r + h)` from `(w, w′)` at `r` by a fifth-order Taylor expansion,
    /// with higher derivatives of `w` taken from the equation itself.
    fn taylor_step(&self, r: f64, w: f64, wp: f64, h: f64) -> f64 {
        let [f, f1, f2, f3] = self.derivs(r);
        let g = f * w;
        let g1 = f1 * w + f * wp;
        let g2 = f2 * w + 2.0 * f1 * wp + f * g;
        let g3 = f3 * w + 3.0 * f2 * wp + 3.0 * f1 * g + f * g1;
        w + h * wp
            + h * h / 2.0 * g
            + h.powi(3) / 6.0 * g1
            + h.powi(4) / 24.0 * g2
            + h.powi(5) / 120.0 * g3
    }
}

/// Regular solution `Σ c_n r^{ℓ+1+2n}` near the origin, scaled by `h^{−(ℓ+1)}`.
fn frobenius(ell: usize, k: f64, r: f64, h: f64) -> f64 {
    let mut term = (r / h).powi(ell as i32 + 1);
    let mut sum = term;
    for n in 1..200 {
        term *= -k * k * r * r / (2.0 * n as f64 * (2.0 * (ell + n) as f64 + 1.0));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Phase shift (mod π, in (−π/2, π/2]) from direct Numerov integration of
/// `w″ = (ℓ(ℓ+1)/r² − k²)·w` with the derivative jump applied at each shell.
///
/// Each interval between shells gets its own uniform grid; the derivative at
/// a shell is read off with a fourth-order Numerov-consistent formula and the
/// next interval is restarted by a Taylor step.
pub fn numerov_phase_shift(
    cfg: &ShellConfig,
    ell: usize,
    k: f64,
    r_max: f64,
    steps: usize,
) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    let outer = cfg.outer_radius();
    if !(r_max > 2.0 * outer && r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "r_max = {r_max} must exceed twice the outer radius {outer}"
        )));
    }
    if steps < MIN_NUMEROV_STEPS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_NUMEROV_STEPS} steps, got {steps}"
        )));
    }
    let step = r_max / steps as f64;
    for w in cfg.radii().windows(2) {
        if w[1] - w[0] < step {
            return Err(Error::GridCollision {
                r_a: w[0],
                r_b: w[1],
                step,
            });
        }
    }

    let mut bounds = vec![0.0];
    bounds.extend_from_slice(cfg.radii());
    bounds.push(r_max);
    let min_nodes = (steps / (8 * bounds.len())).max(16);
    let pot = Potential {
        l: (ell * (ell + 1)) as f64,
        k2: k * k,
    };

    let mut w_prev = 0.0;
    let mut wp_prev = 0.0;
    let mut exterior: Vec<(f64, f64)> = Vec::new();
    for seg in 0..bounds.len() - 1 {
        let (a, b) = (bounds[seg], bounds[seg + 1]);
        let n = (((b - a) / step).round() as usize).max(min_nodes);
        let h = (b - a) / n as f64;
        let r_at = |i: usize| a + h * i as f64;
        let mut ws: Vec<f64> = Vec::with_capacity(n + 2);
        if seg == 0 {
            ws.push(0.0);
            ws.push(frobenius(ell, k, h, h));
        } else {
            ws.push(w_prev);
            ws.push(pot.taylor_step(a, w_prev, wp_prev, h));
        }
        let t = |i: usize| h * h * pot.f(r_at(i)) / 12.0;
        // Node 0 sits at the origin in the first interval, where f is singular;
        // start the recurrence from the series there.
        let first = if seg == 0 {
            ws.push(frobenius(ell, k, 2.0 * h, h));
            2
        } else {
            1
        };
        // Summed form in y = (1 − h²f/12)·w: the second difference of y is
        // h²·f·w, accumulated through the first difference to limit roundoff.
        // One node past the end continues the solution smoothly for the
        // derivative estimate.
        let mut y = (1.0 - t(first)) * ws[first];
        let mut dy = y - (1.0 - t(first - 1)) * ws[first - 1];
        for i in first..=n {
            dy += h * h * pot.f(r_at(i)) * ws[i];
            y += dy;
            ws.push(y / (1.0 - t(i + 1)));
        }
        let scale = ws[n].abs().max(ws[n - 1].abs());
        if scale > 1e150 {
            ws.iter_mut().for_each(|v| *v /= scale);
        }
        if seg + 1 == bounds.len() - 1 {
            exterior = (0..=n).map(|i| (r_at(i), ws[i])).collect();
            break;
        }
        let g = |i: usize| pot.f(r_at(i)) * ws[i];
        let wp = (ws[n + 1] - ws[n - 1]) / (2.0 * h) - h * (g(n + 1) - g(n - 1)) / 12.0;
        let state = RadialState { r: b, w: ws[n], wp }.cross_shell(cfg.alphas()[seg]);
        w_prev = state.w;
        wp_prev = state.wp;
    }

    let (r2, w2) = *exterior.last().unwrap();
    let quarter = FRAC_PI_2 / k;
    let span = r2 - exterior[0].0;
    let target = if quarter < span {
        r2 - quarter
    } else {
        r2 - 0.5 * span
    };
    let (r1, w1) = *exterior
        .iter()
        .min_by(|x, y| (x.0 - target).abs().total_cmp(&(y.0 - target).abs()))
        .unwrap();
    let [uj1, _, uy1, _] = riccati(ell, k, r1)?;
    let [uj2, _, uy2, _] = riccati(ell, k, r2)?;
    let det = uj1 * uy2 - uj2 * uy1;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::DegenerateBasis(det));
    }
    let p = (w1 * uy2 - w2 * uy1) / det;
    let q = (uj1 * w2 - uj2 * w1) / det;
    Ok(phase_from_coefficients(p, q))
}

/// Exterior constants `(d, e)` of the zero-energy s-wave solution
/// `f = A + B/r`, starting from `f = 1` inside the first shell.
pub fn zero_energy_exterior(cfg: &ShellConfig) -> (f64, f64) {
    let (mut a, mut b) = (1.0, 0.0);
    for (&r, &alpha) in cfg.radii().iter().zip(cfg.alphas()) {
        let f = a + b / r;
        let fp = -b / (r * r) + alpha * f;
        b = -r * r * fp;
        a = f - b / r;
    }
    (a, b)
}
