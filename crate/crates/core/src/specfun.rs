//! Spherical Bessel and Hankel functions of integer order.
//!
//! `j_ℓ` comes from Miller's downward recurrence (normalized against the
//! closed form of `j₀` or `j₁`) unless the argument is real and at least as
//! large as the requested order, in which case upward recurrence is stable.
//! On the real axis `y_ℓ` is generated upward from `y₀`, `y₁`. Off the real
//! axis the outgoing Hankel function is recurred directly, since `j + i·y`
//! cancels catastrophically on the positive imaginary axis.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

const SMALL_ARGUMENT: f64 = 1e-4;
const MILLER_MARGIN: usize = 16;
const RESCALE_ABOVE: f64 = 1e200;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelKind {
    /// Outgoing wave, `h¹ = j + i·y`.
    First,
    /// Incoming wave, `h² = j − i·y`.
    Second,
}

/// `j_ℓ`, `y_ℓ` and their derivatives for `ℓ = 0..=ell_max` at one argument.
#[derive(Debug, Clone)]
pub struct BesselTable {
    pub ell_max: usize,
    pub argument: Complex64,
    pub j: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub jp: Vec<Complex64>,
    pub yp: Vec<Complex64>,
    h1: Vec<Complex64>,
    h1p: Vec<Complex64>,
}

impl BesselTable {
    pub fn hankel1(&self, ell: usize) -> Complex64 {
        self.h1[ell]
    }

    pub fn hankel1_deriv(&self, ell: usize) -> Complex64 {
        self.h1p[ell]
    }

    pub fn hankel2(&self, ell: usize) -> Complex64 {
        if self.argument.im == 0.0 {
            self.h1[ell].conj()
        } else {
            2.0 * self.j[ell] - self.h1[ell]
        }
    }

    pub fn hankel(&self, kind: HankelKind, ell: usize) -> Complex64 {
        match kind {
            HankelKind::First => self.hankel1(ell),
            HankelKind::Second => self.hankel2(ell),
        }
    }
}

fn check_args(ell_max: usize, z: Complex64) -> Result<()> {
    if ell_max > MAX_ORDER {
        return Err(Error::OrderTooLarge(ell_max));
    }
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    Ok(())
}

/// Evaluates `j_ℓ(z)`, `y_ℓ(z)` and derivatives for `ℓ ≤ ell_max`.
pub fn bessel_basis(ell_max: usize, z: Complex64) -> Result<BesselTable> {
    check_args(ell_max, z)?;
    // One extra order so that every derivative has its neighbour.
    let n = ell_max + 1;
    let real = z.im == 0.0;

    type Columns = (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>);
    let (j, y, h1): Columns = if z.norm() < SMALL_ARGUMENT {
        let j = j_series(n, z);
        let y = y_series(n, z);
        let h1 = j.iter().zip(&y).map(|(a, b)| a + I * b).collect();
        (j, y, h1)
    } else if real {
        let x = z.re;
        let j = if x.abs() >= (ell_max as f64).max(1.0) {
            j_upward_real(n, x)
        } else {
            j_downward(n, z).into_iter().map(|v| v.re).collect()
        };
        let y = y_upward_real(n, x);
        let j: Vec<Complex64> = j.into_iter().map(Complex64::from).collect();
        let y: Vec<Complex64> = y.into_iter().map(Complex64::from).collect();
        let h1 = j.iter().zip(&y).map(|(a, b)| a + I * b).collect();
        (j, y, h1)
    } else {
        let j = j_downward(n, z);
        let h1 = h1_upward(n, z);
        let y = j.iter().zip(&h1).map(|(a, h)| -I * (h - a)).collect();
        (j, y, h1)
    };

    let jp = derivatives(&j, z, ell_max);
    let yp = derivatives(&y, z, ell_max);
    let h1p = derivatives(&h1, z, ell_max);

    let mut table = BesselTable {
        ell_max,
        argument: z,
        j,
        y,
        jp,
        yp,
        h1,
        h1p,
    };
    table.j.truncate(ell_max + 1);
    table.y.truncate(ell_max + 1);
    table.h1.truncate(ell_max + 1);
    if real {
        for v in table.j.iter_mut().chain(table.y.iter_mut()) {
            v.im = 0.0;
        }
        for v in table.jp.iter_mut().chain(table.yp.iter_mut()) {
            v.im = 0.0;
        }
    }
    Ok(table)
}

/// Spherical Hankel function of the given kind.
pub fn hankel(kind: HankelKind, ell: usize, z: Complex64) -> Result<Complex64> {
    Ok(bessel_basis(ell, z)?.hankel(kind, ell))
}

/// `j_ℓ(x)` for real `x`, including `x = 0`.
pub fn sph_j(ell: usize, x: f64) -> Result<f64> {
    if x == 0.0 {
        if ell > MAX_ORDER {
            return Err(Error::OrderTooLarge(ell));
        }
        return Ok(if ell == 0 { 1.0 } else { 0.0 });
    }
    Ok(bessel_basis(ell, Complex64::from(x))?.j[ell].re)
}

/// `(j_ℓ(x), y_ℓ(x), j′_ℓ(x), y′_ℓ(x))` for real nonzero `x`.
pub fn sph_jy(ell: usize, x: f64) -> Result<(f64, f64, f64, f64)> {
    let t = bessel_basis(ell, Complex64::from(x))?;
    Ok((t.j[ell].re, t.y[ell].re, t.jp[ell].re, t.yp[ell].re))
}

fn derivatives(f: &[Complex64], z: Complex64, ell_max: usize) -> Vec<Complex64> {
    (0..=ell_max)
        .map(|l| {
            if l == 0 {
                -f[1]
            } else {
                f[l - 1] - (l as f64 + 1.0) / z * f[l]
            }
        })
        .collect()
}

fn double_factorial(n: i64) -> f64 {
    // (2m−1)!! extended to negative odd arguments through (x)!! = (x+2)!!/(x+2).
    if n >= -1 {
        let mut acc = 1.0;
        let mut k = n;
        while k > 1 {
            acc *= k as f64;
            k -= 2;
        }
        acc
    } else {
        double_factorial(n + 2) / (n + 2) as f64
    }
}

fn j_series(n: usize, z: Complex64) -> Vec<Complex64> {
    let z2 = z * z;
    (0..=n)
        .map(|l| {
            let lf = l as f64;
            let lead = z.powu(l as u32) / double_factorial(2 * l as i64 + 1);
            let t1 = z2 / (2.0 * (2.0 * lf + 3.0));
            let t2 = z2 * z2 / (8.0 * (2.0 * lf + 3.0) * (2.0 * lf + 5.0));
            lead * (1.0 - t1 + t2)
        })
        .collect()
}

fn y_series(n: usize, z: Complex64) -> Vec<Complex64> {
    let z2 = z * z;
    (0..=n)
        .map(|l| {
            let lf = l as f64;
            let lead = -double_factorial(2 * l as i64 - 1) / z.powu(l as u32 + 1);
            let t1 = z2 / (2.0 * (2.0 * lf - 1.0));
            let t2 = z2 * z2 / (8.0 * (2.0 * lf - 1.0) * (2.0 * lf - 3.0));
            lead * (1.0 + t1 + t2)
        })
        .collect()
}

fn j_upward_real(n: usize, x: f64) -> Vec<f64> {
    let (s, c) = x.sin_cos();
    let mut out = Vec::with_capacity(n + 1);
    out.push(s / x);
    if n >= 1 {
        out.push(s / (x * x) - c / x);
    }
    for l in 1..n {
        let next = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        out.push(next);
    }
    out
}

fn y_upward_real(n: usize, x: f64) -> Vec<f64> {
    let (s, c) = x.sin_cos();
    let mut out = Vec::with_capacity(n + 1);
    out.push(-c / x);
    if n >= 1 {
        out.push(-c / (x * x) - s / x);
    }
    for l in 1..n {
        let next = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        out.push(next);
    }
    out
}

fn h1_upward(n: usize, z: Complex64) -> Vec<Complex64> {
    let e = (I * z).exp();
    let mut out = Vec::with_capacity(n + 1);
    out.push(-I * e / z);
    if n >= 1 {
        out.push(-e * (z + I) / (z * z));
    }
    for l in 1..n {
        let next = (2 * l + 1) as f64 / z * out[l] - out[l - 1];
        out.push(next);
    }
    out
}

/// Miller's algorithm: recur downward from a high order with arbitrary
/// seed values, then normalize against whichever of `j₀`, `j₁` is larger.
fn j_downward(n: usize, z: Complex64) -> Vec<Complex64> {
    let start = n + MILLER_MARGIN + z.norm().ceil() as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut upper = Complex64::new(0.0, 0.0);
    let mut current = Complex64::new(1e-30, 0.0);
    if start <= n {
        out[start] = current;
    }
    for l in (1..=start).rev() {
        let lower = (2 * l + 1) as f64 / z * current - upper;
        upper = current;
        current = lower;
        if l - 1 <= n {
            out[l - 1] = current;
        }
        if current.norm() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            current *= s;
            upper *= s;
            for v in out.iter_mut().skip(l - 1) {
                *v *= s;
            }
        }
    }
    let (s, c) = (z.sin(), z.cos());
    let j0 = s / z;
    let j1 = s / (z * z) - c / z;
    let scale = if j0.norm() >= j1.norm() || n == 0 {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    out.iter().map(|v| v * scale).collect()
}
