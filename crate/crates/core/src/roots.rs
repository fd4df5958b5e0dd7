//! Bracketing and root refinement for the transcendental characteristic
//! equations.
//!
//! Roots of the bound-state conditions accumulate geometrically at the
//! flat-band energy (and at `E = V/2` for type III wells), so bracket
//! discovery combines a uniform scan with asymptotic seed windows supplied
//! by the caller. Refinement is Brent's method: bisection safety with
//! inverse-quadratic/secant acceleration.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A sign-change bracket `[a, b]` with `f(a) * f(b) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
}

/// Scan `f` on `n + 1` uniform points of `[lo, hi]` and collect sign-change
/// brackets. Points where `f` returns `None` (outside its domain, or on a
/// singular energy) break the scan without producing a bracket.
pub fn scan_sign_changes<F: FnMut(f64) -> Option<f64>>(
    lo: f64,
    hi: f64,
    n: usize,
    mut f: F,
) -> Vec<Bracket> {
    let mut brackets = Vec::new();
    if !(hi > lo) || n == 0 {
        return brackets;
    }
    let step = (hi - lo) / n as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=n {
        let x = if i == n { hi } else { lo + i as f64 * step };
        match f(x) {
            Some(fx) if fx.is_finite() => {
                if fx == 0.0 {
                    // Exact hit: emit a tiny bracket around it.
                    let eps = step * 1e-6;
                    brackets.push(Bracket { a: x - eps, b: x + eps });
                    prev = None;
                } else {
                    if let Some((px, pf)) = prev {
                        if pf.signum() != fx.signum() {
                            brackets.push(Bracket { a: px, b: x });
                        }
                    }
                    prev = Some((x, fx));
                }
            }
            _ => prev = None,
        }
    }
    brackets
}

/// Brent's method on a bracketing interval. `f` must be defined on the
/// whole bracket; evaluation failure aborts with the same error.
pub fn brent<F: FnMut(f64) -> Result<f64>>(
    bracket: Bracket,
    tol: f64,
    max_iter: usize,
    mut f: F,
) -> Result<f64> {
    let (mut a, mut b) = (bracket.a, bracket.b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoConvergence { a, b });
    }
    if fa.abs() < fb.abs() {
        core::mem::swap(&mut a, &mut b);
        core::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() < tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let cond = !((s > lo.min(b) && s < lo.max(b))
            || (s > b.min(lo) && s < b.max(lo)))
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol);
        if cond {
            s = 0.5 * (a + b);
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::NoConvergence { a, b })
}

/// Refine every bracket with Brent and deduplicate roots closer than
/// `dedup` to each other.
pub fn refine_all<F: FnMut(f64) -> Result<f64>>(
    brackets: &[Bracket],
    tol: f64,
    dedup: f64,
    mut f: F,
) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    for &br in brackets {
        if let Ok(r) = brent(br, tol, 200, &mut f) {
            if !roots.iter().any(|&x| (x - r).abs() < dedup) {
                roots.push(r);
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}
