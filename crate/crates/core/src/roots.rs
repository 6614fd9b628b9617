//! Bracketed scalar root finding: bisection safeguarding secant and inverse
//! quadratic steps (Brent's scheme).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket, ordered.
    pub bracket: (f64, f64),
}

/// Finds a root of `f` in `[a, b]` given `fa = f(a)`, `fb = f(b)` of opposite
/// sign (or one of them zero).
///
/// Stops as soon as `done(x, f(x))` holds or the bracket shrinks to a few
/// ulps around the iterate.
pub fn brent<F, D>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    max_iter: usize,
    mut done: D,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
    D: FnMut(f64, f64) -> bool,
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0, bracket: (a.min(b), a.max(b)) });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0, bracket: (a.min(b), a.max(b)) });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoInteriorOptimum { lo: a, hi: b, d_lo: fa, d_hi: fb });
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    // `b` is the best iterate, `c` the contrapoint keeping the bracket.
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if done(b, fb) || m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, fx: fb, iterations: iter - 1, bracket: (b.min(c), b.max(c)) });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotConverged { iterations: max_iter, residual: fb.abs() })
}
