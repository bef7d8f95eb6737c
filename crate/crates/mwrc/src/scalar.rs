//! One-dimensional search helpers: golden-section maximization, bisection
//! root finding and bracket expansion.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `tol`. Returns the best point seen, endpoints included.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        // Floating point stops shrinking the bracket near machine precision.
        if !(c > a && d < b && c <= d) {
            break;
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Root of `f` on `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must have
/// opposite signs (or one of them is zero).
pub fn bisect_root<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure { what: "bisection", limit: hi });
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if b - a <= tol || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Upper end of a bracket `[0, x]` with `f(x) >= 0` for a function that is
/// negative at 0 and increasing. Starts at `start` and doubles up to
/// `start * 2^max_doublings`.
pub fn expand_bracket<F>(mut f: F, start: f64, max_doublings: u32, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut x = start;
    for _ in 0..=max_doublings {
        if f(x) >= 0.0 {
            return Ok(x);
        }
        x *= 2.0;
    }
    Err(Error::BracketFailure { what, limit: x / 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_respects_endpoints() {
        let (x, _) = golden_section_max(|x| x, 0.0, 3.0, 1e-12);
        assert_eq!(x, 3.0);
        let (x, _) = golden_section_max(|x| -x, 0.0, 3.0, 1e-12);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn bisection_solves_cubic() {
        let r = bisect_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
        assert!(bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_err());
    }

    #[test]
    fn bracket_expansion() {
        let hi = expand_bracket(|x| x - 100.0, 1.0, 60, "test").unwrap();
        assert_eq!(hi, 128.0);
        assert!(expand_bracket(|_| -1.0, 1.0, 10, "test").is_err());
    }
}
