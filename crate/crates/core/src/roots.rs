//! Bracketed bisection followed by a few safeguarded Newton steps.

use crate::error::{Error, Result};

/// Bracket width at which bisection hands over to Newton.
pub const DEFAULT_BRACKET_WIDTH: f64 = 1e-8;

/// Newton steps allowed after bisection.
pub const MAX_NEWTON_STEPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub bracket_width: f64,
    pub newton_steps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { bracket_width: DEFAULT_BRACKET_WIDTH, newton_steps: MAX_NEWTON_STEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Root of `f` on `[lo, hi]` given its derivative `df`.
///
/// `f(lo)` and `f(hi)` must differ in sign (a zero at an endpoint is
/// accepted). Newton iterates that leave the final bracket are rejected.
pub fn bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64, opts: RootOptions) -> Result<Root>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, iterations: 0, bracket: (lo, hi) });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, iterations: 0, bracket: (lo, hi) });
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket { lo, hi, flo: fa, fhi: fb });
    }
    let sa = fa.signum();
    let mut iterations = 0;
    while b - a > opts.bracket_width && iterations < 200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        iterations += 1;
        if fm == 0.0 {
            return Ok(Root { x: m, residual: 0.0, iterations, bracket: (lo, hi) });
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }

    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    for _ in 0..opts.newton_steps {
        if fx == 0.0 {
            break;
        }
        let next = x - fx / df(x);
        if !next.is_finite() || next < a || next > b {
            break;
        }
        let fnext = f(next);
        iterations += 1;
        // roundoff floor
        if fnext.abs() > fx.abs() {
            break;
        }
        x = next;
        fx = fnext;
    }
    Ok(Root { x, residual: fx.abs(), iterations, bracket: (lo, hi) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_newton(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.residual < 1e-15);
    }

    #[test]
    fn decreasing_function() {
        let r = bisect_newton(|x| (-x).exp() - 0.5, |x| -(-x).exp(), 0.0, 5.0, RootOptions::default()).unwrap();
        assert!((r.x - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_bracket() {
        let e = bisect_newton(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, RootOptions::default());
        assert!(matches!(e, Err(Error::NoBracket { .. })));
    }

    #[test]
    fn endpoint_root() {
        let r = bisect_newton(|x| x - 1.0, |_| 1.0, 1.0, 3.0, RootOptions::default()).unwrap();
        assert_eq!(r.x, 1.0);
    }
}
