//! Adaptive Simpson quadrature with forced subdivision at known breakpoints.

use thiserror::Error;

/// Default absolute tolerance for right-hand-side integrals.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64, count: &mut usize) -> Result<f64, QuadratureError> {
    *count += 1;
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadratureError::NonFinite { x })
    }
}

fn simpson(a: f64, fa: f64, fm: f64, b: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    p: Panel,
    tol: f64,
    depth: u32,
    count: &mut usize,
) -> Result<(f64, f64), QuadratureError> {
    let lm = 0.5 * (p.a + p.m);
    let rm = 0.5 * (p.m + p.b);
    let flm = eval(f, lm, count)?;
    let frm = eval(f, rm, count)?;
    let left = simpson(p.a, p.fa, flm, p.m, p.fm);
    let right = simpson(p.m, p.fm, frm, p.b, p.fb);
    let delta = left + right - p.whole;
    // below this the difference is roundoff, not truncation error
    let floor = ROUNDOFF * (left.abs() + right.abs());
    if depth >= MAX_DEPTH
        || delta.abs() <= 15.0 * tol.max(floor)
        || p.b - p.a <= f64::EPSILON * p.a.abs().max(1.0)
    {
        return Ok((left + right + delta / 15.0, delta.abs() / 15.0));
    }
    let (lv, le) = refine(
        f,
        Panel {
            a: p.a,
            fa: p.fa,
            m: lm,
            fm: flm,
            b: p.m,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth + 1,
        count,
    )?;
    let (rv, re) = refine(
        f,
        Panel {
            a: p.m,
            fa: p.fm,
            m: rm,
            fm: frm,
            b: p.b,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth + 1,
        count,
    )?;
    Ok((lv + rv, le + re))
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Quadrature, QuadratureError> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, never letting a Simpson
/// panel straddle an interior breakpoint. `breaks` must be non-decreasing.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: f64,
) -> Result<Quadrature, QuadratureError> {
    if breaks.len() < 2 {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) || w[1] < w[0] {
            return Err(QuadratureError::InvalidInterval { a: w[0], b: w[1] });
        }
    }
    let segments: Vec<(f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .flat_map(|w| {
            let width = (w[1] - w[0]) / INITIAL_PANELS as f64;
            (0..INITIAL_PANELS).map(move |k| {
                let lo = w[0] + width * k as f64;
                let hi = if k + 1 == INITIAL_PANELS {
                    w[1]
                } else {
                    lo + width
                };
                (lo, hi)
            })
        })
        .collect();
    if segments.is_empty() {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let panel_tol = tol / segments.len() as f64;
    let mut count = 0;
    let mut value = 0.0;
    let mut abs_error = 0.0;
    for (a, b) in segments {
        // Endpoints are evaluated a hair inside the panel so that one-sided
        // limits are used at jump discontinuities.
        let shrink = 1e-13 * (b - a);
        let fa = eval(&f, a + shrink, &mut count)?;
        let fb = eval(&f, b - shrink, &mut count)?;
        let m = 0.5 * (a + b);
        let fm = eval(&f, m, &mut count)?;
        let whole = simpson(a, fa, fm, b, fb);
        let (v, e) = refine(
            &f,
            Panel {
                a,
                fa,
                m,
                fm,
                b,
                fb,
                whole,
            },
            panel_tol,
            0,
            &mut count,
        )?;
        value += v;
        abs_error += e;
    }
    Ok(Quadrature {
        value,
        abs_error,
        evaluations: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - 0.0).abs() < 1e-12);
    }

    #[test]
    fn sech4_matches_antiderivative() {
        // ∫ sech⁴ = tanh − tanh³/3
        let exact = |x: f64| x.tanh() - x.tanh().powi(3) / 3.0;
        let q = adaptive_simpson(|x| x.cosh().powi(-4), -20.0, 20.0, 1e-11).unwrap();
        assert!((q.value - (exact(20.0) - exact(-20.0))).abs() < 1e-10);
        assert!(q.abs_error <= 1e-11);
    }

    #[test]
    fn breaks_handle_indicator() {
        let q = integrate_with_breaks(
            |x: f64| if x.abs() < 1.0 { 1.0 } else { 0.0 },
            &[-3.0, -1.0, 1.0, 3.0],
            1e-12,
        )
        .unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_is_reported() {
        let err = adaptive_simpson(|x: f64| (-x).sqrt(), 0.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite { .. }));
    }

    #[test]
    fn reversed_interval_is_rejected() {
        assert!(adaptive_simpson(|x| x, 1.0, 0.0, 1e-8).is_err());
    }
}
