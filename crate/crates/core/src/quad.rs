//! Adaptive Simpson quadrature.
//!
//! Every integrand in this crate is piecewise smooth with known breakpoints
//! (hockey-stick curves, dyadic bump cells), so callers split at the kinks
//! and integrate each smooth piece with [`adaptive_simpson`].

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(&f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

/// Integrates over consecutive pieces `[knots[i], knots[i+1]]`, splitting the
/// tolerance evenly between them.
pub fn piecewise_simpson<F>(f: F, knots: &[f64], abs_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if knots.len() < 2 {
        return 0.0;
    }
    let tol = abs_tol / (knots.len() - 1) as f64;
    knots.windows(2).map(|w| adaptive_simpson(&f, w[0], w[1], tol)).sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let roundoff = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol.max(roundoff) {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
