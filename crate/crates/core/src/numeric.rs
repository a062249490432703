//! Small numerical utilities: compensated summation, cancellation-safe
//! logarithms and an adaptive quadrature rule.

use crate::error::{Error, Result};

/// Kahan compensated accumulator.
///
/// Keeps the certified truncation bounds of the slowly converging mode sums
/// meaningful: the accumulation error stays at a few ulps of the total
/// independently of the number of terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// ln(1 - e^{-t}) for t > 0 without cancellation.
///
/// For t <= ln 2 the subtraction 1 - e^{-t} loses relative precision, so we
/// use expm1; for larger t, e^{-t} < 1/2 and ln_1p is exact in the small
/// argument.
#[inline]
pub fn ln_one_minus_exp_neg(t: f64) -> f64 {
    debug_assert!(t > 0.0);
    if t <= std::f64::consts::LN_2 {
        (-(-t).exp_m1()).ln()
    } else {
        (-(-t).exp()).ln_1p()
    }
}

/// 1 - e^{-t} for t > 0 without cancellation.
#[inline]
pub fn one_minus_exp_neg(t: f64) -> f64 {
    -(-t).exp_m1()
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to relative tolerance
/// `rel_tol`.
///
/// The error estimate is the usual |S_fine - S_coarse|/15 Richardson bound,
/// with the tolerance distributed over subintervals. Fails with
/// [`Error::Convergence`] if the recursion depth limit is reached before the
/// local tolerance is met.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::invalid(format!(
            "quadrature interval [{a}, {b}] must be finite and non-empty"
        )));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::invalid("quadrature tolerance must be positive"));
    }

    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);

    // Absolute budget from a coarse estimate of the integral's scale, floored
    // at machine precision so endpoint corners (square-root tangents) stop
    // refining once the local error is rounding noise.
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let eps = rel_tol * scale;
    let floor = f64::EPSILON * scale;

    let mut evals = 0usize;
    let value = adaptive_step(&f, a, b, fa, fm, fb, whole, eps, floor, MAX_DEPTH, &mut evals)?;
    Ok(value)
}

const MAX_DEPTH: u32 = 52;
const MAX_EVALS: usize = 2_000_000;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    floor: f64,
    depth: u32,
    evals: &mut usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    if *evals > MAX_EVALS {
        return Err(Error::Convergence(format!(
            "quadrature exceeded {MAX_EVALS} evaluations on [{a}, {b}]"
        )));
    }

    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;

    // Accept on the Richardson estimate, or when the interval can no longer
    // be meaningfully subdivided.
    if delta.abs() <= 15.0 * eps.max(floor) || lm <= a || rm >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Convergence(format!(
            "quadrature did not reach tolerance on [{a}, {b}]"
        )));
    }

    let half_eps = 0.5 * eps;
    let l = adaptive_step(f, a, m, fa, flm, fm, left, half_eps, floor, depth - 1, evals)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, half_eps, floor, depth - 1, evals)?;
    Ok(l + r)
}
