//! Deterministic scalar root finding.
//!
//! Everything here is bracketed: a fixed midpoint rule, a fixed expansion
//! factor of 2 and caller-supplied tolerances, so the same inputs always
//! produce bit-identical roots.

use thiserror::Error;

/// Default relative tolerance used by every solver in the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Default iteration cap for the bisection phase.
pub const DEFAULT_MAX_ITER: usize = 200;

/// Upper bound on bracket doublings in [`solve_monotone_decreasing`].
pub const MAX_DOUBLINGS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("function does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("tolerance not reached after {iterations} iterations (best estimate {best})")]
    MaxIterations { iterations: usize, best: f64 },
    #[error("quadratic has no real roots (discriminant {discriminant})")]
    NoRealRoots { discriminant: f64 },
    #[error("no upper bracket found after {MAX_DOUBLINGS} doublings")]
    Unbounded,
    #[error("invalid solver input: {0}")]
    InvalidInput(&'static str),
}

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self, SolveError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(SolveError::InvalidInput("bracket endpoints must be finite"));
        }
        if lo >= hi {
            return Err(SolveError::InvalidInput("bracket requires lo < hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Outcome of a successful solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub root: f64,
    pub iterations: usize,
    /// `|f(root)|`, or `|h(root) - target|` for the monotone solver.
    pub residual: f64,
}

/// Bisection on a sign-changing bracket.
///
/// Terminates once the bracket width drops to `rel_tol * max(|mid|, 1)`,
/// or immediately if the midpoint evaluates to exactly zero.
pub fn bisect<F>(f: F, bracket: Bracket, rel_tol: f64, max_iter: usize) -> Result<SolveReport, SolveError>
where
    F: Fn(f64) -> f64,
{
    bisect_with(f, bracket, rel_tol, max_iter, |lo, hi, mid| {
        hi - lo <= rel_tol * mid.abs().max(1.0)
    })
}

/// Bisection with a purely relative stopping rule, `hi - lo <= rel_tol * max(|lo|, |hi|)`.
///
/// Suited to roots on `(0, inf)` that may be many orders of magnitude below 1;
/// a bracket whose lower end is 0 shrinks until the lower end turns positive.
pub fn bisect_relative<F>(
    f: F,
    bracket: Bracket,
    rel_tol: f64,
    max_iter: usize,
) -> Result<SolveReport, SolveError>
where
    F: Fn(f64) -> f64,
{
    bisect_with(f, bracket, rel_tol, max_iter, |lo, hi, _| {
        hi - lo <= rel_tol * lo.abs().max(hi.abs())
    })
}

fn bisect_with<F, S>(
    f: F,
    bracket: Bracket,
    rel_tol: f64,
    max_iter: usize,
    converged: S,
) -> Result<SolveReport, SolveError>
where
    F: Fn(f64) -> f64,
    S: Fn(f64, f64, f64) -> bool,
{
    if !(rel_tol > 0.0) {
        return Err(SolveError::InvalidInput("rel_tol must be positive"));
    }
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(SolveReport { root: lo, iterations: 0, residual: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(SolveReport { root: hi, iterations: 0, residual: 0.0 });
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(SolveError::NoSignChange { lo, hi });
    }
    let lo_negative = f_lo < 0.0;

    for iteration in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        // The interval is down to adjacent floats.
        if mid <= lo || mid >= hi {
            return Ok(SolveReport { root: mid, iterations: iteration, residual: f(mid).abs() });
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(SolveReport { root: mid, iterations: iteration, residual: 0.0 });
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
        let root = 0.5 * (lo + hi);
        if converged(lo, hi, root) {
            return Ok(SolveReport { root, iterations: iteration, residual: f(root).abs() });
        }
    }
    Err(SolveError::MaxIterations { iterations: max_iter, best: 0.5 * (lo + hi) })
}

/// Real roots of `a x^2 + b x + c = 0` in ascending order.
///
/// `a = 0` falls back to the linear root. Otherwise the larger-magnitude
/// root is taken from `q = -(b + sign(b) sqrt(disc)) / 2` and the other from
/// `c / q`, so neither root suffers cancellation.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Result<Vec<f64>, SolveError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(SolveError::InvalidInput("coefficients must be finite"));
    }
    if a == 0.0 {
        if b == 0.0 {
            return Err(SolveError::InvalidInput("degenerate equation: a = b = 0"));
        }
        return Ok(vec![-c / b]);
    }
    let discriminant = b.mul_add(b, -4.0 * a * c);
    if discriminant < 0.0 {
        return Err(SolveError::NoRealRoots { discriminant });
    }
    let sqrt_disc = discriminant.sqrt();
    let q = -0.5 * (b + sqrt_disc.copysign(b));
    if q == 0.0 {
        // b = 0 and c = 0: double root at zero.
        return Ok(vec![0.0, 0.0]);
    }
    let (r1, r2) = (q / a, c / q);
    Ok(if r1 <= r2 { vec![r1, r2] } else { vec![r2, r1] })
}

/// Solves `h(r) = target` for `h` strictly decreasing on `(0, inf)`.
///
/// The upper end starts at `initial_hi` and doubles until `h(hi) < target`;
/// the bracket `[0, hi]` (or `[hi/2, hi]` after any doubling) is then
/// bisected to relative width `rel_tol`.
pub fn solve_monotone_decreasing<H>(
    h: H,
    target: f64,
    initial_hi: f64,
    rel_tol: f64,
) -> Result<SolveReport, SolveError>
where
    H: Fn(f64) -> f64,
{
    if !(initial_hi > 0.0 && initial_hi.is_finite()) {
        return Err(SolveError::InvalidInput("initial_hi must be positive and finite"));
    }
    let mut lo = 0.0;
    let mut hi = initial_hi;
    let mut doublings = 0;
    while !(h(hi) < target) {
        if doublings == MAX_DOUBLINGS || !hi.is_finite() {
            return Err(SolveError::Unbounded);
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    if !hi.is_finite() {
        return Err(SolveError::Unbounded);
    }
    let g = |r: f64| if r == 0.0 { 1.0 } else { h(r) - target };
    let report = bisect_relative(g, Bracket::new(lo, hi)?, rel_tol, DEFAULT_MAX_ITER)?;
    Ok(SolveReport {
        iterations: report.iterations + doublings,
        residual: (h(report.root) - target).abs(),
        ..report
    })
}
