//! Independent reference solutions by shooting.
//!
//! Nothing here uses the time map: solutions are produced by an adaptive
//! Dormand–Prince 5(4) integrator started at the midpoint `s₀` with zero slope
//! (the solutions are symmetric about `s₀`), and the peak is adjusted until
//! the trajectory vanishes at `b̄`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::emden::Interval;
use crate::roots::golden_max;
use crate::{Error, Result};

/// Integrator tolerance used when callers have no stronger requirement.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Target for `|W(b̄)|` in the shooting solvers.
pub const SHOT_TOL: f64 = 1e-10;

const MAX_STEPS: usize = 1_000_000;
const MU_SCAN: (f64, f64, usize) = (1e-6, 80.0, 161);
/// Largest `λ e^μ` scanned; beyond it the boundary layer of width
/// `(λ e^μ)^(-1/2)` is too thin for the step-size floor.
const MAX_CURVATURE: f64 = 1e20;

/// One accepted point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvpNode {
    pub s: f64,
    pub y: f64,
    pub y_prime: f64,
}

/// Accepted points of an initial-value integration, increasing in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct IvpTrace {
    pub nodes: Vec<IvpNode>,
    pub tolerance: f64,
}

impl IvpTrace {
    /// The last node.
    pub fn end(&self) -> IvpNode {
        *self.nodes.last().expect("a trace has at least its initial node")
    }

    /// The node placed exactly at `s`, if `s` was a requested stop.
    pub fn at(&self, s: f64) -> Option<IvpNode> {
        self.nodes
            .binary_search_by(|n| n.s.total_cmp(&s))
            .ok()
            .map(|i| self.nodes[i])
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn check_tol(tol: f64) -> Result<()> {
    if tol > 1e-14 && tol < 1e-3 {
        Ok(())
    } else {
        Err(Error::domain("integrator tolerance", tol))
    }
}

/// Integrates `y'' = f(s, y, y')` from `s0` to `s_end > s0`, landing exactly on
/// every point of `stops` (ascending, inside `(s0, s_end]`).
///
/// The local error of each accepted step is at most `tol·(1 + |y|)` in both
/// `y` and `y'`.
pub fn integrate_ivp_with_stops<F>(
    f: F,
    s0: f64,
    y0: f64,
    yp0: f64,
    s_end: f64,
    stops: &[f64],
    tol: f64,
) -> Result<IvpTrace>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    integrate(f, s0, y0, yp0, s_end, stops, tol, false)
}

/// The integrator; with `stop_at_zero` it returns as soon as an accepted
/// node has `y ≤ 0`.
#[allow(clippy::too_many_arguments)]
fn integrate<F>(
    mut f: F,
    s0: f64,
    y0: f64,
    yp0: f64,
    s_end: f64,
    stops: &[f64],
    tol: f64,
    stop_at_zero: bool,
) -> Result<IvpTrace>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    check_tol(tol)?;
    if !(s_end > s0) || !s0.is_finite() || !s_end.is_finite() {
        return Err(Error::Argument("integration needs finite s0 < s_end"));
    }
    if !(y0.is_finite() && yp0.is_finite()) {
        return Err(Error::NonFinite { at: s0 });
    }
    let mut rhs = |s: f64, u: [f64; 2]| -> Result<[f64; 2]> {
        let acc = f(s, u[0], u[1]);
        if acc.is_finite() {
            Ok([u[1], acc])
        } else {
            Err(Error::NonFinite { at: s })
        }
    };
    let mut nodes = Vec::with_capacity(256);
    nodes.push(IvpNode { s: s0, y: y0, y_prime: yp0 });
    let mut s = s0;
    let mut u = [y0, yp0];
    let mut k0 = rhs(s, u)?;
    let mut h = 1e-3 * (s_end - s0);
    let mut targets = stops
        .iter()
        .copied()
        .filter(|&t| t > s0 && t < s_end)
        .chain(core::iter::once(s_end))
        .peekable();
    let mut steps = 0;
    while let Some(&target) = targets.peek() {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepUnderflow { at: s });
        }
        let landing = s + h >= target;
        let step = if landing { target - s } else { h };
        let mut k = [[0.0; 2]; 7];
        k[0] = k0;
        // A stage that overflows only means the trial step is too long.
        let mut overflow = false;
        for i in 1..7 {
            let mut ui = u;
            for j in 0..i {
                ui[0] += step * A[i][j] * k[j][0];
                ui[1] += step * A[i][j] * k[j][1];
            }
            match rhs(s + C[i] * step, ui) {
                Ok(v) => k[i] = v,
                Err(_) => {
                    overflow = true;
                    break;
                }
            }
        }
        let mut next = u;
        let mut err = if overflow { f64::INFINITY } else { 0.0f64 };
        for c in (0..2).filter(|_| !overflow) {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for i in 0..7 {
                hi += B5[i] * k[i][c];
                lo += B4[i] * k[i][c];
            }
            next[c] = u[c] + step * hi;
            let scale = tol * (1.0 + u[c].abs().max(next[c].abs()));
            err = err.max((step * (hi - lo)).abs() / scale);
        }
        if err.is_nan() {
            return Err(Error::NonFinite { at: s });
        }
        if err <= 1.0 {
            s = if landing { target } else { s + step };
            u = next;
            // First-same-as-last: the seventh stage is f at the new point.
            k0 = k[6];
            nodes.push(IvpNode { s, y: u[0], y_prime: u[1] });
            if stop_at_zero && u[0] <= 0.0 {
                break;
            }
            if landing {
                targets.next();
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else if err.is_infinite() {
            0.1
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 && landing {
            // Keep the free step size when a stop cut the step short.
            h = h.max(step * factor);
        } else {
            h = step * factor;
        }
        if h < 1e-14 * s.abs().max(1.0) {
            return Err(Error::StepUnderflow { at: s });
        }
    }
    Ok(IvpTrace { nodes, tolerance: tol })
}

/// Integrates `y'' = f(s, y, y')`, `y(s0) = y0`, `y'(s0) = yp0` up to `s_end`.
pub fn integrate_ivp<F>(f: F, s0: f64, y0: f64, yp0: f64, s_end: f64, tol: f64) -> Result<IvpTrace>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    integrate_ivp_with_stops(f, s0, y0, yp0, s_end, &[], tol)
}

/// Refines a sign change of `g` on `[lo, hi]`: bisection down to a relative
/// width of `1e-4`, then the Illinois variant of regula falsi until
/// `|g| < SHOT_TOL` or the bracket stops shrinking.
fn refine_root<G>(mut g: G, mut lo: f64, mut hi: f64) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracket { what: "shooting refinement" });
    }
    while hi - lo > 1e-4 * hi.abs().max(lo.abs()) {
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == g_lo.signum() {
            lo = mid;
            g_lo = v;
        } else {
            hi = mid;
            g_hi = v;
        }
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
        let v = g(x)?;
        if v.abs() < SHOT_TOL || x <= lo || x >= hi || hi - lo <= 4.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
        if v.signum() == g_lo.signum() {
            lo = x;
            g_lo = v;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            g_hi = v;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::Convergence {
        what: "shooting refinement",
        estimate: 0.5 * (lo + hi),
        error: hi - lo,
    })
}

/// A converged shot: the peak value and the half trajectory from `s₀` to `b̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    pub peak: f64,
    pub trace: IvpTrace,
}

fn emden_rhs(p: f64) -> impl Fn(f64, f64, f64) -> f64 {
    // Odd extension so that overshooting trajectories stay defined.
    move |_, w, _| -w.abs().powf(p - 1.0) * w
}

fn emden_half(interval: Interval, p: f64, xi: f64, stops: &[f64], tol: f64) -> Result<IvpTrace> {
    integrate_ivp_with_stops(emden_rhs(p), interval.midpoint(), xi, 0.0, interval.b_bar(), stops, tol)
}

/// Peak `ξ` of the Emden solution on `interval` by shooting from the midpoint.
pub fn shoot_emden(interval: Interval, p: f64, tol: f64) -> Result<Shot> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain("exponent p", p));
    }
    // The first zero moves towards s₀ as ξ grows; bracket on whether it falls
    // before b̄.
    let reaches_zero = |xi: f64| -> Result<bool> {
        let trace = integrate(emden_rhs(p), interval.midpoint(), xi, 0.0, interval.b_bar(), &[], tol, true)?;
        Ok(trace.end().y <= 0.0)
    };
    // Scaling ξ by `factor` halves the distance from s₀ to the first zero.
    let factor = 2f64.powf(2.0 / (p - 1.0));
    let (mut lo, mut hi) = (1.0, 1.0);
    if reaches_zero(1.0)? {
        while reaches_zero(lo)? {
            lo /= factor;
            if lo < 1e-300 {
                return Err(Error::Bracket { what: "Emden shooting (small peak)" });
            }
        }
        hi = lo * factor;
    } else {
        while !reaches_zero(hi)? {
            hi *= factor;
            if hi > 1e300 {
                return Err(Error::Bracket { what: "Emden shooting (large peak)" });
            }
        }
        lo = hi / factor;
    }
    // Shrink until the overshooting end has a single zero crossing.
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if reaches_zero(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let xi = refine_root(|xi| Ok(emden_half(interval, p, xi, &[], tol)?.end().y), lo, hi)?;
    Ok(Shot {
        peak: xi,
        trace: emden_half(interval, p, xi, &[], tol)?,
    })
}

fn gelfand_half(interval: Interval, lambda: f64, mu: f64, stops: &[f64], tol: f64) -> Result<IvpTrace> {
    integrate_ivp_with_stops(
        move |_, w, _| -lambda * w.exp(),
        interval.midpoint(),
        mu,
        0.0,
        interval.b_bar(),
        stops,
        tol,
    )
}

/// Peak `μ` of a Gelfand solution at parameter `λ`, on the branch whose peak
/// is nearest `mu_guess` (in log scale).
pub fn shoot_gelfand(interval: Interval, lambda: f64, mu_guess: f64, tol: f64) -> Result<Shot> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda", lambda));
    }
    if !(mu_guess > 0.0 && mu_guess.is_finite()) {
        return Err(Error::domain("peak guess", mu_guess));
    }
    let shot = |mu: f64| Ok(gelfand_half(interval, lambda, mu, &[], tol)?.end().y);
    let (lo, hi, n) = MU_SCAN;
    let hi = hi.min((MAX_CURVATURE / lambda).ln());
    if !(hi > lo) {
        return Err(Error::domain("lambda", lambda));
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    let grid: Vec<f64> = (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect();
    let values = grid.iter().map(|&mu| shot(mu)).collect::<Result<Vec<f64>>>()?;
    let target = mu_guess.ln();
    let bracket = (1..n)
        .filter(|&i| values[i - 1].signum() != values[i].signum())
        .min_by(|&i, &j| {
            let d = |k: usize| ((grid[k - 1] * grid[k]).sqrt().ln() - target).abs();
            d(i).total_cmp(&d(j))
        })
        .ok_or(Error::NoSolution {
            lambda,
            lambda_star: f64::NAN,
        })?;
    let mu = refine_root(shot, grid[bracket - 1], grid[bracket])?;
    Ok(Shot {
        peak: mu,
        trace: gelfand_half(interval, lambda, mu, &[], tol)?,
    })
}

/// `λ` whose Gelfand solution peaks at `μ`, by shooting in `λ` (the boundary
/// value decreases monotonically in `λ`).
pub fn oracle_lambda_of_mu(interval: Interval, mu: f64, tol: f64) -> Result<f64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::domain("peak value mu", mu));
    }
    let shot = |lambda: f64| Ok(gelfand_half(interval, lambda, mu, &[], tol)?.end().y);
    let half = 0.5 * interval.length();
    let mut hi = 1.0 / (half * half);
    while shot(hi)? > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.5 * hi;
    while shot(lo)? < 0.0 {
        lo *= 0.5;
    }
    hi = lo * 2.0;
    refine_root(shot, lo, hi)
}

/// The fold `(μ*, λ*)` from golden-section maximization of the shooting
/// `λ(μ)`.
pub fn oracle_fold(interval: Interval, tol: f64) -> Result<(f64, f64)> {
    golden_max(|mu| oracle_lambda_of_mu(interval, mu, tol), 0.05, 10.0, 1e-7)
}

/// Values on `n` uniform points of the interval (`n` odd so the midpoint is
/// a grid point), from one half trajectory mirrored about `s₀`.
fn mirrored_samples<F>(interval: Interval, n: usize, half: F) -> Result<Vec<(f64, f64)>>
where
    F: FnOnce(&[f64]) -> Result<IvpTrace>,
{
    if n < 3 || n % 2 == 0 {
        return Err(Error::Argument("oracle sampling needs an odd grid of at least 3 points"));
    }
    let m = (n - 1) / 2;
    let s0 = interval.midpoint();
    let step = 0.5 * interval.length() / m as f64;
    let right: Vec<f64> = (1..=m)
        .map(|i| if i == m { interval.b_bar() } else { s0 + step * i as f64 })
        .collect();
    let trace = half(&right)?;
    let mut values = Vec::with_capacity(m + 1);
    values.push(trace.nodes[0].y);
    for &s in &right {
        values.push(trace.at(s).ok_or(Error::Argument("missing oracle stop"))?.y);
    }
    let mut out = Vec::with_capacity(n);
    for i in (1..=m).rev() {
        let s = if i == m { interval.a_bar() } else { s0 - step * i as f64 };
        out.push((s, values[i]));
    }
    out.push((s0, values[0]));
    for i in 1..=m {
        out.push((right[i - 1], values[i]));
    }
    Ok(out)
}

/// Shooting solution of the Emden problem sampled on `n` uniform points.
pub fn oracle_emden_samples(interval: Interval, p: f64, n: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
    let xi = shoot_emden(interval, p, tol)?.peak;
    mirrored_samples(interval, n, |stops| emden_half(interval, p, xi, stops, tol))
}

/// Shooting solution of the Gelfand problem with peak `μ` sampled on `n`
/// uniform points.
pub fn oracle_gelfand_samples(
    interval: Interval,
    lambda: f64,
    mu: f64,
    n: usize,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    mirrored_samples(interval, n, |stops| gelfand_half(interval, lambda, mu, stops, tol))
}

/// `∫ |W|^q` for the shooting Emden solution by composite Simpson on `n`
/// points (odd; the half-grid should also have an even number of panels).
pub fn oracle_lq_norm_pow(interval: Interval, p: f64, q: f64, n: usize, tol: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::domain("norm exponent q", q));
    }
    let samples = oracle_emden_samples(interval, p, n, tol)?;
    let h = (interval.length()) / (n - 1) as f64;
    let m = (n - 1) / 2;
    if m % 2 != 0 {
        return Err(Error::Argument("Simpson's rule needs an even number of half-panels"));
    }
    // Symmetric: integrate the right half and double.
    let right = &samples[m..];
    let mut sum = 0.0;
    for (i, &(_, w)) in right.iter().enumerate() {
        let weight = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * w.abs().powf(q);
    }
    Ok(2.0 * sum * h / 3.0)
}
