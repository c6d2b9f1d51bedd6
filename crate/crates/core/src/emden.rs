//! The Emden problem `-W'' = W^p` on `(ā, b̄)` with `W(ā) = W(b̄) = 0`, solved
//! by its time map.
//!
//! The positive solution is symmetric about the midpoint `s₀` and peaks there
//! at `ξ_p`. Energy conservation gives `W' = √(2/(p+1) (ξ^(p+1) - W^(p+1)))`,
//! so with `y = W/ξ` the distance from the nearer endpoint is
//!
//! ```text
//! s - ā = (b̄ - ā) / (2 L_p) · ∫₀^y dτ / √(1 - τ^(p+1))
//! ```
//!
//! Evaluating `W` means inverting that monotone integral. Working with `y`
//! instead of `W` keeps everything `O(1)` no matter how large `ξ^(p+1)` gets.

use num_traits::Float;

use crate::quad::{self, special::one_minus_pow_complement};
use crate::roots::newton_increasing;
use crate::{Error, Result};

/// Relative tolerance of the inner time-map quadratures.
const INNER_TOL: f64 = 1e-14;
/// Below this value of `1 - W/ξ` the time map is inverted through the tail
/// integral, which is singular at the peak.
const PEAK_BAND: f64 = 1e-6;
/// Points this close to an endpoint (relative to the length) evaluate to 0.
const BOUNDARY_SNAP: f64 = 1e-14;
/// Newton stopping threshold on `W/ξ`.
const LEVEL_TOL: f64 = 1e-12;

/// An open interval `(ā, b̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a_bar: f64,
    b_bar: f64,
}

impl Interval {
    pub fn new(a_bar: f64, b_bar: f64) -> Result<Self> {
        if !(a_bar.is_finite() && b_bar.is_finite()) {
            return Err(Error::Argument("interval endpoints must be finite"));
        }
        let mid = 0.5 * (a_bar + b_bar);
        if !(a_bar < mid && mid < b_bar) {
            return Err(Error::Argument("interval must satisfy a_bar < midpoint < b_bar"));
        }
        Ok(Interval { a_bar, b_bar })
    }

    pub fn a_bar(&self) -> f64 {
        self.a_bar
    }

    pub fn b_bar(&self) -> f64 {
        self.b_bar
    }

    /// `s₀ = (ā + b̄) / 2`.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a_bar + self.b_bar)
    }

    pub fn length(&self) -> f64 {
        self.b_bar - self.a_bar
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.a_bar && s <= self.b_bar
    }

    pub(crate) fn check(&self, what: &'static str, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::domain(what, s))
        }
    }

    /// Distance from `s` to the nearer endpoint.
    pub(crate) fn distance_to_boundary(&self, s: f64) -> f64 {
        (s - self.a_bar).min(self.b_bar - s)
    }

    /// `n ≥ 2` uniformly spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let step = self.length() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i + 1 == n {
                self.b_bar
            } else {
                self.a_bar + step * i as f64
            }
        })
    }
}

/// The positive solution `W_p` of the Emden problem on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmdenSolution {
    interval: Interval,
    p: f64,
    xi: f64,
    l_p: f64,
    /// Value of the tail integral at `1 - W/ξ = PEAK_BAND`.
    band_tail: f64,
}

/// Solves the Emden problem on `interval` for exponent `p > 1`.
///
/// The peak is `ξ_p = ((2/(b̄-ā)) √((p+1)/2) L_p)^(2/(p-1))`.
pub fn solve_emden(interval: Interval, p: f64) -> Result<EmdenSolution> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::domain("exponent p (must exceed 1)", p));
    }
    let l_p = quad::l_p(p)?;
    let ln_base = (2.0 / interval.length()).ln() + 0.5 * ((p + 1.0) / 2.0).ln() + l_p.ln();
    let xi = (2.0 / (p - 1.0) * ln_base).exp();
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::domain("peak value overflows for exponent p", p));
    }
    let band_tail = tail_integral(p + 1.0, PEAK_BAND)?;
    Ok(EmdenSolution {
        interval,
        p,
        xi,
        l_p,
        band_tail,
    })
}

/// `∫₀^d du / √(1 - (1-u)^n)`, the time spent within `d` of the peak level.
fn tail_integral(n: f64, d: f64) -> Result<f64> {
    if d == 0.0 {
        return Ok(0.0);
    }
    quad::integrate_endpoint_singular_with_complement(
        |_, u| 1.0 / one_minus_pow_complement(u, n).sqrt(),
        0.0,
        d,
        false,
        INNER_TOL,
    )
    .map(|r| r.value)
}

/// `∫₀^y dτ / √(1 - τ^n)` for `y` away from 1.
fn head_integral(n: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    quad::integrate(|t| 1.0 / (-(n * t.ln()).exp_m1()).sqrt(), 0.0, y, INNER_TOL).map(|r| r.value)
}

/// `W/ξ` and `1 - W/ξ`, the latter exact near the peak.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Level {
    pub(crate) ratio: f64,
    pub(crate) defect: f64,
}

impl EmdenSolution {
    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Peak value `ξ_p = ‖W_p‖_∞ = W_p(s₀)`.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// The constant `L_p` used for this solution.
    pub fn l_p(&self) -> f64 {
        self.l_p
    }

    pub(crate) fn level(&self, s: f64) -> Result<Level> {
        self.interval.check("evaluation point s", s)?;
        let half = 0.5 * self.interval.length();
        let dist = self.interval.distance_to_boundary(s);
        if dist <= BOUNDARY_SNAP * self.interval.length() {
            return Ok(Level { ratio: 0.0, defect: 1.0 });
        }
        let n = self.p + 1.0;
        // Time left until the peak, in units where the half interval takes L_p.
        let tail = self.l_p * ((half - dist) / half).max(0.0);
        if tail == 0.0 {
            return Ok(Level { ratio: 1.0, defect: 0.0 });
        }
        if tail <= self.band_tail {
            let guess = (0.25 * n * tail * tail).min(PEAK_BAND);
            let defect = newton_increasing(
                |d| {
                    let g = tail_integral(n, d)?;
                    Ok((g - tail, 1.0 / one_minus_pow_complement(d, n).sqrt()))
                },
                0.0,
                PEAK_BAND,
                guess,
                LEVEL_TOL * 1e-6,
            )?;
            Ok(Level { ratio: 1.0 - defect, defect })
        } else {
            let head = self.l_p * dist / half;
            let guess = (head / self.l_p).min(1.0 - PEAK_BAND);
            let ratio = newton_increasing(
                |y| {
                    let f = head_integral(n, y)?;
                    Ok((f - head, 1.0 / (-(n * y.ln()).exp_m1()).sqrt()))
                },
                0.0,
                1.0 - PEAK_BAND,
                guess,
                LEVEL_TOL,
            )?;
            Ok(Level { ratio, defect: 1.0 - ratio })
        }
    }

    /// `W_p(s)` for `s ∈ [ā, b̄]`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        self.level(s).map(|l| self.xi * l.ratio)
    }

    /// `W_p(s) / ξ_p`.
    pub fn normalized(&self, s: f64) -> Result<f64> {
        self.level(s).map(|l| l.ratio)
    }

    /// `W_p'(s)`, positive left of the midpoint and negative right of it.
    pub fn eval_prime(&self, s: f64) -> Result<f64> {
        let level = self.level(s)?;
        let s0 = self.interval.midpoint();
        if s == s0 || level.defect == 0.0 {
            return Ok(0.0);
        }
        let n = self.p + 1.0;
        let magnitude = (2.0 / n).sqrt()
            * (0.5 * n * self.xi.ln()).exp()
            * one_minus_pow_complement(level.defect, n).sqrt();
        Ok(if s < s0 { magnitude } else { -magnitude })
    }

    /// `‖W_p‖_q^q = √(2/(p+1)) ξ^((2q-p+1)/2) B((q+1)/(p+1), 1/2)`.
    pub fn lq_norm_pow(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::domain("norm exponent q", q));
        }
        let n = self.p + 1.0;
        let ln = 0.5 * (2.0 / n).ln()
            + 0.5 * (2.0 * q - self.p + 1.0) * self.xi.ln()
            + quad::ln_beta((q + 1.0) / n, 0.5)?;
        Ok(ln.exp())
    }

    /// `‖W_p‖_q`.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        let ln_pow = self.lq_norm_pow(q)?.ln();
        Ok((ln_pow / q).exp())
    }
}

/// Large-`p` limit of `‖W_p‖_p^p`, which equals `2 W_p'(ā)` and tends to
/// twice the slope of the limiting tent, `4 / (b̄ - ā)`.
pub fn lp_norm_pow_limit(interval: Interval) -> f64 {
    4.0 / interval.length()
}
