//! The Gelfand (Bratu) problem `-w'' = λ e^w` on `(ā, b̄)` with zero boundary
//! values.
//!
//! A solution is fixed by its peak `μ = w(s₀)`. Energy conservation gives
//! `w' = √(2λ (e^μ - e^w))`, and with `w = μ - u²` the time map loses its
//! endpoint singularity:
//!
//! ```text
//! |s - s₀| · 2 / (b̄ - ā) · J(μ) = K(u),   K(u) = ∫₀^u 2v dv / √(1 - e^(-v²)),   J(μ) = K(√μ)
//! ```
//!
//! and `λ(μ) = 2 e^(-μ) J(μ)² / (b̄ - ā)²`. The curve `λ(μ)` rises from 0,
//! folds at `(μ*, λ*)` and decays again; below the fold each λ has a minimal
//! and an unstable solution.

use alloc::vec::Vec;

use num_traits::Float;

use crate::emden::Interval;
use crate::profiles::green_1d;
use crate::quad;
use crate::roots::{bisect, golden_max, newton_increasing};
use crate::{Error, Result};

/// Largest peak value the unstable branch search will consider.
pub const MU_MAX: f64 = 60.0;

const INNER_TOL: f64 = 1e-14;
const BOUNDARY_SNAP: f64 = 1e-14;
const FOLD_SCAN_POINTS: usize = 200;
const FOLD_SCAN_RANGE: (f64, f64) = (1e-3, 50.0);
const FOLD_MU_TOL: f64 = 1e-8;
/// Relative distance to λ* inside which the fold solution is returned.
const FOLD_SNAP: f64 = 1e-10;

/// Which of the two solutions below the fold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The stable solution with `μ < μ*`; tends to zero as `λ → 0`.
    Minimal,
    /// The solution with `μ > μ*`; blows up as `λ → 0`.
    Unstable,
}

/// Turning point of the `λ(μ)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fold {
    pub lambda_star: f64,
    pub mu_star: f64,
}

/// Sampled `(μ, λ(μ))` curve with its fold.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram {
    pub samples: Vec<(f64, f64)>,
    pub mu_star: f64,
    pub lambda_star: f64,
}

impl BifurcationDiagram {
    /// Number of strict interior local maxima of the sampled `λ`.
    pub fn local_maxima(&self) -> usize {
        self.samples
            .windows(3)
            .filter(|w| w[1].1 > w[0].1 && w[1].1 > w[2].1)
            .count()
    }
}

/// `2v / √(1 - e^(-v²))`, smooth with value 2 at the origin.
fn regularized_integrand(v: f64) -> f64 {
    let x = v * v;
    if x < 1e-6 {
        2.0 / (1.0 - x / 2.0 + x * x / 6.0).sqrt()
    } else {
        2.0 * v / (-(-x).exp_m1()).sqrt()
    }
}

/// `K(u) = ∫₀^u 2v dv / √(1 - e^(-v²))`.
fn time_map(u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(0.0);
    }
    quad::integrate(regularized_integrand, 0.0, u, INNER_TOL).map(|r| r.value)
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("peak value mu", mu))
    }
}

/// The unique `λ` whose symmetric solution on `interval` peaks at `μ > 0`.
pub fn lambda_of_mu(interval: Interval, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    let j = time_map(mu.sqrt())?;
    Ok(2.0 * (-mu).exp() * j * j / (interval.length() * interval.length()))
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

/// Locates the fold by a coarse log-spaced scan followed by golden-section
/// refinement.
pub fn lambda_star(interval: Interval) -> Result<Fold> {
    let mus: Vec<f64> = log_spaced(FOLD_SCAN_RANGE.0, FOLD_SCAN_RANGE.1, FOLD_SCAN_POINTS).collect();
    let lambdas = mus
        .iter()
        .map(|&mu| lambda_of_mu(interval, mu))
        .collect::<Result<Vec<f64>>>()?;
    let (best, _) = lambdas
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &l)| if l > acc.1 { (i, l) } else { acc });
    if best == 0 || best + 1 == mus.len() {
        return Err(Error::Convergence {
            what: "fold search (maximum at scan boundary)",
            estimate: mus[best],
            error: f64::INFINITY,
        });
    }
    let (mu_star, lambda_star) = golden_max(
        |mu| lambda_of_mu(interval, mu),
        mus[best - 1],
        mus[best + 1],
        FOLD_MU_TOL,
    )?;
    Ok(Fold { lambda_star, mu_star })
}

/// Samples `λ(μ)` at the given peaks and attaches the fold.
pub fn bifurcation_diagram(interval: Interval, mus: &[f64]) -> Result<BifurcationDiagram> {
    if mus.is_empty() {
        return Err(Error::Argument("empty list of peak values"));
    }
    let samples = mus
        .iter()
        .map(|&mu| lambda_of_mu(interval, mu).map(|l| (mu, l)))
        .collect::<Result<Vec<_>>>()?;
    let fold = lambda_star(interval)?;
    Ok(BifurcationDiagram {
        samples,
        mu_star: fold.mu_star,
        lambda_star: fold.lambda_star,
    })
}

/// Solves for the given branch at `0 < λ < λ*`.
pub fn solve_branch(interval: Interval, lambda: f64, branch: Branch) -> Result<GelfandSolution> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain("lambda", lambda));
    }
    let fold = lambda_star(interval)?;
    if (lambda - fold.lambda_star).abs() <= FOLD_SNAP * fold.lambda_star {
        return GelfandSolution::with_branch(interval, fold.mu_star, branch);
    }
    if lambda > fold.lambda_star {
        return Err(Error::NoSolution {
            lambda,
            lambda_star: fold.lambda_star,
        });
    }
    let excess = |mu: f64| {
        if mu == 0.0 {
            Ok(-lambda)
        } else {
            lambda_of_mu(interval, mu).map(|l| l - lambda)
        }
    };
    let mu = match branch {
        Branch::Minimal => bisect(excess, 0.0, fold.mu_star, 0.0)?,
        Branch::Unstable => bisect(excess, fold.mu_star, MU_MAX, 0.0).map_err(|_| {
            Error::Argument("unstable branch peak exceeds the search limit MU_MAX")
        })?,
    };
    let j = time_map(mu.sqrt())?;
    Ok(GelfandSolution {
        interval,
        mu,
        lambda,
        branch,
        time_integral: j,
    })
}

/// A solution of the Gelfand problem, identified by its peak value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GelfandSolution {
    interval: Interval,
    mu: f64,
    lambda: f64,
    branch: Branch,
    /// `J(μ)`.
    time_integral: f64,
}

impl GelfandSolution {
    /// The solution peaking at `μ`; its branch is read off the fold.
    pub fn from_peak(interval: Interval, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        let fold = lambda_star(interval)?;
        let branch = if mu < fold.mu_star {
            Branch::Minimal
        } else {
            Branch::Unstable
        };
        Self::with_branch(interval, mu, branch)
    }

    fn with_branch(interval: Interval, mu: f64, branch: Branch) -> Result<Self> {
        check_mu(mu)?;
        let j = time_map(mu.sqrt())?;
        let lambda = 2.0 * (-mu).exp() * j * j / (interval.length() * interval.length());
        Ok(GelfandSolution {
            interval,
            mu,
            lambda,
            branch,
            time_integral: j,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Peak value `μ = W_λ(s₀) = ‖W_λ‖_∞`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `δ_λ = (λ e^μ)^(-1/2)`.
    pub fn delta(&self) -> f64 {
        (-0.5 * (self.lambda.ln() + self.mu)).exp()
    }

    /// `γ_λ = λ ∫ e^(W_λ) = 2 W_λ'(ā) = 2 √(2λ (e^μ - 1))`.
    pub fn gamma(&self) -> f64 {
        2.0 * (2.0 * self.lambda * self.mu.exp_m1()).sqrt()
    }

    /// `u ∈ [0, √μ]` with `W = μ - u²` at distance `r` from the midpoint.
    fn depth(&self, r: f64) -> Result<f64> {
        let half = 0.5 * self.interval.length();
        let top = self.mu.sqrt();
        if r <= BOUNDARY_SNAP * half {
            return Ok(0.0);
        }
        if r >= half * (1.0 - BOUNDARY_SNAP) {
            return Ok(top);
        }
        let target = self.time_integral * r / half;
        newton_increasing(
            |u| Ok((time_map(u)? - target, regularized_integrand(u))),
            0.0,
            top,
            top * r / half,
            1e-13 * top,
        )
    }

    /// `W_λ(s)` for `s ∈ [ā, b̄]`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        self.interval.check("evaluation point s", s)?;
        if self.interval.distance_to_boundary(s) <= BOUNDARY_SNAP * self.interval.length() {
            return Ok(0.0);
        }
        let u = self.depth((s - self.interval.midpoint()).abs())?;
        Ok((self.mu - u * u).max(0.0))
    }

    /// `W_λ'(s) = ±√(2λ (e^μ - e^(W_λ(s))))`, positive left of the midpoint.
    pub fn eval_prime(&self, s: f64) -> Result<f64> {
        self.interval.check("evaluation point s", s)?;
        let s0 = self.interval.midpoint();
        let u = self.depth((s - s0).abs())?;
        let magnitude = (2.0 * self.lambda).sqrt()
            * (0.5 * self.mu).exp()
            * (-(-u * u).exp_m1()).sqrt();
        Ok(if s < s0 {
            magnitude
        } else if s > s0 {
            -magnitude
        } else {
            0.0
        })
    }

    /// The window `I_λ = ((ā - s₀)/δ, (b̄ - s₀)/δ)` of the rescaled profile.
    pub fn rescaled_window(&self) -> Interval {
        let delta = self.delta();
        let s0 = self.interval.midpoint();
        Interval::new(
            (self.interval.a_bar() - s0) / delta,
            (self.interval.b_bar() - s0) / delta,
        )
        .expect("rescaled window of a valid interval")
    }

    /// `W̃_λ(t) = W_λ(δ t + s₀) - μ`.
    pub fn rescaled_profile(&self, t: f64) -> Result<f64> {
        let window = self.rescaled_window();
        window.check("rescaled coordinate t", t)?;
        let u = self.depth(self.delta() * t.abs())?;
        Ok(-(u * u).min(self.mu))
    }

    /// Evaluates the Green representation `∫_{I_λ} G(s, δt + s₀) e^(W̃_λ(t)) dt`
    /// by quadrature and returns its distance from `δ_λ W_λ(s)`.
    pub fn green_representation_check(&self, s: f64) -> Result<f64> {
        Ok((self.green_representation(s)? - self.delta() * self.eval(s)?).abs())
    }

    /// The right-hand side of the Green representation at `s`.
    pub fn green_representation(&self, s: f64) -> Result<f64> {
        self.interval.check("evaluation point s", s)?;
        let delta = self.delta();
        let s0 = self.interval.midpoint();
        let window = self.rescaled_window();
        let mut breaks = [window.a_bar(), 0.0, (s - s0) / delta, window.b_bar()];
        breaks.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for pair in breaks.windows(2) {
            if pair[1] <= pair[0] {
                continue;
            }
            let piece = quad::integrate(
                |t| {
                    let tau = (delta * t + s0).clamp(self.interval.a_bar(), self.interval.b_bar());
                    match (green_1d(self.interval, s, tau), self.rescaled_profile(t)) {
                        (Ok(g), Ok(w)) => g * w.exp(),
                        _ => f64::NAN,
                    }
                },
                pair[0],
                pair[1],
                1e-11,
            )?;
            total += piece.value;
        }
        Ok(total)
    }
}
