//! Radial solutions of five weighted elliptic problems on the annulus
//! `A = {a < |x| < b} ⊂ ℝ^N`, obtained from the 1-D problems by exact changes
//! of variable:
//!
//! | kind           | equation                                         | reduction              |
//! |----------------|--------------------------------------------------|------------------------|
//! | `PowerPlanar`  | `-Δu = u^p/|x|²`, N = 2                          | `u(r) = W(-log r)`     |
//! | `PowerHigher`  | `-Δu = (N-2)² u^p/|x|^(2(N-1))`, N ≥ 3           | `u(r) = W(r^(2-N))`    |
//! | `HardyHenon`   | `-Δu - C_N u/|x|² = |x|^((N-1)(p-1)/2) u^p`      | `u(r) = r^(-(N-1)/2) W(r)` |
//! | `ExpPlanar`    | `-Δu = λ e^u/|x|²`, N = 2                        | `u(r) = w(-log r)`     |
//! | `ExpHigher`    | `-Δu = λ (N-2)² e^u/|x|^(2(N-1))`, N ≥ 3         | `u(r) = w(r^(2-N))`    |
//!
//! with `C_N = (N-1)(N-3)/4`. For the Hardy–Hénon kind the weight
//! `r^(-(N-1)/2)` is the one that removes the first-order term:
//! `-Δ(r^(-(N-1)/2) W) - C_N r^(-(N-1)/2) W/r² = -r^(-(N-1)/2) W''`.

use num_traits::Float;

use crate::emden::{solve_emden, EmdenSolution, Interval};
use crate::gelfand::{lambda_star, solve_branch, Branch, GelfandSolution};
use crate::profiles::{emden_limit_p_infty, emden_limit_p_one, eps_p, green_1d};
use crate::{Error, Result};

/// Default step of the finite-difference residual.
pub const RESIDUAL_STEP: f64 = 1e-4;

/// Which weighted problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    PowerPlanar,
    PowerHigher,
    HardyHenon,
    ExpPlanar,
    ExpHigher,
}

impl ProblemKind {
    /// Power nonlinearity (`parameter` is `p`) rather than exponential (`λ`).
    pub fn is_power(self) -> bool {
        matches!(self, Self::PowerPlanar | Self::PowerHigher | Self::HardyHenon)
    }
}

/// Asymptotic regime of a limit profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `p → ∞`: Green's-function tent.
    PInfty,
    /// `p ↘ 1`: sine factor (the diverging prefactor `ξ_p` is left out).
    POne,
    /// `λ → 0` on the unstable branch: `2√2 G(·, s₀)`, the limit of `δ_λ u`.
    LambdaZero,
}

/// A weighted problem on the annulus `a < r < b` in dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusProblem {
    kind: ProblemKind,
    dim: u32,
    a: f64,
    b: f64,
    parameter: f64,
}

impl AnnulusProblem {
    /// `parameter` is `p > 1` for the power kinds and `λ > 0` for the
    /// exponential ones.
    pub fn new(kind: ProblemKind, dim: u32, a: f64, b: f64, parameter: f64) -> Result<Self> {
        let dim_ok = match kind {
            ProblemKind::PowerPlanar | ProblemKind::ExpPlanar => dim == 2,
            ProblemKind::PowerHigher | ProblemKind::ExpHigher => dim >= 3,
            ProblemKind::HardyHenon => dim >= 1,
        };
        if !dim_ok {
            return Err(Error::domain("dimension N", dim as f64));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain("inner radius a", a));
        }
        if !(b > a && b.is_finite()) {
            return Err(Error::domain("outer radius b", b));
        }
        if kind.is_power() {
            if !(parameter > 1.0 && parameter.is_finite()) {
                return Err(Error::domain("exponent p", parameter));
            }
        } else if !(parameter > 0.0 && parameter.is_finite()) {
            return Err(Error::domain("lambda", parameter));
        }
        Ok(AnnulusProblem { kind, dim, a, b, parameter })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `p` or `λ`.
    pub fn parameter(&self) -> f64 {
        self.parameter
    }

    /// The annulus `[a, b]` as an interval in `r`.
    pub fn radial_interval(&self) -> Interval {
        Interval::new(self.a, self.b).expect("validated radii")
    }

    /// `C_N = (N-1)(N-3)/4`.
    pub fn c_n(&self) -> f64 {
        let n = self.dim as f64;
        (n - 1.0) * (n - 3.0) / 4.0
    }

    fn exponent(&self) -> f64 {
        2.0 - self.dim as f64
    }

    /// The 1-D interval of the reduced problem.
    pub fn reduce_interval(&self) -> Interval {
        let (lo, hi) = match self.kind {
            ProblemKind::PowerPlanar | ProblemKind::ExpPlanar => (-self.b.ln(), -self.a.ln()),
            ProblemKind::PowerHigher | ProblemKind::ExpHigher => {
                (self.b.powf(self.exponent()), self.a.powf(self.exponent()))
            }
            ProblemKind::HardyHenon => (self.a, self.b),
        };
        Interval::new(lo, hi).expect("image of a valid annulus")
    }

    /// Reduced coordinate `s` of the radius `r`.
    pub fn to_reduced(&self, r: f64) -> f64 {
        match self.kind {
            ProblemKind::PowerPlanar | ProblemKind::ExpPlanar => -r.ln(),
            ProblemKind::PowerHigher | ProblemKind::ExpHigher => r.powf(self.exponent()),
            ProblemKind::HardyHenon => r,
        }
    }

    /// Radius `r` of the reduced coordinate `s`.
    pub fn from_reduced(&self, s: f64) -> f64 {
        match self.kind {
            ProblemKind::PowerPlanar | ProblemKind::ExpPlanar => (-s).exp(),
            ProblemKind::PowerHigher | ProblemKind::ExpHigher => s.powf(1.0 / self.exponent()),
            ProblemKind::HardyHenon => s,
        }
    }

    /// Factor between `u(r)` and the reduced solution: `r^(-(N-1)/2)` for the
    /// Hardy–Hénon kind, 1 otherwise.
    pub fn weight(&self, r: f64) -> f64 {
        match self.kind {
            ProblemKind::HardyHenon => r.powf(-(self.dim as f64 - 1.0) / 2.0),
            _ => 1.0,
        }
    }

    /// Right-hand side of `-u'' - ((N-1)/r) u' = f(r, u)`.
    pub fn rhs(&self, r: f64, u: f64) -> f64 {
        let n = self.dim as f64;
        let q = self.parameter;
        let far = || (n - 2.0) * (n - 2.0) * r.powf(-2.0 * (n - 1.0));
        match self.kind {
            ProblemKind::PowerPlanar => u.powf(q) / (r * r),
            ProblemKind::PowerHigher => far() * u.powf(q),
            ProblemKind::HardyHenon => {
                self.c_n() * u / (r * r) + r.powf((n - 1.0) * (q - 1.0) / 2.0) * u.powf(q)
            }
            ProblemKind::ExpPlanar => q * u.exp() / (r * r),
            ProblemKind::ExpHigher => q * far() * u.exp(),
        }
    }

    /// The fold `λ*` of the reduced Gelfand problem (exponential kinds only).
    pub fn lambda_star(&self) -> Result<f64> {
        if self.kind.is_power() {
            return Err(Error::Argument("fold requested for a power nonlinearity"));
        }
        Ok(lambda_star(self.reduce_interval())?.lambda_star)
    }
}

/// The reduced 1-D solution behind a radial solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduced {
    Emden(EmdenSolution),
    Gelfand(GelfandSolution),
}

/// A radial solution `u(r)` of an [`AnnulusProblem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSolution {
    problem: AnnulusProblem,
    reduced: Reduced,
}

/// Solves the reduced problem. The exponential kinds need a branch.
pub fn solve_radial(problem: AnnulusProblem, branch: Option<Branch>) -> Result<RadialSolution> {
    let interval = problem.reduce_interval();
    let reduced = if problem.kind.is_power() {
        Reduced::Emden(solve_emden(interval, problem.parameter)?)
    } else {
        let branch = branch.ok_or(Error::Argument("exponential problems need a branch"))?;
        Reduced::Gelfand(solve_branch(interval, problem.parameter, branch)?)
    };
    Ok(RadialSolution { problem, reduced })
}

impl RadialSolution {
    /// Wraps the exponential-kind solution whose reduced peak is `μ`.
    pub fn from_peak(problem: AnnulusProblem, mu: f64) -> Result<Self> {
        if problem.kind.is_power() {
            return Err(Error::Argument("peak parametrization needs an exponential kind"));
        }
        let sol = GelfandSolution::from_peak(problem.reduce_interval(), mu)?;
        let problem = AnnulusProblem {
            parameter: sol.lambda(),
            ..problem
        };
        Ok(RadialSolution {
            problem,
            reduced: Reduced::Gelfand(sol),
        })
    }

    pub fn problem(&self) -> AnnulusProblem {
        self.problem
    }

    pub fn reduced(&self) -> Reduced {
        self.reduced
    }

    /// Peak of the reduced solution: `ξ_p` or `μ`. For the Hardy–Hénon kind
    /// this is the weighted norm `‖r^((N-1)/2) u‖_∞`.
    pub fn reduced_peak(&self) -> f64 {
        match self.reduced {
            Reduced::Emden(sol) => sol.xi(),
            Reduced::Gelfand(sol) => sol.mu(),
        }
    }

    fn reduced_eval(&self, s: f64) -> Result<f64> {
        let interval = self.problem.reduce_interval();
        let s = s.clamp(interval.a_bar(), interval.b_bar());
        match self.reduced {
            Reduced::Emden(sol) => sol.eval(s),
            Reduced::Gelfand(sol) => sol.eval(s),
        }
    }

    /// `u(r)` for `r ∈ [a, b]`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        self.problem.radial_interval().check("radius r", r)?;
        Ok(self.problem.weight(r) * self.reduced_eval(self.problem.to_reduced(r))?)
    }

    /// `|-u'' - ((N-1)/r) u' - f(r, u)|` with central differences of step `h`.
    pub fn residual(&self, r: f64, h: f64) -> Result<f64> {
        if !(h > 0.0) {
            return Err(Error::domain("finite-difference step h", h));
        }
        if !(r - h > self.problem.a && r + h < self.problem.b) {
            return Err(Error::domain("residual stencil centre r", r));
        }
        let (lo, mid, hi) = (self.eval(r - h)?, self.eval(r)?, self.eval(r + h)?);
        let second = (hi - 2.0 * mid + lo) / (h * h);
        let first = (hi - lo) / (2.0 * h);
        let n = self.problem.dim as f64;
        Ok((-second - (n - 1.0) / r * first - self.problem.rhs(r, mid)).abs())
    }

    /// Zoom scale: `ε_p` (with `p ε_p² ξ_p^(p-1) = 1`) or `δ_λ`.
    pub fn zoom(&self) -> f64 {
        match self.reduced {
            Reduced::Emden(sol) => eps_p(&sol),
            Reduced::Gelfand(sol) => sol.delta(),
        }
    }

    /// Window of the rescaled profile, the image of `(a, b)`.
    pub fn rescaled_window(&self) -> Interval {
        let interval = self.problem.reduce_interval();
        let (s0, z) = (interval.midpoint(), self.zoom());
        Interval::new((interval.a_bar() - s0) / z, (interval.b_bar() - s0) / z)
            .expect("image of a valid interval")
    }

    /// The blow-up rescaling around the peak, computed through the radial
    /// solution: with `r(t)` the radius of the reduced point `z t + s₀`,
    /// `(p/ξ)(u(r(t))/weight(r(t)) - ξ)` for the power kinds and
    /// `u(r(t)) - μ` for the exponential kinds.
    pub fn rescaled_profile(&self, t: f64) -> Result<f64> {
        self.rescaled_window().check("rescaled coordinate t", t)?;
        let s = self.zoom() * t + self.problem.reduce_interval().midpoint();
        let r = self.problem.from_reduced(s).clamp(self.problem.a, self.problem.b);
        let peak = self.reduced_peak();
        match self.reduced {
            Reduced::Emden(sol) => {
                let v = self.eval(r)? / self.problem.weight(r);
                Ok(sol.p() / peak * (v - peak))
            }
            Reduced::Gelfand(_) => Ok(self.eval(r)? - peak),
        }
    }
}

/// Green's function of `-d²/dr² - ((N-1)/r) d/dr` on `(a, b)` with Dirichlet
/// data.
pub fn green_annulus(dim: u32, a: f64, b: f64, r: f64, s: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::domain("dimension N", dim as f64));
    }
    let radii = Interval::new(a, b)?;
    if !(a > 0.0) {
        return Err(Error::domain("inner radius a", a));
    }
    radii.check("radius r", r)?;
    radii.check("radius s", s)?;
    if dim == 2 {
        let (la, lb, lr, ls) = (a.ln(), b.ln(), r.ln(), s.ln());
        let product = if r <= s { (lr - la) * (lb - ls) } else { (ls - la) * (lb - lr) };
        return Ok(s / (lb - la) * product);
    }
    let e = 2.0 - dim as f64;
    let (pa, pb, pr, ps) = (a.powf(e), b.powf(e), r.powf(e), s.powf(e));
    let product = if r <= s { (pb - ps) * (pr - pa) } else { (pa - ps) * (pr - pb) };
    Ok(s.powf(dim as f64 - 1.0) / ((dim as f64 - 2.0) * (pa - pb)) * product)
}

/// The radius that the reduced midpoint maps to: `√(ab)` for N = 2,
/// `((a^(2-N) + b^(2-N))/2)^(1/(2-N))` for N ≥ 3.
pub fn r0(dim: u32, a: f64, b: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::domain("dimension N", dim as f64));
    }
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::domain("annulus radii", b));
    }
    if dim == 2 {
        return Ok((a * b).sqrt());
    }
    let e = 2.0 - dim as f64;
    Ok((0.5 * (a.powf(e) + b.powf(e))).powf(1.0 / e))
}

/// The limit profile of the radial solution at `r` in the given regime.
pub fn radial_limit_profile(problem: &AnnulusProblem, regime: Regime, r: f64) -> Result<f64> {
    match (problem.kind.is_power(), regime) {
        (true, Regime::LambdaZero) => {
            return Err(Error::Argument("the lambda -> 0 regime needs an exponential kind"))
        }
        (false, Regime::PInfty | Regime::POne) => {
            return Err(Error::Argument("the p regimes need a power kind"))
        }
        _ => {}
    }
    problem.radial_interval().check("radius r", r)?;
    let interval = problem.reduce_interval();
    let s = problem.to_reduced(r).clamp(interval.a_bar(), interval.b_bar());
    let reduced = match regime {
        Regime::PInfty => emden_limit_p_infty(interval, s)?,
        Regime::POne => emden_limit_p_one(interval, s)?,
        Regime::LambdaZero => {
            2.0 * core::f64::consts::SQRT_2 * green_1d(interval, s, interval.midpoint())?
        }
    };
    Ok(problem.weight(r) * reduced)
}
