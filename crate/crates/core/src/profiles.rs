//! Limit profiles and blow-up rescalings.
//!
//! As `p → ∞` the Emden solution approaches the tent `(4/(b̄-ā)) G(·, s₀)`;
//! zoomed around its peak by `ε_p` it approaches the Liouville profile
//! `U(t) = log(4e^(√2 t)/(1+e^(√2 t))²)`. As `p ↘ 1`, `W_p/ξ_p` approaches the
//! first Dirichlet eigenfunction. The Gelfand unstable branch has the same
//! local profile under the `δ_λ` zoom and `δ_λ W_λ → 2√2 G(·, s₀)` globally.

use core::f64::consts::{PI, SQRT_2};

use num_traits::Float;

use crate::emden::{EmdenSolution, Interval};
use crate::gelfand::GelfandSolution;
use crate::{Error, Result};

/// Grid size used for sup-distances unless a caller asks otherwise.
pub const DEFAULT_GRID: usize = 2001;

/// Green's function of `-d²/ds²` on the interval with Dirichlet data.
pub fn green_1d(interval: Interval, s: f64, t: f64) -> Result<f64> {
    interval.check("Green's function argument s", s)?;
    interval.check("Green's function argument t", t)?;
    let (a, b) = (interval.a_bar(), interval.b_bar());
    let product = if s <= t { (s - a) * (b - t) } else { (b - s) * (t - a) };
    Ok(product / interval.length())
}

/// The Liouville profile, the entire solution of `-U'' = e^U`, `U(0) = U'(0) = 0`.
///
/// Written as `log 4 - √2|t| - 2 log(1 + e^(-√2|t|))`, which never overflows.
pub fn liouville_u(t: f64) -> f64 {
    let x = SQRT_2 * t.abs();
    4.0.ln() - x - 2.0 * (-x).exp().ln_1p()
}

/// The `p → ∞` limit: the tent `(4/(b̄-ā)) G(s, s₀)` with peak 1.
pub fn emden_limit_p_infty(interval: Interval, s: f64) -> Result<f64> {
    Ok(4.0 / interval.length() * green_1d(interval, s, interval.midpoint())?)
}

/// The `p ↘ 1` limit of `W_p/ξ_p`: `sin(π(s - ā)/(b̄ - ā))`.
pub fn emden_limit_p_one(interval: Interval, s: f64) -> Result<f64> {
    interval.check("evaluation point s", s)?;
    Ok((PI * (s - interval.a_bar()) / interval.length()).sin())
}

/// `ε_p` defined by `p ε_p² ξ_p^(p-1) = 1`.
pub fn eps_p(sol: &EmdenSolution) -> f64 {
    (-0.5 * (sol.p().ln() + (sol.p() - 1.0) * sol.xi().ln())).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Source {
    Emden(EmdenSolution),
    Gelfand(GelfandSolution),
}

/// A solution zoomed around its peak: `t = (s - s₀)/ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledProfile {
    eps: f64,
    window: Interval,
    source: Source,
}

impl RescaledProfile {
    /// The zoom scale (`ε_p` or `δ_λ`).
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// The image of the interval, `((ā - s₀)/ε, (b̄ - s₀)/ε)`.
    pub fn window(&self) -> Interval {
        self.window
    }

    /// The rescaled profile at `t`; zero at `t = 0` and non-positive.
    pub fn sample(&self, t: f64) -> Result<f64> {
        self.window.check("rescaled coordinate t", t)?;
        match self.source {
            Source::Emden(sol) => {
                let interval = sol.interval();
                let s = (self.eps * t + interval.midpoint())
                    .clamp(interval.a_bar(), interval.b_bar());
                Ok(-sol.p() * sol.level(s)?.defect)
            }
            Source::Gelfand(sol) => sol.rescaled_profile(t),
        }
    }
}

/// `W̃_p(t) = (p/ξ_p)(W_p(ε_p t + s₀) - ξ_p)`, which solves
/// `-W̃'' = (1 + W̃/p)^p` on its window.
pub fn rescale_emden(sol: &EmdenSolution) -> RescaledProfile {
    let eps = eps_p(sol);
    let interval = sol.interval();
    let s0 = interval.midpoint();
    RescaledProfile {
        eps,
        window: Interval::new((interval.a_bar() - s0) / eps, (interval.b_bar() - s0) / eps)
            .expect("image of a valid interval"),
        source: Source::Emden(*sol),
    }
}

/// `W̃_λ(t) = W_λ(δ_λ t + s₀) - μ`, which solves `-W̃'' = e^W̃`.
pub fn rescale_gelfand(sol: &GelfandSolution) -> RescaledProfile {
    RescaledProfile {
        eps: sol.delta(),
        window: sol.rescaled_window(),
        source: Source::Gelfand(*sol),
    }
}

/// Largest `|f - g|` over `n ≥ 2` uniformly spaced points of the interval,
/// endpoints included.
pub fn sup_distance<F, G>(mut f: F, mut g: G, interval: Interval, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    G: FnMut(f64) -> Result<f64>,
{
    if n < 2 {
        return Err(Error::Argument("sup distance needs at least two grid points"));
    }
    let mut sup = 0.0f64;
    for s in interval.grid(n) {
        let d = (f(s)? - g(s)?).abs();
        if !d.is_finite() {
            return Err(Error::NonFinite { at: s });
        }
        sup = sup.max(d);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emden::solve_emden;
    use crate::quad;
    use proptest::prelude::*;
    use std::vec::Vec;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn tent_distance(p: f64) -> f64 {
        let sol = solve_emden(unit(), p).unwrap();
        sup_distance(|s| sol.eval(s), |s| emden_limit_p_infty(unit(), s), unit(), DEFAULT_GRID).unwrap()
    }

    fn local_distance(profile: &RescaledProfile) -> f64 {
        let window = Interval::new(-4.0, 4.0).unwrap();
        sup_distance(|t| profile.sample(t), |t| Ok(liouville_u(t)), window, DEFAULT_GRID).unwrap()
    }

    #[test]
    fn green_values() {
        let i = Interval::new(1.0, 4.0).unwrap();
        assert!((green_1d(i, 2.5, 2.5).unwrap() - 0.75).abs() < 1e-15);
        for t in i.grid(7) {
            assert_eq!(green_1d(i, 1.0, t).unwrap(), 0.0);
            assert_eq!(green_1d(i, t, 4.0).unwrap(), 0.0);
        }
        assert!(green_1d(i, 0.5, 2.0).is_err());
        assert!(green_1d(i, 2.0, 4.5).is_err());
    }

    #[test]
    fn liouville_values() {
        assert_eq!(liouville_u(0.0), 0.0);
        let direct = |t: f64| {
            let e = (SQRT_2 * t).exp();
            (4.0 * e / ((1.0 + e) * (1.0 + e))).ln()
        };
        for t in [-3.0, -0.4, 0.25, 1.0, 7.0] {
            assert!((liouville_u(t) - direct(t)).abs() < 1e-14);
        }
        assert!(liouville_u(1e3).is_finite());
        let mass: f64 = [(-60.0, 0.0), (0.0, 60.0)]
            .iter()
            .map(|&(lo, hi)| quad::integrate(|t| liouville_u(t).exp(), lo, hi, 1e-13).unwrap().value)
            .sum();
        assert!((mass - 2.0 * SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn liouville_residual() {
        let h = 1e-3;
        for k in 0..=100 {
            let t = -5.0 + 0.1 * k as f64;
            let second = (liouville_u(t + h) - 2.0 * liouville_u(t) + liouville_u(t - h)) / (h * h);
            assert!((-second - liouville_u(t).exp()).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn limit_profiles() {
        let i = Interval::new(-1.0, 3.0).unwrap();
        assert!((emden_limit_p_infty(i, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(emden_limit_p_infty(i, -1.0).unwrap(), 0.0);
        assert!((emden_limit_p_infty(i, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((emden_limit_p_one(i, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(emden_limit_p_one(i, -1.0).unwrap(), 0.0);
        assert!((emden_limit_p_one(i, 0.0).unwrap() - SQRT_2 / 2.0).abs() < 1e-15);
        assert!(emden_limit_p_one(i, 3.5).is_err());
    }

    #[test]
    fn eps_identity_and_bound() {
        for p in [1.5, 3.0, 10.0, 100.0, 1000.0] {
            let sol = solve_emden(unit(), p).unwrap();
            let e = eps_p(&sol);
            let lhs = p * e * e * sol.xi().powf(p - 1.0);
            assert!((lhs - 1.0).abs() < 1e-13, "p={p}: {lhs}");
        }
        let scaled: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&p| eps_p(&solve_emden(unit(), p).unwrap()) * p)
            .collect();
        assert!(scaled.iter().all(|&x| x < 5.0), "{scaled:?}");
        let three = solve_emden(unit(), 3.0).unwrap();
        assert!((eps_p(&three) - 1.0 / (3.0 * three.xi() * three.xi()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sup_distance_basics() {
        let sine = |s| emden_limit_p_one(unit(), s);
        assert_eq!(sup_distance(sine, sine, unit(), 11).unwrap(), 0.0);
        assert!((sup_distance(|_| Ok(0.0), sine, unit(), 10_001).unwrap() - 1.0).abs() < 1e-4);
        assert!(sup_distance(sine, sine, unit(), 1).is_err());
        assert!(matches!(
            sup_distance(|_| Ok(f64::NAN), sine, unit(), 5),
            Err(Error::NonFinite { .. })
        ));
        assert!(tent_distance(100.0) < 0.1);
    }

    #[test]
    fn rescaled_emden() {
        let sol = solve_emden(unit(), 7.0).unwrap();
        let profile = rescale_emden(&sol);
        assert_eq!(profile.sample(0.0).unwrap(), 0.0);
        assert!((profile.window().length() - 1.0 / profile.eps()).abs() < 1e-9);
        assert!(profile.sample(profile.window().b_bar() * 1.001).is_err());
        let h = 1e-3;
        let p = sol.p();
        for k in 1..12 {
            let t = -2.6 + 0.43 * k as f64;
            let w = profile.sample(t).unwrap();
            let second = (profile.sample(t + h).unwrap() - 2.0 * w + profile.sample(t - h).unwrap()) / (h * h);
            assert!((-second - (1.0 + w / p).powf(p)).abs() < 1e-2, "t={t}");
        }
        let edge = profile.sample(profile.window().a_bar()).unwrap();
        assert!((edge + p).abs() < 1e-12);
        let large = rescale_emden(&solve_emden(unit(), 200.0).unwrap());
        assert!(local_distance(&large) < 0.05);
    }

    #[test]
    fn tent_convergence() {
        let d: Vec<f64> = [20.0, 50.0, 100.0, 200.0].iter().map(|&p| tent_distance(p)).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }

    #[test]
    fn sine_convergence() {
        let d: Vec<f64> = [1.5, 1.2, 1.1, 1.05]
            .iter()
            .map(|&p| {
                let sol = solve_emden(unit(), p).unwrap();
                sup_distance(|s| sol.normalized(s), |s| emden_limit_p_one(unit(), s), unit(), DEFAULT_GRID)
                    .unwrap()
            })
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        assert!(d[3] < 0.05, "{d:?}");
    }

    #[test]
    fn liouville_convergence() {
        let d: Vec<f64> = [20.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&p| local_distance(&rescale_emden(&solve_emden(unit(), p).unwrap())))
            .collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
        assert!(d[3] < 0.05);
    }

    #[test]
    fn gelfand_convergence() {
        let sols: Vec<GelfandSolution> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&mu| GelfandSolution::from_peak(unit(), mu).unwrap())
            .collect();
        // The zoomed Bratu solution is `-2 log cosh(t/√2) = U(t)` on its whole
        // window for every μ, so the local distance sits at rounding level.
        let local: Vec<f64> = sols.iter().map(|s| local_distance(&rescale_gelfand(s))).collect();
        assert!(local.iter().all(|&d| d < 1e-10), "{local:?}");
        let global: Vec<f64> = sols
            .iter()
            .map(|sol| {
                sup_distance(
                    |s| Ok(sol.delta() * sol.eval(s)?),
                    |s| Ok(2.0 * SQRT_2 * green_1d(unit(), s, 0.5)?),
                    unit(),
                    401,
                )
                .unwrap()
            })
            .collect();
        assert!(global.windows(2).all(|w| w[1] < w[0]), "{global:?}");
        assert!(global[2] < 0.1);
        let profile = rescale_gelfand(&sols[0]);
        assert_eq!(profile.eps(), sols[0].delta());
        assert_eq!(profile.sample(0.0).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn green_symmetric(s in 0.0f64..1.0, t in 0.0f64..1.0) {
            let i = Interval::new(-2.0, 5.0).unwrap();
            let (s, t) = (-2.0 + 7.0 * s, -2.0 + 7.0 * t);
            prop_assert!((green_1d(i, s, t).unwrap() - green_1d(i, t, s).unwrap()).abs() < 1e-14);
        }

        #[test]
        fn liouville_even_and_nonpositive(t in -50.0f64..50.0) {
            prop_assert_eq!(liouville_u(t), liouville_u(-t));
            prop_assert!(liouville_u(t) <= 0.0);
        }
    }
}
