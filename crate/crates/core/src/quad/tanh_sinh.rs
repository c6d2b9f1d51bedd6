use num_traits::Float;

use super::QuadratureResult;
use crate::{Error, Result};

const HALF_PI: f64 = core::f64::consts::FRAC_PI_2;

/// Default relative tolerance for all quadratures in the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Evaluation budget per quadrature.
pub const MAX_EVALUATIONS: usize = 1 << 18;

// At t = 6.1 the node complement 1 - tanh(π/2 sinh t) is ~1e-304.
const T_MAX: f64 = 6.1;
const MIN_LEVEL: u32 = 3;

/// A node sits at distance `d_lo` from `lo` and `d_hi` from `hi`; the one on
/// the near side is computed directly, never as a difference.
#[derive(Clone, Copy)]
struct Sample {
    x: f64,
    d_lo: f64,
    d_hi: f64,
}

/// Complement `1 - tanh(u)` and weight `du/dt · sech²(u)` for `u = π/2 sinh t`, `t ≥ 0`.
fn abscissa(t: f64) -> (f64, f64) {
    let u = HALF_PI * t.sinh();
    let e = (-2.0 * u).exp();
    let complement = 2.0 * e / (1.0 + e);
    let weight = HALF_PI * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
    (complement, weight)
}

fn check_args(lo: f64, hi: f64, rel_tol: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Argument("integration limits must be finite"));
    }
    if !(lo < hi) {
        return Err(Error::Argument("integration limits must satisfy lo < hi"));
    }
    if !(rel_tol > 1e-15 && rel_tol < 1e-2) {
        return Err(Error::domain("rel_tol", rel_tol));
    }
    Ok(())
}

fn tanh_sinh<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(Sample) -> Option<f64>,
{
    check_args(lo, hi, rel_tol)?;
    let width = hi - lo;
    let half = 0.5 * width;
    let mut evaluations = 0usize;

    let mut eval = |t: f64, evaluations: &mut usize| -> Result<f64> {
        let (complement, weight) = abscissa(t);
        let d = half * complement;
        if t == 0.0 {
            *evaluations += 1;
            let s = Sample { x: lo + half, d_lo: half, d_hi: half };
            return value(&mut f, s).map(|v| v * weight);
        }
        if d == 0.0 {
            return Ok(0.0);
        }
        let right = Sample { x: hi - d, d_lo: width - d, d_hi: d };
        let left = Sample { x: lo + d, d_lo: d, d_hi: width - d };
        *evaluations += 2;
        Ok(weight * (value(&mut f, right)? + value(&mut f, left)?))
    };

    // Level 0: unit spacing.
    let mut raw = 0.0;
    let mut t = 0.0;
    while t <= T_MAX {
        raw += eval(t, &mut evaluations)?;
        t += 1.0;
    }
    let mut h = 1.0;
    let mut estimate = half * h * raw;
    let mut error = f64::INFINITY;

    let mut level = 0u32;
    loop {
        level += 1;
        h *= 0.5;
        let new_nodes = 2 * ((T_MAX / h) as usize / 2 + 1);
        if evaluations + new_nodes > MAX_EVALUATIONS {
            return Err(Error::Convergence {
                what: "tanh-sinh quadrature",
                estimate,
                error,
            });
        }
        let mut t = h;
        while t <= T_MAX {
            raw += eval(t, &mut evaluations)?;
            t += 2.0 * h;
        }
        let next = half * h * raw;
        error = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVEL && (error <= rel_tol * estimate.abs() || error == 0.0) {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: error,
                evaluations,
            });
        }
    }
}

fn value<F: FnMut(Sample) -> Option<f64>>(f: &mut F, s: Sample) -> Result<f64> {
    match f(s) {
        None => Ok(0.0),
        Some(v) if v.is_finite() => Ok(v),
        Some(_) => Err(Error::IntegrandDomain { at: s.x }),
    }
}

/// Integrates `f` over `[lo, hi]` with the double-exponential rule.
///
/// Integrable endpoint singularities are fine; nodes whose abscissa rounds
/// onto an endpoint are dropped.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    tanh_sinh(
        |s| (s.x > lo && s.x < hi).then(|| f(s.x)),
        lo,
        hi,
        rel_tol,
    )
}

/// Integrates `f` with an inverse-square-root blow-up at one endpoint.
///
/// `f` only sees the abscissa, so accuracy is limited by how well `f` can
/// resolve `hi - x` from `x`. That loses roughly half the digits when the
/// singular endpoint is not zero; use
/// [`integrate_endpoint_singular_with_complement`] when the integrand can be
/// written in terms of the distance to the singular endpoint.
pub fn integrate_endpoint_singular<F>(
    f: F,
    lo: f64,
    hi: f64,
    singular_at_hi: bool,
    rel_tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    let _ = singular_at_hi;
    integrate(f, lo, hi, rel_tol)
}

/// Like [`integrate_endpoint_singular`], but `f(x, d)` also receives the exact
/// distance `d` from `x` to the singular endpoint (`hi` if `singular_at_hi`,
/// else `lo`).
pub fn integrate_endpoint_singular_with_complement<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    singular_at_hi: bool,
    rel_tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> f64,
{
    tanh_sinh(
        |s| {
            let d = if singular_at_hi { s.d_hi } else { s.d_lo };
            (d > 0.0).then(|| f(s.x, d))
        },
        lo,
        hi,
        rel_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn arcsine_with_complement() {
        let r = integrate_endpoint_singular_with_complement(
            |_, d| 1.0 / (d * (2.0 - d)).sqrt(),
            0.0,
            1.0,
            true,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        assert!((r.value - FRAC_PI_2).abs() < 1e-14, "{r:?}");
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
    }

    #[test]
    fn arcsine_plain_closure() {
        let r = integrate_endpoint_singular(|s| 1.0 / (1.0 - s * s).sqrt(), 0.0, 1.0, true, 1e-10)
            .unwrap();
        assert!((r.value - FRAC_PI_2).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn constant() {
        let r = integrate_endpoint_singular(|_| 1.0, 0.0, 1.0, false, DEFAULT_REL_TOL).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    /// Midpoint oracle for ∫₀¹ ds/√(1-s⁴): with s = sin(θ)^(1/2) and θ = φ² the
    /// integral becomes ∫ φ / √sin(φ²) dφ over (0, √(π/2)), which is smooth.
    fn quarter_power_oracle() -> f64 {
        let n = 1 << 20;
        let top = FRAC_PI_2.sqrt();
        let h = top / n as f64;
        (0..n)
            .map(|i| {
                let phi = (i as f64 + 0.5) * h;
                phi / (phi * phi).sin().sqrt()
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn quarter_power_singularity() {
        let oracle = quarter_power_oracle();
        assert!((oracle - 1.311_028_8).abs() < 1e-7);
        let r = integrate_endpoint_singular_with_complement(
            |s, d| 1.0 / (d * (2.0 - d) * (1.0 + s * s)).sqrt(),
            0.0,
            1.0,
            true,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        assert!((r.value - oracle).abs() < 1e-11, "{r:?} vs {oracle}");
    }

    #[test]
    fn singular_at_lo() {
        let r = integrate_endpoint_singular_with_complement(
            |_, d| 1.0 / d.sqrt(),
            2.0,
            3.0,
            false,
            DEFAULT_REL_TOL,
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-13, "{r:?}");
    }

    #[test]
    fn smooth_oscillation() {
        let r = integrate(|x| x.sin(), 0.0, PI, DEFAULT_REL_TOL).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nan_integrand_is_a_domain_error() {
        let err = integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::IntegrandDomain { .. }));
    }

    #[test]
    fn bad_arguments() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, 1e-16),
            Err(Error::Domain { .. })
        ));
        assert!(integrate(|x| x, 0.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        // Non-integrable 1/x-type blow-up never settles.
        let err = integrate_endpoint_singular_with_complement(
            |_, d| 1.0 / d,
            0.0,
            1.0,
            false,
            1e-12,
        )
        .unwrap_err();
        match err {
            Error::Convergence { estimate, .. } => assert!(estimate.is_finite()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
