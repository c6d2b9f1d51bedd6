use core::f64::consts::PI;

use num_traits::Float;

use super::tanh_sinh::{integrate_endpoint_singular_with_complement, DEFAULT_REL_TOL};
use crate::{Error, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma argument", x));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln B(x, y)` for `x, y > 0`.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("beta argument x", x));
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain("beta argument y", y));
    }
    Ok(ln_gamma_positive(x) + ln_gamma_positive(y) - ln_gamma_positive(x + y))
}

/// Euler's Beta function `B(x, y) = ∫₀¹ t^(x-1) (1-t)^(y-1) dt`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(Float::exp)
}

/// `1 - (1-d)^n`, accurate for small `d`.
pub(crate) fn one_minus_pow_complement(d: f64, n: f64) -> f64 {
    -(n * (-d).ln_1p()).exp_m1()
}

/// `L_p = ∫₀¹ ds / √(1 - s^(p+1))` for `p > 0`.
///
/// Decreases from `π/2` at `p = 1` towards 1 as `p → ∞`.
pub fn l_p(p: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain("p", p));
    }
    let n = p + 1.0;
    integrate_endpoint_singular_with_complement(
        |_, d| 1.0 / one_minus_pow_complement(d, n).sqrt(),
        0.0,
        1.0,
        true,
        DEFAULT_REL_TOL,
    )
    .map(|r| r.value)
}
