//! Log-gamma, digamma, trigamma and Pochhammer symbols for positive real
//! arguments.
//!
//! Every function shifts its argument upward with the functional recurrence
//! until it exceeds [`ASYMPTOTIC_THRESHOLD`], then sums the Stirling-type
//! asymptotic series with Bernoulli numbers through `B_12`.

use crate::error::{domain, Result};
use serde::Serialize;

/// Euler–Mascheroni constant, `-psi0(1)`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `zeta(2) = pi^2/6 = psi1(1)`.
pub const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Arguments at or above this value go straight to the asymptotic series.
pub const ASYMPTOTIC_THRESHOLD: f64 = 12.0;

/// Bernoulli numbers `B_2, B_4, ..., B_12`.
pub const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// A polygamma value together with the order and argument it was computed at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyGammaValue {
    pub value: f64,
    pub order: u8,
    pub argument: f64,
}

fn check_positive(func: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(
            func,
            format!("argument must be positive and finite, got {x}"),
        ))
    }
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(ln_gamma_pos(x))
}

/// `ln Gamma(x)` without the domain check. Callers guarantee `x > 0`.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    let mut z = x;
    let mut prod = 1.0;
    while z < ASYMPTOTIC_THRESHOLD {
        prod *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // B_{2l} / (2l (2l-1) z^{2l-1}), summed from the smallest term up
    let mut series = 0.0;
    let mut pow = inv * inv2.powi(BERNOULLI_EVEN.len() as i32 - 1);
    for l in (1..=BERNOULLI_EVEN.len()).rev() {
        let two_l = 2.0 * l as f64;
        series += BERNOULLI_EVEN[l - 1] / (two_l * (two_l - 1.0)) * pow;
        pow *= z * z;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series - prod.ln()
}

/// Digamma `psi0(x) = d/dx ln Gamma(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(x: f64) -> f64 {
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut pow = inv2.powi(BERNOULLI_EVEN.len() as i32);
    for l in (1..=BERNOULLI_EVEN.len()).rev() {
        series += BERNOULLI_EVEN[l - 1] / (2.0 * l as f64) * pow;
        pow /= inv2;
    }
    z.ln() - 0.5 / z - series - shift
}

/// Trigamma `psi1(x) = d^2/dx^2 ln Gamma(x)` for `x > 0`.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    Ok(trigamma_pos(x))
}

pub(crate) fn trigamma_pos(x: f64) -> f64 {
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv * inv2.powi(BERNOULLI_EVEN.len() as i32);
    for l in (1..=BERNOULLI_EVEN.len()).rev() {
        series += BERNOULLI_EVEN[l - 1] * pow;
        pow /= inv2;
    }
    (1.0 + 2.0 * z) * 0.5 * inv2 + series + shift
}

/// `psi0` or `psi1` as a tagged value.
pub fn polygamma(order: u8, x: f64) -> Result<PolyGammaValue> {
    let value = match order {
        0 => digamma(x)?,
        1 => trigamma(x)?,
        _ => {
            return Err(domain(
                "polygamma",
                format!("order {order} not supported (0 or 1)"),
            ))
        }
    };
    Ok(PolyGammaValue {
        value,
        order,
        argument: x,
    })
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`; `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// `sum ln Gamma(num) - sum ln Gamma(den)`, all arguments positive.
pub fn log_gamma_ratio(num_args: &[f64], den_args: &[f64]) -> Result<f64> {
    let mut acc = crate::sum::Accumulator::new();
    for &x in num_args {
        acc.add(ln_gamma(x)?);
    }
    for &x in den_args {
        acc.add(-ln_gamma(x)?);
    }
    Ok(acc.value())
}

/// Truncated large-argument expansion of `psi0`, keeping `terms` Bernoulli terms.
pub fn digamma_asymptotic(x: f64, terms: usize) -> f64 {
    let mut s = x.ln() - 0.5 / x;
    for l in 1..=terms.min(BERNOULLI_EVEN.len()) {
        s -= BERNOULLI_EVEN[l - 1] / (2.0 * l as f64 * x.powi(2 * l as i32));
    }
    s
}

/// Truncated large-argument expansion of `psi1`, keeping `terms` Bernoulli terms.
pub fn trigamma_asymptotic(x: f64, terms: usize) -> f64 {
    let mut s = (1.0 + 2.0 * x) / (2.0 * x * x);
    for l in 1..=terms.min(BERNOULLI_EVEN.len()) {
        s += BERNOULLI_EVEN[l - 1] / x.powi(2 * l as i32 + 1);
    }
    s
}
