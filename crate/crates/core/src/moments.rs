//! Closed-form mean and variance of the entanglement entropy
//! `S = -sum_i v(x_i)`, plus large-dimension limits.

use crate::error::{domain, Result};
use crate::kernel::{Case, EnsembleSpec};
use crate::specfun::{digamma_pos as psi0, pochhammer, trigamma_pos as psi1};
use serde::{Deserialize, Serialize};

/// How a [`MomentReport`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Summation,
    Quadrature,
    MonteCarlo,
}

/// Mean and variance of `S` in nats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub spec: EnsembleSpec,
    pub mean: f64,
    pub variance: f64,
    pub method: Method,
    pub error_estimate: f64,
}

/// `v(x) = t ln t + s ln s` with `t = (1-x)/2`, `s = (1+x)/2`.
pub fn entropy_v(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain("entropy_v", format!("x={x} outside [-1, 1]")));
    }
    Ok(entropy_v_halves((1.0 - x) / 2.0, (1.0 + x) / 2.0))
}

/// `v` from the half-coordinates directly; `0 ln 0 = 0`.
pub fn entropy_v_halves(t: f64, s: f64) -> f64 {
    let xlx = |u: f64| if u > 0.0 { u * u.ln() } else { 0.0 };
    xlx(t) + xlx(s)
}

/// Exact `E[S]`.
pub fn mean_exact(spec: &EnsembleSpec) -> Result<f64> {
    spec.validate()?;
    let m = spec.m as f64;
    let n = spec.n as f64;
    Ok(match spec.case {
        Case::A => {
            (m + n - 0.5) * psi0(2.0 * m + 2.0 * n)
                + (0.25 - m) * psi0(m + n)
                + (0.5 - n) * psi0(2.0 * n)
                - 0.25 * psi0(n)
                - m
        }
        Case::B => {
            let p = spec.p.unwrap() as f64;
            let big = m + n;
            -m * (big - p) / big * psi0(big - p) + big * psi0(big + 1.0)
                - m * p / big * psi0(p + 1.0)
                - n * psi0(n + 1.0)
                - m
        }
    })
}

/// The five rational coefficients of the fixed-particle-number variance.
pub fn case_b_coefficients(m: f64, n: f64, p: f64) -> [f64; 5] {
    let big = m + n;
    let p3 = pochhammer(big - 1.0, 3);
    let p2 = pochhammer(big, 2);
    [
        m * (big - p) * (m * m + 2.0 * m * n + n * n - n * p - 1.0) / p3,
        m * p * (m * m + m * n + n * p - 1.0) / p3,
        m * n * p * (big - p) / (big * p3),
        -m * (m + 1.0) * (m + n - 2.0 * p) / (big * p2),
        -m * (2.0 * m + n + 2.0) / (big * p2),
    ]
}

/// Exact `V[S]`.
pub fn variance_exact(spec: &EnsembleSpec) -> Result<f64> {
    spec.validate()?;
    let m = spec.m as f64;
    let n = spec.n as f64;
    Ok(match spec.case {
        Case::A => {
            (0.5 - m - n) * psi1(2.0 * m + 2.0 * n)
                + (n - 0.5) * psi1(2.0 * n)
                + (m * (2.0 * m + n - 1.0) / (2.0 * m + 2.0 * n - 1.0) - 0.125) * psi1(m + n)
                + 0.125 * psi1(n)
                - 0.5 * (psi0(2.0 * m + 2.0 * n) - psi0(2.0 * n))
        }
        Case::B => {
            let p = spec.p.unwrap() as f64;
            let big = m + n;
            let [c0, c1, c2, c3, c4] = case_b_coefficients(m, n, p);
            let d = psi0(big - p) - psi0(p);
            c0 * psi1(big - p) - big * psi1(big) + n * psi1(n) + c1 * psi1(p) + c2 * d * d + c3 * d
                - psi0(big)
                + psi0(n)
                + c4
        }
    })
}

/// Closed-form mean and variance together.
pub fn exact_report(spec: &EnsembleSpec) -> Result<MomentReport> {
    Ok(MomentReport {
        spec: *spec,
        mean: mean_exact(spec)?,
        variance: variance_exact(spec)?,
        method: Method::ClosedForm,
        error_estimate: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticOrder {
    Leading,
    /// Leading terms plus the `1/(m+n)^2` correction (case B).
    Corrected,
}

/// Point in the large-dimension regime: `f1 = m/(m+n)`, `f2 = p/(m+n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPoint {
    pub f1: f64,
    pub f2: Option<f64>,
    pub order: AsymptoticOrder,
    /// `m + n`, needed for the corrected order.
    pub total_dim: Option<f64>,
}

impl AsymptoticPoint {
    pub fn leading(f1: f64, f2: Option<f64>) -> Self {
        AsymptoticPoint {
            f1,
            f2,
            order: AsymptoticOrder::Leading,
            total_dim: None,
        }
    }

    pub fn corrected(f1: f64, f2: f64, total_dim: f64) -> Self {
        AsymptoticPoint {
            f1,
            f2: Some(f2),
            order: AsymptoticOrder::Corrected,
            total_dim: Some(total_dim),
        }
    }

    /// The point matching a concrete ensemble.
    pub fn of_spec(spec: &EnsembleSpec, order: AsymptoticOrder) -> Self {
        let big = (spec.m + spec.n) as f64;
        AsymptoticPoint {
            f1: spec.m as f64 / big,
            f2: spec.p.map(|p| p as f64 / big),
            order,
            total_dim: Some(big),
        }
    }
}

/// Large-dimension variance at fixed ratios.
pub fn variance_asymptotic(point: &AsymptoticPoint, case: Case) -> Result<f64> {
    let f1 = point.f1;
    if !(f1 > 0.0 && f1 <= 0.5) {
        return Err(domain(
            "variance_asymptotic",
            format!("need 0 < f1 <= 1/2, got {f1}"),
        ));
    }
    let base = f1 + f1 * f1 + (1.0 - f1).ln();
    match case {
        Case::A => match point.order {
            AsymptoticOrder::Leading => Ok(0.5 * base),
            AsymptoticOrder::Corrected => Err(domain(
                "variance_asymptotic",
                "no corrected expansion is available for case A",
            )),
        },
        Case::B => {
            let f2 = point
                .f2
                .ok_or_else(|| domain("variance_asymptotic", "case B requires f2"))?;
            if !(f2 >= f1 && f2 <= 0.5) {
                return Err(domain(
                    "variance_asymptotic",
                    format!("need f1 <= f2 <= 1/2, got f1={f1}, f2={f2}"),
                ));
            }
            let l = ((1.0 - f2) / f2).ln();
            let leading =
                base + f1 * f2 * (1.0 - f1) * (1.0 - f2) * l * l + f1 * f1 * (2.0 * f2 - 1.0) * l;
            match point.order {
                AsymptoticOrder::Leading => Ok(leading),
                AsymptoticOrder::Corrected => {
                    let big = point.total_dim.ok_or_else(|| {
                        domain("variance_asymptotic", "corrected order requires m+n")
                    })?;
                    let bracket =
                        f1 * f1 / ((f2 - 1.0) * (f2 - 1.0)) + f1 * f1 / (f2 * f2) + 12.0 * f1 * f1
                            - 12.0 * f1
                            + 1.0 / ((f1 - 1.0) * (f1 - 1.0))
                            + (f1 - 3.0 * f1 * f1) / (f2 - 1.0)
                            + (3.0 * f1 * f1 - f1) / f2
                            - 1.0
                            + 2.0
                                * (f1 - 1.0)
                                * f1
                                * (12.0 * f2.powi(3) - 18.0 * f2 * f2 + 4.0 * f2 + 1.0)
                                / ((f2 - 1.0) * f2)
                                * l
                            + 12.0 * (f1 - 1.0) * f1 * (f2 - 1.0) * f2 * l * l;
                    Ok(leading + bracket / (12.0 * big * big))
                }
            }
        }
    }
}
