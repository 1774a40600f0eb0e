//! Jacobi polynomials `J_k^(a,b)` in the classical normalization
//! `J_k^(a,b)(1) = (a+1)_k / k!`, their norms, and Gauss–Jacobi rules.

use crate::error::{domain, Result};
use crate::kernel::{Case, EnsembleSpec};
use crate::specfun::ln_gamma_pos;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

fn check_params(func: &'static str, alpha: f64, beta: f64) -> Result<()> {
    if alpha > -1.0 && beta > -1.0 {
        Ok(())
    } else {
        Err(domain(
            func,
            format!("Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"),
        ))
    }
}

/// `J_k^(alpha,beta)(x)` by the three-term recurrence.
pub fn jacobi_eval(k: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_params("jacobi_eval", alpha, beta)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain("jacobi_eval", format!("x={x} outside [-1, 1]")));
    }
    Ok(jacobi(k, alpha, beta, x))
}

/// Recurrence evaluation without argument checks.
pub fn jacobi(k: usize, a: f64, b: f64, x: f64) -> f64 {
    let mut p_prev = 1.0;
    if k == 0 {
        return p_prev;
    }
    let mut p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for n in 1..k {
        let (next, cur) = (recurrence_step(n, a, b, x, p, p_prev), p);
        p_prev = cur;
        p = next;
    }
    p
}

#[inline]
fn recurrence_step(n: usize, a: f64, b: f64, x: f64, p: f64, p_prev: f64) -> f64 {
    let n = n as f64;
    let c = 2.0 * n + a + b;
    let big_a = 2.0 * (n + 1.0) * (n + a + b + 1.0) * c;
    let big_b = (c + 1.0) * (a * a - b * b);
    let big_c = (c + 1.0) * c * (c + 2.0);
    let big_d = 2.0 * (n + a) * (n + b) * (c + 2.0);
    ((big_b + big_c * x) * p - big_d * p_prev) / big_a
}

/// Fills `out[k] = J_k^(a,b)(x)` for `k = 0..out.len()`.
pub fn jacobi_sequence(a: f64, b: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for n in 1..out.len() - 1 {
        out[n + 1] = recurrence_step(n, a, b, x, out[n], out[n - 1]);
    }
}

/// `ln h_k` for the weight `((1-x)/2)^a ((1+x)/2)^b` on `[-1, 1]`:
/// `h_k = 2 Gamma(k+a+1) Gamma(k+b+1) / ((2k+a+b+1) Gamma(k+1) Gamma(k+a+b+1))`.
pub fn ln_norm(k: usize, a: f64, b: f64) -> f64 {
    let k = k as f64;
    std::f64::consts::LN_2 + ln_gamma_pos(k + a + 1.0) + ln_gamma_pos(k + b + 1.0)
        - (2.0 * k + a + b + 1.0).ln()
        - ln_gamma_pos(k + 1.0)
        - ln_gamma_pos(k + a + b + 1.0)
}

/// Kernel norm `h_k` of the ensemble: case A uses `J_{2k}^(a,a)` on `[0, 1]`,
/// case B uses `J_k^(a,b)` on `[-1, 1]`.
pub fn norm_h(k: usize, spec: &EnsembleSpec) -> f64 {
    let (a, b) = (spec.a() as f64, spec.b() as f64);
    match spec.case {
        Case::A => {
            let k = k as f64;
            let ln = 2.0 * ln_gamma_pos(2.0 * k + a + 1.0)
                - (4.0 * k + 2.0 * a + 1.0).ln()
                - ln_gamma_pos(2.0 * k + 2.0 * a + 1.0)
                - ln_gamma_pos(2.0 * k + 1.0);
            ln.exp()
        }
        Case::B => ln_norm(k, a, b).exp(),
    }
}

/// Jacobi parameters with the norms of the first `max_degree + 1` polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiBasis {
    pub alpha: f64,
    pub beta: f64,
    pub max_degree: usize,
    pub norms: Vec<f64>,
}

impl JacobiBasis {
    pub fn new(alpha: f64, beta: f64, max_degree: usize) -> Result<Self> {
        check_params("JacobiBasis::new", alpha, beta)?;
        let norms = (0..=max_degree)
            .map(|k| ln_norm(k, alpha, beta).exp())
            .collect();
        Ok(JacobiBasis {
            alpha,
            beta,
            max_degree,
            norms,
        })
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        jacobi(k, self.alpha, self.beta, x)
    }
}

/// Nodes and weights for `int_{-1}^{1} (1-x)^alpha (1+x)^beta f(x) dx`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect::<crate::sum::Accumulator>()
            .value()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Jacobi rule of the given order via the eigen-decomposition of the
/// symmetric tridiagonal recurrence matrix.
pub fn gauss_jacobi_rule(order: usize, alpha: f64, beta: f64) -> Result<QuadratureRule> {
    check_params("gauss_jacobi_rule", alpha, beta)?;
    if order == 0 {
        return Err(domain("gauss_jacobi_rule", "order must be at least 1"));
    }
    let (a, b) = (alpha, beta);
    let ab = a + b;
    let mut t = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        t[(k, k)] = diag;
        if k + 1 < order {
            let j = kf + 1.0;
            let off2 = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            let off = off2.sqrt();
            t[(k, k + 1)] = off;
            t[(k + 1, k)] = off;
        }
    }
    let ln_mu0 =
        (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma_pos(a + 1.0) + ln_gamma_pos(b + 1.0)
            - ln_gamma_pos(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        alpha,
        beta,
    })
}

/// Gauss–Legendre rule (`alpha = beta = 0`).
pub fn gauss_legendre_rule(order: usize) -> Result<QuadratureRule> {
    gauss_jacobi_rule(order, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_degree() {
        assert_eq!(jacobi(0, 3.0, 1.0, 0.2), 1.0);
        assert!((jacobi(1, 0.0, 0.0, 0.5) - 0.5).abs() < 1e-15);
        assert!((jacobi(2, 0.0, 0.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_rule() {
        let r = gauss_legendre_rule(1).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);
    }
}
