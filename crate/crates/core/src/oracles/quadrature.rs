//! Direct numerical integration of the mean and variance integrals.
//!
//! The integrands carry `ln((1 -+ x)/2)` factors at the endpoints, which limit
//! plain Gauss–Jacobi rules to algebraic convergence. The rule used here maps
//! Gauss–Legendre nodes through a polynomial substitution whose Jacobian
//! vanishes to third order at both ends; the half-coordinates
//! `t = (1-x)/2`, `s = (1+x)/2` are produced directly so that nodes crowded
//! against an endpoint keep full relative precision.

use crate::error::{domain, Result};
use crate::jacobi::gauss_legendre_rule;
use crate::kernel::{Case, EnsembleSpec, KernelContext};
use crate::moments::entropy_v_halves;
use crate::sum::Accumulator;

/// Points given by their half-coordinates and weights for `dx` on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct EndpointRule {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EndpointRule {
    /// Build from a Gauss–Legendre rule of the given order.
    pub fn new(order: usize) -> Result<Self> {
        let base = gauss_legendre_rule(order)?;
        let mut t = Vec::with_capacity(order);
        let mut s = Vec::with_capacity(order);
        let mut weights = Vec::with_capacity(order);
        for (&u, &wu) in base.nodes.iter().zip(&base.weights) {
            let e = 1.0 - u.abs();
            // tau(e) = (35/32) int_0^e y^3 (2-y)^3 dy, tau(1) = 1/2
            let tau = 35.0 / 32.0 * e.powi(4) * (2.0 - 2.4 * e + e * e - e * e * e / 7.0);
            let near = tau;
            let far = 1.0 - tau;
            if u >= 0.0 {
                t.push(near);
                s.push(far);
            } else {
                t.push(far);
                s.push(near);
            }
            let one_minus_u2 = e * (2.0 - e);
            weights.push(wu * 35.0 / 16.0 * one_minus_u2.powi(3));
        }
        Ok(EndpointRule { t, s, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.s[i] - self.t[i]
    }

    /// `int_{-1}^{1} f(t, s) dx` where `f` receives the half-coordinates.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        (0..self.len())
            .map(|i| self.weights[i] * f(self.t[i], self.s[i]))
            .collect::<Accumulator>()
            .value()
    }
}

/// Default Legendre order: `4m + 2(a+b) + 40`.
pub fn default_order(spec: &EnsembleSpec) -> usize {
    (4 * spec.m + 2 * (spec.a() + spec.b()) + 40) as usize
}

/// Quadrature value with the difference to a 20-point-richer rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
}

struct Tabulated {
    /// `phi[i * m + k]`: orthonormal function `k` at node `i`.
    phi: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
    m: usize,
    /// Case A integrates the even extension over `[-1, 1]`, so each
    /// integration dimension carries a factor 1/2.
    half: f64,
}

fn tabulate(spec: &EnsembleSpec, order: usize) -> Result<Tabulated> {
    if order < 2 {
        return Err(domain("quadrature", "order must be at least 2"));
    }
    let ctx = KernelContext::new(*spec)?;
    let rule = EndpointRule::new(order)?;
    let m = spec.m as usize;
    let mut phi = vec![0.0; rule.len() * m];
    let mut scratch = Vec::new();
    for i in 0..rule.len() {
        ctx.orthonormal_at(
            rule.t[i],
            rule.s[i],
            &mut phi[i * m..(i + 1) * m],
            &mut scratch,
        );
    }
    let v = (0..rule.len())
        .map(|i| entropy_v_halves(rule.t[i], rule.s[i]))
        .collect();
    Ok(Tabulated {
        phi,
        v,
        w: rule.weights,
        m,
        half: match spec.case {
            Case::A => 0.5,
            Case::B => 1.0,
        },
    })
}

fn mean_at(spec: &EnsembleSpec, order: usize) -> Result<f64> {
    let tab = tabulate(spec, order)?;
    let m = tab.m;
    let acc: Accumulator = (0..tab.w.len())
        .map(|i| {
            let row = &tab.phi[i * m..(i + 1) * m];
            let diag: f64 = row.iter().map(|p| p * p).sum();
            tab.w[i] * tab.v[i] * diag
        })
        .collect();
    Ok(-tab.half * acc.value())
}

/// `(I_A, I_B)`; `I_B` is the tensor-product rule applied to `v v K^2`,
/// summed as `sum_{k,l} (sum_i w_i v_i phi_k phi_l)^2`.
fn integrals_at(spec: &EnsembleSpec, order: usize) -> Result<(f64, f64)> {
    let tab = tabulate(spec, order)?;
    let m = tab.m;
    let mut ia = Accumulator::new();
    let mut gram = vec![Accumulator::new(); m * m];
    for i in 0..tab.w.len() {
        let row = &tab.phi[i * m..(i + 1) * m];
        let wv = tab.w[i] * tab.v[i];
        let diag: f64 = row.iter().map(|p| p * p).sum();
        ia.add(wv * tab.v[i] * diag);
        for k in 0..m {
            for l in k..m {
                gram[k * m + l].add(wv * row[k] * row[l]);
            }
        }
    }
    let mut ib = Accumulator::new();
    for k in 0..m {
        for l in k..m {
            let g = gram[k * m + l].value();
            ib.add(if k == l { g * g } else { 2.0 * g * g });
        }
    }
    Ok((tab.half * ia.value(), tab.half * tab.half * ib.value()))
}

/// `E[S] = -m int v g1` by quadrature.
pub fn mean_quadrature(spec: &EnsembleSpec, order: usize) -> Result<QuadEstimate> {
    let value = mean_at(spec, order)?;
    let richer = mean_at(spec, order + 20)?;
    Ok(QuadEstimate {
        value,
        error: (value - richer).abs(),
    })
}

/// `V[S] = I_A - I_B` by quadrature.
pub fn variance_quadrature(spec: &EnsembleSpec, order: usize) -> Result<QuadEstimate> {
    let (ia, ib) = integrals_at(spec, order)?;
    let (ia2, ib2) = integrals_at(spec, order + 20)?;
    let value = ia - ib;
    Ok(QuadEstimate {
        value,
        error: (value - (ia2 - ib2)).abs(),
    })
}

/// The two variance integrals separately, at one order.
pub fn variance_integrals(spec: &EnsembleSpec, order: usize) -> Result<(f64, f64)> {
    integrals_at(spec, order)
}
