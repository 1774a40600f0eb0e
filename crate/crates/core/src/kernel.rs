//! Ensemble description and the determinantal correlation kernel
//! `K(x,y) = sqrt(w(x) w(y)) sum_{k<m} J_k(x) J_k(y) / h_k`.
//!
//! Case A (arbitrary particle number) lives on `[0, 1]` and uses the even
//! polynomials `J_{2k}^(a,a)`; case B (fixed particle number `p`) lives on
//! `[-1, 1]` and uses `J_k^(a,b)`. The weight is
//! `w(x) = ((1-x)/2)^a ((1+x)/2)^b` in both cases.

use crate::error::{domain, Error, Result};
use crate::jacobi::{jacobi_sequence, norm_h, JacobiBasis};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// Arbitrary number of particles.
    A,
    /// Fixed particle number.
    B,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::A => write!(f, "A"),
            Case::B => write!(f, "B"),
        }
    }
}

/// Subsystem dimensions `m <= n` and, for case B, the particle number `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub case: Case,
    pub m: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u32>,
}

impl EnsembleSpec {
    pub fn case_a(m: u32, n: u32) -> Result<Self> {
        let s = EnsembleSpec {
            case: Case::A,
            m,
            n,
            p: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn case_b(m: u32, n: u32, p: u32) -> Result<Self> {
        let s = EnsembleSpec {
            case: Case::B,
            m,
            n,
            p: Some(p),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn new(case: Case, m: u32, n: u32, p: Option<u32>) -> Result<Self> {
        let s = EnsembleSpec { case, m, n, p };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::InvalidSpec(format!(
                "m must be at least 1, got {}",
                self.m
            )));
        }
        if self.m > self.n {
            return Err(Error::InvalidSpec(format!(
                "m <= n required, got m={}, n={}",
                self.m, self.n
            )));
        }
        match (self.case, self.p) {
            (Case::A, None) => Ok(()),
            (Case::A, Some(_)) => Err(Error::InvalidSpec(
                "particle number p applies to case B only".into(),
            )),
            (Case::B, None) => Err(Error::InvalidSpec("case B requires p".into())),
            (Case::B, Some(p)) if p < self.m || p > self.n => Err(Error::InvalidSpec(format!(
                "m <= p <= n required, got m={}, p={}, n={}",
                self.m, p, self.n
            ))),
            (Case::B, Some(_)) => Ok(()),
        }
    }

    /// Exponent of `(1-x)` in the joint density.
    pub fn a(&self) -> u32 {
        match self.case {
            Case::A => self.n - self.m,
            Case::B => self.n - self.p.unwrap_or(self.n),
        }
    }

    /// Exponent of `(1+x)` in the joint density.
    pub fn b(&self) -> u32 {
        match self.case {
            Case::A => self.n - self.m,
            Case::B => self.p.unwrap_or(self.m) - self.m,
        }
    }

    /// Power of the eigenvalues inside the Vandermonde factor.
    pub fn gamma(&self) -> u32 {
        match self.case {
            Case::A => 2,
            Case::B => 1,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self.case {
            Case::A => (0.0, 1.0),
            Case::B => (-1.0, 1.0),
        }
    }

    pub fn in_support(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        (lo..=hi).contains(&x)
    }

    /// Degree of the `k`-th kernel polynomial.
    pub fn degree(&self, k: usize) -> usize {
        match self.case {
            Case::A => 2 * k,
            Case::B => k,
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.p {
            Some(p) => write!(f, "{}(m={}, n={}, p={})", self.case, self.m, self.n, p),
            None => write!(f, "{}(m={}, n={})", self.case, self.m, self.n),
        }
    }
}

/// `ln w` at the point with `t = (1-x)/2`, `s = (1+x)/2`; `0 * ln 0 = 0`.
pub fn ln_weight(a: f64, b: f64, t: f64, s: f64) -> f64 {
    let part = |e: f64, u: f64| if e == 0.0 { 0.0 } else { e * u.ln() };
    part(a, t) + part(b, s)
}

/// Kernel data for one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelContext {
    pub spec: EnsembleSpec,
    pub basis: JacobiBasis,
    /// `h_k` for `k < m`, in the case's own convention.
    pub norms: Vec<f64>,
    /// Christoffel–Darboux coefficients `(alpha1, alpha2)`; case B only.
    pub cd_coeffs: Option<(f64, f64)>,
}

impl KernelContext {
    pub fn new(spec: EnsembleSpec) -> Result<Self> {
        spec.validate()?;
        let m = spec.m as usize;
        let (a, b) = (spec.a() as f64, spec.b() as f64);
        let basis = JacobiBasis::new(a, b, spec.degree(m))?;
        let norms: Vec<f64> = (0..m).map(|k| norm_h(k, &spec)).collect();
        let cd_coeffs = match spec.case {
            Case::A => None,
            Case::B => {
                let mf = m as f64;
                let h = norms[m - 1];
                let den = h * (a + b + 2.0 * mf - 1.0) * (a + b + 2.0 * mf);
                Some((
                    mf * (a + b + mf) * (a + b + mf + 1.0) / den,
                    mf * (a + b + mf) * (a + b + mf) / den,
                ))
            }
        };
        Ok(KernelContext {
            spec,
            basis,
            norms,
            cd_coeffs,
        })
    }

    fn check(&self, func: &'static str, x: f64) -> Result<()> {
        if self.spec.in_support(x) {
            Ok(())
        } else {
            let (lo, hi) = self.spec.support();
            Err(domain(func, format!("x={x} outside support [{lo}, {hi}]")))
        }
    }

    /// Orthonormal functions `phi_k = sqrt(w) J_k / sqrt(h_k)` at the point
    /// with half-coordinates `t = (1-x)/2`, `s = (1+x)/2`, written into `out`
    /// (length `m`). Taking `t`, `s` directly keeps endpoint weights accurate.
    pub fn orthonormal_at(&self, t: f64, s: f64, out: &mut [f64], scratch: &mut Vec<f64>) {
        let m = self.spec.m as usize;
        let deg = self.spec.degree(m - 1);
        scratch.resize(deg + 1, 0.0);
        let x = s - t;
        jacobi_sequence(self.basis.alpha, self.basis.beta, x, scratch);
        let half_lw = 0.5 * ln_weight(self.basis.alpha, self.basis.beta, t, s);
        for k in 0..m {
            out[k] = scratch[self.spec.degree(k)] * (half_lw - 0.5 * self.norms[k].ln()).exp();
        }
    }

    fn phis(&self, x: f64) -> Vec<f64> {
        let m = self.spec.m as usize;
        let mut out = vec![0.0; m];
        let mut scratch = Vec::new();
        self.orthonormal_at((1.0 - x) / 2.0, (1.0 + x) / 2.0, &mut out, &mut scratch);
        out
    }

    /// `K(x, y)`.
    pub fn kernel_eval(&self, x: f64, y: f64) -> Result<f64> {
        self.check("kernel_eval", x)?;
        self.check("kernel_eval", y)?;
        let (px, py) = (self.phis(x), self.phis(y));
        Ok(px
            .iter()
            .zip(&py)
            .map(|(u, v)| u * v)
            .collect::<crate::sum::Accumulator>()
            .value())
    }

    /// `sum_{k<m} J_k(x)^2 / h_k` by the confluent Christoffel–Darboux formula
    /// (case B).
    pub fn kernel_diag_cd(&self, x: f64) -> Result<f64> {
        self.check("kernel_diag_cd", x)?;
        let (alpha1, alpha2) = self
            .cd_coeffs
            .ok_or_else(|| domain("kernel_diag_cd", "defined for case B only"))?;
        let m = self.spec.m as usize;
        let (a, b) = (self.basis.alpha, self.basis.beta);
        let mut shifted = vec![0.0; m];
        jacobi_sequence(a + 1.0, b + 1.0, x, &mut shifted);
        let mut plain = vec![0.0; m + 1];
        jacobi_sequence(a, b, x, &mut plain);
        let first = alpha1 * shifted[m - 1] * plain[m - 1];
        let second = if m >= 2 {
            alpha2 * shifted[m - 2] * plain[m]
        } else {
            0.0
        };
        Ok(first - second)
    }

    /// `sum_{k<m} J_k(x)^2 / h_k` by the direct sum.
    pub fn kernel_diag_direct(&self, x: f64) -> Result<f64> {
        self.check("kernel_diag_direct", x)?;
        let m = self.spec.m as usize;
        let deg = self.spec.degree(m - 1);
        let mut j = vec![0.0; deg + 1];
        jacobi_sequence(self.basis.alpha, self.basis.beta, x, &mut j);
        Ok((0..m)
            .map(|k| {
                let v = j[self.spec.degree(k)];
                v * v / self.norms[k]
            })
            .collect::<crate::sum::Accumulator>()
            .value())
    }

    /// One-point density `g1(x) = K(x,x) / m`.
    pub fn density_one_point(&self, x: f64) -> Result<f64> {
        Ok(self.kernel_eval(x, x)? / self.spec.m as f64)
    }
}
