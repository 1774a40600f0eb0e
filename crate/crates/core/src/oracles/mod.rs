//! Independent evaluations of the entropy moments: finite-sum
//! representations of the variance integrals and direct quadrature.

pub mod appendix;
pub mod quadrature;

pub use quadrature::{
    default_order, mean_quadrature, variance_quadrature, EndpointRule, QuadEstimate,
};

use crate::error::Result;
use crate::kernel::{Case, EnsembleSpec};
use crate::moments::{Method, MomentReport};
use appendix::Piece;
use serde::{Deserialize, Serialize};

/// Cancellation ratio above which a summation result is not trusted.
pub const UNRELIABLE_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SummationLabel {
    A1,
    A2,
    B1,
    B2,
    #[serde(rename = "fA1")]
    FA1,
    #[serde(rename = "fA2")]
    FA2,
    #[serde(rename = "fB1")]
    FB1,
    #[serde(rename = "fB2")]
    FB2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummationTermTrace {
    pub label: SummationLabel,
    pub value: f64,
    /// `sum |terms| / |value|`.
    pub condition_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummationResult {
    pub spec: EnsembleSpec,
    pub variance: f64,
    pub terms: Vec<SummationTermTrace>,
    pub unreliable: bool,
    /// Case B only: the stated form of the `fA2` piece, which is replaced in
    /// `variance` by an exact expansion (see [`appendix::case_b_cross_a2`]).
    pub stated_cross_a2: Option<f64>,
}

impl SummationResult {
    pub fn term(&self, label: SummationLabel) -> Option<&SummationTermTrace> {
        self.terms.iter().find(|t| t.label == label)
    }

    pub fn report(&self) -> MomentReport {
        MomentReport {
            spec: self.spec,
            mean: f64::NAN,
            variance: self.variance,
            method: Method::Summation,
            error_estimate: self.variance.abs()
                * f64::EPSILON
                * self
                    .terms
                    .iter()
                    .map(|t| t.condition_estimate)
                    .fold(1.0, f64::max),
        }
    }
}

fn trace(label: SummationLabel, p: Piece) -> SummationTermTrace {
    SummationTermTrace {
        label,
        value: p.value,
        condition_estimate: if p.condition.is_finite() {
            p.condition
        } else {
            0.0
        },
    }
}

/// `V[S] = (first + second one-point pieces) - (diagonal + off-diagonal
/// two-point pieces)` from the finite-sum representations.
pub fn variance_summation(spec: &EnsembleSpec) -> Result<SummationResult> {
    spec.validate()?;
    let m = spec.m;
    let (a, b) = (spec.a(), spec.b());
    use SummationLabel::*;
    let (terms, stated) = match spec.case {
        Case::A => (
            vec![
                trace(A1, appendix::case_a_a1(m, a)),
                trace(A2, appendix::case_a_a2(m, a)),
                trace(B1, appendix::case_a_b1(m, a)),
                trace(B2, appendix::case_a_b2(m, a)),
            ],
            None,
        ),
        Case::B => (
            vec![
                trace(FA1, appendix::case_b_cross_a1(m, a, b)),
                trace(FA2, appendix::case_b_cross_a2(m, a, b)),
                trace(FB1, appendix::case_b_cross_b1(m, a, b)),
                trace(FB2, appendix::case_b_cross_b2(m, a, b)),
            ],
            Some(appendix::case_b_cross_a2_stated(m, a, b)),
        ),
    };
    for t in [&terms[2], &terms[3]] {
        debug_assert!(t.value >= 0.0, "{:?} is a sum of squares", t.label);
    }
    let variance = (terms[0].value + terms[1].value) - (terms[2].value + terms[3].value);
    let unreliable = terms
        .iter()
        .any(|t| t.condition_estimate > UNRELIABLE_CONDITION)
        || variance.abs() * UNRELIABLE_CONDITION
            < terms.iter().map(|t| t.value.abs()).fold(0.0, f64::max);
    Ok(SummationResult {
        spec: *spec,
        variance,
        terms,
        unreliable,
        stated_cross_a2: stated,
    })
}
