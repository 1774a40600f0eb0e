//! Finite-sum representations of the four pieces of the variance integrals.
//!
//! Case A: `I_A = A1 + A2`, `I_B = B1 + B2` with `a = n - m`.
//! Case B: `I_A = CA1 + CA2`, `I_B = CB1 + CB2` with `a = n - p`, `b = p - m`.
//!
//! Sums are evaluated term by term. Three summands use corrected arguments
//! (marked at the site). The case-B cross term `CA2` comes from an exact
//! monomial expansion because the stated sum does not reproduce the integral
//! for `m >= 2`; that sum is still available as [`case_b_cross_a2_stated`].

use crate::specfun::{digamma_pos, trigamma_pos, EULER_GAMMA};
use crate::sum::{Accumulator, Term};

fn psi0(x: f64) -> f64 {
    assert!(x > 0.0, "polygamma argument {x} is not positive");
    digamma_pos(x)
}

fn psi1(x: f64) -> f64 {
    assert!(x > 0.0, "polygamma argument {x} is not positive");
    trigamma_pos(x)
}

fn f(i: i64) -> f64 {
    i as f64
}

/// One piece of a summation representation and its cancellation record.
#[derive(Debug, Clone, Copy)]
pub struct Piece {
    pub value: f64,
    pub condition: f64,
}

impl From<Accumulator> for Piece {
    fn from(acc: Accumulator) -> Self {
        Piece {
            value: acc.value(),
            condition: acc.condition(),
        }
    }
}

/// Case A, `A1 = sum_k (1/h_k) int t^a s^(a+2) ln^2 s J_2k^2`.
pub fn case_a_a1(m: u32, a: u32) -> Piece {
    let (m, a) = (m as i64, f(a as i64));
    let mut acc = Accumulator::new();
    for k in 0..m {
        let kf = f(k);
        for j in (2 * k - 2)..=(2 * k) {
            let jf = f(j);
            let coef = Term::from_f64(2.0 * (2.0 * a + 4.0 * kf + 1.0))
                .alt(j)
                .poch(jf + 1.0, 2)
                .poch(a + jf + 1.0, 2)
                .rgamma(f(2 * k - j + 1))
                .rgamma(f(j - 2 * k + 3));
            if coef.is_zero() {
                continue;
            }
            let coef = coef.rpoch(2.0 * a + jf + 2.0 * kf + 1.0, 3);
            let d = psi0(jf + 3.0) - psi0(2.0 * a + jf + 2.0 * kf + 4.0) - psi0(f(j - 2 * k + 3))
                + psi0(a + jf + 3.0);
            let br = d * d - psi1(2.0 * a + jf + 2.0 * kf + 4.0) + psi1(a + jf + 3.0)
                - psi1(f(j - 2 * k + 3))
                + psi1(jf + 3.0);
            acc.add(coef.value() * br);
        }
        for j in 0..=(2 * k - 3) {
            let jf = f(j);
            let coef = Term::from_f64(4.0 * (2.0 * a + 4.0 * kf + 1.0))
                .poch(jf + 1.0, 2)
                .poch(a + jf + 1.0, 2)
                .rpoch(f(2 * k - j - 2), 3)
                .rpoch(2.0 * a + jf + 2.0 * kf + 1.0, 3);
            let br = psi0(2.0 * a + jf + 2.0 * kf + 4.0) - psi0(a + jf + 3.0)
                + psi0(f(2 * k - j - 2))
                - psi0(jf + 3.0);
            acc.add(coef.value() * br);
        }
    }
    acc.into()
}

/// Case A, `A2 = sum_k (1/h_k) int t^(a+1) s^(a+1) ln t ln s J_2k^2`.
pub fn case_a_a2(m: u32, a: u32) -> Piece {
    let (m, a) = (m as i64, f(a as i64));
    let mut acc = Accumulator::new();
    for k in 0..m {
        let kf = f(k);
        let big = 2.0 * a + 4.0 * kf + 4.0;
        let pre = Term::from_f64(2.0 * a + 4.0 * kf + 1.0)
            .gamma(2.0 * kf + 1.0)
            .gamma(2.0 * a + 2.0 * kf + 1.0)
            .rgamma(big);
        let mut inner = Accumulator::new();
        for j in 0..=(2 * k) {
            let jf = f(j);
            let t1 = Term::from_f64(2.0 * (jf + 1.0) * (2.0 * kf - jf + 1.0))
                .rgamma(jf + 1.0)
                .rgamma(a + jf + 1.0)
                .gamma(a + 2.0 * kf + 2.0)
                .gamma(a + 2.0 * kf + 2.0)
                .rgamma(2.0 * kf - jf + 1.0)
                .rgamma(a + 2.0 * kf - jf + 1.0);
            let br1 = (psi0(a + 2.0 * kf + 2.0) - psi0(big) - psi0(2.0)
                + psi0(2.0 * kf - jf + 2.0))
                * (psi0(a + 2.0 * kf + 2.0) - psi0(big) + psi0(jf + 2.0) - psi0(2.0))
                - psi1(big);
            inner.add(t1.value() * br1);

            let t2 = Term::from_f64(jf + 1.0)
                .gamma(a + 2.0 * kf + 1.0)
                .gamma(a + 2.0 * kf + 3.0)
                .rgamma(jf)
                .rgamma(a + jf + 1.0)
                .rgamma(a - jf + 2.0 * kf + 1.0)
                .rgamma(2.0 * kf - jf + 1.0);
            if !t2.is_zero() {
                let br2 = (psi0(a + 2.0 * kf + 1.0) - psi0(big) + psi0(2.0 * kf - jf + 2.0)
                    - psi0(1.0))
                    * (psi0(a + 2.0 * kf + 3.0) - psi0(big) + psi0(jf + 2.0) - psi0(3.0))
                    - psi1(big);
                inner.add(-t2.value() * br2);
            }

            let t3 = Term::from_f64(2.0 * kf - jf + 1.0)
                .gamma(a + 2.0 * kf + 1.0)
                .gamma(a + 2.0 * kf + 3.0)
                .rgamma(a + jf + 1.0)
                .rgamma(2.0 * kf - jf)
                .rgamma(2.0 * kf - jf + a + 1.0)
                .rgamma(jf + 1.0);
            if !t3.is_zero() {
                let br3 = (psi0(a + 2.0 * kf + 3.0) - psi0(big) + psi0(2.0 * kf - jf + 2.0)
                    - psi0(3.0))
                    * (psi0(a + 2.0 * kf + 1.0) - psi0(big) + psi0(jf + 2.0) - psi0(1.0))
                    - psi1(big);
                inner.add(-t3.value() * br3);
            }
        }
        for j in 1..=(2 * k - 1) {
            let jf = f(j);
            for i in 1..=(2 * k - j) {
                let i_f = f(i);
                let t = Term::from_f64(4.0 * i_f * (2.0 * kf - i_f + 2.0))
                    .gamma(a + 2.0 * kf - jf + 1.0)
                    .rgamma(a + i_f)
                    .rgamma(a + 2.0 * kf - i_f + 2.0)
                    .gamma(a + 2.0 * kf + jf + 3.0)
                    .rpoch(jf, 3)
                    .rgamma(jf + i_f + 1.0)
                    .rgamma(2.0 * kf - jf - i_f + 1.0);
                let br = psi0(a + 2.0 * kf + jf + 3.0) - psi0(big) + psi0(2.0 * kf - i_f + 3.0)
                    - psi0(jf + 3.0);
                inner.add(t.value() * br);
            }
        }
        acc.absorb(&inner.scaled(pre.value()));
    }
    acc.into()
}

/// Case A, `B1 = sum_k (1/h_k^2) (int t^a s^(a+1) ln s J_2k^2)^2`.
pub fn case_a_b1(m: u32, a: u32) -> Piece {
    let (m, a) = (m as i64, f(a as i64));
    let mut acc = Accumulator::new();
    for k in 0..m {
        let kf = f(k);
        let x = if a == 0.0 && k == 0 {
            // psi0(x) - 2 psi0(2x) -> euler gamma and a/(a+2k) -> 1 as a, k -> 0
            EULER_GAMMA + psi0(1.0) - 0.5 * (0.0 + 1.0 + 2.0) + 1.0
        } else {
            // stated psi0(2a+2k) corrected to psi0(2a+2k+1)
            psi0(a + 2.0 * kf) + psi0(2.0 * a + 2.0 * kf + 1.0)
                - 2.0 * psi0(2.0 * a + 4.0 * kf)
                - 0.5
                    * (a / (a + 2.0 * kf + 1.0)
                        + a / (a + 2.0 * kf)
                        + 2.0 / (2.0 * a + 4.0 * kf + 1.0))
                + 1.0
        };
        acc.add(x * x);
    }
    acc.into()
}

/// Case A, `B2 = sum_{j>=1} sum_k (2/(h_{k+j} h_k)) (int t^a s^(a+1) ln s J_2(k+j) J_2k)^2`.
pub fn case_a_b2(m: u32, a: u32) -> Piece {
    let (m, a) = (m as i64, f(a as i64));
    let mut acc = Accumulator::new();
    for k in 1..m {
        let kf = f(k);
        for j in 1..=(m - k) {
            let jf = f(j);
            let poly = a * a * (2.0 * jf + 1.0)
                + a * (jf + 1.0) * (2.0 * jf + 4.0 * kf - 3.0)
                + 2.0 * jf * jf
                + jf * (4.0 * kf - 3.0)
                + 4.0 * kf * kf
                - 6.0 * kf
                + 2.0;
            let den = (a + jf + 2.0 * kf - 2.0)
                * (a + jf + 2.0 * kf - 1.0)
                * (2.0 * a + 2.0 * jf + 4.0 * kf - 3.0);
            let t =
                Term::from_f64((2.0 * a + 4.0 * kf - 3.0) * (2.0 * a + 4.0 * jf + 4.0 * kf - 3.0))
                    .gamma(2.0 * a + 2.0 * kf - 1.0)
                    .gamma(2.0 * jf + 2.0 * kf - 1.0)
                    .rgamma(2.0 * kf - 1.0)
                    .rgamma(2.0 * a + 2.0 * jf + 2.0 * kf - 1.0)
                    .over(2.0 * ((2.0 * jf - 1.0) * jf * (2.0 * jf + 1.0)).powi(2))
                    .over(den * den)
                    .times(poly * poly);
            acc.add(t.value());
        }
    }
    acc.into()
}

/// Case B, one orientation of `CA1 = sum_k (1/h_k) int v-type integrals`;
/// the full piece is `case_b_cross_a1_half(m, a, b) + case_b_cross_a1_half(m, b, a)`.
pub fn case_b_cross_a1_half(m: u32, a: u32, b: u32) -> Accumulator {
    let (m, a, b) = (m as i64, f(a as i64), f(b as i64));
    let mf = f(m);
    let n2 = a + b + 2.0 * mf;
    let mut acc = Accumulator::new();
    for i in 1..=(m - 3) {
        let i_f = f(i);
        let t = Term::from_f64(-2.0 * mf * (b + mf) / n2 * (b + i_f + 1.0))
            .poch(i_f, 2)
            .rpoch(f(m - i - 2), 3)
            .over(a + b + i_f + mf + 1.0);
        let br = psi0(b + i_f + 2.0) - psi0(a + b + i_f + mf + 2.0) - psi0(f(m - i - 2))
            + psi0(i_f + 2.0);
        acc.add(t.value() * br);
    }
    for i in 1..=(m - 2) {
        let i_f = f(i);
        let t = Term::from_f64((a + b + mf) / n2 * 2.0 * (a + mf) * (b + i_f + 1.0))
            .poch(i_f, 2)
            .over(f(m - i - 1))
            .rpoch(a + b + i_f + mf, 3);
        let br = -psi0(a + b + i_f + mf + 3.0) + psi0(b + i_f + 2.0) - psi0(f(m - i - 1))
            + psi0(i_f + 2.0);
        acc.add(t.value() * br);
    }
    for i in (m - 3)..=(m - 1) {
        let i_f = f(i);
        let t = Term::from_f64(b + i_f + 2.0)
            .alt(i + m)
            .poch(i_f + 1.0, 2)
            .rgamma(f(m - i))
            .rgamma(f(i - m + 4));
        if t.is_zero() {
            continue;
        }
        let t = t.times(-mf * (b + mf) / n2).over(a + b + i_f + mf + 2.0);
        let d = psi0(i_f + 3.0) - psi0(a + b + i_f + mf + 3.0) - psi0(f(i - m + 4))
            + psi0(b + i_f + 3.0);
        let br = psi1(b + i_f + 3.0) + psi1(i_f + 3.0)
            - psi1(f(i - m + 4))
            - psi1(a + b + i_f + mf + 3.0)
            + d * d;
        acc.add(t.value() * br);
    }
    let t = Term::from_f64(-(a + mf) * (a + b + mf) * (b + mf))
        .poch(mf - 1.0, 2)
        .over(n2)
        .rpoch(a + b + 2.0 * mf - 1.0, 3);
    let top = a + b + 2.0 * mf + 2.0;
    let br = -psi1(top) + psi1(b + mf + 1.0) + psi1(mf + 1.0) - psi1(1.0)
        + psi0(1.0) * psi0(1.0)
        + (psi0(b + mf + 1.0) - psi0(top) + psi0(mf + 1.0))
            * (psi0(b + mf + 1.0) + psi0(mf + 1.0) - psi0(top) - 2.0 * psi0(1.0));
    acc.add(t.value() * br);
    acc
}

/// Case B, `CA1 = sum_k (1/h_k) int (t^(a+2) s^b ln^2 t + t^a s^(b+2) ln^2 s) J_k^2`.
pub fn case_b_cross_a1(m: u32, a: u32, b: u32) -> Piece {
    let mut acc = case_b_cross_a1_half(m, a, b);
    acc.absorb(&case_b_cross_a1_half(m, b, a));
    acc.into()
}

/// `int_{-1}^{1} t^alpha s^beta ln t ln s dx` as a signed log-magnitude term.
fn log_log_moment(alpha: f64, beta: f64) -> f64 {
    let top = alpha + beta + 2.0;
    let br = (psi0(alpha + 1.0) - psi0(top)) * (psi0(beta + 1.0) - psi0(top)) - psi1(top);
    Term::from_f64(2.0 * br)
        .gamma(alpha + 1.0)
        .gamma(beta + 1.0)
        .rgamma(top)
        .value()
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f(n - i) / f(i + 1))
}

/// Case B, `CA2 = sum_k (2/h_k) int t^(a+1) s^(b+1) ln t ln s J_k^2`, from
/// `J_k = sum_j (-1)^j C(k+a, k-j) C(k+b, j) t^j s^(k-j)` and the closed-form
/// log-log moment of `t^alpha s^beta`.
pub fn case_b_cross_a2(m: u32, a: u32, b: u32) -> Piece {
    let (m, ai, bi) = (m as i64, a as i64, b as i64);
    let (a, b) = (f(ai), f(bi));
    let mut acc = Accumulator::new();
    for k in 0..m {
        let c: Vec<f64> = (0..=k)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * binomial(k + ai, k - j) * binomial(k + bi, j)
            })
            .collect();
        let ln_h = crate::jacobi::ln_norm(k as usize, a, b);
        for total in 0..=(2 * k) {
            let lo = (total - k).max(0);
            let hi = total.min(k);
            let coef: f64 = (lo..=hi)
                .map(|j| c[j as usize] * c[(total - j) as usize])
                .sum();
            if coef == 0.0 {
                continue;
            }
            let mom = log_log_moment(a + 1.0 + f(total), b + 1.0 + f(2 * k - total));
            acc.add(2.0 * coef * mom * (-ln_h).exp());
        }
    }
    acc.into()
}

/// One orientation of the second group of the stated cross-term sum, with
/// the unbound index of its second single sum read as the outer index.
fn stated_cross_a2_half(m: i64, a: f64, b: f64) -> f64 {
    let mf = f(m);
    let n2 = a + b + 2.0 * mf;
    let top = a + b + 2.0 * mf + 2.0;
    let pre = Term::from_f64(2.0)
        .gamma(mf + 1.0)
        .gamma(a + b + mf + 1.0)
        .rgamma(top)
        .value();
    let mut s1 = Accumulator::new();
    for i in 1..=(m - 2) {
        let i_f = f(i);
        let mut inner = Accumulator::new();
        for j in 1..=(m - i - 1) {
            let jf = f(j);
            let t = Term::one()
                .gamma(a + jf + mf + 2.0)
                .rpoch(jf, 3)
                .rgamma(i_f + jf + 1.0)
                .gamma(b - jf + mf)
                .rgamma(f(m - i - j));
            let br = psi0(f(m - i + 2)) - psi0(top) - psi0(jf + 3.0) + psi0(a + jf + mf + 2.0);
            inner.add(t.value() * br);
        }
        let outer = Term::from_f64(i_f * (mf - i_f + 1.0))
            .rgamma(b + i_f + 1.0)
            .rgamma(a - i_f + mf + 2.0);
        s1.add(outer.value() * inner.value());
    }
    let s1 = s1.value() * (a + mf) * (b + mf) * (a + b + mf + 1.0) / n2;
    let mut s2 = Accumulator::new();
    for i in 1..=(m - 1) {
        let i_f = f(i);
        let j = i_f;
        let t = Term::from_f64(i_f * (mf - i_f))
            .rgamma(b + i_f + 1.0)
            .rgamma(a - i_f + mf + 1.0);
        let br = psi0(a + j + mf + 1.0) - psi0(top) + psi0(mf - i_f + 1.0) - psi0(j + 1.0);
        s2.add(t.value() * br);
    }
    let s2 = s2.value() * (a + b + mf) / n2;
    pre * (s1 - s2)
}

/// The stated summation form of the case-B cross term `CA2`, evaluated
/// literally. It agrees with the integral for `m = 1` only; kept for
/// reporting.
pub fn case_b_cross_a2_stated(m: u32, a: u32, b: u32) -> f64 {
    let (m, a, b) = (m as i64, f(a as i64), f(b as i64));
    let mf = f(m);
    let n2 = a + b + 2.0 * mf;
    let top = a + b + 2.0 * mf + 2.0;
    let mut first = Accumulator::new();
    for i in 0..m {
        let i_f = f(i);
        let mut inner = Accumulator::new();
        for j in (i - 1)..=(i + 1) {
            let jf = f(j);
            let t = Term::one()
                .alt(j)
                .rgamma(jf + 1.0)
                .rgamma(f(i - j + 2))
                .rgamma(f(j - i + 2))
                .rgamma(f(m - j));
            if t.is_zero() {
                continue;
            }
            let t = t.gamma(a + f(i - j) + mf + 1.0).poch(b - i_f + mf + 1.0, j);
            let br = psi1(top)
                + (psi0(a + f(i - j) + mf + 1.0) - psi0(top) - psi0(f(i - j + 2))
                    + psi0(i_f + 2.0))
                    * (psi0(top) + psi0(f(j - i + 2))
                        - psi0(b - i_f + jf + mf + 1.0)
                        - psi0(mf - i_f + 1.0));
            inner.add(t.value() * br);
        }
        let outer = Term::from_f64((i_f + 1.0) * (mf - i_f))
            .alt(i)
            .rgamma(a + i_f + 2.0);
        first.add(outer.value() * inner.value());
    }
    let pre1 = Term::from_f64(-2.0 * (a + mf) * (b + mf))
        .gamma(mf + 1.0)
        .over(n2)
        .rpoch(a + b + mf + 2.0, m)
        .value();
    let mut second = Accumulator::new();
    for i in 0..=(m - 2) {
        let i_f = f(i);
        let t = Term::one()
            .rgamma(i_f + 1.0)
            .rgamma(a + i_f + 2.0)
            .rgamma(f(m - i - 1))
            .rgamma(b - i_f + mf);
        let br = psi1(top)
            + (psi0(a + mf + 1.0) - psi0(top) + psi0(i_f + 2.0) - psi0(1.0))
                * (psi0(top) - psi0(b + mf + 1.0) - psi0(f(m - i)) + psi0(1.0));
        second.add(t.value() * br);
    }
    let pre2 = Term::from_f64(-2.0 * (a + b + mf))
        .gamma(mf + 1.0)
        .gamma(a + mf + 1.0)
        .gamma(b + mf + 1.0)
        .over(n2)
        .rpoch(a + b + mf + 1.0, m + 1)
        .value();
    pre1 * first.value()
        + pre2 * second.value()
        + stated_cross_a2_half(m, a, b)
        + stated_cross_a2_half(m, b, a)
}

/// Case B, `CB1 = sum_k (1/h_k^2) (int v w J_k^2)^2`.
pub fn case_b_cross_b1(m: u32, a: u32, b: u32) -> Piece {
    let (m, a, b) = (m as i64, f(a as i64), f(b as i64));
    let mut acc = Accumulator::new();
    for k in 0..m {
        let kf = f(k);
        let d = a + b + 2.0 * kf;
        let x = if d == 0.0 {
            // a = b = k = 0: (a^2-b^2)/(4d) -> 0 and (a+b)/(2d) -> 1/2
            0.5 * psi0(1.0) + 0.5 * psi0(1.0) + psi0(1.0) - 2.0 * psi0(2.0) - 0.5 + 1.0 + 1.0
        } else {
            let u = a * a - b * b;
            (u / (4.0 * d) - u / (4.0 * (d + 2.0)) + 0.5) * psi0(a + kf + 1.0)
                + (u / (4.0 * (d + 2.0)) - u / (4.0 * d) + 0.5) * psi0(b + kf + 1.0)
                + psi0(a + b + kf + 1.0)
                - 2.0 * psi0(d + 2.0)
                - (a + b) / (2.0 * d)
                - (a + b) / (2.0 * (d + 2.0))
                + 1.0 / (d + 1.0)
                + 1.0
        };
        acc.add(x * x);
    }
    acc.into()
}

/// Case B, `CB2 = sum_{j>=1} sum_k (2/(h_{k+j} h_k)) (int v w J_{k+j} J_k)^2`.
pub fn case_b_cross_b2(m: u32, a: u32, b: u32) -> Piece {
    let (m, a, b) = (m as i64, f(a as i64), f(b as i64));
    let mut acc = Accumulator::new();
    for k in 1..m {
        let kf = f(k);
        let inner = 2.0 * (a + kf) * (b + kf) * (psi0(b + kf + 1.0) - psi0(a + kf + 1.0))
            + (kf - 1.0) * (a - b) * (a + b + 2.0 * kf + 1.0) / (a + b + kf);
        let t = Term::from_f64(kf * (a + b + kf))
            .over(2.0 * (a + kf) * (b + kf) * (a + b + 2.0 * kf))
            .rpoch(a + b + 2.0 * kf - 1.0, 3)
            .times(inner * inner);
        acc.add(t.value());
    }
    for k in 1..=(m - 2) {
        let kf = f(k);
        for j in 1..=(m - k - 1) {
            let jf = f(j);
            let pre = Term::from_f64(
                2.0 * (a + b + 2.0 * kf - 1.0) * (a + b + 2.0 * jf + 2.0 * kf + 1.0),
            )
            .gamma(jf + kf + 1.0)
            .rgamma(kf)
            .rgamma(a + kf)
            .rgamma(b + kf)
            .rgamma(a + jf + kf + 1.0)
            .rgamma(b + jf + kf + 1.0)
            .gamma(a + b + kf)
            .rgamma(a + b + jf + kf + 1.0);
            let first = Term::from_f64(
                a * a * (jf + 2.0)
                    + a * (jf + 2.0) * (b + jf + 2.0 * kf)
                    + jf * (b + 2.0 * kf + 1.0)
                    + 2.0 * kf * (b + kf)
                    + jf * jf,
            )
            .gamma(a + kf)
            .gamma(b + jf + kf + 1.0)
            .rpoch(jf, 3)
            .rpoch(a + b + jf + 2.0 * kf - 1.0, 3);
            // stated `+2k-2` inside the first product corrected to `+k-1`
            let second = Term::from_f64(
                2.0 * (kf - 1.0) * (a + (b + 1.0) * (jf + 2.0) + kf - 1.0)
                    + (b + 1.0) * (jf + 2.0) * (a + b + jf + 1.0),
            )
            .alt(j)
            .gamma(b + kf)
            .gamma(a + jf + kf + 1.0)
            .rpoch(jf, 3)
            .rpoch(a + b + jf + 2.0 * kf - 1.0, 3);
            let br = first.value() - second.value();
            acc.add(pre.value() * br * br);
        }
    }
    acc.into()
}
