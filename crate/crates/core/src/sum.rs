//! Compensated accumulation and sign-tracked log-magnitude products.
//!
//! Finite sums of gamma ratios overflow quickly when formed directly. Each
//! summand is built as a [`Term`] (sign times `exp(ln|value|)`), and terms are
//! added through an [`Accumulator`] that carries a Neumaier correction and
//! records how much cancellation happened.

use crate::specfun::ln_gamma_pos;
use std::f64::consts::PI;

/// Neumaier (improved Kahan–Babuska) summation with a cancellation record.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
    max_partial: f64,
    abs_sum: f64,
    count: usize,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
        self.max_partial = self.max_partial.max((self.sum + self.comp).abs());
        self.count += 1;
    }

    /// Merge another accumulator's total (its condition record is folded in).
    pub fn absorb(&mut self, other: &Accumulator) {
        self.add(other.value());
        self.abs_sum += other.abs_sum - other.value().abs();
        self.max_partial = self.max_partial.max(other.max_partial);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// The same sum multiplied through by `c`.
    pub fn scaled(&self, c: f64) -> Accumulator {
        Accumulator {
            sum: self.sum * c,
            comp: self.comp * c,
            max_partial: self.max_partial * c.abs(),
            abs_sum: self.abs_sum * c.abs(),
            count: self.count,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Largest partial-sum magnitude divided by the magnitude of the total.
    pub fn partial_condition(&self) -> f64 {
        ratio(self.max_partial, self.value().abs())
    }

    /// Sum of term magnitudes divided by the magnitude of the total. This
    /// bounds the relative error amplification of the summation and is never
    /// smaller than [`Accumulator::partial_condition`].
    pub fn condition(&self) -> f64 {
        ratio(self.abs_sum, self.value().abs())
    }
}

impl std::iter::FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        1.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<Accumulator>().value()
}

/// `ln|Gamma(x)|` and the sign of `Gamma(x)`, or `None` at a pole.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_pos(x), 1.0));
    }
    if x == x.floor() {
        return None;
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    let s = (PI * x).sin();
    Some((PI.ln() - s.abs().ln() - ln_gamma_pos(1.0 - x), s.signum()))
}

/// A real number stored as `sign * exp(ln_abs)`.
///
/// A zero sign marks an exact zero, produced by a reciprocal gamma at a
/// non-positive integer or by a zero factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub sign: f64,
    pub ln_abs: f64,
    /// Set when a gamma in the numerator hit a pole.
    pub singular: bool,
}

impl Term {
    pub fn one() -> Self {
        Term {
            sign: 1.0,
            ln_abs: 0.0,
            singular: false,
        }
    }

    pub fn from_f64(x: f64) -> Self {
        Term::one().times(x)
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0.0 && !self.singular
    }

    /// Multiply by a plain real factor.
    pub fn times(mut self, x: f64) -> Self {
        if x == 0.0 {
            self.sign = 0.0;
        } else {
            self.sign *= x.signum();
            self.ln_abs += x.abs().ln();
        }
        self
    }

    /// Divide by a plain real factor.
    pub fn over(mut self, x: f64) -> Self {
        if x == 0.0 {
            self.singular = true;
        } else {
            self.sign *= x.signum();
            self.ln_abs -= x.abs().ln();
        }
        self
    }

    /// Multiply by `Gamma(x)`.
    pub fn gamma(mut self, x: f64) -> Self {
        match ln_gamma_signed(x) {
            Some((l, s)) => {
                self.ln_abs += l;
                self.sign *= s;
            }
            None => self.singular = true,
        }
        self
    }

    /// Multiply by `1/Gamma(x)`; zero at non-positive integers.
    pub fn rgamma(mut self, x: f64) -> Self {
        match ln_gamma_signed(x) {
            Some((l, s)) => {
                self.ln_abs -= l;
                self.sign *= s;
            }
            None => self.sign = 0.0,
        }
        self
    }

    /// Multiply by `(a)_k`, computed as a product so that zeros are exact.
    pub fn poch(self, a: f64, k: i64) -> Self {
        debug_assert!(k >= 0, "negative Pochhammer length");
        let mut t = self;
        for j in 0..k {
            t = t.times(a + j as f64);
        }
        t
    }

    /// Divide by `(a)_k`.
    pub fn rpoch(self, a: f64, k: i64) -> Self {
        let mut t = self;
        for j in 0..k {
            t = t.over(a + j as f64);
        }
        t
    }

    /// Multiply by `(-1)^k`.
    pub fn alt(mut self, k: i64) -> Self {
        if k.rem_euclid(2) == 1 {
            self.sign = -self.sign;
        }
        self
    }

    /// The represented value. A zero factor wins over a numerator pole, which
    /// matches reading a summand as "skip when its reciprocal-gamma
    /// factor vanishes".
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else if self.singular {
            f64::NAN
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}
