use fgent::jacobi::*;
use fgent::specfun::{ln_gamma, pochhammer};
use fgent::EnsembleSpec;
use proptest::prelude::*;

fn gamma(x: f64) -> f64 {
    ln_gamma(x).unwrap().exp()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Value and sum of absolute terms.
fn total(terms: impl Iterator<Item = f64>) -> (f64, f64) {
    terms.fold((0.0, 0.0), |(s, a), t| (s + t, a + t.abs()))
}

/// Hypergeometric series in powers of `(1+x)/2`.
fn series_plus(k: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let s = (1.0 + x) / 2.0;
    let kf = k as f64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = sign * pochhammer(b + 1.0, k as u32) / factorial(k);
    total((0..=k).map(|i| {
        let num = pochhammer(-kf, i as u32) * pochhammer(kf + a + b + 1.0, i as u32);
        pre * num / (pochhammer(b + 1.0, i as u32) * factorial(i)) * s.powi(i as i32)
    }))
}

/// Two-variable form in powers of `(1-x)/2` and `(1+x)/2`.
fn series_mixed(k: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let (t, s) = ((1.0 - x) / 2.0, (1.0 + x) / 2.0);
    let kf = k as f64;
    total((0..=k).map(|i| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let fi = i as f64;
        sign * gamma(a + kf + 1.0) * pochhammer(kf + b - fi + 1.0, i as u32)
            / (factorial(i) * gamma(a + fi + 1.0) * factorial(k - i))
            * t.powi(i as i32)
            * s.powi((k - i) as i32)
    }))
}

/// `int w J_j J_k` for `w = ((1-x)/2)^a ((1+x)/2)^b`.
fn weighted_inner(j: usize, k: usize, a: f64, b: f64) -> f64 {
    let rule = gauss_jacobi_rule(j.max(k) + 2, a, b).unwrap();
    rule.integrate(|x| jacobi(j, a, b, x) * jacobi(k, a, b, x)) * 2f64.powf(-(a + b))
}

#[test]
fn low_degree_values() {
    for (a, b, x) in [(0.0, 0.0, 0.3), (2.5, 1.0, -0.9), (7.0, 3.0, 1.0)] {
        assert_eq!(jacobi_eval(0, a, b, x).unwrap(), 1.0);
    }
    assert!((jacobi_eval(1, 0.0, 0.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
    assert!((jacobi_eval(2, 0.0, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn value_at_one_is_rising_factorial_ratio() {
    for k in 0..20 {
        for a in [0.0, 1.0, 2.5, 6.0] {
            let expect = pochhammer(a + 1.0, k as u32) / factorial(k);
            let got = jacobi_eval(k, a, 1.5, 1.0).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect, "k={k} a={a}");
        }
    }
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(jacobi_eval(2, -1.0, 0.0, 0.0).is_err());
    assert!(jacobi_eval(2, 0.0, -1.5, 0.0).is_err());
    assert!(jacobi_eval(2, 0.0, 0.0, 1.01).is_err());
    assert!(gauss_jacobi_rule(0, 0.0, 0.0).is_err());
    assert!(JacobiBasis::new(-2.0, 0.0, 3).is_err());
}

#[test]
fn norms() {
    let b00 = EnsembleSpec::case_b(1, 1, 1).unwrap();
    assert!((norm_h(0, &b00) - 2.0).abs() < 1e-15);
    let a0 = EnsembleSpec::case_a(1, 1).unwrap();
    assert!((norm_h(0, &a0) - 1.0).abs() < 1e-15);
    // a = n - p = 1, b = p - m = 0
    let b10 = EnsembleSpec::case_b(2, 3, 2).unwrap();
    assert_eq!((b10.a(), b10.b()), (1, 0));
    assert!((norm_h(1, &b10) - 0.5).abs() < 1e-15);
}

#[test]
fn quadrature_exactness() {
    let r = gauss_jacobi_rule(5, 0.0, 0.0).unwrap();
    assert_eq!(r.len(), 5);
    assert!((r.integrate(|x| x.powi(4)) - 0.4).abs() < 1e-15);
    assert!((r.integrate(|x| x.powi(9) + x.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
    let total: f64 = r.weights.iter().sum();
    assert!((total - 2.0).abs() < 1e-14);
}

#[test]
fn weight_sum_is_total_mass() {
    for (a, b) in [(0.0, 0.0), (1.0, 3.0), (4.5, 0.5), (10.0, 2.0)] {
        let r = gauss_jacobi_rule(12, a, b).unwrap();
        let total: f64 = r.weights.iter().sum();
        // int (1-x)^a (1+x)^b = 2^(a+b+1) B(a+1, b+1)
        let mass = 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
        assert!((total - mass).abs() < 1e-13 * mass, "a={a} b={b}");
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.nodes.iter().all(|x| x.abs() < 1.0));
    }
}

#[test]
fn orthogonality_and_norms() {
    for (a, b) in [(0.0, 0.0), (2.0, 1.0), (5.0, 3.0), (0.5, 7.5)] {
        let basis = JacobiBasis::new(a, b, 15).unwrap();
        for j in 0..=15 {
            for k in 0..=15 {
                let v = weighted_inner(j, k, a, b);
                if j == k {
                    let h = basis.norms[k];
                    assert!((v - h).abs() <= 1e-10 * h, "a={a} b={b} k={k}");
                } else {
                    let scale = (basis.norms[j] * basis.norms[k]).sqrt();
                    assert!(v.abs() <= 1e-10 * scale.max(1.0), "a={a} b={b} j={j} k={k}");
                }
            }
        }
    }
}

#[test]
fn case_a_even_polynomials_are_orthogonal_on_unit_interval() {
    for (m, n) in [(1, 1), (3, 5), (6, 10)] {
        let spec = EnsembleSpec::case_a(m, n).unwrap();
        let a = spec.a() as f64;
        let rule = gauss_jacobi_rule(4 * m as usize + 4, a, a).unwrap();
        let scale = 2f64.powf(-2.0 * a);
        for j in 0..m as usize {
            for k in 0..m as usize {
                // even integrand: half of the [-1, 1] integral
                let v = 0.5
                    * scale
                    * rule.integrate(|x| jacobi(2 * j, a, a, x) * jacobi(2 * k, a, a, x));
                let expect = if j == k { norm_h(k, &spec) } else { 0.0 };
                assert!(
                    (v - expect).abs() <= 1e-10 * norm_h(k, &spec).max(1.0),
                    "m={m} j={j} k={k}"
                );
            }
        }
    }
}

#[test]
fn sequence_matches_single_evaluations() {
    let mut out = vec![0.0; 12];
    jacobi_sequence(2.0, 3.5, -0.4, &mut out);
    for (k, v) in out.iter().enumerate() {
        assert_eq!(*v, jacobi(k, 2.0, 3.5, -0.4));
    }
    let basis = JacobiBasis::new(2.0, 3.5, 11).unwrap();
    assert_eq!(basis.eval(7, -0.4), out[7]);
    assert_eq!(basis.norms.len(), 12);
    assert!((basis.norms[3] - ln_norm(3, 2.0, 3.5).exp()).abs() < 1e-15 * basis.norms[3]);
}

#[test]
fn single_polynomial_integral() {
    // int ((1-x)/2)^a ((1+x)/2)^c J_k^(a,b)
    // = 2 Gamma(c+1) (k+1)_a (c-b-k+1)_k / Gamma(a+c+k+2), integer a
    for k in 0..8usize {
        for a in 0..4u32 {
            for (b, c) in [(0.0, 0.0), (1.0, 2.5), (3.0, 4.0), (2.0, 0.3)] {
                let af = a as f64;
                let kf = k as f64;
                let rule = gauss_jacobi_rule(k + 2, af, c).unwrap();
                let quad = rule.integrate(|x| jacobi(k, af, b, x)) * 2f64.powf(-(af + c));
                let closed = 2.0
                    * gamma(c + 1.0)
                    * pochhammer(kf + 1.0, a)
                    * pochhammer(c - b - kf + 1.0, k as u32)
                    / gamma(af + c + kf + 2.0);
                assert!(
                    (quad - closed).abs() <= 1e-11 * closed.abs().max(1e-3),
                    "k={k} a={a} b={b} c={c}: {quad} vs {closed}"
                );
            }
        }
    }
}

#[test]
fn two_exponent_polynomial_integral() {
    // int ((1-x)/2)^d ((1+x)/2)^c J_k^(a,b) as a finite sum, for exponents
    // large enough that every reciprocal gamma is at a positive argument
    for k in 0..7usize {
        for (a, b) in [(0.0, 0.0), (2.0, 1.0), (1.0, 3.0)] {
            for frac in [0.25, 0.5, 1.75] {
                let kf = k as f64;
                let (c, d) = (b + kf + frac, a + kf + frac + 0.5);
                let rule = gauss_jacobi_rule(k + 2, d, c).unwrap();
                let quad = rule.integrate(|x| jacobi(k, a, b, x)) * 2f64.powf(-(c + d));
                let sum: f64 = (0..=k)
                    .map(|i| {
                        let fi = i as f64;
                        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                        sign * gamma(c + fi + 1.0) * gamma(d - fi + kf + 1.0)
                            / (factorial(i)
                                * factorial(k - i)
                                * gamma(d - a - fi + 1.0)
                                * gamma(c - b + fi - kf + 1.0))
                    })
                    .sum();
                let closed =
                    2.0 * gamma(c - b + 1.0) * gamma(d - a + 1.0) / gamma(c + d + kf + 2.0) * sum;
                assert!(
                    (quad - closed).abs() <= 1e-10 * closed.abs().max(1e-6),
                    "k={k} a={a} b={b} c={c} d={d}: {quad} vs {closed}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn series_forms_match_recurrence(k in 0usize..15, a in 0.0f64..8.0, b in 0.0f64..8.0, x in -1.0f64..=1.0) {
        let r = jacobi(k, a, b, x);
        // the series cancel, so the attainable accuracy scales with sum |terms|
        let (s1, abs1) = series_plus(k, a, b, x);
        let (s2, abs2) = series_mixed(k, a, b, x);
        prop_assert!((r - s1).abs() <= 1e-13 * abs1 + 1e-14, "plus series: {r} vs {s1}");
        prop_assert!((r - s2).abs() <= 1e-13 * abs2 + 1e-14, "mixed series: {r} vs {s2}");
    }

    #[test]
    fn parity(k in 0usize..=30, a in 0.0f64..10.0, b in 0.0f64..10.0, x in -1.0f64..=1.0) {
        let lhs = jacobi_eval(k, a, b, -x).unwrap();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = sign * jacobi_eval(k, b, a, x).unwrap();
        let scale = pochhammer(a.max(b) + 1.0, k as u32) / factorial(k);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn rule_integrates_polynomials_exactly(order in 1usize..30, a in 0.0f64..6.0, b in 0.0f64..6.0, j in 0usize..30) {
        let j = j % (2 * order);
        let rule = gauss_jacobi_rule(order, a, b).unwrap();
        // int (1-x)^a (1+x)^b J_j^(a,b) vanishes for j >= 1
        let v = rule.integrate(|x| jacobi(j, a, b, x));
        let mass = rule.weights.iter().sum::<f64>();
        let expect = if j == 0 { mass } else { 0.0 };
        let size = (ln_norm(j, a, b).exp() * mass).sqrt() * 2f64.powf(0.5 * (a + b));
        prop_assert!((v - expect).abs() <= 1e-10 * size.max(mass), "j={j} v={v}");
    }
}
