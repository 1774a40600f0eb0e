use fgent::identities::*;
use fgent::specfun::{digamma, log_gamma_ratio, EULER_GAMMA};
use fgent::Error;
use proptest::prelude::*;

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn psi(x: f64) -> f64 {
    digamma(x).unwrap()
}

/// `prod Gamma(num) / prod Gamma(den)` for positive arguments.
fn ratio(num: &[f64], den: &[f64]) -> f64 {
    log_gamma_ratio(num, den).unwrap().exp()
}

fn sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[test]
fn chu_vandermonde_two_terms() {
    let c = check_identity(
        IdentityId::ChuVandermonde,
        &params(&[("m", 2.0), ("n", 3.0)]),
    )
    .unwrap();
    // gamma ratios go through logarithms, so allow a few ulps
    assert!((c.lhs - 3.0).abs() < 1e-14);
    assert!((c.rhs - 3.0).abs() < 1e-14);
    assert!(c.residual < 1e-14);
    assert!(c.passed());
}

#[test]
fn lemma1_single_term() {
    let c = check_identity(
        IdentityId::Lemma1,
        &params(&[("m", 1.0), ("a", 2.0), ("b", 3.0), ("c", 1.0)]),
    )
    .unwrap();
    assert!((c.lhs - 1.0 / 24.0).abs() < 1e-15);
    assert!((c.rhs - 1.0 / 24.0).abs() < 1e-15);
}

#[test]
fn tf1_terminating_series() {
    let c = check_identity(
        IdentityId::Tf1,
        &params(&[("m", 3.0), ("a", 1.5), ("b", 2.5), ("c", 0.5)]),
    )
    .unwrap();
    assert!(c.residual <= 1e-10, "{c:?}");
}

#[test]
fn domain_violations_name_the_constraint() {
    let err = check_identity(
        IdentityId::Lemma1,
        &params(&[("m", 0.0), ("a", 1.0), ("b", 1.0), ("c", 1.0)]),
    )
    .unwrap_err();
    match err {
        Error::IdentityDomain { id, constraint } => {
            assert_eq!(id, "lemma1");
            assert!(constraint.contains('m'), "{constraint}");
        }
        e => panic!("unexpected {e:?}"),
    }
    let missing = check_identity(IdentityId::B1, &params(&[("m", 3.0)])).unwrap_err();
    assert!(matches!(missing, Error::IdentityDomain { .. }));
    let s6 = check_identity(
        IdentityId::S6r,
        &params(&[("m", 4.0), ("k", 3.0), ("a", 1.0), ("b", 1.0)]),
    )
    .unwrap_err();
    assert!(s6.to_string().contains("k <= m - 2"), "{s6}");
}

#[test]
fn ids_parse_and_print() {
    for id in IdentityId::ALL {
        assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), *id);
        assert_eq!(id.to_string(), id.as_str());
    }
    assert_eq!(
        "lemma5c=0".parse::<IdentityId>().unwrap(),
        IdentityId::Lemma5c0
    );
    assert_eq!("s4r".parse::<IdentityId>().unwrap(), IdentityId::S4r);
    assert_eq!("2f1".parse::<IdentityId>().unwrap(), IdentityId::Gauss2f1);
    assert_eq!(
        "type20".parse::<IdentityId>().unwrap(),
        IdentityId::ChuVandermonde
    );
    assert!(matches!(
        "nope".parse::<IdentityId>(),
        Err(Error::UnknownIdentity(_))
    ));
}

#[test]
fn b1_sweep_is_tight() {
    let report = sweep(&[IdentityId::B1], 100, 7);
    assert_eq!(report.cases.len(), 100);
    let s = report.summary(IdentityId::B1).unwrap();
    assert!(s.max_residual <= 1e-10, "{}", s.max_residual);
    assert_eq!(s.status, SweepStatus::Pass);
}

#[test]
fn b1_matches_harmonic_partial_sums() {
    // psi0(n) = -gamma + H_{n-1} at positive integers
    let psi_int = |n: u32| -EULER_GAMMA + (1..n).map(|k| 1.0 / k as f64).sum::<f64>();
    for m in 1..=15u32 {
        for a in 0..=10u32 {
            let lhs: f64 = (1..=m).map(|i| psi_int(i + a)).sum();
            let c = check_identity(IdentityId::B1, &params(&[("m", m as f64), ("a", a as f64)]))
                .unwrap();
            assert!(
                (c.lhs - lhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "m={m} a={a}"
            );
            assert!(
                (c.rhs - lhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "m={m} a={a}"
            );
        }
    }
}

#[test]
fn lemma5_sweep() {
    let report = sweep(&[IdentityId::Lemma5], 50, 0);
    for c in &report.cases {
        assert!(c.params["m"] <= 15.0);
    }
    assert!(report.summary(IdentityId::Lemma5).unwrap().max_residual <= 1e-8);
}

#[test]
fn full_suite_passes_except_unresolved() {
    let report = sweep(IdentityId::ALL, 25, 2024);
    assert!(report.all_passed(), "{:?}", report.failures);
    for s in &report.summaries {
        assert_eq!(s.cases, 25, "{}", s.id);
        if s.id.is_unresolved() {
            assert_eq!(s.status, SweepStatus::Unresolved);
        } else {
            assert_eq!(s.status, SweepStatus::Pass, "{}: {}", s.id, s.max_residual);
            assert!(s.max_residual <= TOLERANCE);
        }
    }
}

#[test]
fn unresolved_identity_is_reported_not_hidden() {
    let report = sweep(&[IdentityId::B72], 10, 1);
    let s = report.summary(IdentityId::B72).unwrap();
    assert_eq!(s.status, SweepStatus::Unresolved);
    assert!(s.failures > 0);
    assert!(report.all_passed());
}

#[test]
fn sweep_is_deterministic_and_serializes() {
    let ids = [IdentityId::Tf2, IdentityId::B7, IdentityId::Bn3];
    let r1 = sweep(&ids, 5, 99);
    let r2 = sweep(&ids, 5, 99);
    assert_eq!(r1, r2);
    let r3 = sweep(&ids, 5, 100);
    assert_ne!(r1.cases, r3.cases);
    let lines = r1.json_lines();
    let parsed: Vec<IdentityCase> = lines
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(parsed, r1.cases);
}

#[test]
fn alternating_squared_sum_stated_form_fails() {
    for (m, k, a, b) in [
        (5.0, 1.0, 1.0, 2.0),
        (8.0, 3.0, 0.5, 3.25),
        (12.0, 2.0, 4.0, 0.0),
    ] {
        let c = check_identity(
            IdentityId::S6r,
            &params(&[("m", m), ("k", k), ("a", a), ("b", b)]),
        )
        .unwrap();
        assert!(c.passed(), "{c:?}");
        let big_a: f64 = a + b;
        let hi = (m - k - 1.0) as usize;
        let lhs: f64 = (1..=hi)
            .map(|j| {
                let jf = j as f64;
                sign(j)
                    * ratio(&[big_a - jf - k + m], &[m - k - jf])
                    * (1.0 / (big_a - jf - 2.0 * k + 2.0 * m - 1.0).powi(2) - 1.0 / (jf * jf))
            })
            .sum();
        assert!((lhs - c.lhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        // the form as stated
        let stated = ratio(&[big_a - k + m], &[m - k])
            * (1..=hi)
                .map(|j| {
                    let jf = j as f64;
                    let rat = 1.0 / (big_a - jf - k + m)
                        - 1.0 / (big_a - 2.0 * jf - 2.0 * k + 2.0 * m)
                        - 1.0 / (big_a - 2.0 * jf - 2.0 * k + 2.0 * m - 1.0);
                    rat * (psi(m - k)
                        - psi(big_a - jf - k + m)
                        - psi(big_a - k + m)
                        - psi(m - k - jf))
                        + 1.0 / (big_a - 2.0 * jf - 2.0 * k + 2.0 * m - 1.0).powi(2)
                })
                .sum::<f64>();
        assert!(
            relative_residual(lhs, stated) > 1e-3,
            "m={m} k={k}: {lhs} vs {stated}"
        );
    }
}

#[test]
fn first_moment_digamma_product_stated_coefficient_fails() {
    for (m, a, b) in [(4.0, 1.5, 3.0), (7.0, 2.0, 0.5), (10.0, 6.25, 1.75)] {
        let c = check_identity(IdentityId::B71, &params(&[("m", m), ("a", a), ("b", b)])).unwrap();
        assert!(c.passed(), "{c:?}");
        let lhs: f64 = (1..=m as usize)
            .map(|i| i as f64 * psi(i as f64 + a) * psi(i as f64 + b))
            .sum();
        assert!((lhs - c.lhs).abs() <= 1e-12 * lhs.abs());
        let cross: f64 = (1..m as usize)
            .map(|i| psi(a + i as f64) / (b + i as f64))
            .sum();
        let stated_coef = (b - a + 1.0) * (a - b) / 2.0;
        let used_coef = (a - b) * (a + b - 1.0) / 2.0;
        let stated = c.rhs + (stated_coef - used_coef) * cross;
        assert!(relative_residual(lhs, stated) > 1e-3, "{lhs} vs {stated}");
    }
}

#[test]
fn binomial_digamma_sum_stated_left_side_depends_on_free_parameter() {
    for (m, b, c) in [(3.0, 1.0, 2.5), (6.0, 0.5, 1.0), (9.0, 2.0, 4.0)] {
        let case =
            check_identity(IdentityId::Bn6, &params(&[("m", m), ("b", b), ("c", c)])).unwrap();
        assert!(case.passed(), "{case:?}");
        let corrected: f64 = (1..=m as usize)
            .map(|i| {
                let i = i as f64;
                ratio(&[c - i + m, b + i], &[i, m - i + 1.0]) * psi(i)
            })
            .sum();
        assert!((corrected - case.lhs).abs() <= 1e-12 * corrected.abs().max(1.0));
        // stated: Gamma(a+b+i+m) / Gamma(i); the right side has no `a`
        let stated = |a: f64| -> f64 {
            (1..=m as usize)
                .map(|i| {
                    let i = i as f64;
                    ratio(&[c - i + m, a + b + i + m], &[i, m - i + 1.0]) * psi(i)
                })
                .sum()
        };
        let (p0, p1) = (stated(0.0), stated(1.0));
        assert!(relative_residual(p0, p1) > 1e-2);
        assert!(relative_residual(p0, case.rhs) > 1e-3);
        assert!(relative_residual(p1, case.rhs) > 1e-3);
    }
}

#[test]
fn corrected_and_unresolved_sets() {
    let corrected: Vec<_> = IdentityId::ALL
        .iter()
        .filter(|i| i.is_corrected())
        .collect();
    assert_eq!(corrected.len(), 4);
    assert!(IdentityId::B72.is_unresolved());
    assert!(!IdentityId::B7.is_unresolved());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residual_is_symmetric_and_scale_aware(l in -1e6f64..1e6, r in -1e6f64..1e6) {
        let x = relative_residual(l, r);
        prop_assert_eq!(x, relative_residual(r, l));
        prop_assert!(x >= 0.0);
        prop_assert!(x <= (l - r).abs());
    }

    #[test]
    fn generated_params_stay_in_domain(seed in any::<u64>(), which in 0usize..1000) {
        use rand::SeedableRng;
        let id = IdentityId::ALL[which % IdentityId::ALL.len()];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = generate_params(id, &mut rng);
        prop_assert!(p.get("m").is_none_or(|&m| (1.0..=15.0).contains(&m) && m.fract() == 0.0));
        prop_assert!(p.values().all(|v| v.abs() <= 25.0));
        let c = check_identity(id, &p);
        prop_assert!(c.is_ok(), "{id}: {:?}", c);
        let c = c.unwrap();
        if !id.is_unresolved() {
            prop_assert!(c.passed(), "{id} {:?}: residual {}", p, c.residual);
        }
    }
}
