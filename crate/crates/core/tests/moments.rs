use fgent::moments::*;
use fgent::oracles::{mean_quadrature, variance_quadrature, variance_summation};
use fgent::{Case, EnsembleSpec};
use std::f64::consts::{LN_2, PI};

fn all_specs(max_n: u32) -> Vec<EnsembleSpec> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            out.push(EnsembleSpec::case_a(m, n).unwrap());
            for p in m..=n {
                out.push(EnsembleSpec::case_b(m, n, p).unwrap());
            }
        }
    }
    out
}

#[test]
fn entropy_v_values() {
    assert!((entropy_v(0.0).unwrap() + LN_2).abs() < 1e-16);
    assert_eq!(entropy_v(1.0).unwrap(), 0.0);
    assert_eq!(entropy_v(-1.0).unwrap(), 0.0);
    assert!(entropy_v(1.5).is_err());
    for x in [0.1, 0.5, 0.99] {
        assert_eq!(entropy_v(x).unwrap(), entropy_v(-x).unwrap());
    }
}

#[test]
fn single_mode_anchors() {
    // -int_0^1 v dx = 1/2 and int v^2 - (int v)^2 = 7/12 - pi^2/18 for the
    // uniform density; both follow from int t ln t = -1/4 on [0, 1]
    let a = EnsembleSpec::case_a(1, 1).unwrap();
    assert!((mean_exact(&a).unwrap() - 0.5).abs() <= 1e-12);
    assert!((variance_exact(&a).unwrap() - (7.0 / 12.0 - PI * PI / 18.0)).abs() <= 1e-10);
    assert!((variance_exact(&a).unwrap() - 0.035_021_977_717_257_9).abs() < 1e-12);
    let b = EnsembleSpec::case_b(1, 1, 1).unwrap();
    assert!((mean_exact(&b).unwrap() - 0.5).abs() <= 1e-12);
    // same uniform law on [-1, 1]
    assert!((variance_exact(&b).unwrap() - (7.0 / 12.0 - PI * PI / 18.0)).abs() <= 1e-12);
}

#[test]
fn small_specs_match_oracles() {
    let a24 = EnsembleSpec::case_a(2, 4).unwrap();
    let q = mean_quadrature(&a24, 80).unwrap();
    assert!((mean_exact(&a24).unwrap() - q.value).abs() < 1e-12);
    let a35 = EnsembleSpec::case_a(3, 5).unwrap();
    assert!((mean_exact(&a35).unwrap() - mean_quadrature(&a35, 90).unwrap().value).abs() < 1e-9);
    let b112 = EnsembleSpec::case_b(1, 2, 1).unwrap();
    let s = variance_summation(&b112).unwrap();
    assert!((variance_exact(&b112).unwrap() - s.variance).abs() < 1e-13);
    let b232 = EnsembleSpec::case_b(2, 3, 2).unwrap();
    let vq = variance_quadrature(&b232, 80).unwrap();
    assert!((variance_exact(&b232).unwrap() - vq.value).abs() < 1e-8);
}

#[test]
fn equal_dimensions_match_summation() {
    for m in 1..=10 {
        let s = EnsembleSpec::case_a(m, m).unwrap();
        let sum = variance_summation(&s).unwrap().variance;
        let exact = variance_exact(&s).unwrap();
        assert!((exact - sum).abs() < 1e-10, "m={m}: {exact} vs {sum}");
    }
}

#[test]
fn particle_hole_symmetry() {
    for spec in all_specs(10).into_iter().filter(|s| s.case == Case::B) {
        let p = spec.p.unwrap();
        let mirror = EnsembleSpec::case_b(spec.m, spec.n, spec.m + spec.n - p).unwrap();
        let (v, w) = (
            variance_exact(&spec).unwrap(),
            variance_exact(&mirror).unwrap(),
        );
        assert!((v - w).abs() <= 1e-12 * v.max(1.0), "{spec}: {v} vs {w}");
        let (e, f) = (mean_exact(&spec).unwrap(), mean_exact(&mirror).unwrap());
        assert!((e - f).abs() <= 1e-12 * e.max(1.0), "{spec}: {e} vs {f}");
    }
}

#[test]
fn moments_respect_bounds() {
    for spec in all_specs(14) {
        let r = exact_report(&spec).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert!(r.variance > 0.0, "{spec}");
        assert!(
            r.mean >= 0.0 && r.mean <= spec.m as f64 * LN_2,
            "{spec}: {}",
            r.mean
        );
    }
}

#[test]
fn invalid_specs_are_rejected() {
    let bad = EnsembleSpec {
        case: Case::B,
        m: 3,
        n: 5,
        p: Some(2),
    };
    assert!(mean_exact(&bad).is_err());
    assert!(variance_exact(&bad).is_err());
}

#[test]
fn asymptotic_values() {
    let half = variance_asymptotic(&AsymptoticPoint::leading(0.5, None), Case::A).unwrap();
    assert!((half - 0.5 * (0.75 - LN_2)).abs() < 1e-15);
    assert!((half - 0.028_426_4).abs() < 1e-7);
    let tiny = variance_asymptotic(&AsymptoticPoint::leading(1e-4, None), Case::A).unwrap();
    assert!(tiny.abs() < 1e-8);
    let b = variance_asymptotic(&AsymptoticPoint::leading(0.5, Some(0.5)), Case::B).unwrap();
    assert!((b - (0.75 - LN_2)).abs() < 1e-15);
    assert!((b - 0.056_852_8).abs() < 1e-7);
}

#[test]
fn asymptotic_domain_errors() {
    let lead = |f1, f2| AsymptoticPoint::leading(f1, f2);
    assert!(variance_asymptotic(&lead(0.0, None), Case::A).is_err());
    assert!(variance_asymptotic(&lead(0.6, None), Case::A).is_err());
    assert!(variance_asymptotic(&lead(0.3, None), Case::B).is_err());
    assert!(variance_asymptotic(&lead(0.3, Some(0.2)), Case::B).is_err());
    let corr = AsymptoticPoint::corrected(0.25, 0.5, 40.0);
    assert!(variance_asymptotic(&corr, Case::A).is_err());
    let no_dim = AsymptoticPoint {
        total_dim: None,
        ..corr
    };
    assert!(variance_asymptotic(&no_dim, Case::B).is_err());
}

#[test]
fn case_a_leading_residual_is_order_one_over_dimension() {
    let f1 = 1.0 / 3.0;
    let lim = variance_asymptotic(&AsymptoticPoint::leading(f1, None), Case::A).unwrap();
    let scaled: Vec<f64> = [3u32, 6, 12, 24, 48]
        .iter()
        .map(|&m| {
            let s = EnsembleSpec::case_a(m, 2 * m).unwrap();
            (variance_exact(&s).unwrap() - lim).abs() * (3 * m) as f64
        })
        .collect();
    for w in scaled.windows(2) {
        assert!(w[1] <= w[0] * 1.05, "{scaled:?}");
    }
}

#[test]
fn case_b_corrected_residual_is_order_dimension_to_minus_four() {
    let mut scaled = Vec::new();
    for m in [2u32, 4, 8, 16] {
        let spec = EnsembleSpec::case_b(m, 3 * m, 2 * m).unwrap();
        let exact = variance_exact(&spec).unwrap();
        let big = (4 * m) as f64;
        let corr = variance_asymptotic(
            &AsymptoticPoint::of_spec(&spec, AsymptoticOrder::Corrected),
            Case::B,
        )
        .unwrap();
        let lead = variance_asymptotic(
            &AsymptoticPoint::of_spec(&spec, AsymptoticOrder::Leading),
            Case::B,
        )
        .unwrap();
        let (r_corr, r_lead) = ((exact - corr).abs(), (exact - lead).abs());
        // leading residual decays like (m+n)^-2, corrected like (m+n)^-4
        assert!(
            r_lead * big * big > 0.05 && r_lead * big * big < 0.2,
            "m={m}"
        );
        scaled.push(r_corr * big.powi(4));
        assert!(r_corr < r_lead / (big * big / 10.0), "m={m}");
    }
    assert!(scaled.iter().all(|&s| s > 0.5 && s < 1.0), "{scaled:?}");
}

#[test]
fn variance_curve_levels_off() {
    // n = 3m, f1 = 1/4
    let lim = variance_asymptotic(&AsymptoticPoint::leading(0.25, None), Case::A).unwrap();
    let curve: Vec<f64> = (2..=20)
        .map(|m| variance_exact(&EnsembleSpec::case_a(m, 3 * m).unwrap()).unwrap())
        .collect();
    let gaps: Vec<f64> = curve.iter().map(|v| (v - lim).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    // the gap shrinks like 1/m: about 1% of the limit at m = 20
    assert!(gaps[18] < 0.02 * lim, "{}", gaps[18] / lim);
    assert!(gaps[18] * 20.0 < gaps[0] * 2.0 * 1.2);
}
