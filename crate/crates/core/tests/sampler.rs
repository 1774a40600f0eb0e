use fgent::jacobi::gauss_legendre_rule;
use fgent::moments::{mean_exact, variance_exact};
use fgent::sampler::*;
use fgent::{EnsembleSpec, Error, KernelContext, Method};
use proptest::prelude::*;
use std::f64::consts::LN_2;
use std::io::BufReader;

/// `int_lo^x g1` by Gauss–Legendre; `g1` is a polynomial for these specs.
fn g1_cdf(ctx: &KernelContext, order: usize) -> impl Fn(f64) -> f64 + '_ {
    let rule = gauss_legendre_rule(order).unwrap();
    let lo = ctx.spec.support().0;
    move |x: f64| {
        let half = (x - lo) / 2.0;
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&u, &w)| w * half * ctx.density_one_point(lo + half * (u + 1.0)).unwrap())
            .sum()
    }
}

fn ks_p(n: usize, d: f64) -> f64 {
    let sq = (n as f64).sqrt();
    kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d)
}

#[test]
fn uniform_case_a_mcmc() {
    let spec = EnsembleSpec::case_a(1, 1).unwrap();
    let n = 100_000;
    let batch = sample_mcmc(&spec, n, 11, None).unwrap();
    assert_eq!(batch.len(), n);
    let mean_x = batch.configs.iter().map(|c| c[0]).sum::<f64>() / n as f64;
    let se = 1.0 / (12.0 * n as f64).sqrt();
    assert!((mean_x - 0.5).abs() < 3.0 * se, "{mean_x}");
    let est = estimate(&batch).unwrap();
    assert!((est.report.mean - 0.5).abs() < 3.0 * est.mean_se);
    assert_eq!(est.report.method, Method::MonteCarlo);
    let diag = batch.mcmc_diag.unwrap();
    assert!((0.1..=0.7).contains(&diag.acceptance_rate));
    assert_eq!(diag.burn_in, 10_000);
    assert_eq!(diag.thinning, 100);
    let d = ks_distance(
        &batch.configs.iter().map(|c| c[0]).collect::<Vec<_>>(),
        |x| x.clamp(0.0, 1.0),
    );
    assert!(ks_p(n, d) > 0.001, "{d}");
}

#[test]
fn single_mode_matrix_model_is_uniform() {
    let spec = EnsembleSpec::case_b(1, 1, 1).unwrap();
    let n = 50_000;
    let batch = sample_matrix_case_b(&spec, n, 5).unwrap();
    assert!(batch.mcmc_diag.is_none());
    let xs: Vec<f64> = batch.configs.iter().map(|c| c[0]).collect();
    let d = ks_distance(&xs, |x| ((x + 1.0) / 2.0).clamp(0.0, 1.0));
    assert!(ks_p(n, d) > 0.01, "{d}");
}

#[test]
fn matrix_model_matches_one_point_density() {
    let spec = EnsembleSpec::case_b(2, 4, 2).unwrap();
    let ctx = KernelContext::new(spec).unwrap();
    let cdf = g1_cdf(&ctx, 12);
    assert!((cdf(1.0) - 1.0).abs() < 1e-13);
    let batch = sample_matrix_case_b(&spec, 100_000, 3).unwrap();
    // eigenvalues inside one draw repel, which only tightens the empirical
    // CDF, so the pooled test is conservative
    let pooled: Vec<f64> = batch.configs.iter().flatten().copied().collect();
    let d = ks_distance(&pooled, &cdf);
    assert!(ks_p(pooled.len(), d) > 0.01, "{d}");
}

#[test]
fn case_a_matrix_model_matches_one_point_density() {
    let spec = EnsembleSpec::case_a(2, 3).unwrap();
    let ctx = KernelContext::new(spec).unwrap();
    let cdf = g1_cdf(&ctx, 16);
    assert!((cdf(1.0) - 1.0).abs() < 1e-13);
    let batch = sample_matrix_case_a(&spec, 40_000, 8).unwrap();
    let pooled: Vec<f64> = batch.configs.iter().flatten().copied().collect();
    let d = ks_distance(&pooled, &cdf);
    assert!(ks_p(pooled.len(), d) > 0.01, "{d}");
}

#[test]
fn mcmc_matches_one_point_density() {
    let spec = EnsembleSpec::case_b(3, 5, 4).unwrap();
    let ctx = KernelContext::new(spec).unwrap();
    let cdf = g1_cdf(&ctx, 16);
    let batch = sample_mcmc(&spec, 20_000, 4, None).unwrap();
    let pooled: Vec<f64> = batch.configs.iter().flatten().copied().collect();
    let d = ks_distance(&pooled, &cdf);
    assert!(ks_p(pooled.len(), d) > 0.01, "{d}");
}

#[test]
fn draws_stay_in_support() {
    let specs = [
        EnsembleSpec::case_a(3, 5).unwrap(),
        EnsembleSpec::case_b(3, 7, 5).unwrap(),
    ];
    for spec in specs {
        let m = spec.m as usize;
        let mut batches = vec![sample_mcmc(&spec, 2_000, 1, None).unwrap()];
        batches.push(match spec.case {
            fgent::Case::A => sample_matrix_case_a(&spec, 2_000, 1).unwrap(),
            fgent::Case::B => sample_matrix_case_b(&spec, 2_000, 1).unwrap(),
        });
        for batch in batches {
            for (c, &s) in batch.configs.iter().zip(&batch.entropies) {
                assert_eq!(c.len(), m);
                assert!(c.iter().all(|&x| spec.in_support(x)), "{c:?}");
                assert!(c.windows(2).all(|w| w[0] <= w[1]));
                assert!(s >= 0.0 && s <= m as f64 * LN_2 + 1e-12);
                assert_eq!(s, entropy_of(c));
            }
        }
    }
}

#[test]
fn seeded_runs_repeat() {
    let spec = EnsembleSpec::case_b(2, 5, 3).unwrap();
    let a = sample_mcmc(&spec, 500, 9, None).unwrap();
    assert_eq!(a, sample_mcmc(&spec, 500, 9, None).unwrap());
    assert_ne!(
        a.entropies,
        sample_mcmc(&spec, 500, 10, None).unwrap().entropies
    );
    let m = sample_matrix_case_b(&spec, 3_000, 9).unwrap();
    assert_eq!(m, sample_matrix_case_b(&spec, 3_000, 9).unwrap());
    let spec_a = EnsembleSpec::case_a(2, 4).unwrap();
    let q = sample_matrix_case_a(&spec_a, 1_500, 2).unwrap();
    assert_eq!(q, sample_matrix_case_a(&spec_a, 1_500, 2).unwrap());
}

#[test]
fn batch_csv_round_trip() {
    let spec = EnsembleSpec::case_b(3, 6, 4).unwrap();
    for batch in [
        sample_mcmc(&spec, 200, 2, None).unwrap(),
        sample_matrix_case_b(&spec, 200, 2).unwrap(),
    ] {
        let mut buf = Vec::new();
        write_batch_csv(&batch, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# {"));
        assert_eq!(text.lines().nth(1).unwrap(), "x1,x2,x3,S");
        let back = read_batch_csv(BufReader::new(buf.as_slice())).unwrap();
        assert_eq!(back, batch);
    }
    assert!(read_batch_csv(BufReader::new("x1,S\n0.5,0.5\n".as_bytes())).is_err());
}

#[test]
fn runaway_step_size_fails_tuning() {
    let spec = EnsembleSpec::case_b(2, 4, 3).unwrap();
    let tuning = Tuning {
        burn_in: Some(0),
        initial_step: 1e4,
        ..Tuning::default()
    };
    match sample_mcmc(&spec, 100, 0, Some(tuning)) {
        Err(Error::Tuning { rate }) => assert!(rate < 0.1),
        other => panic!("expected a tuning error, got {other:?}"),
    }
}

#[test]
fn bad_requests_are_rejected() {
    let spec = EnsembleSpec::case_a(2, 3).unwrap();
    assert!(sample_mcmc(&spec, 0, 0, None).is_err());
    let no_chains = Tuning {
        chains: 0,
        ..Tuning::default()
    };
    assert!(sample_mcmc(&spec, 10, 0, Some(no_chains)).is_err());
    assert!(sample_matrix_case_b(&spec, 10, 0).is_err());
    let b = EnsembleSpec::case_b(2, 3, 2).unwrap();
    assert!(sample_matrix_case_a(&b, 10, 0).is_err());
}

#[test]
fn constant_batch_is_degenerate() {
    let spec = EnsembleSpec::case_a(1, 2).unwrap();
    let batch = SampleBatch {
        spec,
        configs: vec![vec![0.5]; 10],
        entropies: vec![entropy_of(&[0.5]); 10],
        seed: 0,
        mcmc_diag: None,
    };
    let est = estimate(&batch).unwrap();
    assert_eq!(est.report.variance, 0.0);
    assert!(est.gaussian.degenerate);
    let empty = SampleBatch {
        configs: vec![],
        entropies: vec![],
        ..batch
    };
    assert!(estimate(&empty).is_err());
}

#[test]
fn moderate_spec_moments() {
    let spec = EnsembleSpec::case_b(3, 7, 4).unwrap();
    let batch = sample_mcmc(&spec, 40_000, 21, None).unwrap();
    let est = estimate(&batch).unwrap();
    let (mu, var) = (mean_exact(&spec).unwrap(), variance_exact(&spec).unwrap());
    assert!((est.report.mean - mu).abs() < 4.0 * est.mean_se);
    assert!((est.report.variance - var).abs() < 4.0 * est.variance_se);
    let mat = sample_matrix_case_b(&spec, 40_000, 21).unwrap();
    let test = ks_two_sample(&batch.entropies, &mat.entropies);
    assert!(test.p_value > 0.001, "{test:?}");
}

#[test]
fn two_sample_test_separates_shifted_samples() {
    let xs: Vec<f64> = (0..2000).map(|i| (i as f64 + 0.5) / 2000.0).collect();
    let ys: Vec<f64> = (0..1500).map(|i| (i as f64 + 0.3) / 1500.0).collect();
    assert!(ks_two_sample(&xs, &ys).p_value > 0.5);
    let shifted: Vec<f64> = ys.iter().map(|y| y + 0.1).collect();
    let t = ks_two_sample(&xs, &shifted);
    assert!((t.statistic - 0.1).abs() < 2e-3);
    assert!(t.p_value < 1e-6);
}

#[test]
fn kolmogorov_tail_values() {
    assert_eq!(kolmogorov_tail(0.0), 1.0);
    assert_eq!(kolmogorov_tail(0.2), 1.0);
    // P(K > 1.36) ~= 0.05 and P(K > 1.63) ~= 0.01
    assert!((kolmogorov_tail(1.358_1) - 0.05).abs() < 1e-4);
    assert!((kolmogorov_tail(1.627_6) - 0.01).abs() < 1e-4);
    assert!(kolmogorov_tail(5.0) < 1e-20);
}

#[test]
fn tuning_defaults_scale_with_m() {
    let t = Tuning::default();
    assert_eq!((t.burn_in_for(4), t.thinning_for(4)), (40_000, 400));
    let t = Tuning {
        burn_in: Some(7),
        thinning: Some(0),
        ..t
    };
    assert_eq!((t.burn_in_for(4), t.thinning_for(4)), (7, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn standardization_uses_exact_moments(xs in prop::collection::vec(0.0f64..1.0, 2..50), m in 1u32..4, extra in 0u32..4) {
        let spec = EnsembleSpec::case_a(m, m + extra).unwrap();
        let configs: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x; m as usize]).collect();
        let entropies: Vec<f64> = configs.iter().map(|c| entropy_of(c)).collect();
        let batch = SampleBatch { spec, configs, entropies: entropies.clone(), seed: 0, mcmc_diag: None };
        let est = estimate(&batch).unwrap();
        let (mu, sd) = (mean_exact(&spec).unwrap(), variance_exact(&spec).unwrap().sqrt());
        for (z, s) in est.gaussian.standardized.iter().zip(&entropies) {
            prop_assert!((z * sd + mu - s).abs() < 1e-12);
        }
        let n = entropies.len() as f64;
        let mean = entropies.iter().sum::<f64>() / n;
        prop_assert!((est.report.mean - mean).abs() < 1e-12);
        prop_assert!(est.report.variance >= 0.0 && est.variance_se >= 0.0);
        prop_assert!((0.0..=1.0).contains(&est.gaussian.ks_distance));
    }
}
