use crate::output::{emit, Cell, Output, Row};
use crate::CliError;
use fgent::identities::{self, IdentityId, IdentitySummary};
use fgent::moments::{self, AsymptoticPoint};
use fgent::oracles;
use fgent::sampler::{self, Tuning};
use fgent::{Case, EnsembleSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, BufWriter};
use std::path::PathBuf;

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRow {
    pub spec: EnsembleSpec,
    pub mean: f64,
    pub variance: f64,
}

impl Row for ExactRow {
    fn header() -> Vec<&'static str> {
        vec!["case", "m", "n", "p", "mean", "variance"]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.spec.case.to_string().into(),
            self.spec.m.into(),
            self.spec.n.into(),
            self.spec.p.into(),
            self.mean.into(),
            self.variance.into(),
        ]
    }
}

pub fn exact(spec: &EnsembleSpec, out: Output) -> Result<(), CliError> {
    let row = ExactRow {
        spec: *spec,
        mean: moments::mean_exact(spec)?,
        variance: moments::variance_exact(spec)?,
    };
    emit(&[row], out, stdout())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub spec: EnsembleSpec,
    pub mean_exact: f64,
    pub mean_quadrature: f64,
    pub variance_exact: f64,
    pub variance_summation: f64,
    pub variance_quadrature: f64,
    /// Largest pairwise variance gap divided by its tolerance, or the mean
    /// gap divided by its tolerance if that is larger; pass iff <= 1.
    pub worst_ratio: f64,
    pub summation_unreliable: bool,
    pub pass: bool,
}

impl Row for VerifyRow {
    fn header() -> Vec<&'static str> {
        vec![
            "case",
            "m",
            "n",
            "p",
            "mean_exact",
            "mean_quadrature",
            "variance_exact",
            "variance_summation",
            "variance_quadrature",
            "worst_ratio",
            "pass",
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.spec.case.to_string().into(),
            self.spec.m.into(),
            self.spec.n.into(),
            self.spec.p.into(),
            self.mean_exact.into(),
            self.mean_quadrature.into(),
            self.variance_exact.into(),
            self.variance_summation.into(),
            self.variance_quadrature.into(),
            self.worst_ratio.into(),
            if self.pass { "yes" } else { "NO" }.into(),
        ]
    }
}

/// Every spec with `n <= max_n`, sorted.
pub fn sweep_specs(case: Option<Case>, max_n: u32) -> Vec<EnsembleSpec> {
    let mut specs = Vec::new();
    for n in 1..=max_n {
        for m in 1..=n {
            if case != Some(Case::B) {
                specs.push(EnsembleSpec::case_a(m, n).expect("m <= n"));
            }
            if case != Some(Case::A) {
                for p in m..=n {
                    specs.push(EnsembleSpec::case_b(m, n, p).expect("m <= p <= n"));
                }
            }
        }
    }
    specs.sort();
    specs
}

pub fn verify_spec(spec: &EnsembleSpec, order: Option<usize>) -> fgent::Result<VerifyRow> {
    let order = order.unwrap_or_else(|| oracles::default_order(spec));
    let ve = moments::variance_exact(spec)?;
    let sum = oracles::variance_summation(spec)?;
    let vq = oracles::variance_quadrature(spec, order)?.value;
    let me = moments::mean_exact(spec)?;
    let mq = oracles::mean_quadrature(spec, order)?.value;
    let vs = sum.variance;
    let gap = |x: f64, y: f64| (x - y).abs() / 1e-8f64.max(1e-10 * x.abs().max(y.abs()));
    let worst = gap(ve, vs)
        .max(gap(ve, vq))
        .max(gap(vs, vq))
        .max((me - mq).abs() / 1e-9);
    Ok(VerifyRow {
        spec: *spec,
        mean_exact: me,
        mean_quadrature: mq,
        variance_exact: ve,
        variance_summation: vs,
        variance_quadrature: vq,
        worst_ratio: worst,
        summation_unreliable: sum.unreliable,
        pass: worst <= 1.0 && !sum.unreliable,
    })
}

pub fn verify(
    case: Option<Case>,
    max_n: u32,
    order: Option<usize>,
    out: Output,
) -> Result<(), CliError> {
    if max_n == 0 {
        return Err(CliError::usage("--max-n must be at least 1"));
    }
    let specs = sweep_specs(case, max_n);
    let rows: Vec<VerifyRow> = specs
        .par_iter()
        .map(|s| verify_spec(s, order))
        .collect::<fgent::Result<_>>()?;
    emit(&rows, out, stdout())?;
    let failed: Vec<&VerifyRow> = rows.iter().filter(|r| !r.pass).collect();
    if let Some(worst) = failed
        .iter()
        .max_by(|a, b| a.worst_ratio.total_cmp(&b.worst_ratio))
    {
        return Err(CliError::Failed(format!(
            "{} of {} specs disagree; worst {} (gap/tolerance {:.3e})",
            failed.len(),
            rows.len(),
            worst.spec,
            worst.worst_ratio
        )));
    }
    Ok(())
}

impl Row for IdentitySummary {
    fn header() -> Vec<&'static str> {
        vec![
            "id",
            "cases",
            "max_residual",
            "max_condition",
            "failures",
            "status",
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.id.as_str().into(),
            self.cases.into(),
            self.max_residual.into(),
            self.max_condition.into(),
            self.failures.into(),
            serde_json::to_value(self.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
                .into(),
        ]
    }
}

pub fn identities(ids: &[String], cases: usize, seed: u64, out: Output) -> Result<(), CliError> {
    if cases == 0 {
        return Err(CliError::usage("--cases must be at least 1"));
    }
    let ids: Vec<IdentityId> = if ids.is_empty() {
        IdentityId::ALL.to_vec()
    } else {
        ids.iter()
            .map(|s| s.parse())
            .collect::<fgent::Result<_>>()?
    };
    let report = identities::sweep(&ids, cases, seed);
    match out {
        Output::Json => {
            use std::io::Write;
            let mut w = stdout();
            w.write_all(report.json_lines().as_bytes())?;
            w.flush()?;
        }
        _ => emit(&report.summaries, out, stdout())?,
    }
    for s in &report.summaries {
        if s.status == identities::SweepStatus::Unresolved {
            eprintln!(
                "note: {} fails ({} of {} cases) and is recorded as unresolved",
                s.id, s.failures, s.cases
            );
        }
    }
    if !report.all_passed() {
        let bad: Vec<String> = report
            .summaries
            .iter()
            .filter(|s| s.status == identities::SweepStatus::Fail)
            .map(|s| format!("{} ({:.3e})", s.id, s.max_residual))
            .collect();
        return Err(CliError::Failed(bad.join(", ")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRow {
    pub spec: EnsembleSpec,
    pub sampler: String,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub mean_se: f64,
    pub mean_exact: f64,
    pub variance: f64,
    pub variance_se: f64,
    pub variance_exact: f64,
    pub ks_distance: f64,
    pub skewness: f64,
    pub acceptance_rate: Option<f64>,
}

impl Row for SimulateRow {
    fn header() -> Vec<&'static str> {
        vec![
            "case",
            "m",
            "n",
            "p",
            "sampler",
            "samples",
            "mean",
            "mean_se",
            "mean_exact",
            "variance",
            "variance_se",
            "variance_exact",
            "ks_distance",
            "skewness",
            "acceptance_rate",
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.spec.case.to_string().into(),
            self.spec.m.into(),
            self.spec.n.into(),
            self.spec.p.into(),
            self.sampler.clone().into(),
            self.samples.into(),
            self.mean.into(),
            self.mean_se.into(),
            self.mean_exact.into(),
            self.variance.into(),
            self.variance_se.into(),
            self.variance_exact.into(),
            self.ks_distance.into(),
            self.skewness.into(),
            self.acceptance_rate.into(),
        ]
    }
}

pub fn draw(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
    matrix: bool,
    burn_in: Option<usize>,
    thinning: Option<usize>,
) -> fgent::Result<sampler::SampleBatch> {
    match (matrix, spec.case) {
        (true, Case::B) => sampler::sample_matrix_case_b(spec, samples, seed),
        (true, Case::A) => sampler::sample_matrix_case_a(spec, samples, seed),
        (false, _) => sampler::sample_mcmc(
            spec,
            samples,
            seed,
            Some(Tuning {
                burn_in,
                thinning,
                ..Tuning::default()
            }),
        ),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
    matrix: bool,
    burn_in: Option<usize>,
    thinning: Option<usize>,
    batch_out: Option<PathBuf>,
    out: Output,
) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::usage("--samples must be at least 1"));
    }
    if matrix && spec.case == Case::A {
        eprintln!("note: the case-A matrix model is experimental; MCMC is the reference sampler");
    }
    let batch = draw(spec, samples, seed, matrix, burn_in, thinning)?;
    if let Some(path) = batch_out {
        let f = std::fs::File::create(&path)?;
        sampler::write_batch_csv(&batch, BufWriter::new(f))?;
    }
    let est = sampler::estimate(&batch)?;
    let row = SimulateRow {
        spec: *spec,
        sampler: if matrix { "matrix" } else { "mcmc" }.into(),
        samples,
        seed,
        mean: est.report.mean,
        mean_se: est.mean_se,
        mean_exact: moments::mean_exact(spec)?,
        variance: est.report.variance,
        variance_se: est.variance_se,
        variance_exact: moments::variance_exact(spec)?,
        ks_distance: est.gaussian.ks_distance,
        skewness: est.gaussian.sample_skewness,
        acceptance_rate: batch.mcmc_diag.map(|d| d.acceptance_rate),
    };
    emit(&[row], out, stdout())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub case: Case,
    pub point: AsymptoticPoint,
    pub variance: f64,
}

impl Row for AsymptoticRow {
    fn header() -> Vec<&'static str> {
        vec!["case", "f1", "f2", "order", "total_dim", "variance"]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.case.to_string().into(),
            self.point.f1.into(),
            self.point.f2.into(),
            format!("{:?}", self.point.order).to_lowercase().into(),
            self.point.total_dim.into(),
            self.variance.into(),
        ]
    }
}

pub fn asymptotic(
    case: Case,
    f1: f64,
    f2: Option<f64>,
    total_dim: Option<f64>,
    corrected: bool,
    out: Output,
) -> Result<(), CliError> {
    let point = if corrected {
        let f2 = f2.ok_or_else(|| CliError::usage("--order corrected requires --f2"))?;
        let big =
            total_dim.ok_or_else(|| CliError::usage("--order corrected requires --total-dim"))?;
        AsymptoticPoint::corrected(f1, f2, big)
    } else {
        AsymptoticPoint::leading(f1, f2)
    };
    let variance = moments::variance_asymptotic(&point, case)?;
    emit(
        &[AsymptoticRow {
            case,
            point,
            variance,
        }],
        out,
        stdout(),
    )?;
    Ok(())
}
