//! Data behind the variance-versus-size curve and the standardized-entropy
//! histograms.

use crate::commands::draw;
use crate::output::{emit, Cell, Output, Row};
use crate::{CaseArg, CliError};
use clap::Args;
use fgent::moments::{self, AsymptoticOrder, AsymptoticPoint};
use fgent::sampler;
use fgent::{Case, EnsembleSpec};
use serde::{Deserialize, Serialize};
use std::io::{self, BufWriter};

#[derive(Args, Clone, Debug)]
pub struct DensityArgs {
    /// 1: variance curve; 2: case-A histogram; 3: case-B histogram.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub figure: u8,
    /// Case for figure 1 (figures 2 and 3 fix it).
    #[arg(long, value_enum, ignore_case = true)]
    pub case: Option<CaseArg>,
    #[arg(short)]
    pub m: Option<u32>,
    #[arg(short)]
    pub n: Option<u32>,
    #[arg(short)]
    pub p: Option<u32>,
    /// Figure 1: n = n_ratio * m.
    #[arg(long, default_value_t = 3)]
    pub n_ratio: u32,
    /// Figure 1, case B: p = p_ratio * m.
    #[arg(long, default_value_t = 2)]
    pub p_ratio: u32,
    #[arg(long, default_value_t = 2)]
    pub m_min: u32,
    #[arg(long, default_value_t = 20)]
    pub m_max: u32,
    /// Monte Carlo draws per point (0 skips simulation in figure 1).
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram bins over [-4, 4].
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub mc_estimate: Option<f64>,
    pub mc_stderr: Option<f64>,
}

impl Row for CurveRow {
    fn header() -> Vec<&'static str> {
        vec!["x", "exact", "asymptotic", "mc_estimate", "mc_stderr"]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.x.into(),
            self.exact.into(),
            self.asymptotic.into(),
            self.mc_estimate.into(),
            self.mc_stderr.into(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_center: f64,
    pub empirical_density: f64,
    pub gaussian_density: f64,
}

impl Row for HistogramRow {
    fn header() -> Vec<&'static str> {
        vec!["bin_center", "empirical_density", "gaussian_density"]
    }
    fn cells(&self) -> Vec<Cell> {
        vec![
            self.bin_center.into(),
            self.empirical_density.into(),
            self.gaussian_density.into(),
        ]
    }
}

fn curve(args: &DensityArgs) -> Result<Vec<CurveRow>, CliError> {
    let case: Case = args.case.unwrap_or(CaseArg::A).into();
    if args.m_min == 0 || args.m_min > args.m_max {
        return Err(CliError::usage("need 1 <= --m-min <= --m-max"));
    }
    let mut rows = Vec::new();
    for m in args.m_min..=args.m_max {
        let n = args.n_ratio * m;
        let p = (case == Case::B).then_some(args.p_ratio * m);
        let spec = EnsembleSpec::new(case, m, n, p)?;
        let point = AsymptoticPoint::of_spec(&spec, AsymptoticOrder::Leading);
        let (mc_estimate, mc_stderr) = if args.samples > 0 {
            let batch = draw(&spec, args.samples, args.seed, false, None, None)?;
            let est = sampler::estimate(&batch)?;
            (Some(est.report.variance), Some(est.variance_se))
        } else {
            (None, None)
        };
        rows.push(CurveRow {
            x: m as f64,
            exact: moments::variance_exact(&spec)?,
            asymptotic: moments::variance_asymptotic(&point, case)?,
            mc_estimate,
            mc_stderr,
        });
    }
    Ok(rows)
}

fn histogram(args: &DensityArgs, case: Case) -> Result<Vec<HistogramRow>, CliError> {
    let (m, n) = match (args.m, args.n) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(CliError::usage("figures 2 and 3 need -m and -n")),
    };
    let p = match case {
        Case::A if args.p.is_some() => {
            return Err(CliError::usage("figure 2 is case A; -p is not allowed"))
        }
        Case::A => None,
        Case::B => Some(args.p.ok_or_else(|| CliError::usage("figure 3 needs -p"))?),
    };
    if args.samples == 0 || args.bins == 0 {
        return Err(CliError::usage("--samples and --bins must be positive"));
    }
    let spec = EnsembleSpec::new(case, m, n, p)?;
    let batch = draw(&spec, args.samples, args.seed, false, None, None)?;
    let est = sampler::estimate(&batch)?;
    eprintln!(
        "{spec}: ks_distance {:.6}, skewness {:.6}",
        est.gaussian.ks_distance, est.gaussian.sample_skewness
    );
    let (lo, hi) = (-4.0, 4.0);
    let width = (hi - lo) / args.bins as f64;
    let mut counts = vec![0usize; args.bins];
    for &x in &est.gaussian.standardized {
        if (lo..hi).contains(&x) {
            counts[(((x - lo) / width) as usize).min(args.bins - 1)] += 1;
        }
    }
    let total = est.gaussian.standardized.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let x = lo + (i as f64 + 0.5) * width;
            HistogramRow {
                bin_center: x,
                empirical_density: c as f64 / (total * width),
                gaussian_density: (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            }
        })
        .collect())
}

pub fn density(args: &DensityArgs, out: Output) -> Result<(), CliError> {
    let w = BufWriter::new(io::stdout().lock());
    match args.figure {
        1 => emit(&curve(args)?, out, w)?,
        2 => emit(&histogram(args, Case::A)?, out, w)?,
        _ => emit(&histogram(args, Case::B)?, out, w)?,
    }
    Ok(())
}
