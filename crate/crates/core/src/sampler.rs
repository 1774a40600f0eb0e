//! Monte Carlo draws of subsystem eigenvalues and entropy statistics.
//!
//! The authority for both cases is a Metropolis chain on the joint
//! eigenvalue density
//! `prod_{i<j} |x_i^g - x_j^g|^2 prod_i (1-x_i)^a (1+x_i)^b`.
//! Case B also has a direct matrix model: the `m x m` corner of the
//! projector onto a Haar-random `p`-dimensional subspace of `C^(m+n)`.
//! A case-A matrix model (corner of a Haar-rotated symplectic form) is
//! provided as an experimental cross-check only.

use crate::error::{Error, Result};
use crate::kernel::{ln_weight, Case, EnsembleSpec};
use crate::moments::{entropy_v, mean_exact, variance_exact, Method, MomentReport};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::io::{BufRead, Write};

/// Chain diagnostics; absent for matrix-model batches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcDiagnostics {
    /// Post-burn-in acceptance rate over all chains.
    pub acceptance_rate: f64,
    /// Single-coordinate steps discarded per chain.
    pub burn_in: usize,
    /// Single-coordinate steps between kept draws.
    pub thinning: usize,
}

/// Draws of eigenvalue configurations with their entropies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub spec: EnsembleSpec,
    /// Each configuration sorted ascending.
    pub configs: Vec<Vec<f64>>,
    pub entropies: Vec<f64>,
    pub seed: u64,
    pub mcmc_diag: Option<McmcDiagnostics>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.entropies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entropies.is_empty()
    }
}

/// Metropolis settings. `None` fields take size-dependent defaults:
/// burn-in `10 * m * 1000`, thinning `m * 100` steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tuning {
    pub burn_in: Option<usize>,
    pub thinning: Option<usize>,
    /// Independent chains; fixed rather than tied to the thread count so
    /// that batches do not depend on the machine.
    pub chains: usize,
    pub target_acceptance: f64,
    pub initial_step: f64,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            burn_in: None,
            thinning: None,
            chains: 16,
            target_acceptance: 0.4,
            initial_step: 0.1,
        }
    }
}

impl Tuning {
    pub fn burn_in_for(&self, m: usize) -> usize {
        self.burn_in.unwrap_or(10 * m * 1000)
    }

    pub fn thinning_for(&self, m: usize) -> usize {
        self.thinning.unwrap_or(m * 100).max(1)
    }
}

/// `S = -sum_i v(x_i)`.
pub fn entropy_of(config: &[f64]) -> f64 {
    -config
        .iter()
        .map(|&x| entropy_v(x.clamp(-1.0, 1.0)).expect("clamped into [-1, 1]"))
        .sum::<f64>()
}

struct LogGas {
    gamma: i32,
    a: f64,
    b: f64,
    lo: f64,
    hi: f64,
}

impl LogGas {
    fn new(spec: &EnsembleSpec) -> Self {
        let (lo, hi) = spec.support();
        LogGas {
            gamma: spec.gamma() as i32,
            a: spec.a() as f64,
            b: spec.b() as f64,
            lo,
            hi,
        }
    }

    fn power(&self, x: f64) -> f64 {
        x.powi(self.gamma)
    }

    /// Change in log-density when coordinate `i` moves to `y`; `-inf` on
    /// and beyond the walls. `pw` caches `x^gamma`.
    fn delta(&self, xs: &[f64], pw: &[f64], i: usize, y: f64) -> f64 {
        if !(y > self.lo && y < self.hi) {
            return f64::NEG_INFINITY;
        }
        let x = xs[i];
        let (yg, xg) = (self.power(y), pw[i]);
        let mut ratio = 1.0;
        for (j, &q) in pw.iter().enumerate() {
            if j != i {
                ratio *= (yg - q) / (xg - q);
            }
        }
        2.0 * ratio.abs().ln() + ln_weight(self.a, self.b, (1.0 - y) / 2.0, (1.0 + y) / 2.0)
            - ln_weight(self.a, self.b, (1.0 - x) / 2.0, (1.0 + x) / 2.0)
    }
}

/// Robbins–Monro style step update on `ln(step)` after each batch of
/// proposals on one coordinate.
const ADAPT_BATCH: usize = 50;

struct Chain<'g> {
    gas: &'g LogGas,
    xs: Vec<f64>,
    pw: Vec<f64>,
    steps: Vec<f64>,
    rng: ChaCha8Rng,
    cursor: usize,
}

impl Chain<'_> {
    /// One single-coordinate Metropolis step, cycling over coordinates.
    fn step(&mut self) -> (usize, bool) {
        let i = self.cursor;
        self.cursor = (self.cursor + 1) % self.xs.len();
        let z: f64 = self.rng.sample(StandardNormal);
        let y = self.xs[i] + self.steps[i] * z;
        let d = self.gas.delta(&self.xs, &self.pw, i, y);
        if d == f64::NEG_INFINITY {
            return (i, false);
        }
        let u: f64 = self.rng.random();
        let accept = u.ln() < d;
        if accept {
            self.xs[i] = y;
            self.pw[i] = self.gas.power(y);
        }
        (i, accept)
    }
}

fn initial_config(spec: &EnsembleSpec) -> Vec<f64> {
    let (lo, hi) = spec.support();
    let m = spec.m as usize;
    (0..m)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / m as f64)
        .collect()
}

struct ChainOutput {
    configs: Vec<Vec<f64>>,
    accepted: usize,
    proposed: usize,
}

fn run_chain(
    spec: &EnsembleSpec,
    gas: &LogGas,
    tuning: &Tuning,
    seed: u64,
    index: usize,
    count: usize,
) -> ChainOutput {
    let m = spec.m as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let xs = initial_config(spec);
    let mut chain = Chain {
        gas,
        pw: xs.iter().map(|&x| gas.power(x)).collect(),
        xs,
        steps: vec![tuning.initial_step; m],
        rng,
        cursor: 0,
    };
    let span = gas.hi - gas.lo;
    let mut batch_acc = vec![0usize; m];
    let mut batch_len = vec![0usize; m];
    let mut rounds = vec![0usize; m];
    for _ in 0..tuning.burn_in_for(m) {
        let (i, ok) = chain.step();
        batch_acc[i] += ok as usize;
        batch_len[i] += 1;
        if batch_len[i] == ADAPT_BATCH {
            rounds[i] += 1;
            let rate = batch_acc[i] as f64 / ADAPT_BATCH as f64;
            let gain = (1.0 / (rounds[i] as f64).sqrt()).min(0.5);
            chain.steps[i] = (chain.steps[i] * (gain * (rate - tuning.target_acceptance)).exp())
                .clamp(1e-8 * span, span);
            batch_acc[i] = 0;
            batch_len[i] = 0;
        }
    }
    let thin = tuning.thinning_for(m);
    let mut configs = Vec::with_capacity(count);
    let mut accepted = 0;
    for _ in 0..count {
        for _ in 0..thin {
            accepted += chain.step().1 as usize;
        }
        let mut c = chain.xs.clone();
        c.sort_by(f64::total_cmp);
        configs.push(c);
    }
    ChainOutput {
        configs,
        accepted,
        proposed: count * thin,
    }
}

/// Metropolis sampling of the joint eigenvalue density.
///
/// Steps are adapted per coordinate during burn-in only and frozen
/// afterwards. Fails with [`Error::Tuning`] if the post-burn-in acceptance
/// rate lies outside `[0.1, 0.7]`.
pub fn sample_mcmc(
    spec: &EnsembleSpec,
    n_samples: usize,
    seed: u64,
    tuning: Option<Tuning>,
) -> Result<SampleBatch> {
    spec.validate()?;
    let tuning = tuning.unwrap_or_default();
    if n_samples == 0 || tuning.chains == 0 {
        return Err(Error::Domain {
            func: "sample_mcmc",
            msg: "n_samples and chains must be positive".into(),
        });
    }
    let gas = LogGas::new(spec);
    let chains = tuning.chains.min(n_samples);
    let per = n_samples.div_ceil(chains);
    let outputs: Vec<ChainOutput> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let count = per.min(n_samples - (c * per).min(n_samples));
            run_chain(spec, &gas, &tuning, seed, c, count)
        })
        .collect();
    let (mut accepted, mut proposed) = (0, 0);
    let mut configs = Vec::with_capacity(n_samples);
    for o in outputs {
        accepted += o.accepted;
        proposed += o.proposed;
        configs.extend(o.configs);
    }
    let rate = accepted as f64 / proposed.max(1) as f64;
    if !(0.1..=0.7).contains(&rate) {
        return Err(Error::Tuning { rate });
    }
    let m = spec.m as usize;
    let entropies = configs.iter().map(|c| entropy_of(c)).collect();
    Ok(SampleBatch {
        spec: *spec,
        configs,
        entropies,
        seed,
        mcmc_diag: Some(McmcDiagnostics {
            acceptance_rate: rate,
            burn_in: tuning.burn_in_for(m),
            thinning: tuning.thinning_for(m),
        }),
    })
}

/// Draws per parallel work unit for the matrix models; fixed so that output
/// does not depend on the thread count.
const MATRIX_BLOCK: usize = 1024;

fn matrix_batch<F>(spec: &EnsembleSpec, n_samples: usize, seed: u64, draw: F) -> SampleBatch
where
    F: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let blocks = n_samples.div_ceil(MATRIX_BLOCK);
    let configs: Vec<Vec<f64>> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|blk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(blk as u64);
            let count = MATRIX_BLOCK.min(n_samples - blk * MATRIX_BLOCK);
            (0..count).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect();
    let entropies = configs.iter().map(|c| entropy_of(c)).collect();
    SampleBatch {
        spec: *spec,
        configs,
        entropies,
        seed,
        mcmc_diag: None,
    }
}

/// Haar-random `rows x cols` isometry: QR of a complex Gaussian matrix with
/// the phases of `diag(R)` moved into `Q`.
fn haar_isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Case B by its matrix model: eigenvalues `y` of `G_A = U U^dagger` with `U`
/// the top `m x p` block of a Haar isometry, mapped to `x = 2y - 1`.
pub fn sample_matrix_case_b(
    spec: &EnsembleSpec,
    n_samples: usize,
    seed: u64,
) -> Result<SampleBatch> {
    spec.validate()?;
    let p = match (spec.case, spec.p) {
        (Case::B, Some(p)) => p as usize,
        _ => {
            return Err(Error::InvalidSpec(
                "the unitary matrix model needs a case-B spec".into(),
            ))
        }
    };
    let m = spec.m as usize;
    let total = m + spec.n as usize;
    Ok(matrix_batch(spec, n_samples, seed, |rng| {
        let q = haar_isometry(rng, total, p);
        let u = q.rows(0, m);
        let g = u * u.adjoint();
        let mut xs: Vec<f64> = SymmetricEigen::new(g)
            .eigenvalues
            .iter()
            .map(|y| (2.0 * y - 1.0).clamp(-1.0, 1.0))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }))
}

/// Experimental case-A matrix model: `J = O^T J0 O` with `O` Haar on
/// `O(2(m+n))` and `J0` the standard symplectic form; the `2m x 2m` corner
/// has singular values `x_k` in pairs. Not used as an oracle.
pub fn sample_matrix_case_a(
    spec: &EnsembleSpec,
    n_samples: usize,
    seed: u64,
) -> Result<SampleBatch> {
    spec.validate()?;
    if spec.case != Case::A {
        return Err(Error::InvalidSpec(
            "the orthogonal matrix model needs a case-A spec".into(),
        ));
    }
    let m = spec.m as usize;
    let dim = 2 * (m + spec.n as usize);
    Ok(matrix_batch(spec, n_samples, seed, |rng| {
        let z = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let (mut o, r) = z.qr().unpack();
        for j in 0..dim {
            if r[(j, j)] < 0.0 {
                o.column_mut(j).neg_mut();
            }
        }
        // Rows 0..2m of O^T J0 O restricted to columns 0..2m; J0 pairs
        // coordinates (2k, 2k+1).
        let top = o.columns(0, 2 * m);
        let mut corner = DMatrix::<f64>::zeros(2 * m, 2 * m);
        for k in 0..dim / 2 {
            let (r0, r1) = (top.row(2 * k), top.row(2 * k + 1));
            corner += r0.transpose() * r1 - r1.transpose() * r0;
        }
        let mut sv: Vec<f64> = corner.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let mut xs: Vec<f64> = sv
            .chunks(2)
            .map(|p| (p.iter().sum::<f64>() / p.len() as f64).clamp(0.0, 1.0))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }))
}

/// Closeness of the standardized entropy to a standard Gaussian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianCheck {
    pub ks_distance: f64,
    pub sample_skewness: f64,
    /// `(S - E[S]) / sqrt(V[S])` using the closed-form moments.
    pub standardized: Vec<f64>,
    /// Set when the batch (or the exact variance) has no spread, which makes
    /// the distance meaningless.
    pub degenerate: bool,
}

/// Sample moments with standard errors plus the Gaussian diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// `error_estimate` holds the standard error of the variance.
    pub report: MomentReport,
    pub mean_se: f64,
    pub variance_se: f64,
    pub gaussian: GaussianCheck,
}

/// Mean, unbiased variance, and central moments `m2, m3, m4`.
fn central_moments(xs: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = xs.len() as f64;
    // Shifting by a sample value keeps a constant batch exactly constant.
    let x0 = xs[0];
    let shift = xs.iter().map(|x| x - x0).sum::<f64>() / n;
    let mean = x0 + shift;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = (x - x0) - shift;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let var = if xs.len() > 1 { m2 / (n - 1.0) } else { 0.0 };
    (mean, var, m2 / n, m3 / n, m4 / n)
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

/// Sup distance between the empirical CDF of `xs` and `cdf`.
pub fn ks_distance(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Sample mean and variance with standard errors (the variance SE from the
/// fourth central moment), and the Gaussian check against the closed-form
/// moments.
pub fn estimate(batch: &SampleBatch) -> Result<Estimate> {
    if batch.is_empty() {
        return Err(Error::Domain {
            func: "estimate",
            msg: "empty batch".into(),
        });
    }
    let s = &batch.entropies;
    let n = s.len() as f64;
    let (mean, var, m2, m3, m4) = central_moments(s);
    let mean_se = (var / n).sqrt();
    let variance_se = ((m4 - var * var * (n - 3.0) / (n - 1.0)) / n)
        .max(0.0)
        .sqrt();
    let exact_mean = mean_exact(&batch.spec)?;
    let exact_var = variance_exact(&batch.spec)?;
    let degenerate = m2 <= 0.0 || exact_var <= 0.0;
    let sd = exact_var.max(0.0).sqrt();
    let standardized: Vec<f64> = if exact_var > 0.0 {
        s.iter().map(|x| (x - exact_mean) / sd).collect()
    } else {
        vec![0.0; s.len()]
    };
    let ks = if exact_var > 0.0 {
        ks_distance(&standardized, standard_normal_cdf)
    } else {
        1.0
    };
    Ok(Estimate {
        report: MomentReport {
            spec: batch.spec,
            mean,
            variance: var,
            method: Method::MonteCarlo,
            error_estimate: variance_se,
        },
        mean_se,
        variance_se,
        gaussian: GaussianCheck {
            ks_distance: ks,
            sample_skewness: if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 },
            standardized,
            degenerate,
        },
    })
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.3 {
        // The alternating series converges slowly here; the tail is 1 to
        // double precision.
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let t = (-2.0 * kf * kf * lambda * lambda).exp();
        acc += if k % 2 == 1 { t } else { -t };
        if t < 1e-18 {
            break;
        }
    }
    (2.0 * acc).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value
/// (Stephens' small-sample adjustment of the argument).
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> KsTest {
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let v = a[i].min(b[j]);
        while i < na && a[i] <= v {
            i += 1;
        }
        while j < nb && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let sq = ne.sqrt();
    KsTest {
        statistic: d,
        p_value: kolmogorov_tail((sq + 0.12 + 0.11 / sq) * d),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BatchHeader {
    spec: EnsembleSpec,
    seed: u64,
    n_samples: usize,
    diagnostics: Option<McmcDiagnostics>,
}

/// Write a batch as CSV rows `x1..xm,S` under a `#`-prefixed JSON header.
pub fn write_batch_csv<W: Write>(batch: &SampleBatch, mut out: W) -> std::io::Result<()> {
    let header = BatchHeader {
        spec: batch.spec,
        seed: batch.seed,
        n_samples: batch.len(),
        diagnostics: batch.mcmc_diag,
    };
    writeln!(out, "# {}", serde_json::to_string(&header)?)?;
    let mut w = csv::Writer::from_writer(out);
    let m = batch.spec.m as usize;
    let mut cols: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    cols.push("S".into());
    w.write_record(&cols)?;
    for (c, s) in batch.configs.iter().zip(&batch.entropies) {
        let mut row: Vec<String> = c.iter().map(|x| format!("{x:e}")).collect();
        row.push(format!("{s:e}"));
        w.write_record(&row)?;
    }
    w.flush()
}

/// Read back a batch written by [`write_batch_csv`].
pub fn read_batch_csv<R: BufRead>(mut input: R) -> std::io::Result<SampleBatch> {
    let bad = |m: String| std::io::Error::new(std::io::ErrorKind::InvalidData, m);
    let mut first = String::new();
    input.read_line(&mut first)?;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| bad("missing JSON header line".into()))?;
    let header: BatchHeader = serde_json::from_str(json.trim())?;
    let mut r = csv::Reader::from_reader(input);
    let mut configs = Vec::with_capacity(header.n_samples);
    let mut entropies = Vec::with_capacity(header.n_samples);
    for rec in r.records() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| bad(e.to_string())))
            .collect::<std::io::Result<_>>()?;
        let (s, xs) = vals.split_last().ok_or_else(|| bad("empty row".into()))?;
        configs.push(xs.to_vec());
        entropies.push(*s);
    }
    Ok(SampleBatch {
        spec: header.spec,
        configs,
        entropies,
        seed: header.seed,
        mcmc_diag: header.diagnostics,
    })
}
