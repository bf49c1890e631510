//! Random `Z_n`-circulants `C(n, 1/2)`.
//!
//! Each orbit `{j, n - j}` is switched on by an independent fair coin. Trial
//! `i` of a run with seed `s` draws from ChaCha8 stream `i` keyed by `s`, so
//! results do not depend on thread count or platform.
//!
//! Eigenvalue moments are taken over the first raw draw of each trial, which
//! is the unconditioned ensemble. Disconnected draws are then rejected and
//! redrawn, and type and deviation statistics use the accepted connected
//! symbol.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{AbelianGroupSpec, Symbol};
use crate::mixing::{average_from_spectrum, total_variation, uniform_target};
use crate::spectra::{
    abelian_circulant_eigensystem, circulant_eigenvalues, spectral_gap, spectrum_type, DEFAULT_TOL,
};

pub const MAX_ATTEMPTS: usize = 1000;
pub const QUANTILES: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSample {
    pub symbol: Symbol,
    /// Disconnected draws discarded before `symbol`.
    pub rejections: usize,
    /// Values of the first draw, connected or not.
    pub first_draw: Vec<bool>,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_values(n: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut values = vec![false; n];
    for j in 1..=n / 2 {
        let bit: bool = rng.random();
        values[j] = bit;
        values[n - j] = bit;
    }
    values
}

fn sample_from(n: usize, rng: &mut ChaCha8Rng) -> Result<CirculantSample> {
    let group = AbelianGroupSpec::cyclic(n)?;
    let first_draw = draw_values(n, rng);
    let mut values = first_draw.clone();
    for rejections in 0..MAX_ATTEMPTS {
        if let Ok(symbol) = Symbol::new(group.clone(), values) {
            return Ok(CirculantSample {
                symbol,
                rejections,
                first_draw,
            });
        }
        values = draw_values(n, rng);
    }
    Err(Error::Numerical(format!(
        "no connected Z_{n} symbol after {MAX_ATTEMPTS} draws"
    )))
}

/// Connected random circulant from stream 0 of `seed`.
pub fn sample_random_circulant(n: usize, seed: u64) -> Result<CirculantSample> {
    if n < 3 {
        return Err(Error::InvalidSize {
            family: "random circulant",
            detail: format!("n = {n} < 3"),
        });
    }
    sample_from(n, &mut trial_rng(seed, 0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Unconditioned mean of `lambda_0` (first draw of every trial).
    pub mean_lambda0: f64,
    pub stderr_lambda0: f64,
    /// Unconditioned mean of `lambda_j`, `j != 0`.
    pub mean_lambda_other: f64,
    pub stderr_lambda_other: f64,
    /// Sample variance of the individual `lambda_j`, `j != 0`.
    pub variance_lambda_other: f64,
    /// Same means over the accepted connected symbols.
    pub connected_mean_lambda0: f64,
    pub connected_mean_lambda_other: f64,
    /// Fraction of trials whose first draw was disconnected.
    pub rejection_rate: f64,
    pub total_rejections: usize,
    pub type_histogram: BTreeMap<usize, usize>,
    /// `(q, value)` quantiles of `||Pbar - U||` over accepted symbols.
    pub deviation_quantiles: Vec<(f64, f64)>,
}

struct Trial {
    raw_lambda0: f64,
    raw_other_mean: f64,
    raw_other_sq: f64,
    lambda0: f64,
    other_mean: f64,
    rejections: usize,
    kind: usize,
    deviation: f64,
}

fn run_trial(n: usize, seed: u64, index: usize) -> Result<Trial> {
    let sample = sample_from(n, &mut trial_rng(seed, index as u64))?;
    let group = sample.symbol.group();
    let raw = circulant_eigenvalues(group, &sample.first_draw);
    let others = (n - 1) as f64;
    let raw_other_mean = raw[1..].iter().sum::<f64>() / others;
    let raw_other_sq = raw[1..].iter().map(|v| v * v).sum::<f64>();

    let spec = abelian_circulant_eigensystem(&sample.symbol);
    let gap = spectral_gap(&spec);
    if gap != 0.0 {
        return Err(Error::Numerical(format!(
            "Z_{n} circulant {:?} has nonzero spectral gap {gap}",
            sample.symbol.support()
        )));
    }
    let accepted = circulant_eigenvalues(group, sample.symbol.values());
    let pbar = average_from_spectrum(&spec, 0)?;
    Ok(Trial {
        raw_lambda0: raw[0],
        raw_other_mean,
        raw_other_sq,
        lambda0: accepted[0],
        other_mean: accepted[1..].iter().sum::<f64>() / others,
        rejections: sample.rejections,
        kind: spectrum_type(&spec, DEFAULT_TOL)?,
        deviation: total_variation(&pbar, &uniform_target(n))?,
    })
}

fn mean_and_stderr(xs: impl Iterator<Item = f64> + Clone, count: usize) -> (f64, f64) {
    let m = count as f64;
    let mean = xs.clone().sum::<f64>() / m;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn ensemble_stats(n: usize, trials: usize, seed: u64) -> Result<EnsembleStats> {
    if trials < 1 {
        return Err(Error::InvalidArgument(
            "ensemble needs at least one trial".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidSize {
            family: "random circulant",
            detail: format!("n = {n} < 3"),
        });
    }
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(n, seed, i))
        .collect::<Result<_>>()?;

    // fixed-order reductions below keep the sums bitwise reproducible
    let (mean_lambda0, stderr_lambda0) =
        mean_and_stderr(results.iter().map(|t| t.raw_lambda0), trials);
    let (mean_lambda_other, stderr_lambda_other) =
        mean_and_stderr(results.iter().map(|t| t.raw_other_mean), trials);
    let count_other = (trials * (n - 1)) as f64;
    let second_moment = results.iter().map(|t| t.raw_other_sq).sum::<f64>() / count_other;
    let variance_lambda_other = (second_moment - mean_lambda_other * mean_lambda_other)
        * count_other
        / (count_other - 1.0).max(1.0);
    let connected_mean_lambda0 = results.iter().map(|t| t.lambda0).sum::<f64>() / trials as f64;
    let connected_mean_lambda_other =
        results.iter().map(|t| t.other_mean).sum::<f64>() / trials as f64;
    let rejected_first = results.iter().filter(|t| t.rejections > 0).count();
    let total_rejections = results.iter().map(|t| t.rejections).sum();

    let mut type_histogram = BTreeMap::new();
    for t in &results {
        *type_histogram.entry(t.kind).or_insert(0) += 1;
    }
    let mut devs: Vec<f64> = results.iter().map(|t| t.deviation).collect();
    devs.sort_by(f64::total_cmp);
    let deviation_quantiles = QUANTILES.iter().map(|&q| (q, quantile(&devs, q))).collect();

    Ok(EnsembleStats {
        n,
        trials,
        seed,
        mean_lambda0,
        stderr_lambda0,
        mean_lambda_other,
        stderr_lambda_other,
        variance_lambda_other,
        connected_mean_lambda0,
        connected_mean_lambda_other,
        rejection_rate: rejected_first as f64 / trials as f64,
        total_rejections,
        type_histogram,
        deviation_quantiles,
    })
}

/// Exact type histogram over every connected symmetric `Z_n` symbol.
pub fn type_spectrum_exhaustive(n: usize) -> Result<BTreeMap<usize, usize>> {
    if !(3..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration supports 3 <= n <= 20, got {n}"
        )));
    }
    let group = AbelianGroupSpec::cyclic(n)?;
    let orbits = n / 2;
    let mut histogram = BTreeMap::new();
    for mask in 0u32..(1 << orbits) {
        let mut values = vec![false; n];
        for j in 1..=orbits {
            let bit = mask >> (j - 1) & 1 == 1;
            values[j] = bit;
            values[n - j] = bit;
        }
        let Ok(symbol) = Symbol::new(group.clone(), values) else {
            continue;
        };
        let kind = spectrum_type(&abelian_circulant_eigensystem(&symbol), DEFAULT_TOL)?;
        *histogram.entry(kind).or_insert(0) += 1;
    }
    Ok(histogram)
}

/// One row of a sampled-vs-exact histogram comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeAgreement {
    pub kind: usize,
    pub observed: usize,
    pub expected: f64,
    pub sigma: f64,
    pub within_3_sigma: bool,
}

/// Compares sampled type counts with the exact frequencies, bin by bin.
pub fn compare_type_histograms(
    sampled: &BTreeMap<usize, usize>,
    exact: &BTreeMap<usize, usize>,
) -> Vec<TypeAgreement> {
    let trials: usize = sampled.values().sum();
    let total: usize = exact.values().sum();
    let mut kinds: Vec<usize> = sampled.keys().chain(exact.keys()).copied().collect();
    kinds.sort_unstable();
    kinds.dedup();
    kinds
        .into_iter()
        .map(|kind| {
            let p = *exact.get(&kind).unwrap_or(&0) as f64 / total as f64;
            let observed = *sampled.get(&kind).unwrap_or(&0);
            let expected = trials as f64 * p;
            let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
            let within_3_sigma = (observed as f64 - expected).abs() <= 3.0 * sigma;
            TypeAgreement {
                kind,
                observed,
                expected,
                sigma,
                within_3_sigma,
            }
        })
        .collect()
}
