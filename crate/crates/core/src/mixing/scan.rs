use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{smallest_nonzero_gap, total_variation, uniform_target};
use crate::error::{Error, Result};
use crate::spectra::Spectrum;
use crate::walk::instantaneous_distribution;

pub const DEFAULT_GRID: usize = 4096;
const MAX_WINDOW: f64 = 1e3;
const REFINE_WIDTH: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub eps: f64,
    pub t_max: f64,
    pub grid: usize,
}

impl ScanOptions {
    /// Default window `2 pi n / tau'` (capped) and grid for `spec`.
    pub fn for_spectrum(spec: &Spectrum, eps: f64) -> Self {
        Self {
            eps,
            t_max: default_scan_window(spec),
            grid: DEFAULT_GRID,
        }
    }
}

/// `2 pi n / tau'` with `tau'` the smallest nonzero eigenvalue gap, capped at 1e3.
pub fn default_scan_window(spec: &Spectrum) -> f64 {
    match smallest_nonzero_gap(spec) {
        Some(gap) if gap > 0.0 => (TAU * spec.n() as f64 / gap).min(MAX_WINDOW),
        _ => TAU,
    }
}

fn uniform_deviation(spec: &Spectrum, start: usize, t: f64) -> Result<f64> {
    let p = instantaneous_distribution(spec, start, t)?;
    total_variation(&p, &uniform_target(spec.n()))
}

fn golden_section(spec: &Spectrum, start: usize, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = uniform_deviation(spec, start, x1)?;
    let mut f2 = uniform_deviation(spec, start, x2)?;
    while hi - lo > REFINE_WIDTH {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = uniform_deviation(spec, start, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = uniform_deviation(spec, start, x2)?;
        }
    }
    let t = 0.5 * (lo + hi);
    Ok((t, uniform_deviation(spec, start, t)?))
}

/// Local minima of `||P_t - U||` over `(0, t_max]`, refined by golden-section
/// search, keeping those with deviation at most `eps` (`eps = inf` keeps all).
pub fn instantaneous_mixing_scan(
    spec: &Spectrum,
    start: usize,
    opts: &ScanOptions,
) -> Result<Vec<(f64, f64)>> {
    if opts.t_max <= 0.0 || !opts.t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive, got {}",
            opts.t_max
        )));
    }
    if opts.grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "scan grid needs at least 2 points, got {}",
            opts.grid
        )));
    }
    if start >= spec.n() {
        return Err(Error::InvalidArgument(format!(
            "start vertex {start} out of range"
        )));
    }
    let h = opts.t_max / opts.grid as f64;
    // index 0 is t = 0, used only as the left neighbour of the first point
    let devs: Vec<f64> = (0..=opts.grid)
        .into_par_iter()
        .map(|i| uniform_deviation(spec, start, i as f64 * h))
        .collect::<Result<_>>()?;

    let mut minima = Vec::new();
    for i in 1..=opts.grid {
        let left_ok = devs[i] <= devs[i - 1];
        let right_ok = i == opts.grid || devs[i] < devs[i + 1];
        if left_ok && right_ok {
            let lo = (i - 1) as f64 * h;
            let hi = if i == opts.grid {
                opts.t_max
            } else {
                (i + 1) as f64 * h
            };
            minima.push((lo, hi));
        }
    }
    let refined: Vec<(f64, f64)> = minima
        .into_par_iter()
        .map(|(lo, hi)| golden_section(spec, start, lo, hi))
        .collect::<Result<_>>()?;
    Ok(refined
        .into_iter()
        .filter(|&(_, dev)| dev <= opts.eps)
        .collect())
}
