//! Mixing metrics and closed-form reference values.
//!
//! Total variation here is the unhalved `sum_s |P(s) - Q(s)|`, so it ranges
//! over `[0, 2]`. Halve any reported deviation to get the more common
//! convention.

mod scan;
mod verify;

pub use scan::{default_scan_window, instantaneous_mixing_scan, ScanOptions, DEFAULT_GRID};
pub use verify::{
    verify_all, CheckKind, CheckStatus, MixingReport, TheoremCheck, VerifyConfig, VerifyReport,
};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{build_bunkbed, Graph};
use crate::spectra::{degeneracy_classes, dense_eigensystem, spectrum_for, Spectrum, DEFAULT_TOL};
use crate::walk::{average_distribution, Distribution};

/// Unhalved total variation distance.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidArgument(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

pub fn uniform_target(n: usize) -> Distribution {
    Distribution::uniform(n)
}

/// Stationary distribution of the lazy walk `I/2 + A/2`: proportional to degree.
pub fn lazy_stationary(g: &Graph) -> Distribution {
    let degrees = g.degrees();
    let total: usize = degrees.iter().sum();
    Distribution::new(degrees.iter().map(|&d| d as f64 / total as f64).collect())
        .expect("degree distribution of a connected graph is normalized")
}

/// Limiting average distribution from `start` using the graph's preferred spectrum.
pub fn average_of(g: &Graph, start: usize) -> Result<Distribution> {
    let spec = spectrum_for(g)?;
    average_from_spectrum(&spec, start)
}

pub fn average_from_spectrum(spec: &Spectrum, start: usize) -> Result<Distribution> {
    let part = degeneracy_classes(spec, DEFAULT_TOL)?;
    average_distribution(spec, start, &part)
}

/// `||Pbar - U||` for the walk started at vertex 0.
pub fn average_uniform_deviation(g: &Graph) -> Result<f64> {
    total_variation(&average_of(g, 0)?, &uniform_target(g.n()))
}

/// `||Pbar - pi||` against the lazy-walk stationary distribution.
pub fn average_classical_deviation(g: &Graph) -> Result<f64> {
    total_variation(&average_of(g, 0)?, &lazy_stationary(g))
}

/// `(1/4) sum_{a != 0} |Pbar^(a)|^2` with `Pbar^(a) = sum_l Pbar(l) w^{a l}`.
/// Only defined for odd cycles.
pub fn cycle_fourier_bound(n: usize, pbar: &Distribution) -> Result<f64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Fourier bound needs an odd cycle length >= 3, got {n}"
        )));
    }
    if pbar.len() != n {
        return Err(Error::InvalidArgument(format!(
            "distribution has {} entries for C_{n}",
            pbar.len()
        )));
    }
    let mut total = 0.0;
    for a in 1..n {
        let coeff: Complex64 = pbar
            .probs()
            .iter()
            .enumerate()
            .map(|(l, &p)| Complex64::from_polar(p, TAU * ((a * l) % n) as f64 / n as f64))
            .sum();
        total += coeff.norm_sqr();
    }
    Ok(total / 4.0)
}

/// Closed-form `Pbar` for `K_n`: `1 - 2(n-1)/n^2` at the start, `2/n^2` elsewhere.
pub fn complete_graph_average(n: usize) -> Result<Distribution> {
    if n < 2 {
        return Err(Error::InvalidSize {
            family: "complete graph",
            detail: format!("n = {n} < 2"),
        });
    }
    let nf = n as f64;
    let mut probs = vec![2.0 / (nf * nf); n];
    probs[0] = 1.0 - 2.0 * (nf - 1.0) / (nf * nf);
    Distribution::new(probs)
}

/// `Pbar(0)` on `P_n` as the finite sum `(4/(n+1)^2) sum_j sin^4((j+1) pi/(n+1))`.
pub fn path_start_average(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize {
            family: "path",
            detail: format!("n = {n} < 2"),
        });
    }
    let m = (n + 1) as f64;
    let sum: f64 = (1..=n).map(|k| (k as f64 * PI / m).sin().powi(4)).sum();
    Ok(4.0 / (m * m) * sum)
}

/// `max_l |Pbar(0, l) - Pbar(1, l)|` on the bunkbed of `base`, computed with
/// the dense eigensolver and the generic average (no product form).
pub fn bunkbed_layer_equality(base: &Graph) -> Result<f64> {
    let bunkbed = build_bunkbed(base)?;
    let spec = dense_eigensystem(&bunkbed)?;
    let pbar = average_from_spectrum(&spec, 0)?;
    let n = base.n();
    let probs = pbar.probs();
    Ok((0..n)
        .map(|l| (probs[l] - probs[n + l]).abs())
        .fold(0.0, f64::max))
}

/// Smallest nonzero `|lambda_j - lambda_k|` across distinct degeneracy classes.
pub fn smallest_nonzero_gap(spec: &Spectrum) -> Option<f64> {
    let part = degeneracy_classes(spec, DEFAULT_TOL).ok()?;
    let values = spec.eigenvalues();
    let reps: Vec<f64> = part.classes().iter().map(|c| values[c[0]]).collect();
    reps.windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .reduce(f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::*;

    #[test]
    fn total_variation_basics() {
        let p = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
        let a = Distribution::point_mass(3, 0);
        let b = Distribution::point_mass(3, 2);
        assert_eq!(total_variation(&a, &b).unwrap(), 2.0);
        assert!(total_variation(&a, &uniform_target(4)).is_err());
        let k8 = average_of(&build_complete(8).unwrap(), 0).unwrap();
        assert!((total_variation(&k8, &uniform_target(8)).unwrap() - 1.3125).abs() < 1e-12);
    }

    #[test]
    fn targets() {
        let pi = lazy_stationary(&build_path(5).unwrap());
        assert_eq!(pi.probs(), &[0.125, 0.25, 0.25, 0.25, 0.125]);
        assert_eq!(
            lazy_stationary(&build_complete(5).unwrap()).probs(),
            &[0.2; 5]
        );
        assert_eq!(uniform_target(4).probs(), &[0.25; 4]);
    }

    #[test]
    fn average_deviations() {
        assert!(
            average_uniform_deviation(&build_complete(2).unwrap())
                .unwrap()
                .abs()
                < 1e-14
        );
        assert!(
            (average_uniform_deviation(&build_cycle(5).unwrap()).unwrap() - 0.32).abs() < 1e-12
        );
        assert!((average_uniform_deviation(&build_cycle(4).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        assert!(
            (average_uniform_deviation(&build_cycle(6).unwrap()).unwrap() - 4.0 / 9.0).abs()
                < 1e-12
        );
        assert!(
            average_classical_deviation(&build_complete(2).unwrap())
                .unwrap()
                .abs()
                < 1e-14
        );
        assert!(
            (average_classical_deviation(&build_path(3).unwrap()).unwrap() - 0.5).abs() < 1e-12
        );
        for n in 3..=10 {
            let nf = n as f64;
            let d = average_classical_deviation(&build_complete(n).unwrap()).unwrap();
            assert!((d - 2.0 * (1.0 - 1.0 / nf) * (1.0 - 2.0 / nf)).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_bound_values() {
        for (n, expected) in [(3, 2.0 / 36.0), (5, 0.04), (9, 8.0 / 324.0)] {
            let pbar = average_of(&build_cycle(n).unwrap(), 0).unwrap();
            assert!((cycle_fourier_bound(n, &pbar).unwrap() - expected).abs() < 1e-12);
        }
        let c4 = average_of(&build_cycle(4).unwrap(), 0).unwrap();
        assert!(cycle_fourier_bound(4, &c4).is_err());
    }

    #[test]
    fn closed_form_averages() {
        assert_eq!(complete_graph_average(2).unwrap().probs(), &[0.5, 0.5]);
        assert!((path_start_average(2).unwrap() - 0.5).abs() < 1e-15);
        assert!((path_start_average(3).unwrap() - 0.375).abs() < 1e-15);
        for n in 2..=40 {
            assert!((path_start_average(n).unwrap() - 1.5 / (n as f64 + 1.0)).abs() < 1e-13);
        }
        assert!(path_start_average(1).is_err());
    }

    #[test]
    fn layer_equality_holds_without_resonant_gaps() {
        // C5 and P4 have no eigenvalue differences equal to 2
        assert!(bunkbed_layer_equality(&build_cycle(5).unwrap()).unwrap() < 1e-12);
        assert!(bunkbed_layer_equality(&build_path(4).unwrap()).unwrap() < 1e-12);
        assert!(bunkbed_layer_equality(&build_complete(3).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn layer_equality_breaks_for_k2_base() {
        // the K2 bunkbed is C4 with Pbar = (3/8, 1/8 | 1/8, 3/8)
        let gap = bunkbed_layer_equality(&build_complete(2).unwrap()).unwrap();
        assert!((gap - 0.25).abs() < 1e-12);
    }

    #[test]
    fn smallest_gap() {
        let p4 = spectrum_for(&build_path(4).unwrap()).unwrap();
        let g = smallest_nonzero_gap(&p4).unwrap();
        assert!((g - (2.0 * (PI / 5.0).cos() - 2.0 * (2.0 * PI / 5.0).cos())).abs() < 1e-14);
        let k2 = spectrum_for(&build_complete(2).unwrap()).unwrap();
        assert_eq!(smallest_nonzero_gap(&k2), Some(2.0));
    }
}
