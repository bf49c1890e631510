//! Continuous-time quantum walk `|psi(t)> = exp(-i H t)|start>` with `H` the
//! adjacency matrix and hbar = 1, evaluated through a precomputed spectrum.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::{DegeneracyPartition, Spectrum};

/// Negative entries below this magnitude are rounding residue.
const CLAMP_EPS: f64 = 1e-12;
/// Total clamped mass above this is treated as a bug, not rounding.
const CLAMP_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Amplitude {
    pub entries: Vec<Complex64>,
    pub time: f64,
}

impl Amplitude {
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Probability vector over vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
    #[serde(skip)]
    clamped: f64,
}

impl Distribution {
    /// Clamps negative rounding residue to zero and checks the total.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Numerical("empty distribution".into()));
        }
        let mut clamped = 0.0;
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::Numerical(format!("non-finite probability {p}")));
            }
            if *p < 0.0 {
                if *p < -CLAMP_EPS {
                    return Err(Error::Numerical(format!("negative probability {p:e}")));
                }
                clamped -= *p;
                *p = 0.0;
            }
        }
        if clamped > CLAMP_LIMIT {
            return Err(Error::Numerical(format!(
                "clamped mass {clamped:e} exceeds {CLAMP_LIMIT:e}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs, clamped })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
            clamped: 0.0,
        }
    }

    pub fn point_mass(n: usize, v: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[v] = 1.0;
        Self {
            probs,
            clamped: 0.0,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Negative rounding residue that was clamped to zero.
    pub fn clamped_mass(&self) -> f64 {
        self.clamped
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }
}

fn check_start(spec: &Spectrum, start: usize) -> Result<()> {
    if start >= spec.n() {
        return Err(Error::InvalidArgument(format!(
            "start vertex {start} out of range for {} vertices",
            spec.n()
        )));
    }
    Ok(())
}

/// `<l|psi(t)> = sum_j <l|z_j> exp(-i lambda_j t) <z_j|start>`.
pub fn evolve(spec: &Spectrum, start: usize, t: f64) -> Result<Amplitude> {
    check_start(spec, start)?;
    let n = spec.n();
    let mut entries = vec![Complex64::new(0.0, 0.0); n];
    for (lambda, z) in spec.eigenvalues().iter().zip(spec.eigenvectors()) {
        let coeff = Complex64::from_polar(1.0, -lambda * t) * z[start].conj();
        for (e, zl) in entries.iter_mut().zip(z) {
            *e += zl * coeff;
        }
    }
    Ok(Amplitude { entries, time: t })
}

/// Born-rule probabilities `|<l|psi(t)>|^2`.
pub fn instantaneous_distribution(spec: &Spectrum, start: usize, t: f64) -> Result<Distribution> {
    let amp = evolve(spec, start, t)?;
    Distribution::new(amp.entries.iter().map(|z| z.norm_sqr()).collect())
}

/// `c[j][l] = <l|z_j><z_j|start>`.
fn weighted_components(spec: &Spectrum, start: usize) -> Vec<Vec<Complex64>> {
    spec.eigenvectors()
        .iter()
        .map(|z| {
            let w = z[start].conj();
            z.iter().map(|zl| zl * w).collect()
        })
        .collect()
}

/// Limiting time average of `P_t`: the double sum over eigenpairs restricted
/// to pairs inside one degeneracy class.
pub fn average_distribution(
    spec: &Spectrum,
    start: usize,
    part: &DegeneracyPartition,
) -> Result<Distribution> {
    check_start(spec, start)?;
    if part.n() != spec.n() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} indices but spectrum has {}",
            part.n(),
            spec.n()
        )));
    }
    let n = spec.n();
    let c = weighted_components(spec, start);
    let mut probs = Vec::with_capacity(n);
    for l in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for class in part.classes() {
            for &j in class {
                for &k in class {
                    acc += c[j][l] * c[k][l].conj();
                }
            }
        }
        if acc.im.abs() > 1e-10 {
            return Err(Error::Numerical(format!(
                "average probability at vertex {l} has imaginary residue {:e}",
                acc.im
            )));
        }
        probs.push(acc.re);
    }
    Distribution::new(probs)
}

/// Exact `(1/T) int_0^T P_t dt`, integrating each eigenpair term
/// analytically. Pairs in the same class get weight 1, all others
/// `(1 - exp(-i D T)) / (i D T)` with `D = lambda_j - lambda_k`.
pub fn finite_time_average(
    spec: &Spectrum,
    start: usize,
    horizon: f64,
    part: &DegeneracyPartition,
) -> Result<Distribution> {
    check_start(spec, start)?;
    if horizon <= 0.0 || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "averaging horizon must be positive, got {horizon}"
        )));
    }
    let n = spec.n();
    let labels = part.labels();
    let values = spec.eigenvalues();
    let mut weights = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            weights[j * n + k] = if labels[j] == labels[k] {
                Complex64::new(1.0, 0.0)
            } else {
                let dt = (values[j] - values[k]) * horizon;
                (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -dt))
                    / Complex64::new(0.0, dt)
            };
        }
    }
    let c = weighted_components(spec, start);
    let mut probs = Vec::with_capacity(n);
    for l in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += c[j][l] * c[k][l].conj() * weights[j * n + k];
            }
        }
        probs.push(acc.re);
    }
    Distribution::new(probs)
}

/// `P_t(b, l)` on the bunkbed of a base graph, walk started at `(0, 0)`,
/// from the product form `[cos^2 t or sin^2 t] * |<l|exp(-i A t)|0>|^2`.
/// Output is layer-major like the bunkbed builder.
pub fn bunkbed_instantaneous(base: &Spectrum, t: f64) -> Result<Distribution> {
    let n = base.n();
    let layer = [t.cos().powi(2), t.sin().powi(2)];
    let values = base.eigenvalues();
    let c = weighted_components(base, 0);
    let mut probs = Vec::with_capacity(2 * n);
    for weight in layer {
        for l in 0..n {
            // sum_{j,k} exp(-i t (lambda_j - lambda_k)) <alpha_j|0><0|alpha_k><l|alpha_j><alpha_k|l>
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    let phase = Complex64::from_polar(1.0, -t * (values[j] - values[k]));
                    acc += phase * c[j][l] * c[k][l].conj();
                }
            }
            probs.push(weight * acc.re);
        }
    }
    Distribution::new(probs)
}
