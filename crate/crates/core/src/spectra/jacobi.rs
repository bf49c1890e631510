use num_complex::Complex64;

use super::Spectrum;
use crate::error::{Error, Result};
use crate::graphs::Graph;

pub const JACOBI_MAX_SWEEPS: usize = 64;

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric row-major matrix.
///
/// Returns unsorted eigenvalues and the eigenvector matrix `v` with
/// eigenvector `j` stored in column `j` (`v[r * n + j]`). Stops once the
/// off-diagonal Frobenius norm drops below `1e-12 * (1 + ||A||_F)`.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if matrix.len() != n * n {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} entries, expected {}",
            matrix.len(),
            n * n
        )));
    }
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frobenius = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = 1e-12 * (1.0 + frobenius);

    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, n);
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}

/// Dense eigensystem of the adjacency matrix; real eigenvectors embedded as complex.
pub fn dense_eigensystem(graph: &Graph) -> Result<Spectrum> {
    let n = graph.n();
    let (values, v) = jacobi_eigen(&graph.adjacency_f64(), n)?;
    let vectors = (0..n)
        .map(|j| (0..n).map(|r| Complex64::new(v[r * n + j], 0.0)).collect())
        .collect();
    Spectrum::from_unsorted(values, vectors, None)
}
