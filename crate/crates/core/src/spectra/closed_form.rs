use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use super::Spectrum;
use crate::error::{Error, Result};
use crate::graphs::{AbelianGroupSpec, Symbol};

/// Fraction of a full turn for `chi_a(x)`, reduced into `[0, 1)`.
fn character_turns(group: &AbelianGroupSpec, a: &[usize], x: &[usize]) -> f64 {
    let turns: f64 = group
        .factors()
        .iter()
        .zip(a.iter().zip(x))
        .map(|(&m, (&aj, &xj))| ((aj * xj) % m) as f64 / m as f64)
        .sum();
    turns.fract()
}

/// `lambda_a = sum_x f(x) conj(chi_a(x))` for every character `a`, indexed
/// by the mixed-radix encoding of `a`. `values` is not validated, so this
/// also covers disconnected draws.
///
/// `lambda_a` and `lambda_{-a}` are evaluated once and shared, so the
/// pairing is bit-exact.
pub fn circulant_eigenvalues(group: &AbelianGroupSpec, values: &[bool]) -> Vec<f64> {
    let order = group.order();
    assert_eq!(
        values.len(),
        order,
        "symbol length must equal the group order"
    );
    let support: Vec<Vec<usize>> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v)
        .map(|(x, _)| group.decode(x))
        .collect();
    let boolean = group.is_boolean();
    let mut out = vec![f64::NAN; order];
    for a in 0..order {
        let partner = group.neg(a);
        if partner < a {
            out[a] = out[partner];
            continue;
        }
        let digits = group.decode(a);
        out[a] = if boolean {
            let sum: i64 = support
                .iter()
                .map(|x| {
                    let parity: usize = digits.iter().zip(x).map(|(p, q)| p * q).sum();
                    if parity.is_multiple_of(2) {
                        1
                    } else {
                        -1
                    }
                })
                .sum();
            sum as f64
        } else {
            support
                .iter()
                .map(|x| (TAU * character_turns(group, &digits, x)).cos())
                .sum()
        };
    }
    out
}

/// Closed-form eigensystem of an abelian circulant: character `a` gives
/// eigenvector `chi_a / sqrt(|G|)` with eigenvalue `sum_x f(x) conj(chi_a(x))`.
pub fn abelian_circulant_eigensystem(sym: &Symbol) -> Spectrum {
    let group = sym.group();
    let order = group.order();
    let values = circulant_eigenvalues(group, sym.values());
    let norm = 1.0 / (order as f64).sqrt();
    let elements: Vec<Vec<usize>> = (0..order).map(|x| group.decode(x)).collect();
    let vectors = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|x| Complex64::from_polar(norm, TAU * character_turns(group, a, x)))
                .collect()
        })
        .collect();
    let pairs = (0..order)
        .filter_map(|a| {
            let b = group.neg(a);
            (a < b).then_some((a, b))
        })
        .collect();
    Spectrum::from_unsorted(values, vectors, Some(pairs))
        .expect("closed-form circulant spectrum is well formed")
}

/// Path eigensystem: `2 cos((j+1) pi / (n+1))` with sine eigenvectors.
pub fn path_eigensystem(n: usize) -> Result<Spectrum> {
    if n < 2 {
        return Err(Error::InvalidSize {
            family: "path",
            detail: format!("n = {n} < 2"),
        });
    }
    let h = PI / (n + 1) as f64;
    let scale = (2.0 / (n + 1) as f64).sqrt();
    let values = (0..n).map(|j| 2.0 * (h * (j + 1) as f64).cos()).collect();
    let vectors = (0..n)
        .map(|j| {
            (0..n)
                .map(|l| {
                    // reduce the angle mod 2(n+1) steps before taking sin
                    let k = ((j + 1) * (l + 1)) % (2 * (n + 1));
                    Complex64::new(scale * (h * k as f64).sin(), 0.0)
                })
                .collect()
        })
        .collect();
    Spectrum::from_unsorted(values, vectors, Some(Vec::new()))
}

/// Eigensystem of the bunkbed `I2 (x) A + X2 (x) I` from that of `A`:
/// `lambda_j + 1` with `(|0> + |1>)/sqrt2 (x) alpha_j` and `lambda_j - 1`
/// with `(|0> - |1>)/sqrt2 (x) alpha_j`.
pub fn bunkbed_eigensystem(base: &Spectrum) -> Result<Spectrum> {
    let err = base.orthonormality_error();
    if err > 1e-10 {
        return Err(Error::InvalidSpectrum(format!(
            "base eigenvectors not orthonormal (error {err:e})"
        )));
    }
    let n = base.n();
    let mut values = Vec::with_capacity(2 * n);
    let mut vectors = Vec::with_capacity(2 * n);
    for (sign, shift) in [(1.0, 1.0), (-1.0, -1.0)] {
        for (lambda, alpha) in base.eigenvalues().iter().zip(base.eigenvectors()) {
            values.push(lambda + shift);
            let mut z = Vec::with_capacity(2 * n);
            z.extend(alpha.iter().map(|a| a * FRAC_1_SQRT_2));
            z.extend(alpha.iter().map(|a| a * (sign * FRAC_1_SQRT_2)));
            vectors.push(z);
        }
    }
    Spectrum::from_unsorted(values, vectors, Some(Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::*;
    use crate::spectra::{dense_eigensystem, spectrum_for};

    fn assert_values(s: &Spectrum, expected: &[f64], tol: f64) {
        assert_eq!(s.n(), expected.len());
        for (a, b) in s.eigenvalues().iter().zip(expected) {
            assert!(
                (a - b).abs() <= tol,
                "{:?} vs {:?}",
                s.eigenvalues(),
                expected
            );
        }
    }

    #[test]
    fn small_circulants() {
        let k2 = abelian_circulant_eigensystem(&Symbol::cyclic(2, &[1]).unwrap());
        assert_values(&k2, &[1.0, -1.0], 1e-15);
        let r = 2f64.sqrt();
        let c8 = abelian_circulant_eigensystem(&Symbol::cyclic(8, &[1, 7]).unwrap());
        assert_values(&c8, &[2.0, r, r, 0.0, 0.0, -r, -r, -2.0], 1e-12);
        let cube =
            Symbol::from_support(AbelianGroupSpec::boolean_cube(3).unwrap(), &[1, 2, 4]).unwrap();
        let q3 = abelian_circulant_eigensystem(&cube);
        assert_values(&q3, &[3.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -3.0], 0.0);
    }

    #[test]
    fn hypercube_eigenvalue_is_weight_formula() {
        let group = AbelianGroupSpec::boolean_cube(5).unwrap();
        let sym = Symbol::from_support(group.clone(), &[1, 2, 4, 8, 16]).unwrap();
        let raw = circulant_eigenvalues(&group, sym.values());
        for (a, v) in raw.iter().enumerate() {
            assert_eq!(*v, 5.0 - 2.0 * a.count_ones() as f64);
        }
    }

    #[test]
    fn pairing_is_bit_exact() {
        let group = AbelianGroupSpec::new(vec![5, 6]).unwrap();
        let sym = Symbol::from_support(group.clone(), &[1, 5, 6, 24, 7, 29]).unwrap();
        let raw = circulant_eigenvalues(&group, sym.values());
        for a in 0..group.order() {
            assert_eq!(raw[a].to_bits(), raw[group.neg(a)].to_bits());
        }
    }

    #[test]
    fn circulant_matches_dense_mixed_group() {
        let group = AbelianGroupSpec::new(vec![3, 4]).unwrap();
        let sym = Symbol::from_support(group, &[4, 8, 1, 3]).unwrap();
        let g = build_abelian_circulant(&sym);
        let closed = abelian_circulant_eigensystem(&sym);
        closed.check_invariants(&g).unwrap();
        let dense = dense_eigensystem(&g).unwrap();
        for (a, b) in closed.eigenvalues().iter().zip(dense.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn path_values() {
        assert_values(&path_eigensystem(2).unwrap(), &[1.0, -1.0], 1e-15);
        let r = 2f64.sqrt();
        assert_values(&path_eigensystem(3).unwrap(), &[r, 0.0, -r], 1e-15);
        let p4 = path_eigensystem(4).unwrap();
        assert!(((p4.eigenvalues()[0] - p4.eigenvalues()[1]) - 1.0).abs() < 1e-14);
        assert!(path_eigensystem(1).is_err());
        let p5 = build_path(5).unwrap();
        let dense = dense_eigensystem(&p5).unwrap();
        let closed = path_eigensystem(5).unwrap();
        closed.check_invariants(&p5).unwrap();
        for (a, b) in closed.eigenvalues().iter().zip(dense.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn bunkbed_values() {
        let k2 = spectrum_for(&build_complete(2).unwrap()).unwrap();
        assert_values(
            &bunkbed_eigensystem(&k2).unwrap(),
            &[2.0, 0.0, 0.0, -2.0],
            1e-14,
        );
        let c4 = spectrum_for(&build_cycle(4).unwrap()).unwrap();
        assert_values(
            &bunkbed_eigensystem(&c4).unwrap(),
            &[3.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -3.0],
            1e-14,
        );
        let k3 = spectrum_for(&build_complete(3).unwrap()).unwrap();
        let prism = bunkbed_eigensystem(&k3).unwrap();
        assert_values(&prism, &[3.0, 1.0, 0.0, 0.0, -2.0, -2.0], 1e-14);
        let g = build_bunkbed(&build_complete(3).unwrap()).unwrap();
        prism.check_invariants(&g).unwrap();
        let dense = dense_eigensystem(&g).unwrap();
        for (a, b) in prism.eigenvalues().iter().zip(dense.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(prism.exact_pairs(), Some(&[][..]));
    }

    #[test]
    fn bunkbed_rejects_broken_base() {
        let bad = Spectrum::from_unsorted(
            vec![1.0, -1.0],
            vec![vec![Complex64::new(1.0, 0.0); 2]; 2],
            None,
        )
        .unwrap();
        assert!(bunkbed_eigensystem(&bad).is_err());
    }
}
