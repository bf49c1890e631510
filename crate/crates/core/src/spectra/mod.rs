//! Eigensystems of graph adjacency matrices.
//!
//! Closed forms are used whenever the family admits one (abelian
//! circulants, paths, bunkbeds of anything with a known spectrum); every
//! other graph goes through the dense Jacobi solver, which also serves as
//! the independent oracle for the closed forms.

mod characters;
mod closed_form;
mod jacobi;

pub use characters::{class_circulant_eigenvalues, CharacterTable, CharacterTableFile};
pub use closed_form::{
    abelian_circulant_eigensystem, bunkbed_eigensystem, circulant_eigenvalues, path_eigensystem,
};
pub use jacobi::{dense_eigensystem, jacobi_eigen, JACOBI_MAX_SWEEPS};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graphs::{AbelianGroupSpec, Family, Graph, Symbol};

/// Absolute tolerance on adjacent sorted eigenvalue gaps.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues sorted descending with paired orthonormal eigenvectors.
///
/// `eigenvectors[j][l]` is the amplitude `<l|z_j>`. `exact_pairs` lists
/// index pairs that are equal by symmetry rather than by floating-point
/// coincidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<Complex64>>,
    exact_pairs: Option<Vec<(usize, usize)>>,
}

impl Spectrum {
    /// Sorts descending (ties by ascending original index) and remaps `exact_pairs`.
    pub fn from_unsorted(
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<Vec<Complex64>>,
        exact_pairs: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if eigenvectors.len() != n || eigenvectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidSpectrum(
                "eigenvector shape does not match eigenvalue count".into(),
            ));
        }
        if let Some(bad) = eigenvalues.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum(format!(
                "non-finite eigenvalue {bad}"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        // stable: equal values keep ascending original index
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let exact_pairs = match exact_pairs {
            Some(pairs) => {
                let mut remapped = Vec::with_capacity(pairs.len());
                for (a, b) in pairs {
                    if a >= n || b >= n {
                        return Err(Error::InvalidSpectrum(format!(
                            "exact pair ({a}, {b}) out of range"
                        )));
                    }
                    let (x, y) = (position[a], position[b]);
                    remapped.push((x.min(y), x.max(y)));
                }
                remapped.sort_unstable();
                remapped.dedup();
                Some(remapped)
            }
            None => None,
        };
        let mut vectors = eigenvectors;
        let eigenvectors = order
            .iter()
            .map(|&old| std::mem::take(&mut vectors[old]))
            .collect();
        Ok(Self {
            eigenvalues: order.iter().map(|&old| eigenvalues[old]).collect(),
            eigenvectors,
            exact_pairs,
        })
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    pub fn exact_pairs(&self) -> Option<&[(usize, usize)]> {
        self.exact_pairs.as_deref()
    }

    /// Spectrum of `c * H`. Order is reversed for negative `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let values = self.eigenvalues.iter().map(|v| v * c).collect();
        Self::from_unsorted(values, self.eigenvectors.clone(), self.exact_pairs.clone())
    }

    /// Spectrum of `H + c I`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            eigenvalues: self.eigenvalues.iter().map(|v| v + c).collect(),
            eigenvectors: self.eigenvectors.clone(),
            exact_pairs: self.exact_pairs.clone(),
        }
    }

    /// Largest `|<z_j|z_k> - delta_jk|`.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                let dot: Complex64 = self.eigenvectors[j]
                    .iter()
                    .zip(&self.eigenvectors[k])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Largest `|A z_j - lambda_j z_j|` entry over all eigenpairs.
    pub fn residual(&self, graph: &Graph) -> f64 {
        let n = self.n();
        assert_eq!(n, graph.n(), "spectrum and graph dimensions differ");
        let mut worst: f64 = 0.0;
        for (lambda, z) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for r in 0..n {
                let az: Complex64 = graph
                    .row(r)
                    .iter()
                    .zip(z)
                    .filter(|(&a, _)| a)
                    .map(|(_, v)| *v)
                    .sum();
                worst = worst.max((az - z[r] * lambda).norm());
            }
        }
        worst
    }

    pub fn check_invariants(&self, graph: &Graph) -> Result<()> {
        let ortho = self.orthonormality_error();
        if ortho > 1e-10 {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvectors not orthonormal (error {ortho:e})"
            )));
        }
        let residual = self.residual(graph);
        if residual > 1e-9 {
            return Err(Error::InvalidSpectrum(format!(
                "eigen-residual {residual:e} exceeds 1e-9"
            )));
        }
        Ok(())
    }
}

/// Partition of eigenvalue indices into equal-eigenvalue classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyPartition {
    classes: Vec<Vec<usize>>,
    n: usize,
}

impl DegeneracyPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Class id of each eigenvalue index.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (id, class) in self.classes.iter().enumerate() {
            for &j in class {
                labels[j] = id;
            }
        }
        labels
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Clusters sorted eigenvalues whose adjacent gap is at most `tol`;
/// exact pairs are always merged.
pub fn degeneracy_classes(spec: &Spectrum, tol: f64) -> Result<DegeneracyPartition> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "degeneracy tolerance must be positive, got {tol}"
        )));
    }
    let values = spec.eigenvalues();
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for j in 1..n {
        if (values[j - 1] - values[j]).abs() <= tol {
            union(&mut parent, j - 1, j);
        }
    }
    for &(a, b) in spec.exact_pairs().unwrap_or(&[]) {
        union(&mut parent, a, b);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of_root = vec![usize::MAX; n];
    for j in 0..n {
        let root = find(&mut parent, j);
        if class_of_root[root] == usize::MAX {
            class_of_root[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_of_root[root]].push(j);
    }
    Ok(DegeneracyPartition { classes, n })
}

/// `min_{j != k} |lambda_j - lambda_k|`, zero whenever an eigenvalue repeats.
pub fn spectral_gap(spec: &Spectrum) -> f64 {
    if spec.n() < 2 {
        return 0.0;
    }
    let part = degeneracy_classes(spec, DEFAULT_TOL).expect("default tolerance is positive");
    if !part.is_simple() {
        return 0.0;
    }
    spec.eigenvalues()
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min)
}

/// Number of distinct eigenvalues.
pub fn spectrum_type(spec: &Spectrum, tol: f64) -> Result<usize> {
    Ok(degeneracy_classes(spec, tol)?.len())
}

/// Symbol realizing a cycle, complete graph or hypercube as a circulant.
pub fn family_symbol(graph: &Graph) -> Option<Symbol> {
    let n = graph.n();
    match graph.family() {
        Family::Cycle => Symbol::cyclic(n, &[1, n - 1]).ok(),
        Family::Complete => Symbol::cyclic(n, &(1..n).collect::<Vec<_>>()).ok(),
        Family::Hypercube { dim } => {
            let group = AbelianGroupSpec::boolean_cube(*dim).ok()?;
            let gens: Vec<usize> = (0..*dim).map(|b| 1usize << b).collect();
            Symbol::from_support(group, &gens).ok()
        }
        Family::AbelianCirculant(sym) => Some(sym.clone()),
        _ => None,
    }
}

/// Eigensystem of `graph`, closed form when the family has one.
pub fn spectrum_for(graph: &Graph) -> Result<Spectrum> {
    if let Some(sym) = family_symbol(graph) {
        return Ok(abelian_circulant_eigensystem(&sym));
    }
    match graph.family() {
        Family::Path => path_eigensystem(graph.n()),
        Family::Bunkbed(base) => bunkbed_eigensystem(&spectrum_for(base)?),
        _ => dense_eigensystem(graph),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::*;

    fn spectrum_of_values(values: &[f64]) -> Spectrum {
        let n = values.len();
        let vectors = (0..n)
            .map(|j| {
                (0..n)
                    .map(|l| Complex64::new((j == l) as u8 as f64, 0.0))
                    .collect()
            })
            .collect();
        Spectrum::from_unsorted(values.to_vec(), vectors, None).unwrap()
    }

    #[test]
    fn sorting_is_descending_with_stable_ties() {
        let s = spectrum_of_values(&[0.0, 2.0, 0.0, -2.0]);
        assert_eq!(s.eigenvalues(), &[2.0, 0.0, 0.0, -2.0]);
        // the 0.0 originally at index 0 stays ahead of the one at index 2
        assert_eq!(s.eigenvectors()[1][0], Complex64::new(1.0, 0.0));
        assert_eq!(s.eigenvectors()[2][2], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn c4_classes() {
        let s = spectrum_of_values(&[2.0, 0.0, 0.0, -2.0]);
        let p = degeneracy_classes(&s, 1e-9).unwrap();
        assert_eq!(p.classes(), &[vec![0], vec![1, 2], vec![3]]);
        assert!(degeneracy_classes(&s, 0.0).is_err());
        assert!(degeneracy_classes(&s, -1.0).is_err());
    }

    #[test]
    fn exact_pairs_force_merge() {
        let n = 3;
        let vectors = (0..n)
            .map(|j| {
                (0..n)
                    .map(|l| Complex64::new((j == l) as u8 as f64, 0.0))
                    .collect()
            })
            .collect();
        let s = Spectrum::from_unsorted(vec![1.0, 0.5, 0.5 + 1e-6], vectors, Some(vec![(1, 2)]))
            .unwrap();
        let p = degeneracy_classes(&s, 1e-9).unwrap();
        assert_eq!(p.multiplicities(), vec![1, 2]);
        assert_eq!(spectral_gap(&s), 0.0);
    }

    #[test]
    fn gap_and_type_for_named_graphs() {
        let k2 = spectrum_for(&build_complete(2).unwrap()).unwrap();
        assert_eq!(spectral_gap(&k2), 2.0);
        for n in 3..=16 {
            let c = spectrum_for(&build_cycle(n).unwrap()).unwrap();
            assert_eq!(spectral_gap(&c), 0.0);
            assert_eq!(spectrum_type(&c, DEFAULT_TOL).unwrap(), 1 + n / 2);
            let k = spectrum_for(&build_complete(n).unwrap()).unwrap();
            assert_eq!(spectrum_type(&k, DEFAULT_TOL).unwrap(), 2);
            let p = spectrum_for(&build_path(n).unwrap()).unwrap();
            assert_eq!(spectrum_type(&p, DEFAULT_TOL).unwrap(), n);
        }
        let p4 = path_eigensystem(4).unwrap();
        assert!((spectral_gap(&p4) - 1.0).abs() < 1e-12);
        let k8 = spectrum_for(&build_complete(8).unwrap()).unwrap();
        let mut sizes = degeneracy_classes(&k8, 1e-9).unwrap().multiplicities();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 7]);
        let p4_classes = degeneracy_classes(&p4, 1e-9).unwrap();
        assert_eq!(p4_classes.multiplicities(), vec![1; 4]);
    }

    #[test]
    fn partition_stable_under_halved_tolerance() {
        let mut graphs = vec![];
        for n in 3..=20 {
            graphs.push(build_cycle(n).unwrap());
            graphs.push(build_complete(n).unwrap());
            graphs.push(build_path(n).unwrap());
        }
        for d in 1..=5 {
            graphs.push(build_hypercube(d).unwrap());
        }
        for g in graphs {
            let s = spectrum_for(&g).unwrap();
            assert_eq!(
                degeneracy_classes(&s, 1e-9).unwrap(),
                degeneracy_classes(&s, 5e-10).unwrap(),
                "{g}"
            );
        }
    }

    #[test]
    fn scaling_and_shifting() {
        let s = spectrum_for(&build_cycle(6).unwrap()).unwrap();
        let neg = s.scaled(-0.5).unwrap();
        assert_eq!(neg.eigenvalues()[0], 1.0);
        assert_eq!(neg.eigenvalues()[5], -1.0);
        assert_eq!(spectral_gap(&neg), 0.0);
        assert_eq!(s.shifted(3.0).eigenvalues()[0], 5.0);
    }

    #[test]
    fn closed_forms_satisfy_invariants() {
        let mut graphs = vec![build_complete_bipartite(3).unwrap()];
        for n in 3..=12 {
            graphs.push(build_cycle(n).unwrap());
            graphs.push(build_path(n).unwrap());
            graphs.push(build_bunkbed(&build_cycle(n).unwrap()).unwrap());
        }
        graphs.push(build_bunkbed(&build_hypercube(3).unwrap()).unwrap());
        for g in graphs {
            spectrum_for(&g).unwrap().check_invariants(&g).unwrap();
        }
    }
}
