//! Graph families used throughout the crate.
//!
//! Every builder produces a simple, undirected, connected graph with a
//! canonical vertex order:
//!
//! - cycles, complete graphs and paths: vertices `0..n`;
//! - hypercubes: vertex index is the integer value of the binary string;
//! - complete bipartite `K_{n,n}`: parts `0..n` and `n..2n`;
//! - abelian circulants: mixed-radix encoding, first factor most significant;
//! - bunkbeds: layer-major, vertex `(b, l)` has index `b * n + l`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA: &str = "ctqw/1";

/// Finite abelian group `Z_{n_1} x ... x Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    factors: Vec<usize>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSymbol(
                "group needs at least one factor".into(),
            ));
        }
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidSymbol(format!("cyclic factor order {f} < 2")));
        }
        Ok(Self { factors })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn boolean_cube(d: u32) -> Result<Self> {
        Self::new(vec![2; d as usize])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    /// Mixed-radix digits of element `index`, most significant factor first.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factors.len()];
        for (slot, &m) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = index % m;
            index /= m;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&x, &m)| acc * m + x % m)
    }

    pub fn neg(&self, index: usize) -> usize {
        let digits: Vec<usize> = self
            .decode(index)
            .into_iter()
            .zip(&self.factors)
            .map(|(x, &m)| (m - x) % m)
            .collect();
        self.encode(&digits)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let digits: Vec<usize> = self
            .decode(a)
            .into_iter()
            .zip(self.decode(b))
            .zip(&self.factors)
            .map(|((x, y), &m)| (x + m - y) % m)
            .collect();
        self.encode(&digits)
    }

    pub fn is_boolean(&self) -> bool {
        self.factors.iter().all(|&m| m == 2)
    }
}

/// Connection function `f: G -> {0,1}` of an abelian circulant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    group: AbelianGroupSpec,
    values: Vec<bool>,
}

impl Symbol {
    /// Checks no self-loop, `f(x) = f(-x)`, and that the support generates the group.
    pub fn new(group: AbelianGroupSpec, values: Vec<bool>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidSymbol(format!(
                "symbol has {} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if values[0] {
            return Err(Error::InvalidSymbol(
                "f(identity) = 1 would add self-loops".into(),
            ));
        }
        for x in 0..values.len() {
            if values[x] != values[group.neg(x)] {
                return Err(Error::InvalidSymbol(format!(
                    "f({x}) != f(-{x}); adjacency would not be symmetric"
                )));
            }
        }
        let symbol = Self { group, values };
        if !symbol.generates_group() {
            return Err(Error::InvalidSymbol(
                "support does not generate the group (disconnected)".into(),
            ));
        }
        Ok(symbol)
    }

    pub fn from_support(group: AbelianGroupSpec, support: &[usize]) -> Result<Self> {
        let mut values = vec![false; group.order()];
        for &x in support {
            if x >= values.len() {
                return Err(Error::InvalidSymbol(format!("element {x} out of range")));
            }
            values[x] = true;
        }
        Self::new(group, values)
    }

    pub fn cyclic(n: usize, support: &[usize]) -> Result<Self> {
        Self::from_support(AbelianGroupSpec::cyclic(n)?, support)
    }

    pub fn group(&self) -> &AbelianGroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn support(&self) -> Vec<usize> {
        support_of(&self.values)
    }

    fn generates_group(&self) -> bool {
        let order = self.group.order();
        let gens = self.support();
        let mut seen = vec![false; order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.group.sub(x, self.group.neg(g));
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == order
    }
}

pub(crate) fn support_of(values: &[bool]) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter_map(|(x, &v)| v.then_some(x))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Cycle,
    Complete,
    Path,
    Hypercube { dim: u32 },
    CompleteBipartite { part: usize },
    AbelianCirculant(Symbol),
    Bunkbed(Box<Graph>),
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Path => "path",
            Family::Hypercube { .. } => "hypercube",
            Family::CompleteBipartite { .. } => "complete_bipartite",
            Family::AbelianCirculant(_) => "abelian_circulant",
            Family::Bunkbed(_) => "bunkbed",
            Family::Custom => "custom",
        }
    }
}

/// Simple undirected connected graph stored as a dense 0/1 adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    family: Family,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Validated constructor for user-supplied adjacency.
    pub fn from_adjacency(rows: Vec<Vec<bool>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut adjacency = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGraph(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            adjacency.extend_from_slice(row);
        }
        let g = Self {
            n,
            adjacency,
            family: Family::Custom,
            labels: None,
        };
        g.validate()?;
        Ok(g)
    }

    fn from_parts(n: usize, adjacency: Vec<bool>, family: Family) -> Self {
        let g = Self {
            n,
            adjacency,
            family,
            labels: None,
        };
        debug_assert!(g.validate().is_ok());
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.adjacency[i * self.n..(i + 1) * self.n]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().filter(|&&a| a).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Row-major adjacency as `f64`.
    pub fn adjacency_f64(&self) -> Vec<f64> {
        self.adjacency
            .iter()
            .map(|&a| if a { 1.0 } else { 0.0 })
            .collect()
    }

    pub fn same_adjacency(&self, other: &Graph) -> bool {
        self.n == other.n && self.adjacency == other.adjacency
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for (u, &adj) in self.row(v).iter().enumerate() {
                if adj && !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == self.n
    }

    pub fn validate(&self) -> Result<()> {
        if self.adjacency.len() != self.n * self.n {
            return Err(Error::InvalidGraph("adjacency is not square".into()));
        }
        for i in 0..self.n {
            if self.is_adjacent(i, i) {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            for j in (i + 1)..self.n {
                if self.is_adjacent(i, j) != self.is_adjacent(j, i) {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(())
    }

    /// True when `perm` (old index -> new index) maps `self` onto `other`.
    pub fn is_isomorphic_under(&self, other: &Graph, perm: &[usize]) -> bool {
        if self.n != other.n || perm.len() != self.n {
            return false;
        }
        let mut hit = vec![false; self.n];
        for &p in perm {
            if p >= self.n || hit[p] {
                return false;
            }
            hit[p] = true;
        }
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.is_adjacent(i, j) == other.is_adjacent(perm[i], perm[j]))
        })
    }

    pub fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Cycle => write!(f, "C_{}", self.n),
            Family::Complete => write!(f, "K_{}", self.n),
            Family::Path => write!(f, "P_{}", self.n),
            Family::Hypercube { dim } => write!(f, "Q_{dim}"),
            Family::CompleteBipartite { part } => write!(f, "K_{{{part},{part}}}"),
            Family::AbelianCirculant(sym) => {
                let factors: Vec<String> = sym
                    .group()
                    .factors()
                    .iter()
                    .map(|m| format!("Z_{m}"))
                    .collect();
                write!(f, "circ[{}; {:?}]", factors.join("x"), sym.support())
            }
            Family::Bunkbed(base) => write!(f, "bunkbed({base})"),
            Family::Custom => write!(f, "custom(n={})", self.n),
        }
    }
}

fn size_error(family: &'static str, detail: String) -> Error {
    Error::InvalidSize { family, detail }
}

pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(size_error("cycle", format!("n = {n} < 3")));
    }
    let mut adj = vec![false; n * n];
    for j in 0..n {
        let k = (j + 1) % n;
        adj[j * n + k] = true;
        adj[k * n + j] = true;
    }
    Ok(Graph::from_parts(n, adj, Family::Cycle))
}

pub fn build_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(size_error("complete graph", format!("n = {n} < 2")));
    }
    let adj = (0..n * n).map(|idx| idx / n != idx % n).collect();
    Ok(Graph::from_parts(n, adj, Family::Complete))
}

pub fn build_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(size_error("path", format!("n = {n} < 2")));
    }
    let mut adj = vec![false; n * n];
    for j in 0..n - 1 {
        adj[j * n + j + 1] = true;
        adj[(j + 1) * n + j] = true;
    }
    Ok(Graph::from_parts(n, adj, Family::Path))
}

pub fn build_hypercube(d: u32) -> Result<Graph> {
    if d < 1 {
        return Err(size_error("hypercube", format!("d = {d} < 1")));
    }
    if d > 16 {
        return Err(size_error(
            "hypercube",
            format!("d = {d} is too large for a dense adjacency"),
        ));
    }
    let n = 1usize << d;
    let adj = (0..n * n)
        .map(|idx| ((idx / n) ^ (idx % n)).count_ones() == 1)
        .collect();
    Ok(Graph::from_parts(n, adj, Family::Hypercube { dim: d }))
}

pub fn build_complete_bipartite(part: usize) -> Result<Graph> {
    if part < 1 {
        return Err(size_error(
            "complete bipartite graph",
            format!("part size {part} < 1"),
        ));
    }
    let n = 2 * part;
    let adj = (0..n * n)
        .map(|idx| (idx / n < part) != (idx % n < part))
        .collect();
    Ok(Graph::from_parts(
        n,
        adj,
        Family::CompleteBipartite { part },
    ))
}

/// Adjacency `[s, t] = f(s - t)`.
pub fn build_abelian_circulant(sym: &Symbol) -> Graph {
    let group = sym.group();
    let n = group.order();
    let adj = (0..n * n)
        .map(|idx| sym.values()[group.sub(idx / n, idx % n)])
        .collect();
    Graph::from_parts(n, adj, Family::AbelianCirculant(sym.clone()))
}

/// Two layer-major copies of `base` joined by the matching `(0, l) -- (1, l)`.
pub fn build_bunkbed(base: &Graph) -> Result<Graph> {
    base.validate()?;
    let n = base.n();
    let m = 2 * n;
    let mut adj = vec![false; m * m];
    for b in 0..2 {
        for i in 0..n {
            for j in 0..n {
                adj[(b * n + i) * m + b * n + j] = base.is_adjacent(i, j);
            }
        }
    }
    for l in 0..n {
        adj[l * m + n + l] = true;
        adj[(n + l) * m + l] = true;
    }
    Ok(Graph::from_parts(
        m,
        adj,
        Family::Bunkbed(Box::new(base.clone())),
    ))
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity (redrawn until connected).
pub fn random_connected<R: rand::Rng>(n: usize, edge_prob: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(size_error("random graph", format!("n = {n} < 2")));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {edge_prob} not in (0, 1]"
        )));
    }
    for _ in 0..10_000 {
        let mut adj = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < edge_prob {
                    adj[i * n + j] = true;
                    adj[j * n + i] = true;
                }
            }
        }
        let g = Graph {
            n,
            adjacency: adj,
            family: Family::Custom,
            labels: None,
        };
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Numerical(format!(
        "no connected G({n}, {edge_prob}) sample after 10000 draws"
    )))
}

/// On-disk graph format; extra keys carry family parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub n: usize,
    pub family: String,
    pub adjacency_rows: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<GraphFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        let adjacency_rows = (0..g.n())
            .map(|i| {
                g.row(i)
                    .iter()
                    .map(|&a| if a { '1' } else { '0' })
                    .collect()
            })
            .collect();
        let mut file = GraphFile {
            schema: SCHEMA.to_string(),
            n: g.n(),
            family: g.family().name().to_string(),
            adjacency_rows,
            dim: None,
            part: None,
            factors: None,
            support: None,
            base: None,
            labels: g.labels().map(|l| l.to_vec()),
        };
        match g.family() {
            Family::Hypercube { dim } => file.dim = Some(*dim),
            Family::CompleteBipartite { part } => file.part = Some(*part),
            Family::AbelianCirculant(sym) => {
                file.factors = Some(sym.group().factors().to_vec());
                file.support = Some(sym.support());
            }
            Family::Bunkbed(base) => file.base = Some(Box::new(GraphFile::from(base.as_ref()))),
            _ => {}
        }
        file
    }
}

impl GraphFile {
    fn rows(&self) -> Result<Vec<Vec<bool>>> {
        if self.adjacency_rows.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} adjacency rows for n = {}",
                self.adjacency_rows.len(),
                self.n
            )));
        }
        self.adjacency_rows
            .iter()
            .map(|row| {
                row.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::InvalidGraph(format!(
                            "bad adjacency character {other:?}"
                        ))),
                    })
                    .collect()
            })
            .collect()
    }

    /// Rebuilds the graph, re-deriving family metadata and checking it
    /// against the stored rows.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.schema != SCHEMA {
            return Err(Error::InvalidGraph(format!(
                "unsupported schema {:?}",
                self.schema
            )));
        }
        let custom = Graph::from_adjacency(self.rows()?)?;
        let rebuilt = match self.family.as_str() {
            "custom" => custom.clone(),
            "cycle" => build_cycle(self.n)?,
            "complete" => build_complete(self.n)?,
            "path" => build_path(self.n)?,
            "hypercube" => {
                let dim = self.dim.unwrap_or_else(|| self.n.trailing_zeros());
                build_hypercube(dim)?
            }
            "complete_bipartite" => build_complete_bipartite(self.part.unwrap_or(self.n / 2))?,
            "abelian_circulant" => {
                let factors = self.factors.clone().unwrap_or_else(|| vec![self.n]);
                let group = AbelianGroupSpec::new(factors)?;
                let support = match &self.support {
                    Some(s) => s.clone(),
                    None => support_of(custom.row(0)),
                };
                build_abelian_circulant(&Symbol::from_support(group, &support)?)
            }
            "bunkbed" => {
                let base = self
                    .base
                    .as_ref()
                    .ok_or_else(|| Error::InvalidGraph("bunkbed file lacks a base graph".into()))?;
                build_bunkbed(&base.to_graph()?)?
            }
            other => return Err(Error::InvalidGraph(format!("unknown family {other:?}"))),
        };
        if !rebuilt.same_adjacency(&custom) {
            return Err(Error::InvalidGraph(format!(
                "adjacency rows do not match family {:?}",
                self.family
            )));
        }
        match &self.labels {
            Some(labels) => rebuilt.with_labels(labels.clone()),
            None => Ok(rebuilt),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_bits(g: &Graph, i: usize) -> Vec<u8> {
        g.row(i).iter().map(|&a| a as u8).collect()
    }

    #[test]
    fn cycle_rows_and_small_cases() {
        assert_eq!(row_bits(&build_cycle(4).unwrap(), 0), vec![0, 1, 0, 1]);
        assert!(build_cycle(3)
            .unwrap()
            .same_adjacency(&build_complete(3).unwrap()));
        assert!(matches!(
            build_cycle(2),
            Err(Error::InvalidSize {
                family: "cycle",
                ..
            })
        ));
        assert!(build_cycle(2)
            .unwrap_err()
            .to_string()
            .contains("degenerate cycle"));
        assert_eq!(build_cycle(8).unwrap().degrees(), vec![2; 8]);
    }

    #[test]
    fn complete_and_path_shapes() {
        assert_eq!(row_bits(&build_complete(2).unwrap(), 0), vec![0, 1]);
        assert_eq!(build_complete(4).unwrap().regular_degree(), Some(3));
        assert_eq!(build_complete(8).unwrap().regular_degree(), Some(7));
        assert!(build_complete(1).is_err());
        assert!(build_path(2)
            .unwrap()
            .same_adjacency(&build_complete(2).unwrap()));
        assert_eq!(build_path(3).unwrap().degrees(), vec![1, 2, 1]);
        assert_eq!(build_path(5).unwrap().degrees(), vec![1, 2, 2, 2, 1]);
        assert!(build_path(1).is_err());
    }

    #[test]
    fn hypercube_small_cases() {
        assert!(build_hypercube(1)
            .unwrap()
            .same_adjacency(&build_complete(2).unwrap()));
        assert!(build_hypercube(2)
            .unwrap()
            .is_isomorphic_under(&build_cycle(4).unwrap(), &[0, 1, 3, 2]));
        let q3 = build_hypercube(3).unwrap();
        assert_eq!(q3.regular_degree(), Some(3));
        assert!(q3.is_adjacent(0b101, 0b100) && !q3.is_adjacent(0b101, 0b110));
        assert!(build_hypercube(0).is_err());
    }

    #[test]
    fn complete_bipartite_shapes() {
        assert!(build_complete_bipartite(1)
            .unwrap()
            .same_adjacency(&build_complete(2).unwrap()));
        assert_eq!(build_complete_bipartite(2).unwrap().degrees(), vec![2; 4]);
        let k33 = build_complete_bipartite(3).unwrap();
        assert_eq!(k33.regular_degree(), Some(3));
        assert!(!k33.is_adjacent(0, 2) && k33.is_adjacent(0, 3));
    }

    #[test]
    fn circulant_matches_named_families() {
        let c4 = build_abelian_circulant(&Symbol::cyclic(4, &[1, 3]).unwrap());
        assert!(c4.same_adjacency(&build_cycle(4).unwrap()));
        let cube =
            Symbol::from_support(AbelianGroupSpec::boolean_cube(3).unwrap(), &[1, 2, 4]).unwrap();
        assert!(build_abelian_circulant(&cube).same_adjacency(&build_hypercube(3).unwrap()));
        let full = Symbol::cyclic(8, &(1..8).collect::<Vec<_>>()).unwrap();
        assert!(build_abelian_circulant(&full).same_adjacency(&build_complete(8).unwrap()));
        for n in 3..=32 {
            let c = build_abelian_circulant(&Symbol::cyclic(n, &[1, n - 1]).unwrap());
            assert!(c.same_adjacency(&build_cycle(n).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn invalid_symbols_are_rejected() {
        assert!(Symbol::cyclic(5, &[1]).is_err());
        assert!(Symbol::cyclic(5, &[0, 1, 4]).is_err());
        assert!(Symbol::cyclic(6, &[2, 4]).is_err());
        assert!(Symbol::cyclic(4, &[2]).is_err());
        let z2 = AbelianGroupSpec::boolean_cube(2).unwrap();
        assert!(Symbol::from_support(z2.clone(), &[1]).is_err());
        assert!(Symbol::from_support(z2, &[1, 2]).is_ok());
        assert!(AbelianGroupSpec::new(vec![3, 1]).is_err());
    }

    #[test]
    fn mixed_radix_round_trip() {
        let g = AbelianGroupSpec::new(vec![3, 4, 2]).unwrap();
        assert_eq!(g.order(), 24);
        for x in 0..24 {
            assert_eq!(g.encode(&g.decode(x)), x);
            assert_eq!(g.sub(x, x), 0);
            assert_eq!(g.sub(0, g.neg(x)), x);
        }
        assert_eq!(g.decode(1), vec![0, 0, 1]);
        assert_eq!(g.decode(8), vec![1, 0, 0]);
    }

    fn tensor_bunkbed(base: &Graph) -> Vec<bool> {
        // I2 (x) A + X2 (x) I
        let n = base.n();
        let m = 2 * n;
        let mut out = vec![false; m * m];
        for (r, row) in out.chunks_mut(m).enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let (b1, l1, b2, l2) = (r / n, r % n, c / n, c % n);
                let identity_part = b1 == b2 && base.is_adjacent(l1, l2);
                let swap_part = b1 != b2 && l1 == l2;
                *cell = identity_part || swap_part;
            }
        }
        out
    }

    #[test]
    fn bunkbed_equals_tensor_assembly() {
        let mut bases = vec![];
        for n in 2..=8 {
            bases.push(build_complete(n).unwrap());
            bases.push(build_path(n).unwrap());
        }
        for n in 3..=8 {
            bases.push(build_cycle(n).unwrap());
        }
        for d in 1..=3 {
            bases.push(build_hypercube(d).unwrap());
        }
        for p in 1..=4 {
            bases.push(build_complete_bipartite(p).unwrap());
        }
        for base in &bases {
            let bb = build_bunkbed(base).unwrap();
            assert!(bb.validate().is_ok());
            assert_eq!(bb.adjacency, tensor_bunkbed(base), "base {base}");
        }
    }

    #[test]
    fn bunkbed_small_cases() {
        let k2 = build_complete(2).unwrap();
        assert!(build_bunkbed(&k2)
            .unwrap()
            .is_isomorphic_under(&build_cycle(4).unwrap(), &[0, 1, 3, 2]));
        let prism = build_bunkbed(&build_cycle(5).unwrap()).unwrap();
        assert_eq!(prism.regular_degree(), Some(3));
        assert!(prism.is_adjacent(2, 7) && prism.is_adjacent(5, 6) && !prism.is_adjacent(0, 6));
    }

    #[test]
    fn hypercube_bunkbed_is_next_hypercube() {
        for d in 1..=5u32 {
            let bb = build_bunkbed(&build_hypercube(d).unwrap()).unwrap();
            let next = build_hypercube(d + 1).unwrap();
            // layer bit becomes the new most significant bit
            let perm: Vec<usize> = (0..bb.n()).collect();
            assert!(bb.is_isomorphic_under(&next, &perm), "d = {d}");
            // and the relabeling that puts it in the least significant position
            let n = 1usize << d;
            let low: Vec<usize> = (0..bb.n()).map(|i| ((i % n) << 1) | (i / n)).collect();
            assert!(bb.is_isomorphic_under(&next, &low), "d = {d}");
        }
    }

    #[test]
    fn custom_adjacency_validation() {
        let ok = Graph::from_adjacency(vec![vec![false, true], vec![true, false]]).unwrap();
        assert_eq!(ok.family(), &Family::Custom);
        let asym = vec![vec![false, true], vec![false, false]];
        assert!(Graph::from_adjacency(asym).is_err());
        let looped = vec![vec![true, true], vec![true, false]];
        assert!(Graph::from_adjacency(looped).is_err());
        let split = vec![vec![false; 2], vec![false; 2]];
        assert!(Graph::from_adjacency(split).is_err());
    }

    #[test]
    fn graph_file_round_trip() {
        let base = build_cycle(5).unwrap();
        let graphs = vec![
            build_hypercube(3).unwrap(),
            build_complete_bipartite(3).unwrap(),
            build_abelian_circulant(&Symbol::cyclic(7, &[2, 5]).unwrap()),
            build_bunkbed(&base).unwrap(),
        ];
        for g in graphs {
            let text = serde_json::to_string(&GraphFile::from(&g)).unwrap();
            let back: GraphFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_graph().unwrap(), g);
        }
        let mut file = GraphFile::from(&build_cycle(5).unwrap());
        file.family = "path".into();
        assert!(file.to_graph().is_err());
        file.family = "moebius".into();
        assert!(file.to_graph().is_err());
    }
}
