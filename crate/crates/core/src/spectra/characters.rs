use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Character table of a finite group. Column 0 must be the identity class.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    class_sizes: Vec<usize>,
    dims: Vec<usize>,
    chars: Vec<Vec<Complex64>>,
}

/// JSON form: `chars` rows hold `[re, im]` pairs, one per class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTableFile {
    pub class_sizes: Vec<usize>,
    pub dims: Vec<usize>,
    pub chars: Vec<Vec<[f64; 2]>>,
}

impl CharacterTable {
    pub fn new(
        class_sizes: Vec<usize>,
        dims: Vec<usize>,
        chars: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCharacterTable(msg));
        let k = class_sizes.len();
        if k == 0 {
            return bad("no conjugacy classes".into());
        }
        if dims.len() != k || chars.len() != k {
            return bad(format!(
                "{k} classes but {} dimensions and {} character rows",
                dims.len(),
                chars.len()
            ));
        }
        if let Some(row) = chars.iter().position(|r| r.len() != k) {
            return bad(format!("character row {row} does not have {k} entries"));
        }
        if class_sizes[0] != 1 {
            return bad("first class must be the identity (size 1)".into());
        }
        let order: usize = class_sizes.iter().sum();
        let dim_squares: usize = dims.iter().map(|d| d * d).sum();
        if dim_squares != order {
            return bad(format!(
                "sum of squared dimensions {dim_squares} != group order {order}"
            ));
        }
        for (j, (row, &d)) in chars.iter().zip(&dims).enumerate() {
            if (row[0] - Complex64::new(d as f64, 0.0)).norm() > 1e-9 {
                return bad(format!(
                    "chi_{j}(identity) = {} differs from dimension {d}",
                    row[0]
                ));
            }
        }
        for j in 0..k {
            for l in j..k {
                let inner: Complex64 = (0..k)
                    .map(|c| chars[j][c] * chars[l][c].conj() * class_sizes[c] as f64)
                    .sum();
                let target = if j == l { order as f64 } else { 0.0 };
                if (inner - target).norm() > 1e-9 {
                    return bad(format!(
                        "rows {j} and {l} violate orthogonality (inner product {inner})"
                    ));
                }
            }
        }
        Ok(Self {
            class_sizes,
            dims,
            chars,
        })
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn chars(&self) -> &[Vec<Complex64>] {
        &self.chars
    }

    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CharacterTableFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

impl TryFrom<CharacterTableFile> for CharacterTable {
    type Error = Error;

    fn try_from(file: CharacterTableFile) -> Result<Self> {
        let chars = file
            .chars
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        CharacterTable::new(file.class_sizes, file.dims, chars)
    }
}

/// Eigenvalues `(1/d_j) sum_x f(x) conj(chi_j(x))` of a class-function
/// Cayley graph, each with multiplicity `d_j^2`, in irreducible order.
pub fn class_circulant_eigenvalues(
    table: &CharacterTable,
    f_by_class: &[bool],
) -> Result<Vec<(f64, usize)>> {
    let k = table.class_sizes.len();
    if f_by_class.len() != k {
        return Err(Error::InvalidSymbol(format!(
            "class symbol has {} entries for {k} classes",
            f_by_class.len()
        )));
    }
    if f_by_class[0] {
        return Err(Error::InvalidSymbol(
            "f(identity) = 1 would add self-loops".into(),
        ));
    }
    if !f_by_class.iter().any(|&v| v) {
        return Err(Error::InvalidSymbol(
            "empty symbol gives a disconnected graph".into(),
        ));
    }
    let mut out = Vec::with_capacity(k);
    for (row, &d) in table.chars.iter().zip(&table.dims) {
        let sum: Complex64 = (0..k)
            .filter(|&c| f_by_class[c])
            .map(|c| row[c].conj() * table.class_sizes[c] as f64)
            .sum();
        let lambda = sum / d as f64;
        if lambda.im.abs() > 1e-9 {
            return Err(Error::InvalidSymbol(format!(
                "eigenvalue {lambda} is not real; the class symbol is not inverse-closed"
            )));
        }
        out.push((lambda.re, d * d));
    }
    // the degree is the trivial eigenvalue; any other copy means more than one component
    let degree: usize = (0..k)
        .filter(|&c| f_by_class[c])
        .map(|c| table.class_sizes[c])
        .sum();
    let copies = out
        .iter()
        .filter(|(lambda, _)| (lambda - degree as f64).abs() <= 1e-9)
        .map(|(_, m)| m)
        .sum::<usize>();
    if copies != 1 {
        return Err(Error::InvalidSymbol(
            "class symbol does not generate the group (disconnected)".into(),
        ));
    }
    Ok(out)
}
