//! Matrices over the local ring: structure tags, minors and determinantal
//! ideals, Pfaffians, and splitting off unit blocks.

mod minors;
mod pfaffian;
mod split;

use std::fmt;

use crate::error::{Error, Result};
use crate::localalg::Poly;

pub use minors::{determinant, determinantal_ideal, minor, MinorCache};
pub use pfaffian::{pfaffian, pfaffian_adjugate, pfaffian_sub_ideal};
pub use split::{congruent_split_unit, split_unit_part, CongruenceSplit, UnitSplit};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    General,
    Symmetric,
    SkewSymmetric,
    UpperBlockTriangular { row_blocks: Vec<usize>, col_blocks: Vec<usize> },
}

impl Structure {
    pub fn name(&self) -> &'static str {
        match self {
            Structure::General => "general",
            Structure::Symmetric => "sym",
            Structure::SkewSymmetric => "skew",
            Structure::UpperBlockTriangular { .. } => "upper",
        }
    }
}

/// Block index of every row (or column) for the given block sizes.
pub fn block_index(blocks: &[usize]) -> Vec<usize> {
    blocks.iter().enumerate().flat_map(|(b, &size)| std::iter::repeat_n(b, size)).collect()
}

/// An `m x n` matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    structure: Structure,
}

impl PolyMatrix {
    /// Validates shape, variable counts and the structure tag.
    pub fn new(nvars: usize, rows: Vec<Vec<Poly>>, structure: Structure) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Shape(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        if let Some(p) = rows.iter().flatten().find(|p| p.nvars() != nvars) {
            return Err(Error::VariableCountMismatch { left: p.nvars(), right: nvars });
        }
        let a = PolyMatrix { nvars, rows: m, cols: n, entries: rows.into_iter().flatten().collect(), structure };
        a.validate()?;
        Ok(a)
    }

    pub fn general(nvars: usize, rows: Vec<Vec<Poly>>) -> Result<Self> {
        Self::new(nvars, rows, Structure::General)
    }

    pub fn from_fn(nvars: usize, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Poly) -> Self {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        PolyMatrix { nvars, rows, cols, entries, structure: Structure::General }
    }

    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(nvars, rows, cols, |_, _| Poly::zero(nvars))
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        Self::from_fn(nvars, n, n, |i, j| if i == j { Poly::one(nvars) } else { Poly::zero(nvars) })
    }

    /// `E_ij`: one at `(i, j)`, zero elsewhere.
    pub fn elementary(nvars: usize, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        Self::from_fn(nvars, rows, cols, |a, b| if (a, b) == (i, j) { Poly::one(nvars) } else { Poly::zero(nvars) })
    }

    fn validate(&self) -> Result<()> {
        match &self.structure {
            Structure::General => Ok(()),
            Structure::Symmetric => {
                self.require_square()?;
                for i in 0..self.rows {
                    for j in i + 1..self.cols {
                        if self.get(i, j) != self.get(j, i) {
                            return Err(Error::Structure { row: i, col: j, message: "entry differs from its transpose".into() });
                        }
                    }
                }
                Ok(())
            }
            Structure::SkewSymmetric => self.check_skew(),
            Structure::UpperBlockTriangular { row_blocks, col_blocks } => {
                if row_blocks.iter().sum::<usize>() != self.rows || col_blocks.iter().sum::<usize>() != self.cols {
                    return Err(Error::Shape(format!(
                        "block sizes {row_blocks:?} x {col_blocks:?} do not cover a {}x{} matrix",
                        self.rows, self.cols
                    )));
                }
                let (rb, cb) = (block_index(row_blocks), block_index(col_blocks));
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        if rb[i] > cb[j] && !self.get(i, j).is_zero() {
                            return Err(Error::Structure { row: i, col: j, message: "nonzero entry below the block diagonal".into() });
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("expected a square matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(())
    }

    /// Checks `A = -A^T` with zero diagonal, by content.
    pub fn check_skew(&self) -> Result<()> {
        self.require_square()?;
        for i in 0..self.rows {
            if !self.get(i, i).is_zero() {
                return Err(Error::Structure { row: i, col: i, message: "nonzero diagonal entry".into() });
            }
            for j in i + 1..self.cols {
                if *self.get(i, j) != -self.get(j, i) {
                    return Err(Error::Structure { row: i, col: j, message: "entry is not minus its transpose".into() });
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn with_structure(mut self, structure: Structure) -> Result<Self> {
        self.structure = structure;
        self.validate()?;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn row_vec(&self, i: usize) -> Vec<Poly> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Every entry lies in the maximal ideal.
    pub fn in_maximal_ideal(&self) -> bool {
        self.entries.iter().all(|p| !p.is_unit())
    }

    /// Largest total degree of an entry (0 for the zero matrix).
    pub fn max_degree(&self) -> u32 {
        self.entries.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Rank over k of the constant part `A|_0`.
    pub fn constant_rank(&self) -> usize {
        let mut e = crate::localalg::EchelonBuilder::new();
        for i in 0..self.rows {
            let v = crate::localalg::SparseVec::from_entries((0..self.cols).map(|j| (j, self.get(i, j).constant_term())));
            e.insert(&v);
        }
        e.rank()
    }

    /// Entry-wise polynomial map; the structure tag is dropped.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
            structure: Structure::General,
        }
    }

    pub fn truncate(&self, truncation: u32) -> PolyMatrix {
        let mut out = self.map(|p| p.truncate(truncation));
        out.structure = self.structure.clone();
        out
    }

    pub fn scale(&self, c: &Poly) -> PolyMatrix {
        self.map(|p| p * c)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let structure = match &self.structure {
            Structure::UpperBlockTriangular { .. } => Structure::General,
            s => s.clone(),
        };
        PolyMatrix {
            nvars: self.nvars,
            rows: self.cols,
            cols: self.rows,
            entries: (0..self.cols).flat_map(|j| (0..self.rows).map(move |i| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect(),
            structure,
        }
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.mul_impl(other, None)
    }

    /// Product with every entry truncated below degree `truncation`.
    pub fn mul_truncated(&self, other: &PolyMatrix, truncation: u32) -> Result<PolyMatrix> {
        self.mul_impl(other, Some(truncation))
    }

    fn mul_impl(&self, other: &PolyMatrix, truncation: Option<u32>) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(PolyMatrix::from_fn(self.nvars, self.rows, other.cols, |i, j| {
            let mut acc = Poly::zero(self.nvars);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let prod = match truncation {
                    Some(d) => a.mul_truncated(b, d),
                    None => a * b,
                };
                acc = &acc + &prod;
            }
            acc
        }))
    }

    pub fn checked_add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "shape {}x{} differs from {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(PolyMatrix::from_fn(self.nvars, self.rows, self.cols, |i, j| f(self.get(i, j), other.get(i, j))))
    }

    /// Rows and columns kept in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(self.nvars, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Removes the listed rows and columns (for Pfaffian sub-blocks).
    pub fn without(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let r: Vec<usize> = (0..self.rows).filter(|i| !rows.contains(i)).collect();
        let c: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        self.submatrix(&r, &c)
    }

    /// Row-major entries as a module element of rank `m * n`.
    pub fn vectorize(&self) -> Vec<Poly> {
        self.entries.clone()
    }

    /// `A ≡ B (mod m^D)` entry-wise.
    pub fn congruent_mod(&self, other: &PolyMatrix, truncation: u32) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.entries.iter().zip(&other.entries).all(|(a, b)| (a - b).truncate(truncation).is_zero())
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> MatrixDisplay<'a> {
        MatrixDisplay { matrix: self, names }
    }

    /// Entries rendered in the polynomial grammar, row by row.
    pub fn to_strings(&self, names: &[String]) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).display(names).to_string()).collect())
            .collect()
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let (m, n) = (self.rows + other.rows, self.cols + other.cols);
        PolyMatrix::from_fn(self.nvars, m, n, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                Poly::zero(self.nvars)
            }
        })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_target += c * row_source`, truncated.
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: &Poly, truncation: u32) {
        for j in 0..self.cols {
            let add = self.get(source, j).mul_truncated(c, truncation);
            if !add.is_zero() {
                let v = self.get(target, j) + &add;
                self.set(target, j, v);
            }
        }
    }

    /// `col_target += c * col_source`, truncated.
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: &Poly, truncation: u32) {
        for i in 0..self.rows {
            let add = self.get(i, source).mul_truncated(c, truncation);
            if !add.is_zero() {
                let v = self.get(i, target) + &add;
                self.set(i, target, v);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Poly, truncation: u32) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul_truncated(c, truncation);
            self.set(i, j, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &Poly, truncation: u32) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul_truncated(c, truncation);
            self.set(i, j, v);
        }
    }

    pub(crate) fn set_structure_unchecked(&mut self, structure: Structure) {
        self.structure = structure;
    }
}

pub struct MatrixDisplay<'a> {
    matrix: &'a PolyMatrix,
    names: &'a [String],
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.matrix.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.matrix.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.matrix.get(i, j).display(self.names))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly_parse;

    fn m(rows: &[&[&str]]) -> Vec<Vec<Poly>> {
        let names = vec!["x".to_string(), "y".to_string()];
        rows.iter().map(|r| r.iter().map(|s| poly_parse(s, &names).unwrap()).collect()).collect()
    }

    #[test]
    fn structure_violations_name_the_entry() {
        let err = PolyMatrix::new(2, m(&[&["0", "x"], &["x", "0"]]), Structure::SkewSymmetric).unwrap_err();
        assert_eq!(err, Error::Structure { row: 0, col: 1, message: "entry is not minus its transpose".into() });
        let err = PolyMatrix::new(2, m(&[&["x", "y"], &["x", "0"]]), Structure::Symmetric).unwrap_err();
        assert!(matches!(err, Error::Structure { row: 0, col: 1, .. }));
        let upper = Structure::UpperBlockTriangular { row_blocks: vec![1, 1], col_blocks: vec![1, 1] };
        let err = PolyMatrix::new(2, m(&[&["x", "y"], &["x", "y"]]), upper.clone()).unwrap_err();
        assert!(matches!(err, Error::Structure { row: 1, col: 0, .. }));
        assert!(PolyMatrix::new(2, m(&[&["x", "y"], &["0", "y"]]), upper).is_ok());
        assert!(PolyMatrix::general(2, m(&[&["x", "y"], &["x"]])).is_err());
    }

    #[test]
    fn products_and_transpose() {
        let a = PolyMatrix::general(2, m(&[&["x", "y"], &["0", "1"]])).unwrap();
        let id = PolyMatrix::identity(2, 2);
        assert_eq!(a.checked_mul(&id).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        let sq = a.checked_mul(&a).unwrap();
        assert_eq!(sq.to_rows(), m(&[&["x^2", "x*y + y"], &["0", "1"]]));
        assert_eq!(a.constant_rank(), 1);
        assert!(a.checked_mul(&PolyMatrix::zeros(2, 3, 1)).is_err());
    }
}
