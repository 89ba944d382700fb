use std::collections::HashMap;

use super::PolyMatrix;
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::localalg::Poly;

/// Memoized cofactor expansion keyed by (row subset, column subset) bitmasks.
pub struct MinorCache<'a> {
    matrix: &'a PolyMatrix,
    memo: HashMap<(u64, u64), Poly>,
}

impl<'a> MinorCache<'a> {
    pub fn new(matrix: &'a PolyMatrix) -> Self {
        assert!(matrix.rows() <= 64 && matrix.cols() <= 64, "minor masks hold at most 64 indices");
        MinorCache { matrix, memo: HashMap::new() }
    }

    /// Determinant of the submatrix on the given (sorted) rows and columns.
    pub fn minor(&mut self, rows: &[usize], cols: &[usize]) -> Poly {
        assert_eq!(rows.len(), cols.len(), "minors are square");
        let rmask = rows.iter().fold(0u64, |m, &r| m | 1 << r);
        let cmask = cols.iter().fold(0u64, |m, &c| m | 1 << c);
        self.minor_mask(rmask, cmask)
    }

    fn minor_mask(&mut self, rmask: u64, cmask: u64) -> Poly {
        let nvars = self.matrix.nvars();
        if rmask == 0 {
            return Poly::one(nvars);
        }
        if let Some(p) = self.memo.get(&(rmask, cmask)) {
            return p.clone();
        }
        // expand along the first remaining row
        let r = rmask.trailing_zeros() as usize;
        let rest = rmask & !(1 << r);
        let mut acc = Poly::zero(nvars);
        let mut sign_positive = true;
        let mut cm = cmask;
        while cm != 0 {
            let c = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let a = self.matrix.get(r, c);
            if !a.is_zero() {
                let sub = self.minor_mask(rest, cmask & !(1 << c));
                if !sub.is_zero() {
                    let term = a * &sub;
                    acc = if sign_positive { &acc + &term } else { &acc - &term };
                }
            }
            sign_positive = !sign_positive;
        }
        self.memo.insert((rmask, cmask), acc.clone());
        acc
    }
}

pub fn minor(a: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Poly {
    MinorCache::new(a).minor(rows, cols)
}

pub fn determinant(a: &PolyMatrix) -> Result<Poly> {
    if a.rows() != a.cols() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", a.rows(), a.cols())));
    }
    let idx: Vec<usize> = (0..a.rows()).collect();
    Ok(minor(a, &idx, &idx))
}

/// All `k`-element subsets of `0..n`, lexicographic.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `I_j(A)`: the ideal of all `j x j` minors; `(1)` for `j <= 0`, `(0)` past the size.
pub fn determinantal_ideal(a: &PolyMatrix, j: i64) -> Ideal {
    let nvars = a.nvars();
    if j <= 0 {
        return Ideal::unit(nvars);
    }
    let j = j as usize;
    if j > a.rows().min(a.cols()) {
        return Ideal::zero(nvars);
    }
    let mut cache = MinorCache::new(a);
    let mut gens = Vec::new();
    for rows in subsets(a.rows(), j) {
        for cols in subsets(a.cols(), j) {
            gens.push(cache.minor(&rows, &cols));
        }
    }
    Ideal::new(nvars, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly_parse;

    fn mat(rows: &[&[&str]]) -> PolyMatrix {
        let names = vec!["x".to_string(), "y".to_string()];
        PolyMatrix::general(2, rows.iter().map(|r| r.iter().map(|s| poly_parse(s, &names).unwrap()).collect()).collect())
            .unwrap()
    }

    fn ideal(gens: &[&str]) -> Ideal {
        let names = vec!["x".to_string(), "y".to_string()];
        Ideal::new(2, gens.iter().map(|g| poly_parse(g, &names).unwrap()))
    }

    #[test]
    fn worked_matrix_ideals() {
        let a = mat(&[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
        assert_eq!(determinantal_ideal(&a, 1), ideal(&["x^3", "y^3"]));
        assert_eq!(determinantal_ideal(&a, 2), ideal(&["y^7", "x^5*y^4", "x^8"]));
        assert!(determinantal_ideal(&a, 0).is_unit());
        assert!(determinantal_ideal(&a, 3).is_zero());
    }

    #[test]
    fn determinants() {
        assert!(determinantal_ideal(&PolyMatrix::identity(2, 2), 2).is_unit());
        let a = mat(&[&["x", "y", "1"], &["1", "x", "y"], &["y", "1", "x"]]);
        // x^3 + y^3 + 1 - 3xy
        assert_eq!(determinant(&a).unwrap(), poly_parse("1 - 3*x*y + x^3 + y^3", &["x".into(), "y".into()]).unwrap());
        assert!(determinant(&mat(&[&["x", "y"]])).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
