//! Splitting off the unit part of a matrix over the jet ring `R/m^D`.

use num_traits::One;

use super::{PolyMatrix, Structure};
use crate::error::{Error, Result};
use crate::localalg::{Monomial, Poly, Scalar};

/// `U A V ≡ 1_r ⊕ Ã (mod m^D)` with `Ã` in the maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSplit {
    pub rank: usize,
    pub atilde: PolyMatrix,
    pub u: PolyMatrix,
    pub v: PolyMatrix,
    pub truncation: u32,
}

/// `U A U^T ≡ C ⊕ Ã (mod m^D)`: `C` is diagonal with constant entries
/// (symmetric case) or a sum of blocks `[[0, 1], [-1, 0]]` (skew case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSplit {
    pub rank: usize,
    pub regular: PolyMatrix,
    pub atilde: PolyMatrix,
    pub u: PolyMatrix,
    pub truncation: u32,
}

fn unit_inverse(p: &Poly, truncation: u32) -> Poly {
    p.inverse_truncated(truncation).expect("pivot is a unit")
}

/// `(1 + z)^{-1/2}` for `z` in the maximal ideal, truncated.
pub(crate) fn inverse_sqrt_one_plus(z: &Poly, truncation: u32) -> Poly {
    let nvars = z.nvars();
    let mut acc = Poly::one(nvars);
    let mut power = Poly::one(nvars);
    let mut coeff = Scalar::one();
    for k in 1..truncation {
        power = power.mul_truncated(z, truncation);
        if power.is_zero() {
            break;
        }
        // binom(-1/2, k) = binom(-1/2, k-1) * (-1/2 - (k-1)) / k
        coeff = coeff * (Scalar::new((-1 - 2 * (k as i64 - 1)).into(), 2.into())) / Scalar::from_integer((k as i64).into());
        acc = &acc + &power.scale(&coeff);
    }
    acc
}

/// Gaussian elimination on unit pivots.
pub fn split_unit_part(a: &PolyMatrix, truncation: u32) -> Result<UnitSplit> {
    if truncation == 0 {
        return Err(Error::Input("truncation must be at least 1".into()));
    }
    let nvars = a.nvars();
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.truncate(truncation);
    w.set_structure_unchecked(Structure::General);
    let mut u = PolyMatrix::identity(nvars, m);
    let mut v = PolyMatrix::identity(nvars, n);
    let mut k = 0;
    while k < m.min(n) {
        let Some((pi, pj)) = (k..m).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| w.get(i, j).is_unit())
        else {
            break;
        };
        w.swap_rows(k, pi);
        u.swap_rows(k, pi);
        w.swap_cols(k, pj);
        v.swap_cols(k, pj);
        let inv = unit_inverse(w.get(k, k), truncation);
        w.scale_row(k, &inv, truncation);
        u.scale_row(k, &inv, truncation);
        for i in 0..m {
            if i != k && !w.get(i, k).is_zero() {
                let c = -w.get(i, k).clone();
                w.add_row_multiple(i, k, &c, truncation);
                u.add_row_multiple(i, k, &c, truncation);
            }
        }
        for j in 0..n {
            if j != k && !w.get(k, j).is_zero() {
                let c = -w.get(k, j).clone();
                w.add_col_multiple(j, k, &c, truncation);
                v.add_col_multiple(j, k, &c, truncation);
            }
        }
        k += 1;
    }
    let rows: Vec<usize> = (k..m).collect();
    let cols: Vec<usize> = (k..n).collect();
    Ok(UnitSplit { rank: k, atilde: w.submatrix(&rows, &cols), u, v, truncation })
}

/// Congruence `A ↦ E A E^T` applied to the working matrix and recorded in `U`.
struct Congruence {
    w: PolyMatrix,
    u: PolyMatrix,
    d: u32,
}

impl Congruence {
    fn swap(&mut self, a: usize, b: usize) {
        self.w.swap_rows(a, b);
        self.w.swap_cols(a, b);
        self.u.swap_rows(a, b);
    }

    /// `index_target += c * index_source` on rows and columns.
    fn add(&mut self, target: usize, source: usize, c: &Poly) {
        self.w.add_row_multiple(target, source, c, self.d);
        self.w.add_col_multiple(target, source, c, self.d);
        self.u.add_row_multiple(target, source, c, self.d);
    }

    fn scale(&mut self, i: usize, c: &Poly) {
        self.w.scale_row(i, c, self.d);
        self.w.scale_col(i, c, self.d);
        self.u.scale_row(i, c, self.d);
    }
}

pub fn congruent_split_unit(a: &PolyMatrix, truncation: u32) -> Result<CongruenceSplit> {
    if truncation == 0 {
        return Err(Error::Input("truncation must be at least 1".into()));
    }
    let skew = match a.check_skew() {
        Ok(()) => true,
        Err(_) if a.is_symmetric() => false,
        Err(e) => return Err(e),
    };
    let nvars = a.nvars();
    let m = a.rows();
    let mut w = a.truncate(truncation);
    w.set_structure_unchecked(Structure::General);
    let mut c = Congruence { w, u: PolyMatrix::identity(nvars, m), d: truncation };
    let mut k = 0;
    if skew {
        while k + 1 < m {
            let Some((pi, pj)) = (k..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).find(|&(i, j)| c.w.get(i, j).is_unit())
            else {
                break;
            };
            c.swap(k, pi);
            let pj = if pj == k { pi } else { pj };
            c.swap(k + 1, pj);
            let inv = unit_inverse(c.w.get(k, k + 1), truncation);
            for l in k + 2..m {
                let beta = c.w.get(l, k).mul_truncated(&inv, truncation);
                let alpha = -c.w.get(l, k + 1).mul_truncated(&inv, truncation);
                c.add(l, k, &alpha);
                c.add(l, k + 1, &beta);
            }
            c.w.scale_row(k, &inv, truncation);
            c.w.scale_col(k, &inv, truncation);
            c.u.scale_row(k, &inv, truncation);
            k += 2;
        }
    } else {
        while k < m {
            let pivot = match (k..m).find(|&i| c.w.get(i, i).is_unit()) {
                Some(i) => i,
                None => {
                    let Some((i, j)) = (k..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).find(|&(i, j)| c.w.get(i, j).is_unit())
                    else {
                        break;
                    };
                    // the new diagonal entry a_ii + 2 a_ij + a_jj is a unit in characteristic zero
                    c.add(i, j, &Poly::one(nvars));
                    i
                }
            };
            c.swap(k, pivot);
            let lambda = c.w.get(k, k).clone();
            let inv = unit_inverse(&lambda, truncation);
            for l in k + 1..m {
                if !c.w.get(l, k).is_zero() {
                    let coeff = -c.w.get(l, k).mul_truncated(&inv, truncation);
                    c.add(l, k, &coeff);
                }
            }
            // λ = c0 (1 + z) is congruent to its constant term c0
            let c0 = lambda.constant_term();
            let mut z = lambda.scale(&c0.recip());
            z.add_term(Monomial::one(nvars), -Scalar::one());
            let s = inverse_sqrt_one_plus(&z, truncation);
            c.scale(k, &s);
            k += 1;
        }
    }
    let Congruence { w, u, .. } = c;
    let head: Vec<usize> = (0..k).collect();
    let tail: Vec<usize> = (k..m).collect();
    let mut regular = w.submatrix(&head, &head);
    let mut atilde = w.submatrix(&tail, &tail);
    let structure = if skew { Structure::SkewSymmetric } else { Structure::Symmetric };
    regular.set_structure_unchecked(structure.clone());
    atilde.set_structure_unchecked(structure);
    Ok(CongruenceSplit { rank: k, regular, atilde, u, truncation })
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

    fn check_unit_split(a: &PolyMatrix, d: u32) -> UnitSplit {
        let s = split_unit_part(a, d).unwrap();
        let lhs = s.u.mul_truncated(a, d).unwrap().mul_truncated(&s.v, d).unwrap();
        let rhs = PolyMatrix::identity(2, s.rank).direct_sum(&s.atilde);
        assert!(lhs.congruent_mod(&rhs, d));
        assert!(s.atilde.in_maximal_ideal());
        s
    }

    #[test]
    fn unit_split() {
        let s = check_unit_split(&mat(&[&["1 + x", "y"], &["0", "x"]]), 4);
        assert_eq!(s.rank, 1);
        assert_eq!(s.atilde.get(0, 0).order(), Some(1));
        let zero_mod_m = mat(&[&["x", "y^2"], &["x*y", "0"]]);
        let s = check_unit_split(&zero_mod_m, 4);
        assert_eq!((s.rank, &s.atilde), (0, &zero_mod_m));
        let s = check_unit_split(&PolyMatrix::identity(2, 2), 3);
        assert_eq!((s.rank, s.atilde.rows()), (2, 0));
        check_unit_split(&mat(&[&["x", "1 + y", "x"], &["2 + x^2", "y", "x*y"]]), 5);
    }

    fn check_congruence(a: &PolyMatrix, d: u32) -> CongruenceSplit {
        let s = congruent_split_unit(a, d).unwrap();
        let lhs = s.u.mul_truncated(a, d).unwrap().mul_truncated(&s.u.transpose(), d).unwrap();
        assert!(lhs.congruent_mod(&s.regular.direct_sum(&s.atilde), d));
        assert!(s.atilde.in_maximal_ideal());
        assert!(s.regular.entries().iter().all(|p| p.degree().unwrap_or(0) == 0));
        s
    }

    #[test]
    fn symmetric_split() {
        let s = check_congruence(&mat(&[&["1", "x"], &["x", "x^2 + y"]]), 5);
        assert_eq!(s.rank, 1);
        assert_eq!(s.atilde.get(0, 0).truncate(2), poly_parse("y", &["x".into(), "y".into()]).unwrap());
        // hyperbolic plane
        let s = check_congruence(&mat(&[&["x", "1"], &["1", "y"]]), 4);
        assert_eq!(s.rank, 2);
        let s = check_congruence(&mat(&[&["x", "y"], &["y", "0"]]), 4);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn skew_split() {
        let s = check_congruence(&mat(&[&["0", "1 + x"], &["-1 - x", "0"]]), 4);
        assert_eq!((s.rank, s.atilde.rows()), (2, 0));
        assert_eq!(s.regular.get(0, 1), &Poly::one(2));
        let s = check_congruence(&mat(&[&["0", "1", "x"], &["-1", "0", "y"], &["-x", "-y", "0"]]), 4);
        assert_eq!((s.rank, s.atilde.rows()), (2, 1));
        assert!(s.atilde.is_zero());
    }
}
