use std::collections::HashMap;

use super::{PolyMatrix, Structure};
use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::localalg::Poly;

struct PfaffianCache<'a> {
    matrix: &'a PolyMatrix,
    memo: HashMap<u64, Poly>,
}

impl PfaffianCache<'_> {
    /// Pfaffian of the principal block on the index set `mask`, expanded
    /// along its first index.
    fn pf(&mut self, mask: u64) -> Poly {
        let nvars = self.matrix.nvars();
        if mask == 0 {
            return Poly::one(nvars);
        }
        if mask.count_ones() % 2 == 1 {
            return Poly::zero(nvars);
        }
        if let Some(p) = self.memo.get(&mask) {
            return p.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = Poly::zero(nvars);
        let mut rm = rest;
        let mut plus = true;
        while rm != 0 {
            let j = rm.trailing_zeros() as usize;
            rm &= rm - 1;
            let a = self.matrix.get(i, j);
            if !a.is_zero() {
                let sub = self.pf(rest & !(1 << j));
                if !sub.is_zero() {
                    let term = a * &sub;
                    acc = if plus { &acc + &term } else { &acc - &term };
                }
            }
            plus = !plus;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn require_even_skew(a: &PolyMatrix) -> Result<()> {
    a.check_skew()?;
    if a.rows() % 2 == 1 {
        return Err(Error::Shape(format!("Pfaffian of odd size {}", a.rows())));
    }
    Ok(())
}

/// `Pf(A)` by expansion along the first row; `Pf` of the empty matrix is 1.
pub fn pfaffian(a: &PolyMatrix) -> Result<Poly> {
    require_even_skew(a)?;
    Ok(PfaffianCache { matrix: a, memo: HashMap::new() }.pf(full_mask(a.rows())))
}

/// `Pf_{m-1}(A)`: the ideal of Pfaffians of the blocks with row and column `i` erased.
pub fn pfaffian_sub_ideal(a: &PolyMatrix) -> Result<Ideal> {
    a.check_skew()?;
    let m = a.rows();
    if m % 2 == 0 || m < 3 {
        return Err(Error::Shape(format!("sub-Pfaffian ideal needs odd size > 1, got {m}")));
    }
    let mut cache = PfaffianCache { matrix: a, memo: HashMap::new() };
    let full = full_mask(m);
    let gens: Vec<Poly> = (0..m).map(|i| cache.pf(full & !(1 << i))).collect();
    Ok(Ideal::new(a.nvars(), gens))
}

/// Skew-symmetric `B` with `A B = B A = Pf(A) 1`, built from signed
/// sub-Pfaffians and checked against the defining identity.
pub fn pfaffian_adjugate(a: &PolyMatrix) -> Result<PolyMatrix> {
    require_even_skew(a)?;
    let m = a.rows();
    let nvars = a.nvars();
    let mut cache = PfaffianCache { matrix: a, memo: HashMap::new() };
    let full = full_mask(m);
    let pf = cache.pf(full);
    // Pf(A) = Σ_j (-1)^{i+j+1+[i>j]} a_ij Pf(A without i, j) for every row i
    let mut b = PolyMatrix::zeros(nvars, m, m);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let sub = cache.pf(full & !(1 << i) & !(1 << j));
            let odd = (i + j + 1 + usize::from(i > j)) % 2 == 1;
            b.set(j, i, if odd { -sub } else { sub });
        }
    }
    let target = PolyMatrix::identity(nvars, m).scale(&pf);
    let check = |b: &PolyMatrix| a.checked_mul(b).map(|ab| ab == target).unwrap_or(false);
    if !check(&b) {
        b = b.map(|p| -p);
        if !check(&b) {
            return Err(Error::Internal("Pfaffian adjugate fails A B = Pf(A) 1".into()));
        }
    }
    if b.checked_mul(a)? != target {
        return Err(Error::Internal("Pfaffian adjugate fails B A = Pf(A) 1".into()));
    }
    b.set_structure_unchecked(Structure::SkewSymmetric);
    Ok(b)
}
