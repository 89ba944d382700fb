//! Canonical forms over the discrete valuation ring `k[[t]]`, computed
//! modulo `t^D`. Matrices are [`PolyMatrix`] values in one variable.

use crate::error::{Error, Result};
use crate::localalg::{Monomial, Poly};
use crate::matrixops::{congruent_split_unit, determinantal_ideal, PolyMatrix, Structure};

/// `U A V ≡ diag(t^{v_1}, t^{v_2}, ...) (mod t^D)` with `v_1 <= v_2 <= ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: PolyMatrix,
    pub diag: PolyMatrix,
    pub v: PolyMatrix,
    pub valuations: Vec<u32>,
    pub truncation: u32,
}

/// `U A U^T ≡ form (mod t^D)`. For symmetric input `form` is diagonal with
/// entries `t^{v_i}` times nonzero constants, one valuation per entry; for
/// skew input it is a sum of blocks `t^{v_i} [[0, 1], [-1, 0]]`, one
/// valuation per block, followed by a zero block of size `zero_block`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceForm {
    pub u: PolyMatrix,
    pub form: PolyMatrix,
    pub valuations: Vec<u32>,
    pub zero_block: usize,
    pub truncation: u32,
}

fn require_dvr(a: &PolyMatrix, truncation: u32) -> Result<()> {
    if a.nvars() != 1 {
        return Err(Error::Incompatible(format!("DVR forms need one variable, got {}", a.nvars())));
    }
    if truncation == 0 {
        return Err(Error::Input("truncation must be at least 1".into()));
    }
    Ok(())
}

/// Valuation of a truncated element; `None` for zero.
fn valuation(p: &Poly) -> Option<u32> {
    p.order()
}

/// `p / t^v` for `p` divisible by `t^v`.
fn div_t(p: &Poly, v: u32) -> Poly {
    Poly::from_terms(1, p.terms().map(|(m, c)| (Monomial::new(vec![m.exponents()[0] - v]), c.clone())))
}

/// Rank over the fraction field, from the determinantal ideals.
pub fn exact_rank(a: &PolyMatrix) -> usize {
    (1..=a.rows().min(a.cols())).take_while(|&j| !determinantal_ideal(a, j as i64).is_zero()).count()
}

fn insufficient(truncation: u32, k: usize, rank: usize) -> Error {
    Error::TruncationInsufficient {
        truncation,
        detail: format!("invariant {} vanishes modulo t^{truncation} but the matrix has rank {rank}", k + 1),
    }
}

/// Smith normal form by minimal-valuation pivoting.
pub fn smith_normal_form(a: &PolyMatrix, truncation: u32) -> Result<SmithForm> {
    require_dvr(a, truncation)?;
    let d = truncation;
    let (m, n) = (a.rows(), a.cols());
    let rank = exact_rank(a);
    let mut w = a.truncate(d).map(Poly::clone);
    let mut u = PolyMatrix::identity(1, m);
    let mut v = PolyMatrix::identity(1, n);
    let mut valuations = Vec::new();
    for k in 0..m.min(n) {
        let pivot = (k..m)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| valuation(w.get(i, j)).map(|val| (val, i, j)))
            .min();
        let Some((val, pi, pj)) = pivot else {
            if k < rank {
                return Err(insufficient(d, k, rank));
            }
            break;
        };
        w.swap_rows(k, pi);
        u.swap_rows(k, pi);
        w.swap_cols(k, pj);
        v.swap_cols(k, pj);
        let inv = div_t(w.get(k, k), val).inverse_truncated(d).expect("pivot has minimal valuation");
        w.scale_row(k, &inv, d);
        u.scale_row(k, &inv, d);
        for i in k + 1..m {
            if !w.get(i, k).is_zero() {
                let q = -div_t(w.get(i, k), val);
                w.add_row_multiple(i, k, &q, d);
                u.add_row_multiple(i, k, &q, d);
            }
        }
        for j in k + 1..n {
            if !w.get(k, j).is_zero() {
                let q = -div_t(w.get(k, j), val);
                w.add_col_multiple(j, k, &q, d);
                v.add_col_multiple(j, k, &q, d);
            }
        }
        valuations.push(val);
    }
    Ok(SmithForm { u, diag: w, v, valuations, truncation: d })
}

fn congruence_form(a: &PolyMatrix, truncation: u32, skew: bool) -> Result<CongruenceForm> {
    require_dvr(a, truncation)?;
    let d = truncation;
    let m = a.rows();
    let structure = if skew { Structure::SkewSymmetric } else { Structure::Symmetric };
    let rank = exact_rank(a);
    let mut u = PolyMatrix::identity(1, m);
    let mut w = a.truncate(d);
    let mut valuations = Vec::new();
    let mut k = 0;
    while k < m {
        let tail: Vec<usize> = (k..m).collect();
        let block = w.submatrix(&tail, &tail);
        let Some(p) = block.entries().iter().filter_map(valuation).min() else {
            if k < rank {
                return Err(insufficient(d, k, rank));
            }
            break;
        };
        // factor out t^p; the remaining block has a unit entry
        let scaled = block.map(|e| div_t(e, p)).with_structure(structure.clone())?;
        let split = congruent_split_unit(&scaled, d - p)?;
        let r = split.rank;
        debug_assert!(r > 0);
        let step = PolyMatrix::identity(1, k).direct_sum(&split.u);
        u = step.mul_truncated(&u, d)?;
        w = u.mul_truncated(a, d)?.mul_truncated(&u.transpose(), d)?;
        let count = if skew { r / 2 } else { r };
        valuations.extend(std::iter::repeat_n(p, count));
        k += r;
    }
    w.set_structure_unchecked(structure);
    let used = if skew { 2 * valuations.len() } else { valuations.len() };
    Ok(CongruenceForm { u, form: w, valuations, zero_block: m - used, truncation: d })
}

/// Diagonalization of a symmetric matrix by congruence.
pub fn sym_canonical_dvr(a: &PolyMatrix, truncation: u32) -> Result<CongruenceForm> {
    if !a.is_symmetric() {
        return Err(Error::Incompatible("symmetric canonical form needs a symmetric matrix".into()));
    }
    congruence_form(a, truncation, false)
}

/// Symplectic block form of a skew-symmetric matrix by congruence.
pub fn skew_canonical_dvr(a: &PolyMatrix, truncation: u32) -> Result<CongruenceForm> {
    a.check_skew()?;
    congruence_form(a, truncation, true)
}
