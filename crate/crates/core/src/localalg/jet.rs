//! Truncated jet algebras `k[x_1..x_p]/m^D` and exact linear algebra on
//! free modules over them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::{default_names, Monomial, Poly, Scalar};
use crate::error::{Error, Result};

/// A jet-module element: one polynomial per free-module component.
pub type ModuleElement = Vec<Poly>;

/// `k[x_1..x_p]/m^D` with its monomial basis listed in graded order.
#[derive(Clone, Debug)]
pub struct JetContext {
    inner: Arc<JetInner>,
}

#[derive(Debug)]
struct JetInner {
    nvars: usize,
    truncation: u32,
    names: Vec<String>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    degree_start: Vec<usize>,
}

impl JetContext {
    pub fn new(nvars: usize, truncation: u32) -> Self {
        Self::with_names(default_names(nvars), truncation)
    }

    pub fn with_names(names: Vec<String>, truncation: u32) -> Self {
        let nvars = names.len();
        assert!(nvars >= 1, "a jet context needs at least one variable");
        let mut basis = Vec::new();
        let mut degree_start = Vec::new();
        for d in 0..truncation {
            degree_start.push(basis.len());
            basis.extend(Monomial::all_of_degree(nvars, d));
        }
        degree_start.push(basis.len());
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        JetContext {
            inner: Arc::new(JetInner { nvars, truncation, names, basis, index, degree_start }),
        }
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.inner.truncation
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    /// Monomials of degree `< D`, graded then lexicographic.
    pub fn basis(&self) -> &[Monomial] {
        &self.inner.basis
    }

    pub fn dim(&self) -> usize {
        self.inner.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.inner.index.get(m).copied()
    }

    /// Basis monomials of degree exactly `d` (empty if `d >= D`).
    pub fn monomials_of_degree(&self, d: u32) -> &[Monomial] {
        let d = d as usize;
        if d + 1 >= self.inner.degree_start.len() {
            return &[];
        }
        &self.inner.basis[self.inner.degree_start[d]..self.inner.degree_start[d + 1]]
    }

    pub fn truncate(&self, p: &Poly) -> Poly {
        p.truncate(self.truncation())
    }

    /// Coordinates of a module element in the basis `(monomial, component)`,
    /// column `monomial_index * rank + component`.
    pub fn vectorize(&self, v: &[Poly]) -> SparseVec {
        let rank = v.len();
        let mut entries = Vec::new();
        for (c, p) in v.iter().enumerate() {
            for (m, a) in p.terms() {
                if m.degree() >= self.truncation() {
                    break;
                }
                entries.push((self.index_of(m).expect("monomial below truncation") * rank + c, a.clone()));
            }
        }
        entries.sort_by_key(|e| e.0);
        SparseVec { entries }
    }

    /// `m * v` truncated, as coordinates.
    pub fn vectorize_shifted(&self, shift: &Monomial, v: &[Poly]) -> SparseVec {
        let rank = v.len();
        let d = self.truncation();
        let sd = shift.degree();
        let mut entries = Vec::new();
        for (c, p) in v.iter().enumerate() {
            for (m, a) in p.terms() {
                if m.degree() + sd >= d {
                    break;
                }
                let idx = self.index_of(&m.mul(shift)).expect("monomial below truncation");
                entries.push((idx * rank + c, a.clone()));
            }
        }
        entries.sort_by_key(|e| e.0);
        SparseVec { entries }
    }

    pub fn devectorize(&self, v: &SparseVec, rank: usize) -> ModuleElement {
        let mut out = vec![Poly::zero(self.nvars()); rank];
        for (col, a) in &v.entries {
            out[col % rank].add_term(self.inner.basis[col / rank].clone(), a.clone());
        }
        out
    }
}

/// Sparse coordinate vector, entries sorted by column, no zeros stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    /// Builds a vector from unsorted entries; duplicate columns are summed.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, a) in entries {
            *map.entry(c).or_insert_with(Scalar::zero) += a;
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<usize, Scalar>) -> Self {
        SparseVec { entries: map.into_iter().filter(|(_, a)| !a.is_zero()).collect() }
    }

    /// Shift every column by `offset` (used to append tag coordinates).
    pub fn offset(mut self, offset: usize) -> Self {
        for e in &mut self.entries {
            e.0 += offset;
        }
        self
    }

    pub fn concat(mut self, other: SparseVec) -> Self {
        self.entries.extend(other.entries);
        self.entries.sort_by_key(|e| e.0);
        self
    }

    pub fn split_at(&self, col: usize) -> (SparseVec, SparseVec) {
        let k = self.entries.partition_point(|e| e.0 < col);
        (
            SparseVec { entries: self.entries[..k].to_vec() },
            SparseVec {
                entries: self.entries[k..].iter().map(|(c, a)| (c - col, a.clone())).collect(),
            },
        )
    }
}

/// Incremental semi-echelon basis: every stored row has a distinct leading
/// (lowest) column with coefficient one, and later entries only.
#[derive(Clone, Debug, Default)]
pub struct EchelonBuilder {
    rows: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl EchelonBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Normal form of `v` modulo the current span: no entries in pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        let mut work: BTreeMap<usize, Scalar> = v.entries.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = work
                .range(cursor..)
                .find(|(c, _)| self.pivot_of.contains_key(c))
                .map(|(c, a)| (*c, a.clone()));
            let Some((col, coeff)) = next else { break };
            let row = &self.rows[self.pivot_of[&col]];
            for (c, a) in &row.entries {
                let entry = work.entry(*c).or_insert_with(Scalar::zero);
                *entry -= &coeff * a;
                if entry.is_zero() {
                    work.remove(c);
                }
            }
            cursor = col + 1;
        }
        SparseVec::from_map(work)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((lead, coeff)) = r.entries.first().cloned() else {
            return false;
        };
        let row = if coeff.is_one() {
            r
        } else {
            let inv = coeff.recip();
            SparseVec { entries: r.entries.into_iter().map(|(c, a)| (c, a * &inv)).collect() }
        };
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Reduced row echelon form, rows sorted by leading column.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].leading());
        let mut rows: Vec<SparseVec> = order.iter().map(|&i| self.rows[i].clone()).collect();
        // back-substitution, last pivot first
        for i in (0..rows.len()).rev() {
            let lead = rows[i].leading().expect("nonzero row");
            let pivot_row = rows[i].clone();
            for r in rows.iter_mut().take(i) {
                let Some(pos) = r.entries.iter().position(|e| e.0 == lead) else { continue };
                let coeff = r.entries[pos].1.clone();
                let mut work: BTreeMap<usize, Scalar> = r.entries.drain(..).collect();
                for (c, a) in &pivot_row.entries {
                    let entry = work.entry(*c).or_insert_with(Scalar::zero);
                    *entry -= &coeff * a;
                }
                *r = SparseVec::from_map(work);
            }
        }
        rows
    }
}

/// Echelonized k-subspace of the jet module `(k[x]/m^D)^rank`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    context: JetContext,
    ambient_rank: usize,
    rows: Vec<SparseVec>,
    echelon: EchelonBuilder,
}

impl SubspaceBasis {
    /// k-span of raw coordinate vectors (no monomial multiples added).
    pub fn from_vectors(context: &JetContext, ambient_rank: usize, vectors: &[SparseVec]) -> Self {
        let mut echelon = EchelonBuilder::new();
        for v in vectors {
            echelon.insert(v);
        }
        let rows = echelon.clone().into_rref();
        SubspaceBasis { context: context.clone(), ambient_rank, rows, echelon }
    }

    pub fn context(&self) -> &JetContext {
        &self.context
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduced row echelon rows over the `(monomial, component)` coordinates.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn basis_elements(&self) -> Vec<ModuleElement> {
        self.rows.iter().map(|r| self.context.devectorize(r, self.ambient_rank)).collect()
    }

    pub fn member(&self, v: &[Poly]) -> Result<bool> {
        if v.len() != self.ambient_rank {
            return Err(Error::Shape(format!(
                "element has {} components, subspace lives in rank {}",
                v.len(),
                self.ambient_rank
            )));
        }
        if v.iter().any(|p| p.nvars() != self.context.nvars()) {
            return Err(Error::Shape("element variable count differs from the jet context".into()));
        }
        Ok(self.echelon.contains(&self.context.vectorize(v)))
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.rows.iter().all(|r| self.echelon.contains(r))
    }
}

/// Builds `Span_R(vectors)` inside the jet module: the k-span of every
/// `monomial * v` with monomial degree `< D`, truncated.
pub struct ModuleSpan {
    context: JetContext,
    rank: usize,
    echelon: EchelonBuilder,
}

impl ModuleSpan {
    pub fn new(context: &JetContext, rank: usize) -> Self {
        ModuleSpan { context: context.clone(), rank, echelon: EchelonBuilder::new() }
    }

    pub fn context(&self) -> &JetContext {
        &self.context
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn echelon(&self) -> &EchelonBuilder {
        &self.echelon
    }

    /// Adds the R-submodule generated by `v`.
    pub fn add_generator(&mut self, v: &[Poly]) {
        debug_assert_eq!(v.len(), self.rank);
        let Some(order) = v.iter().filter_map(Poly::order).min() else { return };
        let d = self.context.truncation();
        if order >= d {
            return;
        }
        let ctx = self.context.clone();
        for shift_deg in 0..(d - order) {
            for m in ctx.monomials_of_degree(shift_deg) {
                let row = ctx.vectorize_shifted(m, v);
                if !row.is_zero() {
                    self.echelon.insert(&row);
                }
            }
        }
    }

    /// Adds `monomial * v` only for shifts keeping every product of total
    /// degree `<= bound`, so nothing is lost to truncation when `bound < D`.
    pub fn add_generator_bounded(&mut self, v: &[Poly], bound: u32) {
        debug_assert_eq!(v.len(), self.rank);
        let Some(top) = v.iter().filter_map(Poly::degree).max() else { return };
        if top > bound {
            return;
        }
        let ctx = self.context.clone();
        for shift_deg in 0..=(bound - top) {
            for m in ctx.monomials_of_degree(shift_deg) {
                let row = ctx.vectorize_shifted(m, v);
                if !row.is_zero() {
                    self.echelon.insert(&row);
                }
            }
        }
    }

    /// Adds a single vector (no monomial multiples).
    pub fn add_vector(&mut self, v: &[Poly]) {
        let row = self.context.vectorize(v);
        if !row.is_zero() {
            self.echelon.insert(&row);
        }
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.echelon.contains(&self.context.vectorize(v))
    }

    pub fn contains_shifted(&self, shift: &Monomial, v: &[Poly]) -> bool {
        self.echelon.contains(&self.context.vectorize_shifted(shift, v))
    }

    pub fn finish(self) -> SubspaceBasis {
        let rows = self.echelon.clone().into_rref();
        SubspaceBasis { context: self.context, ambient_rank: self.rank, rows, echelon: self.echelon }
    }
}

/// `Span_R(vectors)` truncated to the jet module of `ctx`.
pub fn span(vectors: &[ModuleElement], ctx: &JetContext, ambient_rank: usize) -> Result<SubspaceBasis> {
    let mut s = ModuleSpan::new(ctx, ambient_rank);
    for v in vectors {
        if v.len() != ambient_rank {
            return Err(Error::Shape(format!(
                "generator has {} components, expected {ambient_rank}",
                v.len()
            )));
        }
        if v.iter().any(|p| p.nvars() != ctx.nvars()) {
            return Err(Error::Shape("generator variable count differs from the jet context".into()));
        }
        s.add_generator(v);
    }
    Ok(s.finish())
}

pub fn member(v: &[Poly], s: &SubspaceBasis) -> Result<bool> {
    s.member(v)
}

/// Basis vector `e_c` of the free module of rank `rank`, scaled by `p`.
pub fn basis_element(rank: usize, c: usize, p: Poly) -> ModuleElement {
    let nvars = p.nvars();
    let mut v = vec![Poly::zero(nvars); rank];
    v[c] = p;
    v
}

pub fn unit_vector(nvars: usize, rank: usize, c: usize) -> ModuleElement {
    basis_element(rank, c, Poly::one(nvars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nvars: usize) -> Poly {
        Poly::var(nvars, 0)
    }

    #[test]
    fn basis_size_is_binomial() {
        let ctx = JetContext::new(3, 4);
        // C(3+4-1, 3) = 20
        assert_eq!(ctx.dim(), 20);
        assert_eq!(ctx.basis()[0], Monomial::one(3));
        assert_eq!(ctx.monomials_of_degree(1).len(), 3);
        assert!(ctx.monomials_of_degree(4).is_empty());
    }

    #[test]
    fn span_of_variable_multiples() {
        // p = 1, D = 3: span{(x,0),(0,x)} = {x, x^2} in each slot
        let ctx = JetContext::new(1, 3);
        let gens = vec![basis_element(2, 0, x(1)), basis_element(2, 1, x(1))];
        let s = span(&gens, &ctx, 2).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(!s.member(&unit_vector(1, 2, 0)).unwrap());
        assert!(s.member(&basis_element(2, 1, x(1).pow(2))).unwrap());
    }

    #[test]
    fn trivial_spans() {
        let ctx = JetContext::new(2, 3);
        let s = span(&[], &ctx, 2).unwrap();
        assert_eq!(s.dim(), 0);
        let full = span(&[unit_vector(2, 2, 0), unit_vector(2, 2, 1)], &ctx, 2).unwrap();
        assert_eq!(full.dim(), 2 * ctx.dim());
    }

    #[test]
    fn membership() {
        let ctx = JetContext::new(2, 4);
        let s = span(&[basis_element(2, 0, x(2))], &ctx, 2).unwrap();
        assert!(s.member(&basis_element(2, 0, x(2))).unwrap());
        // degree >= D truncates to zero
        assert!(s.member(&basis_element(2, 1, Poly::var(2, 1).pow(4))).unwrap());
        assert!(!s.member(&basis_element(2, 0, Poly::var(2, 1))).unwrap());
        assert!(s.member(&[Poly::zero(2)]).is_err());
    }

    #[test]
    fn rref_is_reduced() {
        let ctx = JetContext::new(2, 3);
        let y = Poly::var(2, 1);
        let g = vec![vec![&x(2) + &y], vec![&x(2) - &y]];
        let s = span(&g, &ctx, 1).unwrap();
        let leads: Vec<usize> = s.rows().iter().map(|r| r.leading().unwrap()).collect();
        for (i, r) in s.rows().iter().enumerate() {
            assert!(r.entries()[0].1.is_one());
            for (j, l) in leads.iter().enumerate() {
                if i != j {
                    assert!(r.entries().iter().all(|e| e.0 != *l));
                }
            }
        }
    }
}
