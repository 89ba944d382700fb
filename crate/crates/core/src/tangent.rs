//! Tangent spaces to group orbits and certified tests `m^N T_Σ ⊆ T_{GA}`.
//!
//! Matrices are flattened row-major into elements of `R^{mn}`; every test is
//! a containment of submodules decided by [`crate::certify`].

use std::fmt;

use crate::certify::{self, Certificate, CertifiedBool, PowerSearch};
use crate::closure::closure_colon;
use crate::error::{Error, Result};
use crate::ideals::{monomial_intersection, Ideal};
use crate::localalg::{unit_vector, EchelonBuilder, JetContext, ModuleElement, ModuleSpan, Monomial, Poly, SparseVec, SubspaceBasis};
use crate::matrixops::{block_index, determinantal_ideal, PolyMatrix, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `A ↦ A V`
    Gr,
    /// `A ↦ U A`
    Gl,
    /// `A ↦ U A V`
    Glr,
    /// `A ↦ U A U^T`
    Gcongr,
    /// `A ↦ U A U^{-1}`
    Gconj,
    GrUp,
    GlrUp,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Gr => "gr",
            GroupKind::Gl => "gl",
            GroupKind::Glr => "glr",
            GroupKind::Gcongr => "congr",
            GroupKind::Gconj => "conj",
            GroupKind::GrUp => "gr-up",
            GroupKind::GlrUp => "glr-up",
        }
    }

    pub fn parse(s: &str) -> Option<GroupKind> {
        Some(match s {
            "gr" => GroupKind::Gr,
            "gl" => GroupKind::Gl,
            "glr" => GroupKind::Glr,
            "congr" => GroupKind::Gcongr,
            "conj" => GroupKind::Gconj,
            "gr-up" => GroupKind::GrUp,
            "glr-up" => GroupKind::GlrUp,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupAction {
    pub kind: GroupKind,
    /// Use the subgroup acting trivially modulo `m`; its tangent space is `m T_{GA}`.
    pub unipotent: bool,
}

impl GroupAction {
    pub fn new(kind: GroupKind) -> Self {
        GroupAction { kind, unipotent: false }
    }

    pub fn unipotent(kind: GroupKind) -> Self {
        GroupAction { kind, unipotent: true }
    }
}

impl fmt::Display for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if self.unipotent {
            write!(f, "^(m)")?;
        }
        Ok(())
    }
}

/// The space of allowed deformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaSpace {
    Full,
    Sym,
    Skew,
    Upper { row_blocks: Vec<usize>, col_blocks: Vec<usize> },
    /// `Σ ∩ (A + Mat(J))`, with tangent space `J T_Σ`.
    Shifted { ideal: Ideal, base: Box<SigmaSpace> },
}

impl SigmaSpace {
    /// Upper-block Σ using the block sizes stored on `a`.
    pub fn upper_for(a: &PolyMatrix) -> Result<SigmaSpace> {
        match a.structure() {
            Structure::UpperBlockTriangular { row_blocks, col_blocks } => {
                Ok(SigmaSpace::Upper { row_blocks: row_blocks.clone(), col_blocks: col_blocks.clone() })
            }
            other => Err(Error::Incompatible(format!("upper Σ needs block sizes, matrix is {}", other.name()))),
        }
    }

    pub fn shifted(self, ideal: Ideal) -> SigmaSpace {
        SigmaSpace::Shifted { ideal, base: Box::new(self) }
    }

    pub fn name(&self) -> String {
        match self {
            SigmaSpace::Full => "full".into(),
            SigmaSpace::Sym => "sym".into(),
            SigmaSpace::Skew => "skew".into(),
            SigmaSpace::Upper { .. } => "upper".into(),
            SigmaSpace::Shifted { base, .. } => format!("{}^(J)", base.name()),
        }
    }

    /// The underlying unshifted space.
    pub fn base(&self) -> &SigmaSpace {
        match self {
            SigmaSpace::Shifted { base, .. } => base.base(),
            other => other,
        }
    }
}

fn upper_blocks(a: &PolyMatrix) -> Result<(Vec<usize>, Vec<usize>)> {
    match a.structure() {
        Structure::UpperBlockTriangular { row_blocks, col_blocks } => Ok((row_blocks.clone(), col_blocks.clone())),
        other => Err(Error::Incompatible(format!(
            "upper-triangular groups need an upper-block-triangular matrix, got {}",
            other.name()
        ))),
    }
}

fn require_square(a: &PolyMatrix, what: &str) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::Incompatible(format!("{what} needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(())
}

fn check_sigma(a: &PolyMatrix, s: &SigmaSpace) -> Result<()> {
    match s {
        SigmaSpace::Full => Ok(()),
        SigmaSpace::Sym => {
            require_square(a, "symmetric Σ")?;
            if !a.is_symmetric() {
                return Err(Error::Incompatible("symmetric Σ needs a symmetric matrix".into()));
            }
            Ok(())
        }
        SigmaSpace::Skew => a.check_skew().map_err(|e| Error::Incompatible(format!("skew Σ: {e}"))),
        SigmaSpace::Upper { row_blocks, col_blocks } => a
            .clone()
            .with_structure(Structure::UpperBlockTriangular { row_blocks: row_blocks.clone(), col_blocks: col_blocks.clone() })
            .map(|_| ())
            .map_err(|e| Error::Incompatible(format!("upper Σ: {e}"))),
        SigmaSpace::Shifted { ideal, base } => {
            if ideal.nvars() != a.nvars() {
                return Err(Error::VariableCountMismatch { left: ideal.nvars(), right: a.nvars() });
            }
            check_sigma(a, base)
        }
    }
}

/// Checks that `A` carries the structure the group and Σ require.
pub fn check_compatibility(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace) -> Result<()> {
    match g.kind {
        GroupKind::Gcongr => require_square(a, "congruence")?,
        GroupKind::Gconj => require_square(a, "conjugation")?,
        GroupKind::GrUp | GroupKind::GlrUp => {
            upper_blocks(a)?;
        }
        _ => {}
    }
    check_sigma(a, s)
}

/// Generators of the tangent space `T_{(GA, A)}`.
pub fn tangent_generators(a: &PolyMatrix, g: GroupAction) -> Result<Vec<PolyMatrix>> {
    let nvars = a.nvars();
    let (m, n) = (a.rows(), a.cols());
    let e = |rows, cols, i, j| PolyMatrix::elementary(nvars, rows, cols, i, j);
    let right = |pairs: Vec<(usize, usize)>| -> Result<Vec<PolyMatrix>> {
        pairs.into_iter().map(|(i, j)| a.checked_mul(&e(n, n, i, j))).collect()
    };
    let left = |pairs: Vec<(usize, usize)>| -> Result<Vec<PolyMatrix>> {
        pairs.into_iter().map(|(i, j)| e(m, m, i, j).checked_mul(a)).collect()
    };
    let all = |k: usize| -> Vec<(usize, usize)> { (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect() };
    let upper = |blocks: &[usize]| -> Vec<(usize, usize)> {
        let b = block_index(blocks);
        let k = b.len();
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|&(i, j)| b[i] <= b[j]).collect()
    };
    let mut gens = match g.kind {
        GroupKind::Gr => right(all(n))?,
        GroupKind::Gl => left(all(m))?,
        GroupKind::Glr => {
            let mut v = left(all(m))?;
            v.extend(right(all(n))?);
            v
        }
        GroupKind::Gcongr => {
            require_square(a, "congruence")?;
            let mut v = Vec::new();
            for (i, j) in all(m) {
                let u = e(m, m, i, j);
                v.push(u.checked_mul(a)?.checked_add(&a.checked_mul(&u.transpose())?)?);
            }
            v
        }
        GroupKind::Gconj => {
            require_square(a, "conjugation")?;
            let mut v = Vec::new();
            for (i, j) in all(m) {
                let u = e(m, m, i, j);
                v.push(u.checked_mul(a)?.checked_sub(&a.checked_mul(&u)?)?);
            }
            v
        }
        GroupKind::GrUp => {
            let (_, cb) = upper_blocks(a)?;
            right(upper(&cb))?
        }
        GroupKind::GlrUp => {
            let (rb, cb) = upper_blocks(a)?;
            let mut v = left(upper(&rb))?;
            v.extend(right(upper(&cb))?);
            v
        }
    };
    if g.unipotent {
        gens = gens
            .iter()
            .flat_map(|t| (0..nvars).map(move |k| t.scale(&Poly::var(nvars, k))))
            .collect();
    }
    Ok(gens)
}

/// R-module generators of `T_Σ` for an `m x n` matrix.
pub fn sigma_basis(nvars: usize, m: usize, n: usize, s: &SigmaSpace) -> Result<Vec<PolyMatrix>> {
    let e = |i, j| PolyMatrix::elementary(nvars, m, n, i, j);
    let square = || {
        if m != n {
            return Err(Error::Incompatible(format!("{} Σ needs a square shape, got {m}x{n}", s.name())));
        }
        Ok(())
    };
    Ok(match s {
        SigmaSpace::Full => (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| e(i, j)).collect(),
        SigmaSpace::Sym => {
            square()?;
            let mut v = Vec::new();
            for i in 0..m {
                for j in i..m {
                    v.push(if i == j { e(i, i) } else { e(i, j).checked_add(&e(j, i))? });
                }
            }
            v
        }
        SigmaSpace::Skew => {
            square()?;
            let mut v = Vec::new();
            for i in 0..m {
                for j in i + 1..m {
                    v.push(e(i, j).checked_sub(&e(j, i))?);
                }
            }
            v
        }
        SigmaSpace::Upper { row_blocks, col_blocks } => {
            if row_blocks.iter().sum::<usize>() != m || col_blocks.iter().sum::<usize>() != n {
                return Err(Error::Incompatible(format!("blocks {row_blocks:?} x {col_blocks:?} do not fit {m}x{n}")));
            }
            let (rb, cb) = (block_index(row_blocks), block_index(col_blocks));
            (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| rb[i] <= cb[j]).map(|(i, j)| e(i, j)).collect()
        }
        SigmaSpace::Shifted { ideal, base } => {
            let base = sigma_basis(nvars, m, n, base)?;
            ideal.generators().iter().flat_map(|f| base.iter().map(move |b| b.scale(f))).collect()
        }
    })
}

fn flatten(ms: &[PolyMatrix]) -> Vec<ModuleElement> {
    ms.iter().map(PolyMatrix::vectorize).filter(|v| v.iter().any(|p| !p.is_zero())).collect()
}

fn max_degree(vs: &[ModuleElement]) -> u32 {
    vs.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
}

/// The pieces of a containment `m^N T_Σ ⊆ T_{GA}` as module elements.
struct TangentProblem {
    nvars: usize,
    rank: usize,
    /// Constant generators of the unshifted Σ.
    base: Vec<ModuleElement>,
    /// `J`-multiples of `base`, when Σ is shifted.
    shifted: Option<Vec<ModuleElement>>,
    tangent: Vec<ModuleElement>,
}

impl TangentProblem {
    fn new(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, group_ideal: Option<&Ideal>) -> Result<Self> {
        check_sigma(a, s)?;
        let nvars = a.nvars();
        let mut tangent = tangent_generators(a, g)?;
        if let Some(i) = group_ideal {
            if i.nvars() != nvars {
                return Err(Error::VariableCountMismatch { left: i.nvars(), right: nvars });
            }
            tangent = i.generators().iter().flat_map(|f| tangent.iter().map(move |t| t.scale(f))).collect();
        }
        let base = flatten(&sigma_basis(nvars, a.rows(), a.cols(), s.base())?);
        let shifted = match s {
            SigmaSpace::Shifted { .. } => Some(flatten(&sigma_basis(nvars, a.rows(), a.cols(), s)?)),
            _ => None,
        };
        Ok(TangentProblem { nvars, rank: a.rows() * a.cols(), base, shifted, tangent: flatten(&tangent) })
    }

    fn contains_power(&self, n: u32) -> Result<CertifiedBool> {
        match &self.shifted {
            None => certify::power_in(self.nvars, self.rank, &self.base, n, &self.tangent),
            Some(gens) => {
                let sub: Vec<ModuleElement> = Monomial::all_of_degree(self.nvars, n)
                    .iter()
                    .flat_map(|u| gens.iter().map(move |v| v.iter().map(|p| p.mul_monomial(u)).collect()))
                    .collect();
                let t0 = n + 1 + max_degree(gens);
                certify::submodule_in(self.nvars, self.rank, &sub, &self.tangent, Some(&self.base), t0)
            }
        }
    }

    fn minimal_power(&self, n_max: u32) -> Result<PowerSearch> {
        if self.shifted.is_none() {
            return certify::minimal_power(self.nvars, self.rank, &self.base, &self.tangent, n_max);
        }
        let mut last = None;
        for n in 0..=n_max {
            let answer = self.contains_power(n)?;
            if answer.value {
                return Ok(PowerSearch::Found { n, proof: answer });
            }
            last = Some(answer);
        }
        Ok(PowerSearch::Exceeds { n_max, refutation: last.expect("nonempty range") })
    }

    fn sigma_generators(&self) -> &[ModuleElement] {
        self.shifted.as_deref().unwrap_or(&self.base)
    }
}

/// Decides `m^N ⊆ ann(T¹_{(Σ,G,A)})`, i.e. `m^N T_Σ ⊆ T_{(GA,A)}`.
pub fn t1_contains_power(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, n: u32) -> Result<CertifiedBool> {
    TangentProblem::new(a, g, s, None)?.contains_power(n)
}

/// Least `N <= n_max` with `m^N ⊆ ann(T¹)`: the Loewy length of the annihilator.
pub fn t1_minimal_power(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, n_max: u32) -> Result<PowerSearch> {
    TangentProblem::new(a, g, s, None)?.minimal_power(n_max)
}

/// The relative version: `m^N T_{Σ^{(J)}} ⊆ I T_{(GA,A)}`, with `I = (1)` when absent.
pub fn relative_t1_contains_power(
    a: &PolyMatrix,
    g: GroupAction,
    s: &SigmaSpace,
    group_ideal: Option<&Ideal>,
    n: u32,
) -> Result<CertifiedBool> {
    TangentProblem::new(a, g, s, group_ideal)?.contains_power(n)
}

pub fn relative_t1_minimal_power(
    a: &PolyMatrix,
    g: GroupAction,
    s: &SigmaSpace,
    group_ideal: Option<&Ideal>,
    n_max: u32,
) -> Result<PowerSearch> {
    TangentProblem::new(a, g, s, group_ideal)?.minimal_power(n_max)
}

/// The truncated annihilator `{f ∈ R/m^D : f T_Σ ⊆ T_{GA} + m^D}` as a
/// subspace of the jet algebra (rank 1).
///
/// This is an oracle: it can be strictly larger than the truncation of the
/// true annihilator.
pub fn t1_ann_jet(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, truncation: u32) -> Result<SubspaceBasis> {
    let problem = TangentProblem::new(a, g, s, None)?;
    let ctx = JetContext::new(a.nvars(), truncation);
    let mut tangent = ModuleSpan::new(&ctx, problem.rank);
    for t in &problem.tangent {
        tangent.add_generator(t);
    }
    let sigma = problem.sigma_generators();
    // row for u: normal forms of u*σ_k side by side, then a tag column for u
    let width = ctx.dim() * problem.rank;
    let tag_offset = width * sigma.len();
    let mut kernel = EchelonBuilder::new();
    for (idx, u) in ctx.basis().iter().enumerate() {
        let mut row = SparseVec::default();
        for (k, sgm) in sigma.iter().enumerate() {
            let nf = tangent.echelon().reduce(&ctx.vectorize_shifted(u, sgm));
            row = row.concat(nf.offset(k * width));
        }
        row = row.concat(SparseVec::from_entries([(tag_offset + idx, crate::Scalar::from_integer(1.into()))]));
        kernel.insert(&row);
    }
    let jets: Vec<SparseVec> = kernel
        .rows()
        .iter()
        .filter(|r| r.leading().is_some_and(|l| l >= tag_offset))
        .map(|r| r.split_at(tag_offset).1)
        .collect();
    Ok(SubspaceBasis::from_vectors(&ctx, 1, &jets))
}

/// `dim_k` of `(T_Σ + T_{GA} + m^D) / (T_{GA} + m^D)`.
pub fn t1_jet_dimension(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, truncation: u32) -> Result<usize> {
    let problem = TangentProblem::new(a, g, s, None)?;
    let ctx = JetContext::new(a.nvars(), truncation);
    let mut span = ModuleSpan::new(&ctx, problem.rank);
    for t in &problem.tangent {
        span.add_generator(t);
    }
    let orbit = span.dim();
    for v in problem.sigma_generators() {
        span.add_generator(v);
    }
    Ok(span.dim() - orbit)
}

/// Whether the identity matrix stays outside the conjugation tangent space
/// modulo `m^D`. Every generator `E A - A E` is traceless, so this holds
/// for every square `A` and `D >= 1`.
pub fn conjugation_trace_obstruction(a: &PolyMatrix, truncation: u32) -> Result<bool> {
    let tangent = flatten(&tangent_generators(a, GroupAction::new(GroupKind::Gconj))?);
    let ctx = JetContext::new(a.nvars(), truncation);
    let mut span = ModuleSpan::new(&ctx, a.rows() * a.cols());
    for t in &tangent {
        span.add_generator(t);
    }
    Ok(!span.contains(&PolyMatrix::identity(a.nvars(), a.rows()).vectorize()))
}

fn coker_problem(a: &PolyMatrix, restricted: bool) -> (Vec<ModuleElement>, Vec<ModuleElement>) {
    let nvars = a.nvars();
    let m = a.rows();
    let base: Vec<ModuleElement> = (0..m).map(|c| unit_vector(nvars, m, c)).collect();
    let cols: Vec<ModuleElement> = (0..a.cols()).map(|j| a.col_vec(j)).collect();
    let sup = if restricted {
        cols.iter()
            .flat_map(|c| (0..nvars).map(move |k| c.iter().map(|p| p.mul_monomial(&Monomial::var(nvars, k))).collect()))
            .collect()
    } else {
        cols
    };
    (base, sup)
}

/// Decides `m^N R^m ⊆ Im(A)`, or `⊆ A(m R^n)` when `restricted`.
pub fn ann_coker_contains_power(a: &PolyMatrix, n: u32, restricted: bool) -> Result<CertifiedBool> {
    let (base, sup) = coker_problem(a, restricted);
    certify::power_in(a.nvars(), a.rows(), &base, n, &sup)
}

/// Loewy length of `ann.coker(A)` (or of the restricted map).
pub fn ann_coker_minimal_power(a: &PolyMatrix, restricted: bool, n_max: u32) -> Result<PowerSearch> {
    let (base, sup) = coker_problem(a, restricted);
    certify::minimal_power(a.nvars(), a.rows(), &base, &sup, n_max)
}

/// Decides `m^N J R^m ⊆ Im(A)`, i.e. `m^N ⊆ ann.coker(A) : J`, in `R^m`.
pub fn relative_coker_contains_power(a: &PolyMatrix, j: &Ideal, n: u32) -> Result<CertifiedBool> {
    let nvars = a.nvars();
    if j.nvars() != nvars {
        return Err(Error::VariableCountMismatch { left: j.nvars(), right: nvars });
    }
    let (base, sup) = coker_problem(a, false);
    let sub: Vec<ModuleElement> = Monomial::all_of_degree(nvars, n)
        .iter()
        .flat_map(|u| j.generators().iter().map(move |f| f.mul_monomial(u)))
        .flat_map(|f| base.iter().map(move |b| b.iter().map(|p| p * &f).collect()))
        .collect();
    certify::submodule_in(nvars, a.rows(), &sub, &sup, Some(&base), n + 1 + j.max_degree())
}

/// Bounds for a chain of maps `F_0 <- F_1 <- ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBounds {
    /// Least `N` with `m^N ⊆ ∩ ann.coker(φ_i|_{m F_i})`.
    pub lower: PowerSearch,
    /// `∩ (Ī_{m_i}(φ_i) : Ī_{m_i - 1}(φ_i))`; `None` when some ideal is not monomial.
    pub upper: Option<Ideal>,
}

/// `ann` of the chain is sandwiched between the restricted cokernel
/// annihilators and the closure colons of the individual maps.
pub fn chain_bounds(maps: &[PolyMatrix], n_max: u32) -> Result<ChainBounds> {
    let Some(first) = maps.first() else {
        return Err(Error::Input("empty chain".into()));
    };
    let nvars = first.nvars();
    if let Some(bad) = maps.iter().find(|a| a.nvars() != nvars) {
        return Err(Error::VariableCountMismatch { left: bad.nvars(), right: nvars });
    }
    if let Some(bad) = maps.iter().find(|a| a.rows() > a.cols()) {
        return Err(Error::Shape(format!("chain maps must be square or wide, got {}x{}", bad.rows(), bad.cols())));
    }
    let mut lower = None;
    'search: for n in 0..=n_max {
        let mut all_yes = None;
        for a in maps {
            let answer = ann_coker_contains_power(a, n, true)?;
            if !answer.value {
                if n == n_max {
                    lower = Some(PowerSearch::Exceeds { n_max, refutation: answer });
                }
                continue 'search;
            }
            if all_yes.as_ref().is_none_or(|prev: &CertifiedBool| prev.truncation < answer.truncation) {
                all_yes = Some(answer);
            }
        }
        let proof = all_yes.unwrap_or_else(|| CertifiedBool::yes(n + 1, Certificate::Immediate("empty chain")));
        lower = Some(PowerSearch::Found { n, proof });
        break;
    }
    let mut upper: Option<Ideal> = None;
    let mut available = true;
    for a in maps {
        let m = a.rows() as i64;
        let top = determinantal_ideal(a, m);
        let below = determinantal_ideal(a, m - 1);
        let piece = if top.is_zero() {
            Ok(Ideal::zero(nvars))
        } else if top.is_monomial() && below.is_monomial() {
            closure_colon(&top, &below)
        } else {
            Err(Error::NonMonomial)
        };
        match piece {
            Ok(p) => {
                upper = Some(match upper {
                    None => p,
                    Some(prev) => monomial_intersection(&prev, &p)?,
                })
            }
            Err(Error::NonMonomial) => available = false,
            Err(e) => return Err(e),
        }
    }
    Ok(ChainBounds { lower: lower.expect("search covers 0..=n_max"), upper: upper.filter(|_| available) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly_parse;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn p(s: &str) -> Poly {
        poly_parse(s, &names()).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::general(2, rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect()).unwrap()
    }

    fn gr() -> GroupAction {
        GroupAction::new(GroupKind::Gr)
    }

    #[test]
    fn generator_counts() {
        let a = mat(&[&["x", "y"], &["0", "x"]]);
        assert_eq!(tangent_generators(&a, gr()).unwrap().len(), 4);
        assert_eq!(tangent_generators(&a, GroupAction::new(GroupKind::Glr)).unwrap().len(), 8);
        assert_eq!(tangent_generators(&a, GroupAction::unipotent(GroupKind::Gr)).unwrap().len(), 8);
        assert_eq!(sigma_basis(2, 2, 2, &SigmaSpace::Full).unwrap().len(), 4);
        assert_eq!(sigma_basis(2, 3, 3, &SigmaSpace::Skew).unwrap().len(), 3);
        assert_eq!(sigma_basis(2, 2, 2, &SigmaSpace::Sym).unwrap().len(), 3);
        assert!(sigma_basis(2, 2, 3, &SigmaSpace::Sym).is_err());
        let zero = PolyMatrix::zeros(2, 2, 2);
        assert!(tangent_generators(&zero, GroupAction::new(GroupKind::Glr)).unwrap().iter().all(PolyMatrix::is_zero));
        assert!(tangent_generators(&mat(&[&["x", "y"]]), GroupAction::new(GroupKind::Gcongr)).is_err());
        assert!(tangent_generators(&a, GroupAction::new(GroupKind::GrUp)).is_err());
    }

    #[test]
    fn identity_is_zero_determined() {
        let one = PolyMatrix::identity(2, 2);
        for kind in [GroupKind::Gr, GroupKind::Gl, GroupKind::Glr] {
            assert!(t1_contains_power(&one, GroupAction::new(kind), &SigmaSpace::Full, 0).unwrap().value);
        }
        assert!(ann_coker_contains_power(&one, 0, false).unwrap().value);
        assert!(!ann_coker_contains_power(&one, 0, true).unwrap().value);
        assert!(ann_coker_contains_power(&one, 1, true).unwrap().value);
    }

    #[test]
    fn diagonal_matches_ann_coker() {
        // ann.coker(diag(x, y)) = (x) ∩ (y) = (xy)
        let a = mat(&[&["x", "0"], &["0", "y"]]);
        let no = t1_contains_power(&a, gr(), &SigmaSpace::Full, 2).unwrap();
        assert!(!no.value);
        assert!(!ann_coker_contains_power(&a, 2, false).unwrap().value);
        let ann = t1_ann_jet(&a, gr(), &SigmaSpace::Full, 4).unwrap();
        // (xy) truncated at D = 4: xy, x^2 y, x y^2
        assert_eq!(ann.dim(), 3);
        assert!(ann.member(&[p("x*y")]).unwrap());
        assert!(!ann.member(&[p("x^2")]).unwrap());
        assert!(!ann_coker_contains_power(&mat(&[&["1", "0"], &["0", "0"]]), 5, false).unwrap().value);
    }

    #[test]
    fn worked_matrix_annihilator() {
        let a = mat(&[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
        let d = 10;
        let ann = t1_ann_jet(&a, gr(), &SigmaSpace::Full, d).unwrap();
        let ctx = JetContext::new(2, d);
        let i2 = Ideal::new(2, [p("y^7"), p("x^5*y^4"), p("x^8")]);
        let expected = crate::localalg::span(&i2.as_module(), &ctx, 1).unwrap();
        assert!(ann.contains_subspace(&expected) && expected.contains_subspace(&ann));
        let search = ann_coker_minimal_power(&a, false, 16).unwrap();
        assert_eq!(search.value(), Some(11));
    }

    #[test]
    fn congruence_skew_presentations() {
        let a = mat(&[&["0", "x"], &["-x", "0"]]).with_structure(Structure::SkewSymmetric).unwrap();
        let congr = GroupAction::new(GroupKind::Gcongr);
        // T¹ ≅ R/(x): one monomial y^k per degree
        assert_eq!(t1_jet_dimension(&a, congr, &SigmaSpace::Skew, 5).unwrap(), 5);
        // u A + A u^T is skew for skew A; the span is (x) times the skew generator
        let gens = tangent_generators(&a, congr).unwrap();
        assert!(gens.iter().all(|g| g.check_skew().is_ok()));
        assert!(!t1_contains_power(&a, congr, &SigmaSpace::Skew, 3).unwrap().value);
    }

    #[test]
    fn conjugation_never_reaches_identity() {
        let a = mat(&[&["x", "y"], &["1", "x^2"]]);
        assert!(conjugation_trace_obstruction(&a, 3).unwrap());
        let conj = GroupAction::new(GroupKind::Gconj);
        for n in 0..=4 {
            assert!(!t1_contains_power(&a, conj, &SigmaSpace::Full, n).unwrap().value);
        }
    }

    #[test]
    fn relative_routes_agree() {
        let t = |k| Poly::var(1, 0).pow(k);
        let diag = |a, b| PolyMatrix::general(1, vec![vec![t(a), Poly::zero(1)], vec![Poly::zero(1), t(b)]]).unwrap();
        let j = Ideal::new(1, [t(1)]);
        let s = SigmaSpace::Full.shifted(j.clone());
        // ann.coker(diag(t, t)) = (t), so the colon by (t) is the unit ideal;
        // ann.coker(diag(t^2, t)) = (t^2), colon (t)
        for (a, expected) in [(diag(1, 1), 0), (diag(2, 1), 1)] {
            for n in 0..4 {
                let module = relative_coker_contains_power(&a, &j, n).unwrap().value;
                let matrix = relative_t1_contains_power(&a, gr(), &s, None, n).unwrap().value;
                assert_eq!(module, matrix);
                assert_eq!(module, n >= expected);
            }
        }
    }

    #[test]
    fn upper_triangular_group() {
        let a = mat(&[&["x", "y"], &["0", "x"]])
            .with_structure(Structure::UpperBlockTriangular { row_blocks: vec![1, 1], col_blocks: vec![1, 1] })
            .unwrap();
        let s = SigmaSpace::upper_for(&a).unwrap();
        let up = GroupAction::new(GroupKind::GrUp);
        for n in 0..5 {
            assert_eq!(
                t1_contains_power(&a, up, &s, n).unwrap().value,
                ann_coker_contains_power(&a, n, false).unwrap().value
            );
        }
    }

    #[test]
    fn chains() {
        let x = mat(&[&["x", "0"], &["0", "x"]]);
        let y = mat(&[&["y", "0"], &["0", "y"]]);
        let single = chain_bounds(std::slice::from_ref(&x), 8).unwrap();
        assert_eq!(single.lower.value(), ann_coker_minimal_power(&x, true, 8).unwrap().value());
        let both = chain_bounds(&[x, y], 8).unwrap();
        // m(x) ∩ m(y) = (xy) is not m-primary
        assert_eq!(both.lower.value(), None);
        assert!(!both.upper.unwrap().is_zero());
        let z = mat(&[&["x", "y"], &["0", "x"]]);
        assert_eq!(chain_bounds(&[z.clone(), PolyMatrix::identity(2, 2)], 8).unwrap().lower.value(),
            chain_bounds(&[z], 8).unwrap().lower.value().map(|n| n.max(1)));
        let zero_col = mat(&[&["x", "0"], &["y", "0"]]);
        assert!(chain_bounds(&[zero_col], 4).unwrap().upper.unwrap().is_zero());
    }
}
