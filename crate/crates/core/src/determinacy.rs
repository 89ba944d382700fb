//! Verdicts and bounds on the order of determinacy `ord^Σ_G(A)`: the least
//! `k` such that every `B ∈ Σ` with `B - A ∈ Mat(m^{k+1})` lies in `GA`.
//!
//! Bounds come from Loewy lengths of annihilators: `ll(ann T¹_G) - 1 <= ord
//! <= ll(ann T¹_{G^(m)}) - 1`, with the annihilators replaced by cokernel
//! annihilators, determinantal colons, Pfaffian ideals or integral-closure
//! colons where these are known to bound them. Every report also carries the
//! same bounds computed directly from the tangent spaces as a cross-check.

use serde_json::{json, Value};

use crate::certify::{Certificate, CertifiedBool, PowerSearch};
use crate::closure::closure_colon;
use crate::error::{Error, Result};
use crate::ideals::{colon_loewy_length, ideal_product, loewy_search, maximal_power, monomial_intersection, Ideal};
use crate::io::{ideal_to_json, matrix_to_json};
use crate::localalg::{unit_vector, ModuleElement, Poly};
use crate::matrixops::{block_index, determinantal_ideal, pfaffian_sub_ideal, PolyMatrix, Structure};
use crate::tangent::{
    ann_coker_minimal_power, chain_bounds, check_compatibility, conjugation_trace_obstruction, relative_coker_contains_power,
    relative_t1_minimal_power, t1_minimal_power, GroupAction, GroupKind, SigmaSpace,
};

pub const DEFAULT_N_MAX: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotFinitelyDetermined { reason: String },
    Bounds { lower: u32, upper: u32 },
    /// The upper bound search exhausted the budget.
    Inconclusive { budget: u32, lower: Option<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        }
    }
}

/// One numeric bound with the computation behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub kind: BoundKind,
    /// `None` when the search for the Loewy length ran out of budget.
    pub value: Option<u32>,
    pub rule: String,
    pub ideal: Option<Ideal>,
    /// Loewy length used; `None` if it exceeds the budget.
    pub loewy_length: Option<u32>,
    pub truncation: Option<u32>,
    pub method: String,
}

/// Bounds computed straight from the tangent spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    pub truncation: Option<u32>,
    /// Whether the oracle and the reported bounds overlap.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminacyReport {
    pub matrix: PolyMatrix,
    pub group: GroupAction,
    pub sigma: String,
    pub n_max: u32,
    pub verdict: Verdict,
    pub certificates: Vec<BoundCertificate>,
    pub oracle: Option<OracleBounds>,
    pub notes: Vec<String>,
}

impl DeterminacyReport {
    pub fn lower(&self) -> Option<u32> {
        match self.verdict {
            Verdict::Bounds { lower, .. } => Some(lower),
            Verdict::Inconclusive { lower, .. } => lower,
            Verdict::NotFinitelyDetermined { .. } => None,
        }
    }

    pub fn upper(&self) -> Option<u32> {
        match self.verdict {
            Verdict::Bounds { upper, .. } => Some(upper),
            _ => None,
        }
    }

    pub fn is_not_finitely_determined(&self) -> bool {
        matches!(self.verdict, Verdict::NotFinitelyDetermined { .. })
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let verdict = match &self.verdict {
            Verdict::NotFinitelyDetermined { reason } => json!({ "kind": "not_finitely_determined", "reason": reason }),
            Verdict::Bounds { lower, upper } => json!({ "kind": "bounds", "lower": lower, "upper": upper }),
            Verdict::Inconclusive { budget, lower } => json!({ "kind": "inconclusive", "budget": budget, "lower": lower }),
        };
        let mut truncations: Vec<u32> = self.certificates.iter().filter_map(|c| c.truncation).collect();
        truncations.extend(self.oracle.as_ref().and_then(|o| o.truncation));
        truncations.sort_unstable();
        truncations.dedup();
        json!({
            "input": {
                "matrix": matrix_to_json(names, &self.matrix),
                "group": self.group.kind.name(),
                "unipotent": self.group.unipotent,
                "sigma": self.sigma,
                "p": self.matrix.nvars(),
                "n_max": self.n_max,
                "truncations": truncations,
            },
            "verdict": verdict,
            "certificates": self.certificates.iter().map(|c| certificate_json(c, names)).collect::<Vec<_>>(),
            "oracle": self.oracle.as_ref().map(|o| json!({
                "lower": o.lower,
                "upper": o.upper,
                "truncation": o.truncation,
                "consistent": o.consistent,
            })),
            "notes": self.notes,
        })
    }
}

fn certificate_json(c: &BoundCertificate, names: &[String]) -> Value {
    json!({
        "bound": c.kind.name(),
        "value": c.value,
        "rule": c.rule,
        "ideal": c.ideal.as_ref().map(|i| ideal_to_json(names, i)["generators"].clone()),
        "loewy_length": c.loewy_length,
        "truncation": c.truncation,
        "method": c.method,
    })
}

fn method_name(c: &Certificate) -> String {
    match c {
        Certificate::Immediate(why) => format!("immediate ({why})"),
        Certificate::Combinatorial => "monomial divisibility".into(),
        Certificate::Nakayama { degree } => format!("jets with Nakayama lift at degree {degree}"),
        Certificate::PolynomialIdentity { degree } => format!("explicit combination of degree <= {degree}"),
        Certificate::LocalIdentity { degree } => format!("combination with unit denominators of degree <= {degree}"),
        Certificate::Witness(_) => "witness outside the target".into(),
    }
}

/// Collects certificates and notes while a report is assembled.
struct Builder {
    n_max: u32,
    certificates: Vec<BoundCertificate>,
    notes: Vec<String>,
    negative: Option<String>,
}

impl Builder {
    fn new(n_max: u32) -> Self {
        Builder { n_max, certificates: Vec::new(), notes: Vec::new(), negative: None }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn negative(&mut self, reason: impl Into<String>) {
        if self.negative.is_none() {
            self.negative = Some(reason.into());
        }
    }

    /// Records `ll - shift` from a Loewy-length search as a bound. A lower
    /// bound survives an exhausted search as `ll - shift > n_max - shift`.
    fn from_search(&mut self, kind: BoundKind, rule: &str, ideal: Option<Ideal>, search: &PowerSearch, shift: u32) {
        let (ll, proof) = match search {
            PowerSearch::Found { n, proof } => (Some(*n), proof),
            PowerSearch::Exceeds { refutation, .. } => (None, refutation),
        };
        let value = match (kind, ll) {
            (_, Some(n)) => Some(n.saturating_sub(shift)),
            (BoundKind::Lower, None) => Some((self.n_max + 1).saturating_sub(shift)),
            (BoundKind::Upper, None) => None,
        };
        let method = match ll {
            Some(_) => method_name(&proof.certificate),
            None => format!("Loewy length exceeds the budget {}", self.n_max),
        };
        self.certificates.push(BoundCertificate {
            kind,
            value,
            rule: rule.into(),
            ideal,
            loewy_length: ll,
            truncation: Some(proof.truncation),
            method,
        });
    }

    fn exact(&mut self, kind: BoundKind, value: u32, rule: &str, method: &str) {
        self.certificates.push(BoundCertificate {
            kind,
            value: Some(value),
            rule: rule.into(),
            ideal: None,
            loewy_length: None,
            truncation: None,
            method: method.into(),
        });
    }

    fn best(&self, kind: BoundKind) -> Option<u32> {
        let values = self.certificates.iter().filter(|c| c.kind == kind).filter_map(|c| c.value);
        match kind {
            BoundKind::Lower => values.max(),
            BoundKind::Upper => values.min(),
        }
    }

    fn verdict(&self) -> Result<Verdict> {
        if let Some(reason) = &self.negative {
            return Ok(Verdict::NotFinitelyDetermined { reason: reason.clone() });
        }
        let lower = self.best(BoundKind::Lower);
        match self.best(BoundKind::Upper) {
            None => Ok(Verdict::Inconclusive { budget: self.n_max, lower }),
            Some(upper) => {
                let lower = lower.unwrap_or(0);
                if lower > upper {
                    return Err(Error::Internal(format!("lower bound {lower} exceeds upper bound {upper}")));
                }
                Ok(Verdict::Bounds { lower, upper })
            }
        }
    }
}

fn is_full(s: &SigmaSpace) -> bool {
    matches!(s, SigmaSpace::Full)
}

/// `ord(I_j)`: least order of a generator; `None` for the zero ideal.
fn ideal_order(i: &Ideal) -> Option<u32> {
    i.generators().iter().filter_map(Poly::order).min()
}

/// A deformation of `A` inside Σ of smaller rank is never in the orbit.
/// For `p = 1` the last invariant factor `t^v` can be removed, otherwise
/// the deformation to `0` is used.
fn rank_drop(a: &PolyMatrix, s: &SigmaSpace, b: &mut Builder) {
    if a.is_zero() {
        return;
    }
    if a.nvars() == 1 && matches!(s, SigmaSpace::Full | SigmaSpace::Sym | SigmaSpace::Skew) {
        let r = crate::dvr::exact_rank(a);
        let top = ideal_order(&determinantal_ideal(a, r as i64)).expect("rank-r minors are nonzero");
        let below = ideal_order(&determinantal_ideal(a, r as i64 - 1)).expect("nonzero");
        b.exact(BoundKind::Lower, top - below, "largest invariant factor valuation", "removing the last invariant factor lowers the rank");
    } else {
        let o = a.entries().iter().filter_map(Poly::order).min().expect("nonzero matrix");
        b.exact(BoundKind::Lower, o, "least order of an entry", "the zero matrix agrees with A to that order");
    }
}

/// `ll(Ī_top : Ī_below) - 1` as a lower bound; non-primary colons are negative.
fn closure_colon_lower(top: &Ideal, below: &Ideal, rule: &str, b: &mut Builder) -> Result<()> {
    if top.is_zero() {
        b.negative(format!("{rule}: the top determinantal ideal is zero, so the annihilator of T¹ is zero"));
        return Ok(());
    }
    if !(top.is_monomial() && (below.is_monomial() || below.is_zero())) {
        b.note(format!("{rule}: determinantal ideals are not monomial; this lower bound is unavailable"));
        return Ok(());
    }
    let colon = closure_colon(top, below)?;
    bound_from_ideal(colon, BoundKind::Lower, rule, 1, b);
    Ok(())
}

/// Uses `ll(I) - shift`; a monomial `I` that is not `m`-primary is negative
/// when used as a lower bound.
fn bound_from_ideal(i: Ideal, kind: BoundKind, rule: &str, shift: u32, b: &mut Builder) {
    let primary = i.monomials().map(|g| (0..i.nvars()).all(|v| g.iter().any(|u| u.support().all(|s| s == v))));
    if kind == BoundKind::Lower && primary == Some(false) {
        b.negative(format!("{rule}: the ideal is not m-primary, so ann(T¹) is not m-primary"));
        return;
    }
    let search = loewy_search(&i, b.n_max);
    b.from_search(kind, rule, Some(i), &search, shift);
}

/// Bounds from the tangent spaces alone: `ll(ann T¹_G) - 1` and `ll(ann T¹_{G^(m)}) - 1`.
fn oracle_bounds(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, n_max: u32) -> Result<(Option<u32>, Option<u32>, Option<u32>)> {
    let lower = t1_minimal_power(a, g, s, n_max)?;
    let upper = t1_minimal_power(a, GroupAction::unipotent(g.kind), s, n_max)?;
    let truncation = match (&lower, &upper) {
        (PowerSearch::Found { proof, .. }, _) | (_, PowerSearch::Found { proof, .. }) => Some(proof.truncation),
        _ => None,
    };
    let lower = Some(lower.value().map_or(n_max, |n| n.saturating_sub(1)));
    Ok((lower, upper.value().map(|n| n.saturating_sub(1)), truncation))
}

fn oracle_only(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, b: &mut Builder) -> Result<()> {
    let lower = t1_minimal_power(a, g, s, b.n_max)?;
    b.from_search(BoundKind::Lower, "ll(ann T¹) - 1", None, &lower, 1);
    let upper = t1_minimal_power(a, GroupAction::unipotent(g.kind), s, b.n_max)?;
    b.from_search(BoundKind::Upper, "ll(ann T¹ for the unipotent subgroup) - 1", None, &upper, 1);
    Ok(())
}

fn gr_bounds(a: &PolyMatrix, b: &mut Builder) -> Result<()> {
    let (m, n, p) = (a.rows(), a.cols(), a.nvars());
    if m > n {
        b.negative("m > n: the cokernel has positive rank, so ann(T¹) = ann.coker(A) = 0");
        return Ok(());
    }
    if p > n - m + 1 && a.in_maximal_ideal() {
        b.negative(format!(
            "p = {p} > n - m + 1 = {} and A ≡ 0 mod m: no such matrix is finitely G_r-determined",
            n - m + 1
        ));
        return Ok(());
    }
    let top = determinantal_ideal(a, m as i64);
    if top.is_zero() {
        b.negative("I_m(A) = 0: the cokernel has positive rank");
        return Ok(());
    }
    let below = determinantal_ideal(a, m as i64 - 1);
    if top.is_monomial() && below.is_monomial() {
        let colon = closure_colon(&top, &below)?;
        let primary = colon.monomials().is_some_and(|g| (0..p).all(|v| g.iter().any(|u| u.support().all(|s| s == v))));
        if !primary {
            b.negative("ann.coker(A) lies in closure(I_m) : closure(I_{m-1}), which is not m-primary");
            return Ok(());
        }
    }
    let lower = ann_coker_minimal_power(a, false, b.n_max)?;
    b.from_search(BoundKind::Lower, "ll(ann.coker(A)) - 1", None, &lower, 1);
    let upper = ann_coker_minimal_power(a, true, b.n_max)?;
    b.from_search(BoundKind::Upper, "ll(ann.coker(A restricted to m R^n)) - 1", None, &upper, 1);
    Ok(())
}

fn glr_bounds(a: &PolyMatrix, b: &mut Builder) -> Result<()> {
    let (m, n, p) = (a.rows(), a.cols(), a.nvars());
    if p > n - m + 1 && a.in_maximal_ideal() {
        b.negative(format!(
            "p = {p} > n - m + 1 = {} and A ≡ 0 mod m: no such matrix is finitely G_lr-determined",
            n - m + 1
        ));
        return Ok(());
    }
    let top = determinantal_ideal(a, m as i64);
    let below = determinantal_ideal(a, m as i64 - 1);
    closure_colon_lower(&top, &below, "ll(closure(I_m) : closure(I_{m-1})) - 1", b)?;
    if b.negative.is_some() {
        return Ok(());
    }
    let upper = ann_coker_minimal_power(a, true, b.n_max)?;
    b.from_search(BoundKind::Upper, "ll(ann.coker(A restricted to m R^n)) - 1", None, &upper, 1);
    Ok(())
}

/// Congruence with symmetric Σ or skew Σ of even size.
fn congr_even_bounds(a: &PolyMatrix, skew: bool, b: &mut Builder) -> Result<()> {
    let (m, p) = (a.rows(), a.nvars());
    let corank = m - a.constant_rank();
    let shape = if skew { "skew-symmetric of even size" } else { "symmetric" };
    if corank == 0 {
        b.exact(BoundKind::Upper, 0, "A(0) is invertible", "every deformation with the same constant part is congruent to A");
        return Ok(());
    }
    if p > 1 {
        if a.in_maximal_ideal() {
            b.negative(format!("p = {p} > 1 and A ≡ 0 mod m: no {shape} matrix with entries in m is finitely determined"));
        } else {
            b.negative(format!(
                "p = {p} > 1: A is congruent to an invertible constant block plus a {corank}x{corank} {shape} block with entries in m, which is not finitely determined"
            ));
        }
        return Ok(());
    }
    let top = determinantal_ideal(a, m as i64);
    if top.is_zero() {
        b.negative("det(A) = 0 is a zero divisor");
        return Ok(());
    }
    let below = determinantal_ideal(a, m as i64 - 1);
    closure_colon_lower(&top, &below, "ll(closure(I_m) : closure(I_{m-1})) - 1", b)?;
    let (ll, proof) = colon_loewy_length(&top, &below, b.n_max)?;
    let search = match ll.finite() {
        Some(n) => PowerSearch::Found { n, proof },
        None => PowerSearch::Exceeds { n_max: b.n_max, refutation: proof },
    };
    b.from_search(BoundKind::Upper, "ll(I_m : I_{m-1})", None, &search, 0);
    b.note("the upper bound ll(I_m : I_{m-1}) is used without subtracting one");
    Ok(())
}

fn congr_odd_skew_bounds(a: &PolyMatrix, b: &mut Builder) -> Result<()> {
    let (m, p) = (a.rows(), a.nvars());
    if m == 1 {
        b.exact(BoundKind::Upper, 0, "Σ = 0", "the only skew-symmetric 1x1 matrix is zero");
        return Ok(());
    }
    if p > 3 {
        b.negative(format!(
            "p = {p} > 3: A splits off an odd-size skew-symmetric block with entries in m, which is not finitely determined"
        ));
        return Ok(());
    }
    let top = determinantal_ideal(a, m as i64 - 1);
    let below = determinantal_ideal(a, m as i64 - 2);
    closure_colon_lower(&top, &below, "ll(closure(I_{m-1}) : closure(I_{m-2})) - 1", b)?;
    if b.negative.is_some() {
        return Ok(());
    }
    let pf = pfaffian_sub_ideal(a)?;
    let search = loewy_search(&pf, b.n_max);
    b.from_search(BoundKind::Upper, "ll(Pf_{m-1}(A))", Some(pf), &search, 0);
    Ok(())
}

/// The diagonal blocks `A_ii` of an upper-block-triangular matrix.
fn diagonal_blocks(a: &PolyMatrix) -> Vec<PolyMatrix> {
    let Structure::UpperBlockTriangular { row_blocks, col_blocks } = a.structure() else {
        return Vec::new();
    };
    let (rb, cb) = (block_index(row_blocks), block_index(col_blocks));
    (0..row_blocks.len().min(col_blocks.len()))
        .map(|k| {
            let rows: Vec<usize> = (0..a.rows()).filter(|&i| rb[i] == k).collect();
            let cols: Vec<usize> = (0..a.cols()).filter(|&j| cb[j] == k).collect();
            a.submatrix(&rows, &cols)
        })
        .collect()
}

fn glr_up_bounds(a: &PolyMatrix, s: &SigmaSpace, b: &mut Builder) -> Result<()> {
    let p = a.nvars();
    let blocks = diagonal_blocks(a);
    if a.in_maximal_ideal() {
        if let Some(blk) = blocks.iter().find(|d| d.rows() <= d.cols() && p > d.cols() - d.rows() + 1) {
            b.negative(format!(
                "A ≡ 0 mod m and p = {p} exceeds n_i - m_i + 1 = {} for a diagonal block",
                blk.cols() - blk.rows() + 1
            ));
            return Ok(());
        }
    }
    // ann T¹ ⊆ ∩_i (closure(I_{m_i}(A_ii)) : closure(I_{m_i - 1}(A_ii)))
    let mut inter: Option<Ideal> = None;
    let mut available = true;
    for d in &blocks {
        let k = d.rows().min(d.cols()) as i64;
        let (top, below) = (determinantal_ideal(d, d.rows() as i64), determinantal_ideal(d, k - 1));
        if top.is_zero() {
            b.negative("a diagonal block has zero maximal minors");
            return Ok(());
        }
        if !(top.is_monomial() && below.is_monomial()) {
            available = false;
            break;
        }
        let c = closure_colon(&top, &below)?;
        inter = Some(match inter {
            None => c,
            Some(prev) => monomial_intersection(&prev, &c)?,
        });
    }
    match inter.filter(|_| available) {
        Some(i) => bound_from_ideal(i, BoundKind::Lower, "ll(∩ closure(I_{m_i}(A_ii)) : closure(I_{m_i-1}(A_ii))) - 1", 1, b),
        None => b.note("diagonal block ideals are not monomial; the closure lower bound is unavailable"),
    }
    if b.negative.is_some() {
        return Ok(());
    }
    // ∏ ann.coker(A_ii) ⊆ ann T¹, and m ann T¹ ⊆ ann T¹ of the unipotent subgroup
    let mut total = Some(0u32);
    let mut truncation = 0;
    for d in &blocks {
        match ann_coker_minimal_power(d, false, b.n_max)? {
            PowerSearch::Found { n, proof } => {
                total = total.map(|t| t + n);
                truncation = truncation.max(proof.truncation);
            }
            PowerSearch::Exceeds { .. } => total = None,
        }
    }
    if let Some(t) = total {
        b.certificates.push(BoundCertificate {
            kind: BoundKind::Upper,
            value: Some(t),
            rule: "Σ_i ll(ann.coker(A_ii))".into(),
            ideal: None,
            loewy_length: Some(t + 1),
            truncation: Some(truncation),
            method: "conjunction of certified block tests".into(),
        });
    }
    let upper = t1_minimal_power(a, GroupAction::unipotent(GroupKind::GlrUp), s, b.n_max)?;
    b.from_search(BoundKind::Upper, "ll(ann T¹ for the unipotent subgroup) - 1", None, &upper, 1);
    Ok(())
}

/// Verdict and bounds on `ord^Σ_G(A)`, searching Loewy lengths up to `n_max`.
pub fn report(a: &PolyMatrix, g: GroupAction, s: &SigmaSpace, n_max: u32) -> Result<DeterminacyReport> {
    check_compatibility(a, g, s)?;
    if let SigmaSpace::Shifted { .. } = s {
        return Err(Error::Incompatible("shifted Σ is handled by the relative report".into()));
    }
    let mut b = Builder::new(n_max);
    let p = a.nvars();
    let mut oracle_wanted = true;
    if p == 0 {
        b.exact(BoundKind::Upper, 0, "p = 0", "over a field the jet of order 0 is the matrix itself");
        b.note("p = 0 is outside the modeled range of local rings of positive dimension");
        oracle_wanted = false;
    } else if g.unipotent {
        // the unipotent subgroup of G^(m) is itself, so both bounds coincide
        let search = t1_minimal_power(a, g, s, n_max)?;
        b.from_search(BoundKind::Lower, "ll(ann T¹) - 1", None, &search, 1);
        b.from_search(BoundKind::Upper, "ll(ann T¹) - 1", None, &search, 1);
        oracle_wanted = false;
    } else {
        match (g.kind, s) {
            (GroupKind::Gr, s) if is_full(s) => gr_bounds(a, &mut b)?,
            (GroupKind::Gl, s) if is_full(s) => {
                b.note("G_l acts on A as G_r acts on the transpose");
                gr_bounds(&a.transpose(), &mut b)?
            }
            (GroupKind::Glr, s) if is_full(s) => {
                if a.rows() > a.cols() {
                    b.note("m > n: bounds computed for the transpose");
                    glr_bounds(&a.transpose(), &mut b)?
                } else {
                    glr_bounds(a, &mut b)?
                }
            }
            (GroupKind::Gcongr, SigmaSpace::Full) => {
                b.negative("full Σ under congruence: ann(T¹) ⊆ m^∞ = 0 for p > 0");
            }
            (GroupKind::Gcongr, SigmaSpace::Sym) => congr_even_bounds(a, false, &mut b)?,
            (GroupKind::Gcongr, SigmaSpace::Skew) if a.rows() % 2 == 0 => congr_even_bounds(a, true, &mut b)?,
            (GroupKind::Gcongr, SigmaSpace::Skew) => congr_odd_skew_bounds(a, &mut b)?,
            (GroupKind::Gconj, _) => {
                b.negative("conjugation: every tangent vector E A - A E is traceless, so ann(T¹) ⊆ m^∞ = 0 for p > 0");
                let obstructed = conjugation_trace_obstruction(a, 3)?;
                b.note(format!("identity matrix outside the conjugation tangent space modulo m^3: {obstructed}"));
            }
            (GroupKind::GrUp, SigmaSpace::Upper { .. }) => {
                let lower = ann_coker_minimal_power(a, false, n_max)?;
                b.from_search(BoundKind::Lower, "ll(ann.coker(A)) - 1", None, &lower, 1);
                let upper = t1_minimal_power(a, GroupAction::unipotent(GroupKind::GrUp), s, n_max)?;
                b.from_search(BoundKind::Upper, "ll(ann T¹ for the unipotent subgroup) - 1", None, &upper, 1);
            }
            (GroupKind::GlrUp, SigmaSpace::Upper { .. }) => glr_up_bounds(a, s, &mut b)?,
            _ => {
                b.note("no closed-form rule for this combination; bounds come from the tangent spaces");
                oracle_only(a, g, s, &mut b)?;
                oracle_wanted = false;
            }
        }
        if b.negative.is_none() {
            rank_drop(a, s, &mut b);
        }
    }
    let verdict = b.verdict()?;
    let oracle = match (&verdict, oracle_wanted) {
        (Verdict::NotFinitelyDetermined { .. }, _) | (_, false) => None,
        _ => {
            let (lower, upper, truncation) = oracle_bounds(a, g, s, n_max)?;
            let (vl, vu) = match verdict {
                Verdict::Bounds { lower, upper } => (Some(lower), Some(upper)),
                Verdict::Inconclusive { lower, .. } => (lower, None),
                Verdict::NotFinitelyDetermined { .. } => unreachable!(),
            };
            let consistent = !matches!((vl, upper), (Some(x), Some(y)) if x > y)
                && !matches!((lower, vu), (Some(x), Some(y)) if x > y);
            Some(OracleBounds { lower, upper, truncation, consistent })
        }
    };
    b.note("the formal ring k[[x]] has m^∞ = 0, so finite and infinite determinacy are not distinguished");
    Ok(DeterminacyReport {
        matrix: a.clone(),
        group: g,
        sigma: s.name(),
        n_max,
        verdict,
        certificates: b.certificates,
        oracle,
        notes: b.notes,
    })
}

fn undecided_to_none(r: Result<PowerSearch>, b: &mut Builder, what: &str) -> Result<Option<PowerSearch>> {
    match r {
        Ok(s) => Ok(Some(s)),
        Err(Error::Undecided { max_truncation }) => {
            b.note(format!("{what}: containment undecided up to truncation {max_truncation}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn relative_module_search(a: &PolyMatrix, j: &Ideal, n_max: u32) -> Result<PowerSearch> {
    let mut last = None;
    for n in 0..=n_max {
        let answer = relative_coker_contains_power(a, j, n)?;
        if answer.value {
            return Ok(PowerSearch::Found { n, proof: answer });
        }
        last = Some(answer);
    }
    Ok(PowerSearch::Exceeds { n_max, refutation: last.expect("nonempty range") })
}

/// Least `q <= n_max` with `J^q R^m ⊆ Im(A)`.
fn power_into_image(a: &PolyMatrix, j: &Ideal, n_max: u32) -> Result<Option<u32>> {
    let nvars = a.nvars();
    let m = a.rows();
    let base: Vec<ModuleElement> = (0..m).map(|c| unit_vector(nvars, m, c)).collect();
    let cols: Vec<ModuleElement> = (0..a.cols()).map(|c| a.col_vec(c)).collect();
    let mut power = Ideal::unit(nvars);
    for q in 0..=n_max {
        let sub: Vec<ModuleElement> =
            power.generators().iter().flat_map(|f| base.iter().map(move |e| e.iter().map(|p| p * f).collect())).collect();
        match crate::certify::submodule_in(nvars, m, &sub, &cols, Some(&base), 1 + power.max_degree()) {
            Ok(c) if c.value => return Ok(Some(q)),
            Ok(_) | Err(Error::Undecided { .. }) => {}
            Err(e) => return Err(e),
        }
        power = ideal_product(&power, j)?;
    }
    Ok(None)
}

/// Determinacy relative to `Σ^(J) = Σ ∩ (A + Mat(J))` and the subgroup
/// `G^(I)` (all of `G` when `group_ideal` is absent).
pub fn relative_report(
    a: &PolyMatrix,
    g: GroupAction,
    s_base: &SigmaSpace,
    j: &Ideal,
    group_ideal: Option<&Ideal>,
    n_max: u32,
) -> Result<DeterminacyReport> {
    let s = s_base.clone().shifted(j.clone());
    check_compatibility(a, g, &s)?;
    let mut b = Builder::new(n_max);
    let nvars = a.nvars();
    let lower = undecided_to_none(relative_t1_minimal_power(a, g, &s, group_ideal, n_max), &mut b, "ll(ann T¹)")?;
    if let Some(lower) = &lower {
        b.from_search(BoundKind::Lower, "ll(ann T¹ of Σ^(J)) - 1", None, lower, 1);
    }
    if g.kind == GroupKind::Gr && group_ideal.is_none() && is_full(s_base) {
        // the same annihilator through the image of A in R^m
        let module = undecided_to_none(relative_module_search(a, j, n_max), &mut b, "ll(ann.coker(A) : J)")?;
        if let (Some(x), Some(y)) = (&lower, &module) {
            if x.value() != y.value() {
                return Err(Error::Internal(format!(
                    "relative annihilator routes disagree: matrix module {:?}, image {:?}",
                    x.value(),
                    y.value()
                )));
            }
        }
        if let Some(module) = &module {
            b.from_search(BoundKind::Lower, "ll(ann.coker(A) : J) - 1", None, module, 1);
        }
        if let Some(q) = power_into_image(a, j, n_max)? {
            b.note(format!("J^{q} ⊆ ann.coker(A), hence A + Mat(J^(k+{q})) ⊆ G_r^(J^k) A for every k >= 0"));
        }
    }
    let m_ideal = maximal_power(nvars, 1);
    let smaller = match group_ideal {
        Some(i) => ideal_product(i, &m_ideal)?,
        None => m_ideal,
    };
    let upper = undecided_to_none(relative_t1_minimal_power(a, g, &s, Some(&smaller), n_max), &mut b, "ll(ann T¹, unipotent)")?;
    if let Some(upper) = &upper {
        b.from_search(BoundKind::Upper, "ll(ann T¹ of Σ^(J) for the m-multiplied subgroup) - 1", None, upper, 1);
    }
    b.note("relative determinacy: deformations restricted to A + Mat(J)");
    let verdict = b.verdict()?;
    Ok(DeterminacyReport {
        matrix: a.clone(),
        group: g,
        sigma: s.name(),
        n_max,
        verdict,
        certificates: b.certificates,
        oracle: None,
        notes: b.notes,
    })
}

/// Where `(m, n, p, G, Σ)` falls in the finite-determinacy dichotomies.
pub fn genericity_note(m: usize, n: usize, p: usize, g: GroupKind, s: &SigmaSpace) -> String {
    if p == 0 {
        return "p = 0: the ring is a field, outside the modeled range".into();
    }
    let generic = "generic finite determinacy holds";
    let negative = "no matrix with entries in m is finitely determined";
    let by_excess = |m: usize, n: usize| {
        if p <= n - m + 1 {
            format!("{generic} (p = {p} <= n - m + 1 = {})", n - m + 1)
        } else {
            format!("{negative} (p = {p} > n - m + 1 = {})", n - m + 1)
        }
    };
    match g {
        GroupKind::Gr if m > n => "no matrix is finitely G_r-determined: the cokernel has positive rank".into(),
        GroupKind::Gr => by_excess(m, n),
        GroupKind::Glr if m <= n => by_excess(m, n),
        GroupKind::Glr => by_excess(n, m),
        GroupKind::Gl if m < n => "no matrix is finitely G_l-determined: the row module has rank below n".into(),
        GroupKind::Gl => by_excess(n, m),
        GroupKind::Gcongr => match s {
            SigmaSpace::Sym => if p <= 1 { generic.into() } else { format!("{negative} (p = {p} > 1)") },
            SigmaSpace::Skew if m % 2 == 0 => if p <= 1 { generic.into() } else { format!("{negative} (p = {p} > 1)") },
            SigmaSpace::Skew => if p <= 3 { generic.into() } else { format!("{negative} (p = {p} > 3)") },
            _ => "no matrix is finitely determined under congruence with full Σ".into(),
        },
        GroupKind::Gconj => "no matrix is finitely determined under conjugation".into(),
        GroupKind::GrUp | GroupKind::GlrUp => "decided block by block; see the diagonal blocks".into(),
    }
}

/// Bounds for a chain of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub maps: Vec<PolyMatrix>,
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    pub outer_ideal: Option<Ideal>,
    pub truncation: u32,
    pub n_max: u32,
}

impl ChainReport {
    pub fn to_json(&self, names: &[String]) -> Value {
        json!({
            "maps": self.maps.iter().map(|a| a.to_strings(names)).collect::<Vec<_>>(),
            "lower": self.lower,
            "upper": self.upper,
            "outer_ideal": self.outer_ideal.as_ref().map(|i| i.to_strings(names)),
            "truncation": self.truncation,
            "n_max": self.n_max,
        })
    }
}

pub fn chain_report(maps: &[PolyMatrix], n_max: u32) -> Result<ChainReport> {
    let cb = chain_bounds(maps, n_max)?;
    let truncation = match &cb.lower {
        PowerSearch::Found { proof, .. } => proof.truncation,
        PowerSearch::Exceeds { refutation, .. } => refutation.truncation,
    };
    let upper = cb.lower.value().map(|n| n.saturating_sub(1));
    let lower = match &cb.upper {
        Some(i) if !i.is_zero() => loewy_search(i, n_max).value().map(|n| n.saturating_sub(1)),
        _ => None,
    };
    Ok(ChainReport { maps: maps.to_vec(), lower, upper, outer_ideal: cb.upper, truncation, n_max })
}

/// `m^N ⊆ I` for an explicit ideal, as used by the `loewy` command.
pub fn loewy_certificate(i: &Ideal, n_max: u32) -> (Option<u32>, CertifiedBool) {
    match loewy_search(i, n_max) {
        PowerSearch::Found { n, proof } => (Some(n), proof),
        PowerSearch::Exceeds { refutation, .. } => (None, refutation),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::poly_parse;

    fn mat(nvars: usize, rows: &[&[&str]]) -> PolyMatrix {
        let names: Vec<String> = ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect();
        PolyMatrix::general(nvars, rows.iter().map(|r| r.iter().map(|s| poly_parse(s, &names).unwrap()).collect()).collect())
            .unwrap()
    }

    #[test]
    fn worked_example_glr() {
        let a = mat(2, &[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
        let r = report(&a, GroupAction::new(GroupKind::Glr), &SigmaSpace::Full, 16).unwrap();
        assert_eq!(r.lower(), Some(4));
        let restricted = ann_coker_minimal_power(&a, true, 16).unwrap().value().unwrap();
        assert_eq!(r.upper(), Some(restricted - 1));
        assert!(r.oracle.as_ref().unwrap().consistent);
    }

    #[test]
    fn full_rank_is_zero_determined() {
        let a = mat(2, &[&["1", "x", "y"], &["0", "1", "x*y"]]);
        let r = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Bounds { lower: 0, upper: 0 });
    }

    #[test]
    fn negativity() {
        let sym = mat(2, &[&["x", "y"], &["y", "x^2"]]).with_structure(Structure::Symmetric).unwrap();
        assert!(report(&sym, GroupAction::new(GroupKind::Gcongr), &SigmaSpace::Sym, 8).unwrap().is_not_finitely_determined());
        let any = mat(1, &[&["x", "1"], &["0", "x"]]);
        let conj = report(&any, GroupAction::new(GroupKind::Gconj), &SigmaSpace::Full, 8).unwrap();
        assert!(conj.is_not_finitely_determined());
        assert!(conj.notes.iter().any(|n| n.ends_with("true")));
        let zero_mod_m = mat(2, &[&["x", "y"], &["y^2", "x"]]);
        assert!(report(&zero_mod_m, GroupAction::new(GroupKind::Glr), &SigmaSpace::Full, 8).unwrap().is_not_finitely_determined());
        let wide = mat(2, &[&["x", "y", "0"]]);
        assert!(report(&wide, GroupAction::new(GroupKind::Gl), &SigmaSpace::Full, 8).unwrap().is_not_finitely_determined());
    }

    #[test]
    fn scalar_diagonal_family() {
        for k in 1..=3u32 {
            let t = Poly::var(1, 0).pow(k);
            let a = PolyMatrix::identity(1, 2).scale(&t).with_structure(Structure::Symmetric).unwrap();
            let r = report(&a, GroupAction::new(GroupKind::Gcongr), &SigmaSpace::Sym, 12).unwrap();
            assert_eq!(r.verdict, Verdict::Bounds { lower: k, upper: k });
            let gr = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 12).unwrap();
            assert_eq!(gr.verdict, Verdict::Bounds { lower: k, upper: k });
        }
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let a = mat(2, &[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
        let r = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 0).unwrap();
        assert!(matches!(r.verdict, Verdict::Inconclusive { budget: 0, .. }));
    }

    #[test]
    fn relative_diag() {
        let t = |k| Poly::var(1, 0).pow(k);
        let a = PolyMatrix::general(1, vec![vec![t(2), Poly::zero(1)], vec![Poly::zero(1), t(1)]]).unwrap();
        let j = Ideal::new(1, [t(1)]);
        let r = relative_report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, &j, None, 8).unwrap();
        assert_eq!(r.lower(), Some(0));
        assert!(r.certificates.iter().any(|c| c.loewy_length == Some(1)));
        assert!(r.notes.iter().any(|n| n.starts_with("J^2")));
        let unit = relative_report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, &Ideal::unit(1), None, 8).unwrap();
        let plain = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 8).unwrap();
        assert_eq!(unit.upper(), plain.upper());
    }

    #[test]
    fn genericity() {
        assert!(genericity_note(2, 3, 2, GroupKind::Gr, &SigmaSpace::Full).starts_with("generic"));
        assert!(genericity_note(2, 2, 3, GroupKind::Glr, &SigmaSpace::Full).starts_with("no matrix"));
        assert!(genericity_note(2, 2, 0, GroupKind::Glr, &SigmaSpace::Full).contains("field"));
    }

    #[test]
    fn json_is_deterministic() {
        let a = mat(2, &[&["x^2", "y"], &["0", "x"]]);
        let names = vec!["x".to_string(), "y".to_string()];
        let r1 = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 8).unwrap().to_json(&names).to_string();
        let r2 = report(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, 8).unwrap().to_json(&names).to_string();
        assert_eq!(r1, r2);
    }
}
