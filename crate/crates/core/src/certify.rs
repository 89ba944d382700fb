//! Exact containment decisions `M ⊆ L` for submodules of a free module
//! `R^r`, `R = k[[x_1..x_p]]`, using finitely many jets.
//!
//! Two certificates lift a truncated check to `R`:
//!
//! * If `M = m^N Φ` with `Φ` a free summand spanned by constant vectors and
//!   `L ⊆ Φ`, then `M ⊆ L + m^{N+1} R^r` already gives `M ⊆ L + m M` after
//!   projecting onto `Φ`, so Nakayama applies. The same truncation also gives
//!   exact negative answers.
//! * For arbitrary `M`, a truncation `T` with `M ⊆ L + m^T R^r` and
//!   `m^{T-1} Φ ⊆ L + m M + m^T R^r` forces `m^T Φ ⊆ L + m M`, hence
//!   `M ⊆ L + m M` and `M ⊆ L`. This needs `Φ / L` of finite length, so it is
//!   complemented by exact polynomial identities: `M ⊆ L` itself, or
//!   `M ⊆ L + m M` with bounded degrees. The latter holds in the local ring
//!   at the origin whenever `M ⊆ L` holds in `R`, so it covers targets that
//!   need unit denominators. Negative
//!   answers come from a generator of `M` outside `L + m^T R^r`, which exists
//!   for large `T` by Krull's intersection theorem.

use crate::error::{Error, Result};
use crate::localalg::{EchelonBuilder, JetContext, ModuleElement, ModuleSpan, Monomial, Poly, SparseVec};

/// Extra truncation degrees tried beyond the starting point before giving up.
pub const SEARCH_SLACK: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Settled without jets (zero submodule, unit ideal, ...).
    Immediate(&'static str),
    /// Exact monomial divisibility.
    Combinatorial,
    /// Containment modulo `m^{degree+1}` lifted to `R` by Nakayama's lemma.
    Nakayama { degree: u32 },
    /// Every generator is a polynomial combination of total degree `<= degree`.
    PolynomialIdentity { degree: u32 },
    /// `sub ⊆ sup + m sub` as an exact polynomial identity of degree `<= degree`,
    /// lifted by Nakayama's lemma. Covers targets that need unit denominators.
    LocalIdentity { degree: u32 },
    /// An element of the submodule that fails membership at the recorded truncation.
    Witness(ModuleElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedBool {
    pub value: bool,
    pub truncation: u32,
    pub certificate: Certificate,
}

impl CertifiedBool {
    pub fn yes(truncation: u32, certificate: Certificate) -> Self {
        CertifiedBool { value: true, truncation, certificate }
    }

    pub fn no(truncation: u32, witness: ModuleElement) -> Self {
        CertifiedBool { value: false, truncation, certificate: Certificate::Witness(witness) }
    }

    pub fn witness(&self) -> Option<&ModuleElement> {
        match &self.certificate {
            Certificate::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// Outcome of a search for the least `N` with `m^N Φ ⊆ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerSearch {
    Found { n: u32, proof: CertifiedBool },
    /// No `N <= n_max` works; `refutation` is the exact failure at `n_max`.
    Exceeds { n_max: u32, refutation: CertifiedBool },
}

impl PowerSearch {
    pub fn value(&self) -> Option<u32> {
        match self {
            PowerSearch::Found { n, .. } => Some(*n),
            PowerSearch::Exceeds { .. } => None,
        }
    }
}

fn max_degree(vs: &[ModuleElement]) -> u32 {
    vs.iter().flatten().filter_map(Poly::degree).max().unwrap_or(0)
}

fn is_zero_vector(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn check_shapes(nvars: usize, rank: usize, vs: &[ModuleElement]) -> Result<()> {
    for v in vs {
        if v.len() != rank {
            return Err(Error::Shape(format!("module element has {} components, expected {rank}", v.len())));
        }
        if let Some(p) = v.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::VariableCountMismatch { left: p.nvars(), right: nvars });
        }
    }
    Ok(())
}

/// The k-span of constant vectors, used to test `v ∈ Φ ⊗ R` coefficientwise.
struct ConstantSummand {
    echelon: EchelonBuilder,
}

impl ConstantSummand {
    fn new(base: &[ModuleElement]) -> Result<Self> {
        let mut echelon = EchelonBuilder::new();
        for b in base {
            if b.iter().any(|p| p.degree().is_some_and(|d| d > 0)) {
                return Err(Error::Internal("free summand generator is not constant".into()));
            }
            echelon.insert(&SparseVec::from_entries(
                b.iter().enumerate().map(|(c, p)| (c, p.constant_term())),
            ));
        }
        Ok(ConstantSummand { echelon })
    }

    fn contains(&self, v: &[Poly]) -> bool {
        let mut by_monomial: std::collections::BTreeMap<&Monomial, Vec<(usize, crate::Scalar)>> = Default::default();
        for (c, p) in v.iter().enumerate() {
            for (m, a) in p.terms() {
                by_monomial.entry(m).or_default().push((c, a.clone()));
            }
        }
        by_monomial.into_values().all(|e| self.echelon.contains(&SparseVec::from_entries(e)))
    }
}

/// Decides `m^n Φ ⊆ L`, where `Φ` is spanned by the constant vectors `base`
/// and `L` by `sup`.
pub fn power_in(
    nvars: usize,
    rank: usize,
    base: &[ModuleElement],
    n: u32,
    sup: &[ModuleElement],
) -> Result<CertifiedBool> {
    match minimal_power_between(nvars, rank, base, sup, n, n)? {
        PowerSearch::Found { proof, .. } => Ok(proof),
        PowerSearch::Exceeds { refutation, .. } => Ok(refutation),
    }
}

/// Least `N <= n_max` with `m^N Φ ⊆ L`.
pub fn minimal_power(
    nvars: usize,
    rank: usize,
    base: &[ModuleElement],
    sup: &[ModuleElement],
    n_max: u32,
) -> Result<PowerSearch> {
    minimal_power_between(nvars, rank, base, sup, 0, n_max)
}

fn minimal_power_between(
    nvars: usize,
    rank: usize,
    base: &[ModuleElement],
    sup: &[ModuleElement],
    n_min: u32,
    n_max: u32,
) -> Result<PowerSearch> {
    check_shapes(nvars, rank, base)?;
    check_shapes(nvars, rank, sup)?;
    let base: Vec<ModuleElement> = base.iter().filter(|b| !is_zero_vector(b)).cloned().collect();
    if base.is_empty() {
        return Ok(PowerSearch::Found {
            n: n_min,
            proof: CertifiedBool::yes(n_min + 1, Certificate::Immediate("zero submodule")),
        });
    }
    let summand = ConstantSummand::new(&base)?;
    if !sup.iter().all(|v| summand.contains(v)) {
        return minimal_power_general(nvars, rank, &base, sup, n_min, n_max);
    }
    // A single span at truncation D decides every N < D at once.
    let mut start = n_min;
    let mut d = (n_min + 1).max(4.min(n_max + 1));
    loop {
        d = d.min(n_max + 1);
        let ctx = JetContext::new(nvars, d);
        let mut span = ModuleSpan::new(&ctx, rank);
        for v in sup {
            span.add_generator(v);
        }
        let mut last_failure = None;
        for n in start..d {
            let failure = ctx
                .monomials_of_degree(n)
                .iter()
                .flat_map(|u| base.iter().map(move |b| (u, b)))
                .find(|(u, b)| !span.contains_shifted(u, b));
            match failure {
                None => {
                    return Ok(PowerSearch::Found {
                        n,
                        proof: CertifiedBool::yes(d, Certificate::Nakayama { degree: n }),
                    })
                }
                Some((u, b)) => last_failure = Some(b.iter().map(|p| p.mul_monomial(u)).collect()),
            }
        }
        if d == n_max + 1 {
            return Ok(PowerSearch::Exceeds {
                n_max,
                refutation: CertifiedBool::no(d, last_failure.expect("at least one degree tested")),
            });
        }
        start = d;
        d *= 2;
    }
}

fn minimal_power_general(
    nvars: usize,
    rank: usize,
    base: &[ModuleElement],
    sup: &[ModuleElement],
    n_min: u32,
    n_max: u32,
) -> Result<PowerSearch> {
    let mut last = None;
    for n in n_min..=n_max {
        let sub: Vec<ModuleElement> = Monomial::all_of_degree(nvars, n)
            .iter()
            .flat_map(|u| base.iter().map(move |b| b.iter().map(|p| p.mul_monomial(u)).collect()))
            .collect();
        let t0 = n + 1 + max_degree(sup);
        let answer = submodule_in(nvars, rank, &sub, sup, None, t0)?;
        if answer.value {
            return Ok(PowerSearch::Found { n, proof: answer });
        }
        last = Some(answer);
    }
    Ok(PowerSearch::Exceeds { n_max, refutation: last.expect("nonempty range") })
}

/// Decides `Span_R(sub) ⊆ Span_R(sup)` inside `R^rank`.
///
/// `phi` optionally names a free summand (constant generators) containing
/// both modules; it only affects when a positive answer can be certified.
/// The search starts at truncation `t0` and gives up after
/// [`SEARCH_SLACK`] further degrees with [`Error::Undecided`].
pub fn submodule_in(
    nvars: usize,
    rank: usize,
    sub: &[ModuleElement],
    sup: &[ModuleElement],
    phi: Option<&[ModuleElement]>,
    t0: u32,
) -> Result<CertifiedBool> {
    check_shapes(nvars, rank, sub)?;
    check_shapes(nvars, rank, sup)?;
    let sub: Vec<ModuleElement> = sub.iter().filter(|v| !is_zero_vector(v)).cloned().collect();
    let t0 = t0.max(1);
    if sub.is_empty() {
        return Ok(CertifiedBool::yes(t0, Certificate::Immediate("zero submodule")));
    }
    if rank == 1 && sup.iter().any(|v| v[0].is_unit()) {
        return Ok(CertifiedBool::yes(t0, Certificate::Immediate("unit ideal")));
    }
    let full: Vec<ModuleElement> = (0..rank).map(|c| crate::localalg::unit_vector(nvars, rank, c)).collect();
    let phi: &[ModuleElement] = match phi {
        Some(base) => {
            let summand = ConstantSummand::new(base)?;
            if sub.iter().chain(sup).all(|v| summand.contains(v)) {
                base
            } else {
                &full
            }
        }
        None => &full,
    };

    let bound = max_degree(&sub) + max_degree(sup);
    let ctx = JetContext::new(nvars, bound + 1);
    let mut exact = ModuleSpan::new(&ctx, rank);
    for v in sup {
        exact.add_generator_bounded(v, bound);
    }
    if sub.iter().all(|g| exact.contains(g)) {
        return Ok(CertifiedBool::yes(bound + 1, Certificate::PolynomialIdentity { degree: bound }));
    }

    for t in t0..=t0 + SEARCH_SLACK {
        let ctx = JetContext::new(nvars, t);
        let mut span = ModuleSpan::new(&ctx, rank);
        for v in sup {
            span.add_generator(v);
        }
        if let Some(g) = sub.iter().find(|g| !span.contains(g)) {
            return Ok(CertifiedBool::no(t, g.clone()));
        }
        for g in &sub {
            for i in 0..nvars {
                let var = Monomial::var(nvars, i);
                span.add_generator(&g.iter().map(|p| p.mul_monomial(&var)).collect::<Vec<_>>());
            }
        }
        let absorbed = ctx
            .monomials_of_degree(t - 1)
            .iter()
            .all(|u| phi.iter().all(|b| span.contains_shifted(u, b)));
        if absorbed {
            return Ok(CertifiedBool::yes(t, Certificate::Nakayama { degree: t - 1 }));
        }
        let degree = t + max_degree(sup);
        if local_identity(nvars, rank, &sub, sup, degree) {
            return Ok(CertifiedBool::yes(t, Certificate::LocalIdentity { degree }));
        }
    }
    Err(Error::Undecided { max_truncation: t0 + SEARCH_SLACK })
}

/// Whether every `g ∈ sub` is an exact combination of multiples of `sup`
/// and of `x_i sub`, all of degree `<= degree`.
fn local_identity(nvars: usize, rank: usize, sub: &[ModuleElement], sup: &[ModuleElement], degree: u32) -> bool {
    let ctx = JetContext::new(nvars, degree + 1);
    let mut span = ModuleSpan::new(&ctx, rank);
    for v in sup {
        span.add_generator_bounded(v, degree);
    }
    for g in sub {
        for i in 0..nvars {
            let var = Monomial::var(nvars, i);
            span.add_generator_bounded(&g.iter().map(|p| p.mul_monomial(&var)).collect::<Vec<_>>(), degree);
        }
    }
    sub.iter().all(|g| span.contains(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::{poly_parse, unit_vector};

    fn p(s: &str) -> Poly {
        poly_parse(s, &["x".to_string(), "y".to_string()]).unwrap()
    }

    fn ideal(gens: &[&str]) -> Vec<ModuleElement> {
        gens.iter().map(|g| vec![p(g)]).collect()
    }

    #[test]
    fn power_in_ideal() {
        let one = vec![unit_vector(2, 1, 0)];
        let i = ideal(&["x^2", "y^2"]);
        assert!(power_in(2, 1, &one, 3, &i).unwrap().value);
        let no = power_in(2, 1, &one, 2, &i).unwrap();
        assert!(!no.value);
        assert_eq!(no.witness().unwrap()[0], p("x*y"));
    }

    #[test]
    fn minimal_power_crosses_doubling_boundary() {
        let one = vec![unit_vector(2, 1, 0)];
        let i = ideal(&["x^9", "y^9", "x^4*y^4"]);
        // x^3 y^8 fails in degree 11; every degree-12 monomial is divisible
        let found = minimal_power(2, 1, &one, &i, 16).unwrap();
        assert_eq!(found.value(), Some(12));
        assert!(matches!(minimal_power(2, 1, &one, &ideal(&["x"]), 6).unwrap(), PowerSearch::Exceeds { .. }));
    }

    #[test]
    fn search_detects_unsound_shortcut() {
        // m (x) ⊆ (x^2 + y^3, x y)? x^2 is not in the ideal although it is
        // modulo m^3.
        let sub = ideal(&["x^2", "x*y"]);
        let sup = ideal(&["x^2 + y^3", "x*y"]);
        let ans = submodule_in(2, 1, &sub, &sup, None, 3).unwrap();
        assert!(!ans.value);
        assert_eq!(ans.witness().unwrap()[0], p("x^2"));
    }

    #[test]
    fn search_certifies_non_primary_target() {
        let sub = ideal(&["x^2", "x*y"]);
        let sup = ideal(&["x^2", "x*y + x^3"]);
        let ans = submodule_in(2, 1, &sub, &sup, None, 3).unwrap();
        assert!(ans.value);
    }

    #[test]
    fn unit_denominators() {
        // x e_1 = A (x, y^2) / (-3 - y - 3xy)
        let a = [vec![p("-3 - y - 3*x*y"), p("2*y^2")], vec![p("0"), p("-2*x")]];
        let sub = vec![vec![p("x"), p("0")], vec![p("0"), p("x")]];
        let ans = submodule_in(2, 2, &sub, &a, None, 3).unwrap();
        assert!(ans.value);
        assert!(matches!(ans.certificate, Certificate::LocalIdentity { .. }));
    }

    #[test]
    fn polynomial_identity_certificate() {
        let sub = ideal(&["x^2", "x*y"]);
        let sup = ideal(&["x^2 + y^5", "x*y", "y^4"]);
        assert!(submodule_in(2, 1, &sub, &sup, None, 3).unwrap().value);
    }
}
