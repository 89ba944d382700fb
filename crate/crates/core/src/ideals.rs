//! Ideals of the formal local ring and their Loewy lengths.

use std::fmt;

use crate::certify::{self, Certificate, CertifiedBool, PowerSearch};
use crate::error::{Error, Result};
use crate::localalg::{unit_vector, ModuleElement, Monomial, Poly};

/// A finitely generated ideal of `k[[x_1..x_p]]`.
///
/// Generators of the form `x^a * unit` are replaced by `x^a`; when every
/// generator has that form the ideal is stored as a minimal monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Poly>,
    monomials: Option<Vec<Monomial>>,
}

/// Result of a bounded Loewy-length search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoewyLength {
    Finite(u32),
    Exceeds(u32),
}

impl LoewyLength {
    pub fn finite(self) -> Option<u32> {
        match self {
            LoewyLength::Finite(n) => Some(n),
            LoewyLength::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for LoewyLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoewyLength::Finite(n) => write!(f, "{n}"),
            LoewyLength::Exceeds(n) => write!(f, ">{n}"),
        }
    }
}

pub(crate) fn minimalize(mut monos: Vec<Monomial>) -> Vec<Monomial> {
    monos.sort();
    monos.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in monos {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

impl Ideal {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Poly>) -> Self {
        let mut gens: Vec<Poly> = Vec::new();
        for g in generators {
            assert_eq!(g.nvars(), nvars, "generator variable count");
            if g.is_zero() {
                continue;
            }
            if g.is_unit() {
                return Self::unit(nvars);
            }
            // normalize the lowest term to coefficient one
            let lead = g.terms().next().map(|(_, c)| c.clone()).expect("nonzero");
            let g = g.scale(&lead.recip());
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let monos: Option<Vec<Monomial>> = gens.iter().map(Poly::monomial_generator).collect();
        match monos {
            Some(m) => Self::from_monomials(nvars, m),
            None => Ideal { nvars, generators: gens, monomials: None },
        }
    }

    pub fn from_monomials(nvars: usize, monos: impl IntoIterator<Item = Monomial>) -> Self {
        let monos = minimalize(monos.into_iter().collect());
        Ideal {
            nvars,
            generators: monos.iter().cloned().map(Poly::monomial).collect(),
            monomials: Some(monos),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Ideal { nvars, generators: Vec::new(), monomials: Some(Vec::new()) }
    }

    pub fn unit(nvars: usize) -> Self {
        Self::from_monomials(nvars, [Monomial::one(nvars)])
    }

    /// `m^k`, generated by all monomials of degree `k`.
    pub fn maximal_power(nvars: usize, k: u32) -> Self {
        Self::from_monomials(nvars, Monomial::all_of_degree(nvars, k))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Poly::is_unit)
    }

    pub fn is_monomial(&self) -> bool {
        self.monomials.is_some()
    }

    /// Minimal monomial generators, if this is a monomial ideal.
    pub fn monomials(&self) -> Option<&[Monomial]> {
        self.monomials.as_deref()
    }

    fn require_monomials(&self) -> Result<&[Monomial]> {
        self.monomials().ok_or(Error::NonMonomial)
    }

    /// Largest total degree of a generator (0 for the zero ideal).
    pub fn max_degree(&self) -> u32 {
        self.generators.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Generators as rank-one module elements.
    pub fn as_module(&self) -> Vec<ModuleElement> {
        self.generators.iter().map(|g| vec![g.clone()]).collect()
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> IdealDisplay<'a> {
        IdealDisplay { ideal: self, names }
    }

    /// Generators rendered in the polynomial grammar.
    pub fn to_strings(&self, names: &[String]) -> Vec<String> {
        self.generators.iter().map(|g| g.display(names).to_string()).collect()
    }

    /// Same ideal with a possibly different stored generating set.
    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// `other ⊆ self`, decided exactly.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        if let (Some(a), Some(b)) = (self.monomials(), other.monomials()) {
            return Ok(b.iter().all(|u| a.iter().any(|g| g.divides(u))));
        }
        let t0 = other.max_degree() + 1;
        Ok(certify::submodule_in(self.nvars, 1, &other.as_module(), &self.as_module(), None, t0)?.value)
    }

    pub fn contains(&self, f: &Poly) -> Result<CertifiedBool> {
        if let (Some(a), Some(u)) = (self.monomials(), f.monomial_generator()) {
            if a.iter().any(|g| g.divides(&u)) {
                return Ok(CertifiedBool::yes(u.degree() + 1, Certificate::Combinatorial));
            }
            return Ok(CertifiedBool::no(u.degree() + 1, vec![f.clone()]));
        }
        let t0 = f.degree().unwrap_or(0) + 1;
        certify::submodule_in(self.nvars, 1, &[vec![f.clone()]], &self.as_module(), None, t0)
    }
}

pub struct IdealDisplay<'a> {
    ideal: &'a Ideal,
    names: &'a [String],
}

impl fmt::Display for IdealDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ideal.is_zero() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, g) in self.ideal.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display(self.names))?;
        }
        write!(f, ")")
    }
}

fn check_vars(a: &Ideal, b: &Ideal) -> Result<()> {
    if a.nvars != b.nvars {
        return Err(Error::VariableCountMismatch { left: a.nvars, right: b.nvars });
    }
    Ok(())
}

pub fn ideal_sum(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_vars(i, j)?;
    if let (Some(a), Some(b)) = (i.monomials(), j.monomials()) {
        return Ok(Ideal::from_monomials(i.nvars, a.iter().chain(b).cloned()));
    }
    Ok(Ideal::new(i.nvars, i.generators.iter().chain(&j.generators).cloned()))
}

pub fn ideal_product(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_vars(i, j)?;
    if let (Some(a), Some(b)) = (i.monomials(), j.monomials()) {
        return Ok(Ideal::from_monomials(i.nvars, a.iter().flat_map(|u| b.iter().map(move |v| u.mul(v)))));
    }
    Ok(Ideal::new(i.nvars, i.generators.iter().flat_map(|f| j.generators.iter().map(move |g| f * g))))
}

pub fn ideal_power(i: &Ideal, k: u32) -> Ideal {
    let mut acc = Ideal::unit(i.nvars);
    for _ in 0..k {
        acc = ideal_product(&acc, i).expect("same ring");
    }
    acc
}

pub fn maximal_power(nvars: usize, k: u32) -> Ideal {
    Ideal::maximal_power(nvars, k)
}

/// Decides `m^N ⊆ I` over the formal ring.
pub fn contains_power(i: &Ideal, n: u32) -> CertifiedBool {
    if let Some(gens) = i.monomials() {
        return match Monomial::all_of_degree(i.nvars, n).into_iter().find(|u| !gens.iter().any(|g| g.divides(u))) {
            None => CertifiedBool::yes(n + 1, Certificate::Combinatorial),
            Some(u) => CertifiedBool::no(n + 1, vec![Poly::monomial(u)]),
        };
    }
    certify::power_in(i.nvars, 1, &[unit_vector(i.nvars, 1, 0)], n, &i.as_module())
        .expect("ideal containment is always in the absorbed form")
}

/// Least `N <= n_max` with `m^N ⊆ I`.
pub fn loewy_length(i: &Ideal, n_max: u32) -> LoewyLength {
    loewy_search(i, n_max).value().map_or(LoewyLength::Exceeds(n_max), LoewyLength::Finite)
}

/// Loewy-length search with the certificate backing the answer.
pub fn loewy_search(i: &Ideal, n_max: u32) -> PowerSearch {
    if let Some(gens) = i.monomials() {
        // a monomial ideal is m-primary iff it contains a pure power of every variable
        let primary = (0..i.nvars).all(|v| gens.iter().any(|g| g.support().all(|s| s == v)));
        if !primary {
            let v = (0..i.nvars).find(|&v| !gens.iter().any(|g| g.support().all(|s| s == v))).unwrap();
            let witness = Monomial::var(i.nvars, v).pow(n_max);
            return PowerSearch::Exceeds { n_max, refutation: CertifiedBool::no(n_max + 1, vec![Poly::monomial(witness)]) };
        }
        for n in 0..=n_max {
            let answer = contains_power(i, n);
            if answer.value {
                return PowerSearch::Found { n, proof: answer };
            }
            if n == n_max {
                return PowerSearch::Exceeds { n_max, refutation: answer };
            }
        }
        unreachable!()
    }
    certify::minimal_power(i.nvars, 1, &[unit_vector(i.nvars, 1, 0)], &i.as_module(), n_max)
        .expect("ideal containment is always in the absorbed form")
}

pub fn monomial_member(u: &Monomial, i: &Ideal) -> Result<bool> {
    Ok(i.require_monomials()?.iter().any(|g| g.divides(u)))
}

/// Intersection of monomial ideals (pairwise least common multiples).
pub fn monomial_intersection(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_vars(i, j)?;
    let a = i.require_monomials()?;
    let b = j.require_monomials()?;
    Ok(Ideal::from_monomials(i.nvars, a.iter().flat_map(|u| b.iter().map(move |v| u.lcm(v)))))
}

/// Exact `I : J` for monomial ideals.
pub fn colon_monomial(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    check_vars(i, j)?;
    let a = i.require_monomials()?;
    let b = j.require_monomials()?;
    if b.is_empty() {
        return Ok(Ideal::unit(i.nvars));
    }
    let mut acc: Option<Ideal> = None;
    for v in b {
        let part = Ideal::from_monomials(i.nvars, a.iter().map(|g| g.saturating_div(v)));
        acc = Some(match acc {
            None => part,
            Some(prev) => monomial_intersection(&prev, &part)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Decides `m^N ⊆ I : J`, i.e. `m^N J ⊆ I`.
pub fn colon_contains_power(i: &Ideal, j: &Ideal, n: u32) -> Result<CertifiedBool> {
    check_vars(i, j)?;
    let nvars = i.nvars;
    let t0 = n + 1 + j.max_degree();
    if j.is_zero() {
        return Ok(CertifiedBool::yes(t0, Certificate::Immediate("zero ideal J")));
    }
    if i.is_unit() {
        return Ok(CertifiedBool::yes(t0, Certificate::Immediate("unit ideal")));
    }
    let shifts = Monomial::all_of_degree(nvars, n);
    if let (Some(a), Some(b)) = (i.monomials(), j.monomials()) {
        for u in &shifts {
            for v in b {
                let w = u.mul(v);
                if !a.iter().any(|g| g.divides(&w)) {
                    return Ok(CertifiedBool::no(w.degree() + 1, vec![Poly::monomial(w)]));
                }
            }
        }
        return Ok(CertifiedBool::yes(t0, Certificate::Combinatorial));
    }
    let sub: Vec<ModuleElement> =
        shifts.iter().flat_map(|u| j.generators.iter().map(move |g| vec![g.mul_monomial(u)])).collect();
    if i.is_zero() {
        return Ok(CertifiedBool::no(t0, sub[0].clone()));
    }
    certify::submodule_in(nvars, 1, &sub, &i.as_module(), Some(&[unit_vector(nvars, 1, 0)]), t0)
}

/// `ll(I : J)` through repeated colon tests.
pub fn colon_loewy_length(i: &Ideal, j: &Ideal, n_max: u32) -> Result<(LoewyLength, CertifiedBool)> {
    let mut last = None;
    for n in 0..=n_max {
        let answer = colon_contains_power(i, j, n)?;
        if answer.value {
            return Ok((LoewyLength::Finite(n), answer));
        }
        last = Some(answer);
    }
    Ok((LoewyLength::Exceeds(n_max), last.expect("nonempty range")))
}

/// Height of a proper nonzero monomial ideal: the least number of variables
/// meeting the support of every generator.
pub fn monomial_height(i: &Ideal) -> Result<u32> {
    let gens = i.require_monomials()?;
    if gens.is_empty() {
        return Err(Error::DegenerateIdeal("zero"));
    }
    if gens.iter().any(Monomial::is_one) {
        return Err(Error::DegenerateIdeal("unit"));
    }
    let p = i.nvars;
    let supports: Vec<u64> = gens.iter().map(|g| g.support().fold(0u64, |acc, v| acc | (1 << v))).collect();
    let mut best = p as u32;
    for cover in 0u64..(1u64 << p) {
        let size = cover.count_ones();
        if size < best && supports.iter().all(|s| s & cover != 0) {
            best = size;
        }
    }
    Ok(best)
}
