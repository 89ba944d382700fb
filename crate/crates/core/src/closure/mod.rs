//! Integral closures of monomial ideals through their Newton polyhedra.

pub mod fourier_motzkin;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ideals::{colon_monomial, Ideal};
use crate::localalg::{scalar, EchelonBuilder, Monomial, Scalar, SparseVec};
use fourier_motzkin::Inequality;

/// `⟨normal, a⟩ >= offset`, with coprime non-negative integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
}

impl Facet {
    pub fn holds(&self, exponents: &[u32]) -> bool {
        self.value(exponents) >= self.offset
    }

    fn value(&self, exponents: &[u32]) -> Scalar {
        self.normal.iter().zip(exponents).map(|(w, &e)| w * scalar(e as i64)).sum()
    }
}

/// `conv(exponents + R^p_{>=0})` in facet form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub source: Vec<Monomial>,
    pub facets: Vec<Facet>,
}

impl NewtonPolyhedron {
    pub fn contains(&self, exponents: &[u32]) -> bool {
        self.facets.iter().all(|f| f.holds(exponents))
    }

    /// Source exponents that are vertices (tight on at least `p` independent facets).
    pub fn vertices(&self) -> Vec<&Monomial> {
        let p = self.source.first().map_or(0, Monomial::nvars);
        self.source
            .iter()
            .filter(|s| {
                let mut e = EchelonBuilder::new();
                for f in self.facets.iter().filter(|f| f.value(s.exponents()) == f.offset) {
                    e.insert(&SparseVec::from_entries(f.normal.iter().cloned().enumerate()));
                }
                e.rank() == p
            })
            .collect()
    }
}

pub fn newton_polyhedron(i: &Ideal) -> Result<NewtonPolyhedron> {
    let gens = i.monomials().ok_or(Error::NonMonomial)?;
    if gens.is_empty() {
        return Err(Error::DegenerateIdeal("zero"));
    }
    let p = i.nvars();
    let k = gens.len();
    let (last, rest) = gens.split_last().expect("nonempty");
    // a = Σ λ_s s + ray with λ_last = 1 - Σ_{s<last} λ_s eliminated up front
    let mut rows = Vec::new();
    let mut index = 0;
    for c in 0..p {
        let mut coeffs = vec![Scalar::zero(); p + k - 1];
        coeffs[c] = scalar(1);
        for (s, g) in rest.iter().enumerate() {
            coeffs[p + s] = scalar(last.exponents()[c] as i64 - g.exponents()[c] as i64);
        }
        rows.push(Inequality::new(coeffs, -scalar(last.exponents()[c] as i64), index));
        index += 1;
    }
    for s in 0..k - 1 {
        let mut coeffs = vec![Scalar::zero(); p + k - 1];
        coeffs[p + s] = scalar(1);
        rows.push(Inequality::new(coeffs, Scalar::zero(), index));
        index += 1;
    }
    if k > 1 {
        let mut coeffs = vec![Scalar::zero(); p + k - 1];
        for s in 0..k - 1 {
            coeffs[p + s] = scalar(-1);
        }
        rows.push(Inequality::new(coeffs, scalar(1), index));
    }
    let projected = fourier_motzkin::project(rows, p);

    let mut facets: Vec<Facet> = projected
        .into_iter()
        .filter(|r| r.coeffs.iter().any(|c| !c.is_zero()))
        .map(|r| Facet { normal: r.coeffs, offset: -r.constant })
        .filter(|f| is_facet(f, gens, p))
        .collect();
    facets.sort();
    facets.dedup();
    debug_assert!(facets.iter().all(|f| f.normal.iter().all(|w| !w.is_negative())));
    Ok(NewtonPolyhedron { source: gens.to_vec(), facets })
}

/// The tight generators and the recession directions `e_i` with `w_i = 0`
/// must span an affine hyperplane.
fn is_facet(f: &Facet, gens: &[Monomial], p: usize) -> bool {
    if f.normal.iter().any(|w| w.is_negative()) {
        return false;
    }
    let tight: Vec<&Monomial> = gens.iter().filter(|g| f.value(g.exponents()) == f.offset).collect();
    let Some((first, others)) = tight.split_first() else { return false };
    let mut e = EchelonBuilder::new();
    for g in others {
        e.insert(&SparseVec::from_entries(
            (0..p).map(|c| (c, scalar(g.exponents()[c] as i64 - first.exponents()[c] as i64))),
        ));
    }
    for (c, w) in f.normal.iter().enumerate() {
        if w.is_zero() {
            e.insert(&SparseVec::from_entries([(c, scalar(1))]));
        }
    }
    e.rank() + 1 == p
}

pub fn in_closure(u: &Monomial, i: &Ideal) -> Result<bool> {
    Ok(newton_polyhedron(i)?.contains(u.exponents()))
}

/// Minimal generators of the integral closure.
///
/// A minimal generator `u` dominates a point `q` of the convex hull of the
/// generators with `u_c < q_c + 1` on its support, so `deg u <= d_max + p - 1`.
pub fn integral_closure(i: &Ideal) -> Result<Ideal> {
    if i.is_zero() {
        return Ok(i.clone());
    }
    let poly = newton_polyhedron(i)?;
    let p = i.nvars();
    let bound = i.max_degree() + p as u32 - 1;
    let mut members = Vec::new();
    for d in 0..=bound {
        members.extend(Monomial::all_of_degree(p, d).into_iter().filter(|u| poly.contains(u.exponents())));
    }
    Ok(Ideal::from_monomials(p, members))
}

/// `closure(I) : closure(J)`.
pub fn closure_colon(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    let ci = integral_closure(i)?;
    let cj = if j.is_zero() {
        j.clone()
    } else {
        if !j.is_monomial() {
            return Err(Error::NonMonomial);
        }
        integral_closure(j)?
    };
    colon_monomial(&ci, &cj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::{ideal_sum, maximal_power};

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn mideal(gens: &[&[u32]]) -> Ideal {
        Ideal::from_monomials(gens[0].len(), gens.iter().map(|g| mono(g)))
    }

    fn facet(n: &[i64], c: i64) -> Facet {
        Facet { normal: n.iter().map(|&a| scalar(a)).collect(), offset: scalar(c) }
    }

    #[test]
    fn two_point_hull() {
        let poly = newton_polyhedron(&mideal(&[&[5, 0], &[0, 3]])).unwrap();
        assert_eq!(poly.facets, vec![facet(&[0, 1], 0), facet(&[1, 0], 0), facet(&[3, 5], 15)]);
        let single = newton_polyhedron(&mideal(&[&[1]])).unwrap();
        assert_eq!(single.facets, vec![facet(&[1], 1)]);
    }

    #[test]
    fn three_generator_hull() {
        let i = mideal(&[&[0, 7], &[5, 4], &[8, 0]]);
        let poly = newton_polyhedron(&i).unwrap();
        // (5,4) lies strictly above the segment from (0,7) to (8,0): 35 + 32 > 56
        assert_eq!(poly.facets, vec![facet(&[0, 1], 0), facet(&[1, 0], 0), facet(&[7, 8], 56)]);
        assert_eq!(poly.vertices(), vec![&mono(&[0, 7]), &mono(&[8, 0])]);
        assert!(in_closure(&mono(&[0, 7]), &i).unwrap());
        assert!(!in_closure(&mono(&[1, 6]), &i).unwrap());
        for u in Monomial::all_of_degree(2, 8) {
            assert!(in_closure(&u, &i).unwrap());
        }
    }

    #[test]
    fn closures() {
        let m3 = maximal_power(2, 3);
        assert_eq!(integral_closure(&m3).unwrap(), m3);
        assert_eq!(integral_closure(&mideal(&[&[3, 0], &[0, 3]])).unwrap(), m3);
        let i2 = mideal(&[&[0, 7], &[5, 4], &[8, 0]]);
        let expected = ideal_sum(&maximal_power(2, 8), &mideal(&[&[0, 7]])).unwrap();
        assert_eq!(integral_closure(&i2).unwrap(), expected);
    }

    #[test]
    fn closure_colons() {
        let i2 = mideal(&[&[0, 7], &[5, 4], &[8, 0]]);
        let i1 = mideal(&[&[3, 0], &[0, 3]]);
        assert_eq!(closure_colon(&i2, &i1).unwrap(), maximal_power(2, 5));
        assert!(closure_colon(&i2, &i2).unwrap().is_unit());
        assert_eq!(closure_colon(&mideal(&[&[2]]), &mideal(&[&[1]])).unwrap(), mideal(&[&[1]]));
    }

    #[test]
    fn not_primary() {
        let i = mideal(&[&[2, 1, 0], &[0, 1, 2]]);
        let c = integral_closure(&i).unwrap();
        assert!(c.monomials().unwrap().contains(&mono(&[1, 1, 1])));
        assert!(newton_polyhedron(&Ideal::zero(2)).is_err());
    }
}
