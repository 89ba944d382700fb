//! Fourier–Motzkin elimination over exact rationals with Chernikov's
//! history rule for discarding redundant combinations.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::localalg::Scalar;

/// `coeffs · z + constant >= 0`, together with the set of original
/// inequalities it was combined from.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub coeffs: Vec<Scalar>,
    pub constant: Scalar,
    history: Vec<u64>,
}

impl Inequality {
    /// An original inequality; `index` identifies it for the history rule.
    pub fn new(coeffs: Vec<Scalar>, constant: Scalar, index: usize) -> Self {
        let mut history = vec![0u64; index / 64 + 1];
        history[index / 64] |= 1 << (index % 64);
        Inequality { coeffs, constant, history }
    }

    fn history_size(&self) -> u32 {
        self.history.iter().map(|w| w.count_ones()).sum()
    }

    fn merged_history(&self, other: &Inequality) -> Vec<u64> {
        let n = self.history.len().max(other.history.len());
        (0..n)
            .map(|i| self.history.get(i).copied().unwrap_or(0) | other.history.get(i).copied().unwrap_or(0))
            .collect()
    }

    /// Scales to coprime integer coefficients (positive multiples only).
    fn normalized(mut self) -> Self {
        let den_lcm = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::from(1), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|a| (a * Scalar::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        if g.is_zero() {
            return self;
        }
        let (last, coeffs) = ints.split_last().expect("constant present");
        self.coeffs = coeffs.iter().map(|a| Scalar::from_integer(a / &g)).collect();
        self.constant = Scalar::from_integer(last / &g);
        self
    }

    fn key(&self) -> Vec<Scalar> {
        let mut k = self.coeffs.clone();
        k.push(self.constant.clone());
        k
    }
}

/// Eliminates variable `var` (its coefficient becomes zero in every output row).
///
/// `eliminated_before` is the number of variables already eliminated from the
/// original system; rows combined from more than `eliminated_before + 2`
/// originals are redundant and dropped.
pub fn eliminate(rows: Vec<Inequality>, var: usize, eliminated_before: u32) -> Vec<Inequality> {
    let limit = eliminated_before + 2;
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[var].is_positive() {
            pos.push(r);
        } else if r.coeffs[var].is_negative() {
            neg.push(r);
        } else {
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let history = p.merged_history(n);
            if history.iter().map(|w| w.count_ones()).sum::<u32>() > limit {
                continue;
            }
            let a = p.coeffs[var].clone();
            let b = -n.coeffs[var].clone();
            let coeffs: Vec<Scalar> = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * &a).collect();
            let constant = &p.constant * &b + &n.constant * &a;
            out.push(Inequality { coeffs, constant, history });
        }
    }
    dedup(out)
}

fn dedup(rows: Vec<Inequality>) -> Vec<Inequality> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        let r = r.normalized();
        if seen.insert(r.key()) {
            out.push(r);
        } else if let Some(existing) = out.iter_mut().find(|e: &&mut Inequality| e.key() == r.key()) {
            // keep the smaller history, it is the stronger redundancy witness
            if r.history_size() < existing.history_size() {
                *existing = r;
            }
        }
    }
    out
}

/// Projects onto the first `keep` coordinates by eliminating all others,
/// choosing at each step the variable producing the fewest new rows.
pub fn project(rows: Vec<Inequality>, keep: usize) -> Vec<Inequality> {
    let nvars = rows.first().map_or(keep, |r| r.coeffs.len());
    let mut remaining: Vec<usize> = (keep..nvars).collect();
    let mut rows = dedup(rows);
    let mut done = 0u32;
    while !remaining.is_empty() {
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let p = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let n = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                (i, p * n)
            })
            .min_by_key(|&(_, cost)| cost)
            .expect("nonempty");
        let var = remaining.swap_remove(pick);
        rows = eliminate(rows, var, done);
        done += 1;
    }
    rows.into_iter()
        .map(|mut r| {
            r.coeffs.truncate(keep);
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalg::scalar;

    fn ineq(c: &[i64], k: i64, idx: usize) -> Inequality {
        Inequality::new(c.iter().map(|&a| scalar(a)).collect(), scalar(k), idx)
    }

    #[test]
    fn projects_triangle() {
        // 0 <= z <= x, z <= 1 - y projects to x >= 0, y <= 1
        let rows = vec![ineq(&[0, 0, 1], 0, 0), ineq(&[1, 0, -1], 0, 1), ineq(&[0, -1, -1], 1, 2)];
        let out = project(rows, 2);
        let keys: HashSet<Vec<Scalar>> = out.iter().map(|r| r.key()).collect();
        assert!(keys.contains(&vec![scalar(1), scalar(0), scalar(0)]));
        assert!(keys.contains(&vec![scalar(0), scalar(-1), scalar(1)]));
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn normalization_is_integral() {
        let r = Inequality::new(vec![crate::localalg::ratio(3, 2), scalar(3)], scalar(-6), 0).normalized();
        assert_eq!(r.key(), vec![scalar(1), scalar(2), scalar(-4)]);
    }
}
