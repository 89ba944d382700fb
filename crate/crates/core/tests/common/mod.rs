#![allow(dead_code)]

use determina::localalg::{scalar, Monomial, Poly};
use determina::matrixops::{determinant, PolyMatrix, Structure};
use determina::Ideal;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(p: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..p].iter().map(|s| s.to_string()).collect()
}

pub fn parse_matrix(p: usize, rows: &[&[&str]]) -> PolyMatrix {
    let names = names(p);
    let rows = rows.iter().map(|r| r.iter().map(|s| determina::localalg::poly_parse(s, &names).unwrap()).collect()).collect();
    PolyMatrix::general(p, rows).unwrap()
}

pub fn mono(exps: &[u32]) -> Monomial {
    Monomial::new(exps.to_vec())
}

/// Sparse polynomial of degree `<= max_deg` with small integer coefficients.
/// The constant term is present with probability `unit_prob`.
pub fn random_poly(rng: &mut ChaCha8Rng, p: usize, max_deg: u32, unit_prob: f64) -> Poly {
    let mut f = Poly::zero(p);
    if rng.gen_bool(unit_prob) {
        f.add_term(Monomial::one(p), scalar(nonzero(rng)));
    }
    for d in 1..=max_deg {
        for m in Monomial::all_of_degree(p, d) {
            if rng.gen_bool(0.3) {
                f.add_term(m, scalar(nonzero(rng)));
            }
        }
    }
    f
}

pub fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        c
    } else {
        -c
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, p: usize, m: usize, n: usize, max_deg: u32, unit_prob: f64) -> PolyMatrix {
    let rows = (0..m).map(|_| (0..n).map(|_| random_poly(rng, p, max_deg, unit_prob)).collect()).collect();
    PolyMatrix::general(p, rows).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, p: usize, m: usize, max_deg: u32, unit_prob: f64) -> PolyMatrix {
    let mut a = PolyMatrix::zeros(p, m, m);
    for i in 0..m {
        for j in i..m {
            let f = random_poly(rng, p, max_deg, unit_prob);
            a.set(i, j, f.clone());
            a.set(j, i, f);
        }
    }
    a.with_structure(Structure::Symmetric).unwrap()
}

pub fn random_skew(rng: &mut ChaCha8Rng, p: usize, m: usize, max_deg: u32, unit_prob: f64) -> PolyMatrix {
    let mut a = PolyMatrix::zeros(p, m, m);
    for i in 0..m {
        for j in i + 1..m {
            let f = random_poly(rng, p, max_deg, unit_prob);
            a.set(j, i, -&f);
            a.set(i, j, f);
        }
    }
    a.with_structure(Structure::SkewSymmetric).unwrap()
}

/// Random invertible matrix over the local ring: an invertible constant part
/// plus terms in `m`.
pub fn random_unit_matrix(rng: &mut ChaCha8Rng, p: usize, m: usize, max_deg: u32) -> PolyMatrix {
    loop {
        let u = PolyMatrix::from_fn(p, m, m, |_, _| Poly::zero(p));
        let mut u = u;
        for i in 0..m {
            for j in 0..m {
                let mut f = random_poly(rng, p, max_deg, 0.0);
                if i == j || rng.gen_bool(0.4) {
                    f.add_term(Monomial::one(p), scalar(rng.gen_range(-2..=2)));
                }
                u.set(i, j, f);
            }
        }
        if determinant(&u).unwrap().is_unit() {
            return u;
        }
    }
}

/// Random monomial ideal in `p` variables with generators of degree in `1..=max_deg`.
pub fn random_monomial_ideal(rng: &mut ChaCha8Rng, p: usize, count: usize, max_deg: u32) -> Ideal {
    let gens = (0..count).map(|_| {
        let d = rng.gen_range(1..=max_deg);
        let mut e = vec![0u32; p];
        for _ in 0..d {
            e[rng.gen_range(0..p)] += 1;
        }
        Monomial::new(e)
    });
    Ideal::from_monomials(p, gens)
}

/// `t^v * (unit)` in one variable with `v <= max_v`.
pub fn t_power_unit(rng: &mut ChaCha8Rng, max_v: u32, tail: u32) -> Poly {
    let v = rng.gen_range(0..=max_v);
    let mut f = Poly::zero(1);
    f.add_term(Monomial::new(vec![v]), scalar(nonzero(rng)));
    for d in 1..=tail {
        if rng.gen_bool(0.5) {
            f.add_term(Monomial::new(vec![v + d]), scalar(nonzero(rng)));
        }
    }
    f
}
