use determina::closure::integral_closure;
use determina::dvr::smith_normal_form;
use determina::ideals::{colon_monomial, contains_power, monomial_member};
use determina::io::{matrix_from_value, matrix_to_json};
use determina::localalg::{scalar, Monomial, Poly};
use determina::matrixops::{determinant, determinantal_ideal, PolyMatrix};
use determina::tangent::{ann_coker_contains_power, t1_contains_power};
use determina::{GroupAction, GroupKind, Ideal, SigmaSpace};
use proptest::prelude::*;

fn poly(p: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, p), -3i64..=3), 0..5).prop_map(move |terms| {
        let mut f = Poly::zero(p);
        for (e, c) in terms {
            if e.iter().sum::<u32>() <= max_deg {
                f.add_term(Monomial::new(e), scalar(c));
            }
        }
        f
    })
}

fn matrix(p: usize, m: usize, n: usize, max_deg: u32) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(prop::collection::vec(poly(p, max_deg), n), m)
        .prop_map(move |rows| PolyMatrix::general(p, rows).unwrap())
}

fn monomial_ideal() -> impl Strategy<Value = (Vec<Monomial>, Ideal)> {
    prop::collection::vec(prop::collection::vec(0..=4u32, 2), 1..4).prop_map(|gens| {
        let monos: Vec<Monomial> = gens.into_iter().map(Monomial::new).filter(|m| !m.is_one()).collect();
        let ideal = Ideal::from_monomials(2, monos.clone());
        (monos, ideal)
    })
}

fn divisible(u: &Monomial, gens: &[Monomial]) -> bool {
    gens.iter().any(|g| g.divides(u))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in poly(2, 3), b in poly(2, 3), c in poly(2, 3)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn truncated_product(a in poly(2, 4), b in poly(2, 4), d in 1u32..6) {
        prop_assert_eq!(a.mul_truncated(&b, d), (&a * &b).truncate(d));
    }

    #[test]
    fn unit_inverse(a in poly(2, 3), c in 1i64..4, d in 1u32..6) {
        let u = &a.truncate(0) + &Poly::constant(2, scalar(c));
        let u = &u + &(&a - &a.truncate(1));
        let inv = u.inverse_truncated(d).unwrap();
        prop_assert_eq!(u.mul_truncated(&inv, d), Poly::one(2));
    }

    #[test]
    fn power_containment_by_divisibility((gens, i) in monomial_ideal(), n in 0u32..7) {
        let brute = Monomial::all_of_degree(2, n).iter().all(|u| divisible(u, &gens));
        prop_assert_eq!(contains_power(&i, n).value, brute);
    }

    #[test]
    fn colon_by_divisibility((gi, i) in monomial_ideal(), (gj, j) in monomial_ideal()) {
        let colon = colon_monomial(&i, &j).unwrap();
        for d in 0..6 {
            for u in Monomial::all_of_degree(2, d) {
                let brute = gj.iter().all(|v| divisible(&u.mul(v), &gi));
                prop_assert_eq!(monomial_member(&u, &colon).unwrap(), brute);
            }
        }
    }

    #[test]
    fn closure_is_extensive_and_idempotent((_, i) in monomial_ideal()) {
        let c = integral_closure(&i).unwrap();
        prop_assert!(c.contains_ideal(&i).unwrap());
        prop_assert!(integral_closure(&c).unwrap().same_as(&c).unwrap());
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(2, 2, 2, 2), b in matrix(2, 2, 2, 2)) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(determinant(&ab).unwrap(), &determinant(&a).unwrap() * &determinant(&b).unwrap());
    }

    #[test]
    fn first_fitting_ideal_is_entries(a in matrix(2, 2, 3, 2)) {
        let i1 = determinantal_ideal(&a, 1);
        let entries = Ideal::new(2, a.entries().iter().cloned());
        prop_assert!(i1.same_as(&entries).unwrap());
    }

    #[test]
    fn transpose_is_an_involution(a in matrix(2, 2, 3, 2)) {
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn json_round_trip(a in matrix(2, 2, 2, 3)) {
        let names = vec!["x".to_string(), "y".to_string()];
        let back = matrix_from_value(&matrix_to_json(&names, &a)).unwrap();
        prop_assert_eq!(back.matrix, a);
    }

    #[test]
    fn smith_partial_sums_match_minors(a in matrix(1, 2, 3, 3)) {
        let s = smith_normal_form(&a, 14).unwrap();
        let mut sum = 0;
        for (j, v) in s.valuations.iter().enumerate() {
            sum += v;
            let order = determinantal_ideal(&a, j as i64 + 1).generators().iter().filter_map(Poly::order).min();
            prop_assert_eq!(order, Some(sum));
        }
    }

    #[test]
    fn right_tangent_matches_cokernel(a in matrix(2, 2, 2, 2), n in 0u32..4) {
        let t1 = t1_contains_power(&a, GroupAction::new(GroupKind::Gr), &SigmaSpace::Full, n).unwrap().value;
        prop_assert_eq!(t1, ann_coker_contains_power(&a, n, false).unwrap().value);
    }
}
