mod common;

use common::{names, parse_matrix};
use determina::io::parse_matrix_json;
use determina::{
    chain_report, genericity_note, relative_report, report, GroupAction, GroupKind, Ideal, Poly, PolyMatrix, SigmaSpace, Structure,
    Verdict,
};

fn g(kind: GroupKind) -> GroupAction {
    GroupAction::new(kind)
}

#[test]
fn worked_example_json() {
    let a = parse_matrix(2, &[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
    let r = report(&a, g(GroupKind::Glr), &SigmaSpace::Full, 16).unwrap();
    let v = r.to_json(&names(2));
    assert_eq!(v["verdict"]["kind"], "bounds");
    assert_eq!(v["verdict"]["lower"], 4);
    assert_eq!(v["input"]["group"], "glr");
    assert_eq!(v["oracle"]["consistent"], true);
    let rules: Vec<&str> = v["certificates"].as_array().unwrap().iter().map(|c| c["rule"].as_str().unwrap()).collect();
    assert!(rules.iter().any(|r| r.contains("closure(I_m)")));
}

#[test]
fn right_action_on_worked_example() {
    let a = parse_matrix(2, &[&["x^5", "0", "y^3"], &["0", "y^4", "x^3"]]);
    let r = report(&a, g(GroupKind::Gr), &SigmaSpace::Full, 16).unwrap();
    let Verdict::Bounds { lower, upper } = r.verdict else { panic!("{:?}", r.verdict) };
    // ll(ann.coker) = ll(I_2 : I_1) >= ll(closure colon) = 5
    assert!(lower >= 4 && lower <= upper);
}

#[test]
fn odd_skew_congruence() {
    let a = parse_matrix(2, &[&["0", "x", "y"], &["-x", "0", "x + y"], &["-y", "-x - y", "0"]])
        .with_structure(Structure::SkewSymmetric)
        .unwrap();
    let r = report(&a, g(GroupKind::Gcongr), &SigmaSpace::Skew, 12).unwrap();
    // Pf_2 = (x, y, x + y) = m
    assert_eq!(r.upper(), Some(1));
    assert!(r.lower().unwrap() <= 1);
    let big = PolyMatrix::zeros(4, 5, 5).with_structure(Structure::SkewSymmetric).unwrap();
    let r = report(&big, g(GroupKind::Gcongr), &SigmaSpace::Skew, 4).unwrap();
    assert!(r.is_not_finitely_determined());
}

#[test]
fn invertible_constant_part() {
    let a = parse_matrix(2, &[&["1 + x", "y"], &["y", "2"]]).with_structure(Structure::Symmetric).unwrap();
    let r = report(&a, g(GroupKind::Gcongr), &SigmaSpace::Sym, 8).unwrap();
    assert_eq!(r.verdict, Verdict::Bounds { lower: 0, upper: 0 });
}

#[test]
fn full_sigma_congruence_is_negative() {
    let a = parse_matrix(1, &[&["x", "0"], &["0", "x"]]);
    assert!(report(&a, g(GroupKind::Gcongr), &SigmaSpace::Full, 8).unwrap().is_not_finitely_determined());
}

#[test]
fn upper_triangular_reports() {
    let text = r#"{"vars": ["x"], "matrix": [["x", "1"], ["0", "x^2"]], "structure": "upper", "blocks": {"rows": [1, 1], "cols": [1, 1]}}"#;
    let a = parse_matrix_json(text).unwrap().matrix;
    let s = SigmaSpace::upper_for(&a).unwrap();
    for kind in [GroupKind::GrUp, GroupKind::GlrUp] {
        let r = report(&a, g(kind), &s, 12).unwrap();
        let (Some(lo), Some(up)) = (r.lower(), r.upper()) else { panic!("{kind:?}: {:?}", r.verdict) };
        assert!(lo <= up, "{kind:?}");
        assert!(r.oracle.as_ref().unwrap().consistent, "{kind:?}");
    }
    let r = report(&a, GroupAction::unipotent(GroupKind::GrUp), &s, 12).unwrap();
    assert_eq!(r.lower(), r.upper());
}

#[test]
fn unipotent_reports_are_exact() {
    let a = parse_matrix(2, &[&["x", "y^2", "0"], &["0", "x", "y"]]);
    let r = report(&a, GroupAction::unipotent(GroupKind::Gr), &SigmaSpace::Full, 12).unwrap();
    assert!(matches!(r.verdict, Verdict::Bounds { lower, upper } if lower == upper));
    let plain = report(&a, g(GroupKind::Gr), &SigmaSpace::Full, 12).unwrap();
    assert!(plain.upper() <= r.upper());
}

#[test]
fn relative_with_group_ideal() {
    let t = Poly::var(1, 0);
    let a = PolyMatrix::general(1, vec![vec![t.pow(2), Poly::zero(1)], vec![Poly::zero(1), t.pow(3)]]).unwrap();
    let j = Ideal::new(1, [t.pow(2)]);
    let plain = relative_report(&a, g(GroupKind::Gr), &SigmaSpace::Full, &j, None, 10).unwrap();
    // ann.coker = (t^3), colon by (t^2) is (t)
    assert_eq!(plain.lower(), Some(0));
    let small = Ideal::new(1, [t.clone()]);
    let with_i = relative_report(&a, g(GroupKind::Gr), &SigmaSpace::Full, &j, Some(&small), 10).unwrap();
    assert!(with_i.lower() >= plain.lower());
}

#[test]
fn chains() {
    let x = || parse_matrix(1, &[&["x"]]);
    let r = chain_report(&[x(), parse_matrix(1, &[&["x^2"]])], 8).unwrap();
    assert!(r.lower <= r.upper);
    assert!(r.upper.is_some());
    let v = r.to_json(&names(1));
    assert_eq!(v["maps"].as_array().unwrap().len(), 2);
}

#[test]
fn genericity_notes() {
    assert!(genericity_note(3, 2, 1, GroupKind::Gr, &SigmaSpace::Full).contains("positive rank"));
    assert!(genericity_note(2, 2, 2, GroupKind::Gcongr, &SigmaSpace::Sym).contains("p = 2 > 1"));
    assert!(genericity_note(3, 3, 3, GroupKind::Gcongr, &SigmaSpace::Skew).starts_with("generic"));
    assert!(genericity_note(2, 2, 1, GroupKind::Gconj, &SigmaSpace::Full).starts_with("no matrix"));
}

#[test]
fn incompatible_inputs() {
    let a = parse_matrix(1, &[&["x", "1", "0"]]);
    assert!(report(&a, g(GroupKind::Gcongr), &SigmaSpace::Sym, 4).is_err());
    assert!(report(&a, g(GroupKind::GrUp), &SigmaSpace::Full, 4).is_err());
}
