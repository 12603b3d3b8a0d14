mod common;

use common::oracle::{compare, mul, normal_form, op, oracle_dim, pairs};

#[test]
fn hom_dimensions_match_the_oracle() {
    for (label, p, q) in &pairs() {
        let (want, got) = compare(p, q);
        println!("{label}: oracle {want}, hom_basis {got}");
        assert_eq!(got, want, "{label}");
    }
}

#[test]
fn oracle_arithmetic() {
    // dx * x = x dx + 1
    let d = op(&[(1, 0, 1)]);
    let x = op(&[(1, 1, 0)]);
    assert_eq!(mul(&d, &x), op(&[(1, 1, 1), (1, 0, 0)]));
    // dx * x is 1 modulo D dx
    assert_eq!(normal_form(&mul(&d, &x), &d), op(&[(1, 0, 0)]));
    assert_eq!(oracle_dim(&d, &d, 4), 1);
    // End(D/D dx^2) has dimension 4
    let d2 = op(&[(1, 0, 2)]);
    assert_eq!(oracle_dim(&d2, &d2, 6), 4);
}
