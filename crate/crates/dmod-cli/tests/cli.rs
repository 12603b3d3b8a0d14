use std::path::PathBuf;
use std::process::{Command, Output};

use dmod_cli::{Payload, ResultDocument};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn dmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> String {
    let mut p = std::env::temp_dir();
    p.push(format!("dmod-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn gkz_polynomial_solution() {
    let o = dmod(&["polysol", &fixture("gkz.dmod")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dim = 1\nx1^5 + 20*x1^3*x2 + 60*x1*x2^2\n");
}

#[test]
fn gkz_b_function_is_factored() {
    let o = dmod(&["bfunction", &fixture("gkz.dmod"), "--dual", "--integration"]);
    assert_eq!(stdout(&o), "b(s) = (s-4)\n");
}

#[test]
fn empty_basis() {
    let o = dmod(&["polysol", &fixture("exp.dmod")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dim = 0\n");
}

#[test]
fn hom_of_exponentials() {
    let o = dmod(&["hom", &fixture("exp.dmod"), &fixture("exp2.dmod")]);
    let text = stdout(&o);
    assert!(text.starts_with("dim = 2\n"), "{text}");
    assert!(text.contains("[x*dx - x - 1]"), "{text}");
    let o = dmod(&["bfunction", &fixture("exp.dmod"), &fixture("exp2.dmod")]);
    assert_eq!(stdout(&o), "b(s) = (s+1)*(s+2)\n");
}

#[test]
fn second_derivative_versus_first() {
    let o = dmod(&["iso", &fixture("second.dmod")]);
    assert_eq!(stdout(&o), "No\n");
    let o = dmod(&["summand", &fixture("second.dmod")]);
    assert_eq!(stdout(&o), "A is a summand of B: no\nB is a summand of A: yes\n");
}

#[test]
fn extension_then_isomorphism() {
    let o = dmod(&["ext", &fixture("ext.dmod"), "--kappa", "1"]);
    let text = stdout(&o);
    assert!(text.contains("dim = 1\n"), "{text}");
    assert!(text.contains("rank 2"), "{text}");
    let o = dmod(&["iso", &format!("{}:Q1", fixture("yoneda.dmod")), &format!("{}:T", fixture("yoneda.dmod"))]);
    assert!(stdout(&o).starts_with("Yes\n"));
    let o = dmod(&["iso", &format!("{}:Q0", fixture("yoneda.dmod")), &format!("{}:T", fixture("yoneda.dmod"))]);
    assert_eq!(stdout(&o), "No\n");
}

#[test]
fn blocks_from_betti_numbers() {
    assert_eq!(stdout(&dmod(&["dinv", &fixture("blocks.dmod")])), "d = {2}\n");
    assert_eq!(stdout(&dmod(&["dinv", "--betti", "1,1"])), "d = {1}\n");
    assert_eq!(dmod(&["dinv", "--betti", "1,2"]).status.code(), Some(5));
}

#[test]
fn polynomial_ring_b_functions() {
    let f = fixture("plane.dmod");
    assert_eq!(stdout(&dmod(&["bfunction", &f, "-d", "1"])), "b(s) = s\n");
    assert_eq!(stdout(&dmod(&["bfunction", &f, "-d", "1", "--integration"])), "b(s) = (s+1)\n");
    let o = dmod(&["resolve", &f, "--json"]);
    match ResultDocument::from_json(&stdout(&o)).unwrap().result {
        Payload::Resolution { ranks, .. } => assert_eq!(ranks, vec![1, 2, 1]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn appell_rational_solutions() {
    let o = dmod(&["--verify", "ratsol", &fixture("appell.dmod")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("dim = 3\n"), "{text}");
    assert!(text.contains("/(x)^6"), "{text}");
    assert!(text.contains("/(y)^7"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(dmod(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dmod(&["polysol", "/nonexistent/x.dmod"]).status.code(), Some(1));
    assert_eq!(dmod(&["hom", &fixture("gkz.dmod")]).status.code(), Some(1));

    let bad = scratch("parse.dmod", "n=2;\nM: rank 1;\n x3;\n");
    let o = dmod(&["polysol", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));

    let nh = scratch("nh.dmod", "n=2; M: rank 1; dx1;");
    assert_eq!(dmod(&["polysol", &nh]).status.code(), Some(3));

    let sing = scratch("sing.dmod", "vars x; M: rank 1; x*dx + 1;");
    assert_eq!(dmod(&["ratsol", &sing]).status.code(), Some(4));

    let appell = std::fs::read_to_string(fixture("appell.dmod")).unwrap();
    let wrong = scratch("cap.dmod", &appell.replace("exponents 7", "exponents 0"));
    let o = dmod(&["ratsol", &wrong, "--lift-cap", "2"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn verify_only_touches_the_status() {
    for args in [
        vec!["polysol", "gkz.dmod"],
        vec!["hom", "exp.dmod", "exp2.dmod"],
        vec!["ext", "ext.dmod", "--kappa", "1"],
        vec!["iso", "yoneda.dmod:Q1", "yoneda.dmod:T"],
        vec!["resolve", "plane.dmod"],
    ] {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        for s in a.iter_mut().skip(1) {
            if s.contains(".dmod") {
                *s = fixture(s);
            }
        }
        let refs: Vec<&str> = a.iter().map(|s| s.as_str()).collect();
        let plain = dmod(&refs);
        let mut v = vec!["--verify"];
        v.extend(&refs);
        let checked = dmod(&v);
        assert_eq!(checked.status.code(), Some(0));
        assert_eq!(plain.stdout, checked.stdout);
    }
}

#[test]
fn json_is_stable_and_parses_back() {
    let y = fixture("yoneda.dmod");
    let args = ["--json", "iso", &format!("{y}:Q1"), &format!("{y}:T")];
    let a = dmod(&args);
    let b = dmod(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc = ResultDocument::from_json(&stdout(&a)).unwrap();
    assert_eq!(doc.schema, "dmod-hom/1");
    match &doc.result {
        Payload::Iso { verdict, witness } => {
            assert_eq!(verdict, "Yes");
            assert!(witness.is_some());
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(ResultDocument::from_json(&doc.to_json()).unwrap(), doc);
}
