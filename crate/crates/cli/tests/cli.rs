use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use ncsaito_cli::{parse, print, run, Outcome};
use ncsaito_core::cyclic::canonicalize;
use ncsaito_core::ncseries::{Series, Word};
use ncsaito_core::rat;

fn invoke(args: &[&str]) -> Outcome {
    run(std::iter::once("ncsaito").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = invoke(args);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

#[test]
fn quasi_homogeneous_cube() {
    let (doc, code) = json(&["quasi", "--vars", "x", "--trunc", "8", "x^3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["quasi_homogeneous"], true);
    assert_eq!(doc["trunc"], 8);
    assert_eq!(doc["certified_mod_degree"], 8);
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["vars"], serde_json::json!(["x"]));
}

#[test]
fn weights_of_quartic() {
    let (doc, code) = json(&["weights", "--vars", "x", "x^4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["weights"], serde_json::json!(["1/4"]));
}

#[test]
fn fermat_cubic_in_two_variables_is_inconclusive() {
    let (doc, code) = json(&["jacobi", "--vars", "x,y", "--nmax", "6", "x^3+y^3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["finite"], false);
    assert_eq!(doc["searched_to"], 6);
    assert_eq!(doc["nil_degree"], Value::Null);
}

#[test]
fn canonical_form_and_cyclic_derivative() {
    let (doc, _) = json(&["canon", "--vars", "x,y", "x*y - y*x + x*y*x"]);
    assert_eq!(doc["canonical"], "y*x^2");
    assert_eq!(doc["terms"][0]["word"], "y*x*x");
    assert_eq!(doc["terms"][0]["coeff"], "1");
    let (doc, _) = json(&["cyc-diff", "--vars", "x,y", "--var", "x", "x^2*y"]);
    // D_x(yxx) = xy + yx
    assert_eq!(doc["derivative"], "x*y + y*x");
    let (doc, _) = json(&["order", "--vars", "x,y", "x^2*y + 1/2*y^4"]);
    assert_eq!(doc["order"], 3);
}

#[test]
fn normalize_reports_transform_and_normal_form() {
    let (doc, code) = json(&["normalize", "--vars", "x,y", "--trunc", "8", "x^2*y+y^4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["canonical_type"], serde_json::json!(["1/4", "3/8"]));
    assert_eq!(doc["transform"].as_array().unwrap().len(), 2);
    assert_eq!(doc["euler"][0]["var"], "x");
    assert_eq!(doc["euler"][0]["image"], "3/8*x");
}

#[test]
fn resonant_derivation() {
    let (doc, code) = json(&["jc", "--vars", "x,y", "--trunc", "6", "--derivation", "x=x; y=2*y+x^2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["semisimple"][1]["image"], "2*y");
    assert_eq!(doc["nilpotent"][1]["image"], "x^2");
    assert_eq!(doc["eigenvalues"], serde_json::json!(["1", "2"]));
}

#[test]
fn abelianization_merges_orderings() {
    let (doc, _) = json(&["abelianize", "--vars", "x,y", "x*y*x - 2*y*x^2 + y^3"]);
    assert_eq!(doc["abelianization"], "-x^2*y + y^3");
}

#[test]
fn class_of_linear_form_survives() {
    let (doc, _) = json(&["class", "--vars", "x", "--theta", "x", "x^3"]);
    assert_eq!(doc["is_zero"], false);
    let (doc, _) = json(&["class", "--vars", "x", "--theta", "x^2", "x^3"]);
    assert_eq!(doc["is_zero"], true);
}

#[test]
fn exit_codes() {
    let (doc, code) = json(&["canon", "--vars", "x,y", "x y"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "ParseError");
    assert_eq!(doc["error"]["offset"], 2);
    assert_eq!(doc["certified_mod_degree"], Value::Null);

    let (doc, code) = json(&["canon", "--vars", "x", "x + q"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "UnknownVariable");

    let (doc, code) = json(&["weights", "--vars", "x,y", "--trunc", "6", "x^3+y^3"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["code"], "NotCertifiedFinite");

    let (doc, code) = json(&["jacobi", "--vars", "x,y", "--size-guard", "10", "x^3+y^3"]);
    assert_eq!(code, 4);
    assert_eq!(doc["error"]["code"], "LevelTooLarge");

    let (doc, code) = json(&["order", "--vars", "x", "x - x"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["code"], "ZeroPotential");

    let (doc, code) = json(&["canon", "--vars", "x,x", "x"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "ConfigError");

    let (doc, code) = json(&["frobnicate", "--vars", "x"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "UsageError");
}

#[test]
fn size_guard_accepts_powers() {
    let (doc, _) = json(&["canon", "--vars", "x", "--size-guard", "2^10", "x"]);
    assert_eq!(doc["config"]["size_guard"], "1024");
}

#[test]
fn text_output() {
    let out = invoke(&["weights", "--vars", "x", "--output", "text", "x^5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("weights: [1/5]\n"), "{}", out.stdout);
    let out = invoke(&["canon", "--vars", "x", "--output", "text", "x +"]);
    assert!(out.stdout.starts_with("error[ParseError]"));
}

#[test]
fn binary_honours_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_ncsaito");
    let plain = Command::new(bin).args(["weights", "--vars", "x", "x^6"]).output().unwrap();
    let capped = Command::new(bin)
        .args(["weights", "--vars", "x", "x^6"])
        .env("NCSAITO_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(plain.stdout, capped.stdout);
    let bad = Command::new(bin)
        .args(["weights", "--vars", "x", "x^6"])
        .env("NCSAITO_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

fn series() -> impl Strategy<Value = Series> {
    let term = (prop::collection::vec(0usize..3, 0..=5), -9i64..=9, 1i64..=6);
    prop::collection::vec(term, 0..8).prop_map(|terms| {
        Series::from_terms(
            3,
            5,
            terms.into_iter().map(|(l, p, q)| (Word::from_letters(&l), rat(p, q))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(s in series()) {
        let printed = print::series(&s, &vars());
        prop_assert_eq!(parse(&printed, &vars(), 5).unwrap(), s);
    }

    #[test]
    fn canonical_output_is_a_fixpoint(s in series()) {
        let printed = print::series(&s, &vars());
        let out = invoke(&["canon", "--vars", "x,y,z", "--trunc", "5", &printed]);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        let canon = doc["canonical"].as_str().unwrap().to_string();
        let again = invoke(&["canon", "--vars", "x,y,z", "--trunc", "5", &canon]);
        let doc2: Value = serde_json::from_str(&again.stdout).unwrap();
        prop_assert_eq!(doc2["canonical"].as_str().unwrap(), canon.as_str());
        let reparsed = parse(&canon, &vars(), 5).unwrap();
        prop_assert_eq!(canonicalize(&reparsed), canonicalize(&s));
    }
}
