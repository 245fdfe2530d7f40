//! Command behaviour, exit codes and output formats.

use dpfib::golden::GoldenData;
use dpfib_cli::{
    parse_json, render_json, run, Num, OutputRecord, EXIT_OK, EXIT_USAGE, EXIT_VERIFY,
};
use proptest::prelude::*;

fn dpfib(args: &[&str]) -> dpfib_cli::RunOutcome {
    run(std::iter::once("dpfib").chain(args.iter().copied()))
}

#[test]
fn enumerate_degree_eight_text() {
    let out = dpfib(&["enumerate", "--degree", "8", "--format", "text"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("degree 8: 12 candidates\n"));
    assert_eq!(out.stdout.lines().count(), 13);
}

#[test]
fn invalid_degree_is_a_usage_error() {
    let out = dpfib(&["enumerate", "--degree", "7"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("unsupported degree 7"));
    assert_eq!(dpfib(&["enumerate"]).code, EXIT_USAGE);
}

#[test]
fn enumerate_degree_five_json() {
    let out = dpfib(&["enumerate", "--degree", "5", "--format", "json"]);
    assert_eq!(out.code, EXIT_OK);
    let records = parse_json(&out.stdout).unwrap();
    assert_eq!(records.len(), 38);
    assert!(records
        .iter()
        .all(|r| r.verdict == "candidate" && r.degree == 5));
}

#[test]
fn classify_counts() {
    let out = dpfib(&["classify", "--all"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout.lines().last(), Some("47 cases"));
    let d4 = dpfib(&["classify", "--degree", "4"]);
    assert!(d4
        .stdout
        .starts_with("degree 4: 11 survivors, 6 excluded\n"));
    let d9 = dpfib(&["classify", "--degree", "9"]);
    assert!(d9.stdout.starts_with("degree 9: 3 survivors, 1 excluded\n"));
}

#[test]
fn classify_json_fields() {
    let out = dpfib(&["classify", "--degree", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    let excluded = rows.iter().find(|r| r["case_id"] == "T4.11").unwrap();
    assert_eq!(excluded["rule_id"], "R-DIM1-SING");
    assert!(excluded.get("e").is_none());
    let survivor = rows.iter().find(|r| r["case_id"] == "2.7.7").unwrap();
    assert_eq!(survivor["minus_k_cube"], 8);
    assert_eq!(survivor["e"], 4);
    assert_eq!(survivor["ray_type"], "D1");
    let keys: Vec<&str> = survivor
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    for k in [
        "degree",
        "case_id",
        "weights",
        "twists",
        "anti_k",
        "minus_k_cube",
        "d_class",
        "verdict",
    ] {
        assert!(keys.contains(&k), "{k}");
    }
}

#[test]
fn csv_has_header_and_lf() {
    let out = dpfib(&["classify", "--degree", "2", "--format", "csv"]);
    assert!(out.stdout.starts_with(
        "degree,case_id,weights,twists,anti_k,minus_k_cube,d_class,verdict,rule_id,e,ray_type,contraction\n"
    ));
    assert!(!out.stdout.contains('\r'));
    assert_eq!(out.stdout.lines().count(), 7);
}

#[test]
fn case_lookup() {
    let out = dpfib(&["case", "2.3.8"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("(-K_V)^3       16\n"));
    assert!(out.stdout.contains("e              1"));
    assert!(out.stdout.contains("R'             D1\n"));
    assert!(out.stdout.contains("S4-fibration"));
    assert!(out.stdout.contains("d(V)           -16\n"));
    let last = dpfib(&["case", "2.8.1"]);
    assert!(last.stdout.contains("(-K_V)^3       22\n"));
    assert!(last.stdout.contains("R'             C2\n"));
    assert_eq!(dpfib(&["case", "9.9.9"]).code, EXIT_USAGE);
}

#[test]
fn verify_default_passes() {
    let out = dpfib(&["verify"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.ends_with("verify: pass\n"));
}

#[test]
fn verify_missing_file_is_a_usage_error() {
    assert_eq!(
        dpfib(&["verify", "--golden", "/nonexistent/golden.json"]).code,
        EXIT_USAGE
    );
}

#[test]
fn verify_reports_perturbed_cube() {
    let mut g = GoldenData::embedded();
    let t = g.theorems.iter_mut().find(|t| t.theorem == "2.3").unwrap();
    t.cases[7].cube += 1;
    let path = std::env::temp_dir().join(format!("dpfib-perturbed-{}.json", std::process::id()));
    std::fs::write(&path, g.to_json()).unwrap();
    let out = dpfib(&["verify", "--golden", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(out.code, EXIT_VERIFY);
    assert!(
        out.stderr.contains("2.3.8: engine 16 vs reference 17"),
        "{}",
        out.stderr
    );
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["classify", "--all", "--format", "json"][..],
        &["verify"][..],
    ] {
        assert_eq!(dpfib(args).stdout, dpfib(args).stdout);
    }
}

#[test]
fn export_round_trips() {
    let out = dpfib(&["export-golden"]);
    assert_eq!(
        GoldenData::from_json(&out.stdout).unwrap(),
        GoldenData::embedded()
    );
}

fn num() -> impl Strategy<Value = Num> {
    prop_oneof![
        (-100i64..100).prop_map(Num::Int),
        ((-50i64..50), (2i64..9)).prop_map(|(p, q)| Num::Ratio(format!("{p}/{q}"))),
    ]
}

fn record() -> impl Strategy<Value = OutputRecord> {
    (
        (
            prop::sample::select(vec![1u8, 2, 3, 4, 5, 8, 9]),
            "[0-9T.]{1,8}",
        ),
        proptest::collection::vec(0i64..6, 2..7),
        proptest::collection::vec(-5i64..6, 0..6),
        (num(), num(), num(), proptest::option::of((num(), num()))),
        prop::sample::select(vec!["survivor", "excluded", "candidate"]),
        proptest::option::of("[A-Z0-9-]{3,12}"),
        proptest::option::of(0u32..200),
        proptest::option::of("[A-E][1-5]"),
        proptest::option::of("[ -~]{0,30}"),
    )
        .prop_map(
            |(
                (degree, case_id),
                weights,
                twists,
                (a, b, c, d),
                verdict,
                rule_id,
                e,
                ray_type,
                contraction,
            )| {
                OutputRecord {
                    degree,
                    case_id,
                    weights,
                    twists,
                    anti_k: [a, b],
                    minus_k_cube: c,
                    d_class: d.map(|(x, y)| [x, y]),
                    verdict: verdict.to_string(),
                    rule_id,
                    e,
                    ray_type,
                    contraction,
                }
            },
        )
}

proptest! {
    #[test]
    fn json_round_trip(records in proptest::collection::vec(record(), 0..5)) {
        prop_assert_eq!(parse_json(&render_json(&records)).unwrap(), records);
    }
}
