use std::process::{Command, Output};

use nonadditive_codes::cli::strip_timing;
use serde_json::Value;

fn nacodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nacodes")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn construct_json_lists_words_and_kets() {
    let out = nacodes(&["construct", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["subcommand"], "construct");
    assert_eq!(v["result"]["codewords"].as_array().unwrap().len(), 10);
    let kets = v["result"]["kets"].as_array().unwrap();
    assert_eq!(kets.len(), 5);
    assert_eq!(kets[0]["n"], 5);
    assert!(v["convention"].as_str().unwrap().contains("l = ((n-3)/2) mod 2"));
}

#[test]
fn construct_trivial_and_qudit() {
    let out = nacodes(&["construct", "--k", "0", "--l", "0", "--text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "000\n111\n\n|000>+|111>\n");
    let out = nacodes(&["construct", "--n", "5", "--dim", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let (_, kets) = text.split_once("\n\n").unwrap();
    let lines: Vec<&str> = kets.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l.matches('|').count() == 3), "{kets}");
    assert_eq!(lines[0], "|10000>+|21111>+|02222>");
}

#[test]
fn construct_writes_files() {
    let dir = std::env::temp_dir().join(format!("nacodes-construct-{}", std::process::id()));
    let out = nacodes(&["construct", "--n", "5", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let words = std::fs::read_to_string(dir.join("codewords.txt")).unwrap();
    assert_eq!(words, std::fs::read_to_string(fixture_path("n5_classical.txt")).unwrap());
    let kets: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("kets.json")).unwrap()).unwrap();
    assert_eq!(kets.as_array().unwrap().len(), 5);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invalid_n_is_a_usage_error() {
    for n in ["4", "1", "0"] {
        let out = nacodes(&["construct", "--n", n]);
        assert_eq!(out.status.code(), Some(2), "n = {n}");
    }
    assert_eq!(nacodes(&["construct", "--k", "0"]).status.code(), Some(2));
    assert_eq!(nacodes(&["verify", "--input", "/does/not/exist"]).status.code(), Some(2));
}

#[test]
fn verify_n11() {
    let out = nacodes(&["verify", "--n", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["M"], "386");
    assert_eq!(v["parameters"]["k"], 2);
    assert_eq!(v["parameters"]["l"], 0);
}

#[test]
fn verify_bad_input_fails_with_witness() {
    let out = nacodes(&["verify", "--input", &fixture_path("bad_code.txt")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["pass"], false);
    let w = &v["witnesses"][0];
    assert_eq!(w["kind"], "classical_distance");
    assert_eq!(w["pair"]["distance"], 1);
}

#[test]
fn verify_good_input_and_span_rank() {
    let out = nacodes(&["verify", "--input", &fixture_path("n5_classical.txt"), "--span-rank"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["error_span_rank"], 32);
    assert_eq!(v["result"]["kets"][0], "|10000>+|01111>");
}

#[test]
fn verify_qutrit() {
    let out = nacodes(&["verify", "--n", "5", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["kl"]["arithmetic"], "exact");
    assert_eq!(v["result"]["kl"]["errors_checked"], 40);
}

#[test]
fn bounds_csv_shows_crossover() {
    let out = nacodes(&["bounds", "--max-n", "13", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,M,rains_bound_floor,additive,rains_family,winner");
    assert!(lines.contains(&"9,93,112,64,96,rains_family"), "{csv}");
    assert!(lines.contains(&"11,386,460,256,384,this_family"), "{csv}");
    let v = json_of(&nacodes(&["bounds", "--max-n", "13"]));
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn projector_audit_records_mismatch_but_passes() {
    let out = nacodes(&["projector", "--n", "5", "--audit"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["result"]["audit"]["mismatches"].as_u64().unwrap() > 0);
    let rows = v["result"]["audit"]["rows"].as_array().unwrap();
    let r = rows.iter().find(|r| r["s"] == 1).unwrap();
    assert_eq!((r["derived"].as_str(), r["printed"].as_str()), (Some("1"), Some("6")));
}

#[test]
fn projector_export() {
    let v = json_of(&nacodes(&["projector", "--n", "3", "--export"]));
    let terms = v["result"]["terms"].as_array().unwrap();
    assert!(!terms.is_empty());
    assert!(terms.iter().all(|t| t["den"] == "8"));
}

#[test]
fn automorph_split() {
    let out = nacodes(&["automorph", "--n", "5", "--perm-samples", "10", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    for p in v["result"]["sweep"]["permutations"].as_array().unwrap() {
        assert_eq!((p["candidates"].as_u64(), p["preserved"].as_u64()), (Some(64), Some(32)));
    }
    assert_eq!(v["parameters"]["seed"], 1);
}

#[test]
fn simulate_and_control() {
    let out = nacodes(&["simulate", "--k", "0", "--l", "1", "--trials", "10", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["result"]["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!(v["result"]["mean_fidelity"].is_number());
    assert_eq!(v["result"]["results"].as_array().unwrap().len(), 50);

    let one = json_of(&nacodes(&["simulate", "--n", "7", "--trials", "3", "--site", "4"]));
    assert_eq!(one["result"]["results"].as_array().unwrap().len(), 3);

    let out = nacodes(&["simulate", "--control", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["result"]["min_fidelity"].as_f64().unwrap() < 0.99);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["simulate", "--n", "5", "--trials", "5", "--seed", "17"][..],
        &["automorph", "--n", "5", "--perm-samples", "4", "--seed", "9"][..],
        &["verify", "--n", "7"][..],
    ] {
        let a = nacodes(args);
        let b = nacodes(args);
        let mut jobs = args.to_vec();
        jobs.extend(["--jobs", "1"]);
        let c = nacodes(&jobs);
        let strip = |o: &Output| strip_timing(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
        assert_eq!(strip(&a), strip(&b), "{args:?}");
        assert_eq!(strip(&a), strip(&c), "{args:?} with --jobs 1");
    }
}

#[test]
fn text_format_summarizes_checks() {
    let out = nacodes(&["verify", "--n", "5", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("knill_laflamme"));
    assert!(text.trim_end().ends_with("overall pass"));
}
