use std::process::{Command, Output};

use serde_json::Value;

fn burnside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(args)
        .env_remove("BURNSIDE_CAP")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = burnside(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn matrix(v: &Value) -> Vec<Vec<i64>> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn tables_of_marks() {
    let v4 = json(&["marks", "V4"]);
    let marks = matrix(&v4["marks"]);
    assert_eq!(marks.len(), 5);
    for (i, row) in marks.iter().enumerate() {
        assert!(row[i + 1..].iter().all(|&m| m == 0));
    }
    assert_eq!(matrix(&json(&["marks", "trivial"])["marks"]), vec![vec![1]]);

    // the row of A4/V4 has mark 3 at C2
    let a4 = json(&["marks", "A4"]);
    let labels: Vec<String> = serde_json::from_value(a4["classes"].clone()).unwrap();
    let of_order = |o: usize| labels.iter().position(|l| l.starts_with(&format!("H(order={o},"))).unwrap();
    assert_eq!(matrix(&a4["marks"])[of_order(4)][of_order(2)], 3);
}

#[test]
fn filtration_levels() {
    let v4 = json(&["jn", "V4", "1"]);
    assert_eq!(matrix(&v4["basis"]), vec![vec![1, -1, -1, -1, 2]]);

    let a4 = json(&["jn", "A4", "1"]);
    assert_eq!(a4["rank"], 2);
    for generator in ["[1,0,-3,-1,3]", "[0,1,-1,-1,1]"] {
        let v = json(&["jn", "A4", "1", "--membership", generator]);
        assert_eq!(v["member"], true, "{generator}");
    }
    assert_eq!(json(&["jn", "C6", "1"])["rank"], 0);
    assert_eq!(json(&["jn", "V4", "1", "--membership", "[1,0,0,0,0]"])["member"], false);

    let biv = json(&["jn", "V4", "1", "--bivariant", "C2"]);
    assert_eq!(biv["basis_labels"].as_array().unwrap().len(), 11);
}

#[test]
fn compositions() {
    let coeffs = |v: Value| -> Vec<i64> { serde_json::from_value(v["coeffs"].clone()).unwrap() };

    // C = {0,1} ≤ V4, then C → e: the transitive set V4/C
    let st = json(&["compose", "transfer:V4:V4[1]", "hom:V4[1]:trivial:0,0"]);
    assert_eq!(coeffs(st), [0, 1, 0, 0, 0]);

    for i in 0..6 {
        let basis = format!("basis:S3:C2:{i}");
        let left = json(&["compose", "identity:S3", &basis]);
        let right = json(&["compose", &basis, "identity:C2"]);
        assert_eq!(left["coeffs"], right["coeffs"]);
        let mut unit = vec![0; 6];
        unit[i] = 1;
        assert_eq!(coeffs(right), unit);
    }

    // C4 → C2 → e composes to C4 → e
    let two_step = json(&["compose", "hom:C4:C2:0,1,0,1", "hom:C2:trivial:0,0"]);
    let direct = json(&["compose", "hom:C4:trivial:0,0,0,0", "identity:trivial"]);
    assert_eq!(two_step["coeffs"], direct["coeffs"]);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| burnside(args).status.code().unwrap();
    assert_eq!(code(&["marks", "V4"]), 0);
    assert_eq!(code(&["marks", "NoSuchGroup"]), 2);
    assert_eq!(code(&["marks", "{\"order\": 2"]), 2);
    assert_eq!(code(&["compose", "bogus", "identity:C2"]), 2);
    assert_eq!(code(&["marks", "S4", "--cap", "12"]), 3);
    assert_eq!(code(&["compose", "basis:S3:C2:0", "identity:C3"]), 4);
    assert_eq!(code(&["compose", "transfer:C2:C4:0,1,0,1", "identity:C2"]), 4);

    let capped = Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(["marks", "S4"])
        .env("BURNSIDE_CAP", "12")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn outputs_are_deterministic_in_every_format() {
    let commands: [&[&str]; 3] = [
        &["marks", "D8"],
        &["jn", "A4", "1", "--bivariant", "C2"],
        &["compose", "basis:V4:C2:3", "hom:C2:C2:0,1"],
    ];
    for args in commands {
        for format in ["pretty", "json", "csv"] {
            let mut full = args.to_vec();
            full.extend(["--format", format]);
            let a = burnside(&full);
            let b = burnside(&full);
            assert!(a.status.success(), "{full:?}");
            assert!(!a.stdout.is_empty());
            assert_eq!(a.stdout, b.stdout, "{full:?}");
        }
    }
}

#[test]
fn injected_fault_is_pinpointed() {
    let quick = ["verify-paper", "--json", "--instances", "3", "--composition-pairs", "5"];
    let run = |extra: &[&str]| {
        let mut args = quick.to_vec();
        args.extend(extra);
        let out = burnside(&args);
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        let failed: Vec<String> = report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["status"] == "fail")
            .map(|c| c["name"].as_str().unwrap().to_string())
            .collect();
        (out.status.code().unwrap(), failed)
    };
    let (clean_code, clean) = run(&[]);
    let (fault_code, faulty) = run(&["--inject-fault", "klein-sign"]);
    assert_eq!(fault_code, 1);
    assert!(faulty.contains(&"klein_level_one_generator".to_string()));
    let added: Vec<&String> = faulty.iter().filter(|n| !clean.contains(n)).collect();
    assert_eq!(added, ["klein_level_one_generator"]);
    // the right-hand transfer case has genuine counterexamples
    assert_eq!(clean, ["bivariant_right_transfer_closure"]);
    assert_eq!(clean_code, 1);
}
