use std::process::{Command, Output};

fn invbar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invbar"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_lists_in_lex_order() {
    let o = invbar(&["enumerate", "-n", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,1,1\n1,1,2\n1,1,3\n1,2,1\n1,2,2\n1,2,3\n");
    let o = invbar(&["enumerate", "-n", "2", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), "[[1,1],[1,2]]");
}

#[test]
fn guards_exit_with_two() {
    for args in [
        &["enumerate", "-n", "13"][..],
        &["enumerate", "-n", "0"],
        &["dist", "lda", "-n", "11", "--engine", "brute"],
        &["stats", "1,3,1"],
        &["stats", "0,1"],
        &["series", "A", "--p", "1", "--y", "1/2"],
        &["series", "A", "--p", "1/2", "--y", "2"],
        &["series", "tote1", "--y", "1"],
        &["series", "A1", "--p", "1/0"],
        &["verify", "--nmax", "10"],
        &["verify", "--order", "13"],
        &["map", "f-inverse", "(1,2)(2,3)"],
        &["map", "area-flip", "1"],
        &["no-such-command"],
    ] {
        let o = invbar(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn stats_json() {
    let o = invbar(&["stats", "1,2,1,3,5,3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["area"], 15);
    assert_eq!(v["sper"], 12);
    assert_eq!(v["descents"], 2);
}

#[test]
fn dist_engines_print_identical_tables() {
    let outs: Vec<String> = ["brute", "lemma", "threeterm"]
        .iter()
        .map(|e| stdout(&invbar(&["dist", "lda", "-n", "5", "--engine", e])))
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[1], outs[2]);
    let csv = stdout(&invbar(&["dist", "area-sper", "-n", "2"]));
    assert_eq!(csv, "n,i,poly\n1,1,p*q^2\n2,1,p^2*q^3\n2,2,p^3*q^4\n");
}

#[test]
fn dist_json_round_trips_through_the_library() {
    let js = stdout(&invbar(&["dist", "area-sper", "-n", "4", "--format", "json"]));
    let t = invbar::DistTable::from_json(&js).unwrap();
    assert_eq!(t, invbar::recur::a_table_lemma(4));
}

#[test]
fn totals_json() {
    let o = invbar(&["totals", "-n", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["area"], "168");
    assert_eq!(v["levels"], "26");
    assert_eq!(v["ascents"], "36");
}

#[test]
fn maps() {
    let run = |m: &str, x: &str| stdout(&invbar(&["map", m, x])).trim().to_string();
    assert_eq!(run("f", "1,2,2,4,3,3,7,7"), "(1,2)(3,5,4)(6,7)(8)");
    assert_eq!(run("f-inverse", "(1,2)(3,5,4)(6,7)(8)"), "1,2,2,4,3,3,7,7");
    assert_eq!(run("g", "1,2,1,4,2,4,7,3"), "4,6,1,7,2,5,8,3");
    assert_eq!(run("g-inverse", "4,6,1,7,2,5,8,3"), "1,2,1,4,2,4,7,3");
    assert_eq!(run("from-perm", "5,2,4,6,1,3"), "1,2,1,3,5,3");
    assert_eq!(run("to-perm", "1,2,1,3,5,3"), "5,2,4,6,1,3");
    assert_eq!(run("complement", "1,2,1,3"), "1,1,3,2");
    assert_eq!(run("levels-involution", "1,2,1,2"), "undefined");
    assert_eq!(run("sper-involution", "1,1,2"), "undefined");
}

#[test]
fn series_text_and_csv() {
    let o = invbar(&["series", "area-gf", "--y", "1/2", "--order", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x^0: 0\nx^1: 1/2\nx^2: 7/8\nx^3: 19/16\n");
    let o = invbar(&["series", "A1", "--p", "1/2", "--order", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "k,coeff\n0,0\n1,1/2\n2,3/8\n");
}

#[test]
fn verify_report_and_corruption() {
    let o = invbar(&["verify", "recurrences", "--nmax", "5", "--order", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v.as_array().unwrap();
    assert!(recs.iter().all(|r| r["status"] == "pass"));
    assert!(recs[0]["n_range"].is_array());

    let o = invbar(&[
        "verify",
        "recurrences",
        "--nmax",
        "5",
        "--order",
        "5",
        "--inject-corruption",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let bad = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["status"] == "fail")
        .unwrap();
    assert!(bad["first_mismatch"].as_str().unwrap().contains("(3,1)"));
}

#[test]
fn verify_accepts_a_user_point() {
    let o = invbar(&[
        "verify", "gf", "--nmax", "3", "--order", "5", "--p", "1/7", "--q", "2", "--r", "-1/2", "--y", "3/5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let hit = v
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["formula_id"] == "B_functional" && r["parameter_point"]["q"] == "2");
    assert!(hit);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("invbar-cli-{}.csv", std::process::id()));
    let o = invbar(&["dist", "area-sper", "-n", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,i,poly\n1,1,p*q^2\n");
    let _ = std::fs::remove_file(path);
}
