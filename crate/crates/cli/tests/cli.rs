use std::path::PathBuf;
use std::process::{Command, Output};

fn hermform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermform"))
        .args(args)
        .env_remove("HERMFORM_ASCII")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hermform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn list_prints_catalog_ids() {
    let o = hermform(&["list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for id in [
        "nakamura:III.2",
        "nakamura:V.17",
        "iwasawa",
        "example1:invariant",
        "torus:N",
        "ce:u=U,v=V",
    ] {
        assert!(out.lines().any(|l| l == id), "{id}");
    }
}

#[test]
fn bott_chern_obstruction_on_the_iwasawa_manifold() {
    let o = hermform(&["formality", "--model", "nakamura:III.2", "--notion", "bott-chern"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("obstructed: holomorphic form φ³ with ∂φ³ ≠ 0"));
    assert!(out.contains("geometrically Bott-Chern formal: no"));
}

#[test]
fn calabi_eckmann_m11() {
    let o = hermform(&["ce", "--u", "1", "--v", "1", "--all-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // h_BC: 1 in degrees 0 and 6, two classes in (1,1), one each in (2,1), (1,2), (2,2), (3,2), (2,3)
    let diamond = "\
Bott-Chern (h_BC) of ce:u=1,v=1:
        1
      1   1
    0   1   0
  0   1   1   0
    0   2   0
      0   0
        1
";
    assert!(out.contains(diamond), "{out}");
    assert!(out.lines().any(|l| l == "geometrically Bott-Chern formal: yes"));
    assert!(out.lines().any(|l| l == "geometrically Dolbeault formal: no"));
    assert!(out.contains("geometric Aeppli formality: not obstructed by these tests"));
}

#[test]
fn appendix_suite_passes() {
    let o = hermform(&["verify-appendix"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("18/18 cases verified (19 runs)"));
    assert!(!out.contains("FAIL"));
    let v9 = out.lines().find(|l| l.contains(" V.9:")).unwrap();
    assert!(v9.contains("table lists a (1,3) form"), "{v9}");
}

#[test]
fn single_case_with_parameters_and_perturbations() {
    let o = hermform(&[
        "--seed",
        "7",
        "verify-appendix",
        "--case",
        "V.17",
        "--param",
        "alpha=2",
        "--param",
        "beta=1-i",
        "--perturb",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("1/1 cases verified (1 runs)\n"));
    let bad = hermform(&[
        "verify-appendix",
        "--case",
        "V.17",
        "--param",
        "alpha=0",
        "--param",
        "beta=1",
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn massey_on_the_iwasawa_manifold() {
    let o = hermform(&[
        "--ascii",
        "massey",
        "--model",
        "iwasawa",
        "--a",
        "p1*p2",
        "--b",
        "q1*q2",
        "--c",
        "q1*q2",
        "--perturb",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("<a, b, c>_ABC in bidegree (1,3): nonzero"), "{out}");
    assert!(out.contains("representative: p3*~p1*~p2*~p3"));
    assert!(out.contains("indeterminacy dimension: 2 of 3"));
    assert!(out.is_ascii());
}

#[test]
fn ascii_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_hermform"))
        .args(["formality", "--model", "iwasawa", "--notion", "bott-chern"])
        .env("HERMFORM_ASCII", "1")
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.is_ascii(), "{out}");
    assert!(out.starts_with("obstructed: holomorphic form (p3) with del(p3) != 0"));
}

#[test]
fn json_tables_feed_the_analyzer() {
    let first = hermform(&["cohomology", "--model", "iwasawa", "--json"]);
    assert!(first.status.success());
    let again = hermform(&["cohomology", "--model", "iwasawa", "--json"]);
    assert_eq!(first.stdout, again.stdout);
    let table: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(table["h_bc"][2][2], 8);
    assert_eq!(table["betti"], serde_json::json!([1, 4, 8, 10, 8, 4, 1]));

    let path = temp_file("iwasawa.json", &stdout(&first));
    let o = hermform(&["obstruct", "--input", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdicts = report["verdicts"].as_array().unwrap();
    assert!(verdicts.contains(&serde_json::json!(["bott_chern_cn", "obstructed"])));
    assert!(verdicts.contains(&serde_json::json!(["geometric", "not_obstructed_by_these_tests"])));
    assert_eq!(report["skipped"], serde_json::json!([]));
}

#[test]
fn obstruct_text_with_missing_entries() {
    let path = temp_file("partial.json", r#"{"n": 3, "betti": [1, 6, 16, 20, 16, 6, 1]}"#);
    let o = hermform(&["obstruct", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("geometric formality: obstructed"));
    assert!(out.contains("fails b_2 ≤ b_2(torus): 16 > 15"), "{out}");
    assert!(out.contains("skipped bigraded bounds"));

    let broken = temp_file("broken.json", r#"{"n": 1, "betti": [1, 2, 3]}"#);
    let o = hermform(&["obstruct", "--input", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Poincaré duality"));
}

#[test]
fn cohomology_diamonds() {
    let o = hermform(&["cohomology", "--model", "torus:2", "--theories", "dbar,dr"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("    2   2\n  1   4   1\n"), "{out}");
    assert!(
        out.contains("de Rham (b) of torus:2:\n  1\n  4\n  6\n  4\n  1\n"),
        "{out}"
    );
    let o = hermform(&["cohomology", "--model", "torus:2", "--theories", "dbar,hodge"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_and_use_a_model_file() {
    let src = "model kt dim 2\nholo a b\nd b = a*abar\n";
    let path = temp_file("kt.hf", src);
    let o = hermform(&["parse", path.to_str().unwrap(), "--validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), src);
    assert!(stderr(&o).contains("valid"));

    let o = hermform(&["cohomology", "--model", path.to_str().unwrap(), "--theories", "dr"]);
    assert!(stdout(&o).contains("  1\n  3\n  4\n  3\n  1\n"));

    let bad = temp_file("bad.hf", "model bad dim 2\nholo a b\nd b = a*c\n");
    let o = hermform(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown generator `c`"));
}

#[test]
fn user_errors_exit_with_one() {
    for args in [
        vec!["frobnicate"],
        vec!["cohomology"],
        vec!["cohomology", "--model", "nakamura:IX.1"],
        vec!["formality", "--model", "iwasawa", "--notion", "kahler"],
        vec!["massey", "--model", "iwasawa", "--a", "p3", "--b", "q1", "--c", "q1"],
        vec!["massey", "--model", "iwasawa", "--a", "p1 +", "--b", "q1", "--c", "q1"],
        vec!["cohomology", "--model", "iwasawa", "--param", "alpha"],
        vec!["obstruct", "--input", "/nonexistent/table.json"],
    ] {
        let o = hermform(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(hermform(&["--help"]).status.code(), Some(0));
}
