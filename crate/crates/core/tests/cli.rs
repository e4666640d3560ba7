use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_regsing"));
    c.env("NO_COLOR", "1");
    c
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn regsing(args: &[&str]) -> Run {
    let out = bin().args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn valid(report: &str) -> Value {
    let v: Value = serde_json::from_str(report).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{report}");
    v
}

#[test]
fn classify_basic_example() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[1/z]]\n");
    let r = regsing(&["classify", &a]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = valid(&r.stdout);
    assert_eq!(v["points"][0]["point"], "0");
    assert_eq!(v["points"][0]["class"], "regular");
    assert_eq!(v["regular_singular"], true);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn reduce_emits_the_holomorphic_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[1/z]]");
    let r = regsing(&["reduce", &a, "--point", "0", "--no-timing"]);
    assert_eq!(r.code, 0);
    let v = valid(&r.stdout);
    let hol = v["certificates"].as_array().unwrap().iter().find(|c| c["kind"] == "holomorphic").unwrap();
    assert_eq!(hol["a_prime"], serde_json::json!([["0"]]));
    assert_eq!(hol["basis"], serde_json::json!([["t"]]));
    assert_eq!(v["verified"], true);
}

#[test]
fn sweep_of_a_scaled_pole() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "p.txt", "params: l\n[[l/z]]");
    let r = regsing(&["sweep", &a, "--samples", "10", "--seed", "3"]);
    assert_eq!(r.code, 0);
    let v = valid(&r.stdout);
    assert_eq!(v["passes"], 10);
    assert_eq!(v["evaluated"], 10);
}

#[test]
fn every_subcommand_matches_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[1/(2*z) + 1/(3*(z-1)), 1/z], [0, 1/(5*(z-1))]]");
    let airy = file(&dir, "airy.txt", "[[0, 1], [z, 0]]");
    let p = file(&dir, "p.txt", "params: a, b\n[[a/(z*(z-1)), 0], [b, 1/(z-a)]]");
    let res = file(&dir, "res.txt", "[[1/2, 0], [1, 0]]; [[0, 1], [0, 1/3]]");
    let out = dir.path().join("f.json").to_string_lossy().into_owned();
    let reports = [
        regsing(&["classify", &a, "--certificates"]),
        regsing(&["classify", &airy]),
        regsing(&["reduce", &a, "--point", "1"]),
        regsing(&["reduce", &airy, "--point", "inf"]),
        regsing(&["exponents", &a, "--point", "0"]),
        regsing(&["specialize", &p, "--set", "a=2", "--set", "b=-1"]),
        regsing(&["sweep", &p, "--samples", "5"]),
        regsing(&["monodromy", &a]),
        regsing(&["monodromy", &a, "--point", "1", "--tol", "1e-8"]),
    ];
    for r in &reports {
        assert_eq!(r.code, 0, "{}", r.stderr);
        valid(&r.stdout);
    }
    let f = regsing(&["fuchsian", "--points", "0,-1", "--residues", &res, "--json", &out]);
    assert_eq!(f.code, 0, "{}", f.stderr);
    valid(&std::fs::read_to_string(&out).unwrap());
}

#[test]
fn fuchsian_output_feeds_classify() {
    let dir = tempfile::tempdir().unwrap();
    let res = file(&dir, "res.txt", "[[1/2]] [[1/3]] [[-1/4]]");
    let f = regsing(&["fuchsian", "--points", "0,1,-1/2", "--residues", &res]);
    assert_eq!(f.code, 0, "{}", f.stderr);
    let m = file(&dir, "m.txt", &f.stdout);
    let v = valid(&regsing(&["classify", &m]).stdout);
    assert_eq!(v["regular_singular"], true);
    assert_eq!(v["singular_points"], serde_json::json!(["-1/2", "0", "1", "inf"]));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[z/(z^2+1), 1/z^2], [1, 1/(z-2)]]");
    let p = file(&dir, "p.txt", "params: l\n[[l/z + (1-l)/(z-1)]]");
    for args in [vec!["classify", &a, "--certificates"], vec!["sweep", &p, "--samples", "20", "--seed", "9"], vec!["monodromy", &a]] {
        let mut args = args.clone();
        args.push("--no-timing");
        let first = regsing(&args).stdout;
        assert_eq!(first, regsing(&args).stdout);
        assert!(!first.contains("timing_ms"));
    }
}

#[test]
fn json_flag_writes_a_file_and_prints_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[1/z^2]]");
    let out = dir.path().join("r.json").to_string_lossy().into_owned();
    let r = regsing(&["classify", &a, "--json", &out]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("irregular"));
    assert!(!r.stdout.contains('\x1b'));
    let v = valid(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(v["regular_singular"], false);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = file(&dir, "z.txt", "[[1/(z-z)]]");
    let r = regsing(&["classify", &zero]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("zero denominator"), "{}", r.stderr);
    let undeclared = file(&dir, "u.txt", "[[1/z],\n [y/z]]");
    let r = regsing(&["classify", &undeclared]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2, column 3"), "{}", r.stderr);
    assert_eq!(regsing(&["classify", "/nonexistent/file"]).code, 2);
    assert_eq!(regsing(&["classify"]).code, 2);
    let p = file(&dir, "p.txt", "params: l\n[[1/(z-l)]]");
    assert_eq!(regsing(&["specialize", &p, "--set", "m=1"]).code, 2);
    let a = file(&dir, "a.txt", "[[1/z]]");
    assert_eq!(regsing(&["monodromy", &a, "--point", "3"]).code, 2);
    assert_eq!(regsing(&["classify", &a, "--field-ext", "x^2-1"]).code, 2);
}

#[test]
fn degree_cap_makes_the_analysis_indeterminate() {
    let dir = tempfile::tempdir().unwrap();
    let a = file(&dir, "a.txt", "[[1/(z^3-2)]]");
    let r = regsing(&["classify", &a, "--degree-cap", "2"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    let v = valid(&r.stdout);
    assert_eq!(v["indeterminate"], true);
    assert_eq!(regsing(&["classify", &a]).code, 0);
}

#[test]
fn help_lists_every_subcommand() {
    let r = regsing(&["--help"]);
    assert_eq!(r.code, 0);
    for s in ["classify", "reduce", "exponents", "fuchsian", "specialize", "sweep", "monodromy"] {
        assert!(r.stdout.contains(s), "{s}");
    }
    let r = regsing(&["classify", "--help"]);
    for flag in ["--certificates", "--json", "--field-ext", "--degree-cap", "--no-timing"] {
        assert!(r.stdout.contains(flag), "{flag}");
    }
}
