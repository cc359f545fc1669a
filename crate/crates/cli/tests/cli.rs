use std::process::{Command, Output};

use phizeta_cli::ReportDocument;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phizeta"))
        .args(args)
        .env_remove("PHIZETA_DIGITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_counts_and_filters() {
    let all = run(&["list"]);
    assert_eq!(all.status.code(), Some(0));
    let rows = stdout(&all).lines().filter(|l| l.contains("(m=")).count();
    assert!(rows >= 18, "{rows}");

    let ex = stdout(&run(&["list", "--family", "EXAMPLE"]));
    assert_eq!(ex.lines().filter(|l| l.starts_with("ex-")).count(), 8);

    let div = stdout(&run(&["list", "--divergent"]));
    assert!(div.contains("ex-fc0zaz6"));
    assert!(!div.contains("ex-pnj960x"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--id", "nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["sum", "--kind", "L", "--m", "0", "--r", "1", "--z", "1/3"]).status.code(), Some(2));
    assert_eq!(run(&["--digits", "20", "list"]).status.code(), Some(2));
    assert_eq!(run(&["--tol-exp", "41", "list"]).status.code(), Some(2));
    assert_eq!(run(&["list", "--family", "COR9_F"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--family", "COR3_F", "--m", "1", "--r", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn environment_mirrors_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_phizeta"))
        .args(["list"])
        .env("PHIZETA_DIGITS", "12")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn convergent_sum_agrees_with_polygamma_form() {
    let o = run(&["sum", "--kind", "F", "--m", "2", "--r", "2", "--z", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("convergent (|α^r z| = (3+√5)/6 < 1)"), "{s}");
    assert!(s.contains("direct sum:") && s.contains("polygamma form:"));
}

#[test]
fn verify_report_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["--json", "--out", path.to_str().unwrap(), "verify", "--id", "ex-pnj960x", "--id", "ex-allakva"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    assert_eq!(doc.header.precision, "50");
    assert_eq!(doc.reports.len(), 4);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = &v["reports"][0];
    for key in ["id", "mode", "lhs_value", "rhs_value", "abs_error", "rel_error", "terms_used", "precision", "elapsed_ms", "verdict"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
    assert!(first["terms_used"].is_string());
    assert_eq!(v["reports"][2]["verdict"], "divergent_skipped_direct");
}

#[test]
fn verify_text_footer() {
    let o = run(&["--digits", "40", "verify", "--id", "ex-gluacxg"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("passed 1/1"));
}

#[test]
fn corrupted_constant_fails() {
    let o = run(&["--inject-fault", "example-constant", "verify", "--id", "ex-s1u6y4q"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("passed 0/1"));
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--all", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn selftest_passes_for_other_seeds() {
    for seed in ["7", "8"] {
        let o = run(&["--seed", seed, "selftest"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn generate_new_instance_verifies() {
    let o = run(&["generate", "--family", "COR3_F", "--m", "6", "--r", "2", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.contains("id: cor3F-m6-r2"));
    assert!(s.contains("passed 1/1"));
}

#[test]
fn eval_kernels() {
    let s = stdout(&run(&["eval", "zeta", "--k", "2"]));
    assert!(s.starts_with("zeta(2) = 1.6449340668482264364724151666460251892189499012068"), "{s}");
    let s = stdout(&run(&["eval", "fib", "--n", "10"]));
    assert!(s.contains("55, 123"));
}
