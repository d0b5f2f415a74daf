//! End-to-end checks of the `herbrand` binary: output shapes, exit codes,
//! and certificate round trips through the filesystem.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn herbrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_herbrand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn normalize_rewrites_to_rnnf() {
    let theory = fixture("theories/t.thy");
    let out = herbrand(&[
        "normalize",
        "--theory",
        &path_arg(&theory),
        "--formula",
        "(forall x. R(x)) -> forall x. R(x)",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("(exists x1. ~R(x1)) | (forall x2. R(x2))"), "{text}");
}

#[test]
fn skolemize_prints_open_forms_and_registry() {
    let theory = fixture("theories/q.thy");
    let out = herbrand(&["skolemize", "--theory", &path_arg(&theory)]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("x1 = 0 | x1 = s(sk0(x1))"), "{text}");
    assert!(text.contains("(~(x1 <= x2) | x1 + sk1(x1, x2) = x2) & (~(x1 + x4 = x2) | x1 <= x2)"));
    assert!(text.contains("sk0/1  from  exists x2. x1 = s(x2)"));
    assert!(text.contains("sk1/2  from  exists x3. x1 + x3 = x2"));
}

#[test]
fn skolemize_induction_body() {
    let theory = fixture("theories/q.thy");
    let out = herbrand(&[
        "skolemize",
        "--theory",
        &path_arg(&theory),
        "--induction-body",
        "exists y. (y <= x * x & y = x * x)",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(
        text.contains("sk3(sk2) <= sk2 * sk2 & sk3(sk2) = sk2 * sk2"),
        "{text}"
    );
}

#[test]
fn instances_lists_available_instances_with_sources() {
    let out = herbrand(&[
        "instances",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/t_cgf.lam")),
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("P(c, sk0(c))"), "{text}");
    assert!(text.contains("R(c) | S(g(c))"));
    assert!(text.contains("x1 := c"));
    // The larger instance of the covering axiom is not available here.
    assert!(!text.contains("S(g(g(c)))"));
}

#[test]
fn find_eval_modes_agree_and_emit_json() {
    for mode in ["sat", "brute"] {
        let out = herbrand(&[
            "--json",
            "find-eval",
            "--theory",
            &path_arg(&fixture("theories/t.thy")),
            "--lambda",
            &path_arg(&fixture("lambda/t_cgf.lam")),
            "--mode",
            mode,
        ]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        assert_eq!(v["verdict"], "SAT");
        assert!(v["true_atoms"].as_array().is_some());
    }
}

#[test]
fn check_eval_exit_codes_distinguish_verdicts() {
    let ok = herbrand(&[
        "check-eval",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/t_cgf.lam")),
        "--eval",
        &path_arg(&fixture("evals/witness.eval")),
    ]);
    assert!(ok.status.success());
    assert!(stdout_of(&ok).contains("VALID"));

    let bad = herbrand(&[
        "check-eval",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/t_cgf.lam")),
        "--eval",
        &path_arg(&fixture("evals/extended.eval")),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout_of(&bad);
    assert!(text.contains("INVALID"), "{text}");
    assert!(text.contains("~P(c, sk0(c)) | ~S(c)"));
}

#[test]
fn force_reports_the_verdict() {
    let out = herbrand(&[
        "force",
        "--theory",
        &path_arg(&fixture("theories/q.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/sigma_zero.lam")),
        "--goal",
        "~(0 <= 0) | 0 = 0",
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("FORCED"));
}

#[test]
fn prove_writes_a_replayable_certificate() {
    let dir = std::env::temp_dir().join(format!("herbrand-cert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cert_path = dir.join("cert.txt");
    let out = herbrand(&[
        "prove",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--goal",
        "forall x. R(x)",
        "--seed-lambda",
        &path_arg(&fixture("lambda/refuting.lam")),
        "--max-level",
        "0",
        "--cert-out",
        &path_arg(&cert_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_of(&out).contains("PROVED"));

    let check = herbrand(&[
        "prove",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--goal",
        "forall x. R(x)",
        "--check",
        &path_arg(&cert_path),
    ]);
    assert!(check.status.success());
    assert!(stdout_of(&check).contains("certificate ok"));

    // Tampering must be detected with a nonzero exit.
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let tampered = text.replacen("R(x)", "S(x)", 1);
    std::fs::write(&cert_path, tampered).unwrap();
    let bad = herbrand(&[
        "prove",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--goal",
        "forall x. R(x)",
        "--check",
        &path_arg(&cert_path),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn prove_unknown_exits_one() {
    let out = herbrand(&[
        "prove",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--goal",
        "forall x. S(x)",
        "--max-level",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("UNKNOWN"));
}

#[test]
fn universe_grows_and_respects_budgets() {
    let out = herbrand(&[
        "universe",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/t_cgf.lam")),
        "--steps",
        "1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("sizes per level: [3, 7]"), "{text}");
    assert!(text.contains("g(g(c))"));

    // Budget violations exit with code 2.
    let blown = herbrand(&[
        "--budget-terms",
        "4",
        "universe",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--lambda",
        &path_arg(&fixture("lambda/t_cgf.lam")),
        "--steps",
        "2",
    ]);
    assert_eq!(blown.status.code(), Some(2));
}

#[test]
fn coding_report_is_clean_json() {
    let out = herbrand(&["coding-report", "--samples", "100", "--seed", "7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(v["singleton_bound"]["violations"], 0);
    assert_eq!(v["union_bound"]["violations"], 0);
    assert_eq!(v["cardinality_bound"]["holds"], 100);
    assert_eq!(v["omega1_triple_exponential_steps"], serde_json::json!([true, true, true]));
    assert!(v["fitted_exponents"]["closure_cardinality_vs_factorial"].as_u64().is_some());
    assert!(v["fitted_exponents"]["closure_code_vs_omega2"].as_u64().is_some());
    for entry in v["assignment_counts"].as_array().unwrap() {
        assert_eq!(entry["matches"], true);
    }
}

#[test]
fn fixtures_subcommand_runs_single_and_all() {
    let one = herbrand(&["fixtures", "run", "--name", "witness-evaluation-accepted"]);
    assert!(one.status.success());
    assert!(stdout_of(&one).contains("1/1 fixtures passed"));

    let all = herbrand(&["--json", "fixtures", "run"]);
    assert!(all.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&all)).unwrap();
    let items = v["fixtures"].as_array().unwrap();
    assert_eq!(items.len(), 11);
    assert!(items.iter().all(|i| i["passed"] == true));
}

#[test]
fn lexical_errors_carry_positions() {
    let out = herbrand(&[
        "normalize",
        "--theory",
        &path_arg(&fixture("theories/t.thy")),
        "--formula",
        "R(c) &",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at 1:"), "{err}");
}
