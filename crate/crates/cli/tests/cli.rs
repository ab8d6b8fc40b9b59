//! End-to-end tests of the `finlin` binary: verdict lines, key=value
//! blocks, exit codes, and byte stability.

use std::path::Path;
use std::process::{Command, Output};

fn finlin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finlin"))
        .args(args)
        .env_remove("FINLIN_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const UB_P: &str =
    "(E x. P(x)) & ((A y. P(y) -> (E z. P(z) & y < z)) | (A y. P(y) -> (E z. P(z) & z < y)))";

#[test]
fn decide_satisfiable() {
    let out = finlin(&["decide", "-e", "E x. P(x)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("SAT-FIN {P}\n"), "{text}");
    assert!(text.contains("verdict=SAT-FIN"));
    assert!(text.contains("model={P}"));
}

#[test]
fn decide_unbounded_predicate() {
    let out = finlin(&["decide", "-e", UB_P]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("UNSAT-FIN\n"));
}

#[test]
fn decide_respects_budget_flag() {
    let out = finlin(&["decide", "-e", UB_P, "--budget", "2"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("BUDGET"));
}

#[test]
fn decide_budget_env_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_finlin"))
        .args(["decide", "-e", UB_P])
        .env("FINLIN_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn decide_emits_dot() {
    let dir = std::env::temp_dir().join("finlin-cli-test-dot");
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("out.dot");
    let out = finlin(&["decide", "-e", "E x. P(x)", "--emit-dot", dot.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn kv_format_is_machine_only() {
    let out = finlin(&["--format", "kv", "decide", "-e", "E x. P(x)"]);
    let text = stdout(&out);
    assert!(!text.contains("SAT-FIN {P}\n"));
    assert!(text.starts_with("verdict=SAT-FIN"));
}

#[test]
fn output_is_byte_stable() {
    let a = finlin(&["theory", "-e", "E x. P(x) | (E y. Q(y))"]);
    let b = finlin(&["theory", "-e", "E x. P(x) | (E y. Q(y))"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_error_exits_2() {
    let out = finlin(&["decide", "-e", "E x. P(x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unknown_predicate_with_explicit_sig() {
    let out = finlin(&["--sig", "P", "decide", "-e", "~(E x. Q(x))"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q"));
}

#[test]
fn find_model_bounds() {
    let out = finlin(&["find-model", "-e", "E x. E y. x < y", "--max-len", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("model_len=2"));

    let out = finlin(&["find-model", "-e", UB_P, "--max-len", "4"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("NO-MODEL"));
}

#[test]
fn theory_axiom_count() {
    let out = finlin(&["theory", "-e", "E x. P(x)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("axioms=5"), "{text}");
    assert!(text.contains("ell=1"));
}

#[test]
fn split_table() {
    let out = finlin(&["split", "-e", "x < y", "--left", "x", "--right", "y"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("pairs=1"));
    assert!(text.contains("pair.0.prefix=true"));
    assert!(text.contains("pair.0.suffix=true"));
}

#[test]
fn shrink_trace() {
    let out = finlin(&["shrink", "-e", "E x. P(x)", "{P};{};{};{P}"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("CORE "), "{text}");
    assert!(text.contains("steps="));
    let core_len: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("core_len="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(core_len <= 2);
}

#[test]
fn shrink_rejects_non_model() {
    let out = finlin(&["shrink", "-e", "E x. P(x)", "{};{}"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compile_reports_states() {
    let out = finlin(&["compile", "-e", "P(x)", "--vars", "x", "--stats"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("states="));
    assert!(text.contains("markers=x"));
    assert!(text.contains("stage.0.op="));
}

#[test]
fn tis_subcommands() {
    let out = finlin(&["tis-check", "-e", "n=2; edges=(0,1)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("TIS-MODEL yes"));

    let out = finlin(&["tis-check", "-e", "n=3; edges="]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("extensionality=false"));

    let out = finlin(&["tis-classify", "-e", "n=2; edges=(0,1)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("X = {0}\n"), "{text}");

    let out = finlin(&["tis-pad", "-e", "n=1; edges=", "-k", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("size=3"));
}

#[test]
fn interp_verify_round() {
    let dir = std::env::temp_dir().join("finlin-cli-test-interp");
    std::fs::create_dir_all(&dir).unwrap();
    let translation = dir.join("tau.txt");
    std::fs::write(
        &translation,
        "params: 2\ndomain: ~(w0 = w1)\nE(v0,v1) := v0 = w0 & v1 = w1\n",
    )
    .unwrap();
    let target = dir.join("target.txt");
    std::fs::write(&target, "n=3;").unwrap();

    let out = finlin(&[
        "interp-verify",
        "--translation",
        translation.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
        "--params",
        "0,1",
        "-e",
        "E a. E b. E(a,b)",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("VERIFIED yes"));

    // a sentence the translation refutes
    let out = finlin(&[
        "interp-verify",
        "--translation",
        translation.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
        "--params",
        "0,1",
        "-e",
        "A a. E(a,a)",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("VERIFIED no"));

    // non-injective parameters violate the domain
    let out = finlin(&[
        "interp-verify",
        "--translation",
        translation.to_str().unwrap(),
        "--target",
        target.to_str().unwrap(),
        "--params",
        "1,1",
        "-e",
        "E a. E b. E(a,b)",
    ]);
    assert_eq!(code(&out), 2);
    std::fs::remove_dir_all(&dir).ok();
}

fn write_corpus(dir: &Path) {
    std::fs::create_dir_all(dir).unwrap();
    std::fs::write(dir.join("a_some.fol"), "E x. P(x)\n").unwrap();
    std::fs::write(dir.join("b_two.fol"), "E x. E y. ~(x = y)\n").unwrap();
    std::fs::write(dir.join("c_none.fol"), "(E x. P(x)) & ~(E x. P(x))\n").unwrap();
    std::fs::write(dir.join("d_ub.fol"), format!("{UB_P}\n")).unwrap();
    std::fs::write(dir.join("e_empty_only.fol"), "A x. false\n").unwrap();
}

#[test]
fn corpus_table_and_agreement() {
    let dir = std::env::temp_dir().join("finlin-cli-test-corpus");
    write_corpus(&dir);
    let out = finlin(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("CORPUS 5 formulas"), "{text}");
    for needle in [
        "a_some.fol | SAT-FIN",
        "c_none.fol | UNSAT-FIN",
        "d_ub.fol | UNSAT-FIN",
        "rows=5",
    ] {
        assert!(text.contains(needle), "missing {needle} in:\n{text}");
    }
    // every completed row agrees across engines
    assert!(!text.contains("| NO"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corpus_budget_row_exits_3() {
    let dir = std::env::temp_dir().join("finlin-cli-test-corpus-budget");
    write_corpus(&dir);
    let out = finlin(&["corpus", dir.to_str().unwrap(), "--budget", "2"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("BUDGET"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corpus_empty_dir() {
    let dir = std::env::temp_dir().join("finlin-cli-test-corpus-empty");
    std::fs::create_dir_all(&dir).unwrap();
    let out = finlin(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("CORPUS 0 formulas"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn formula_from_file() {
    let dir = std::env::temp_dir().join("finlin-cli-test-file");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.fol");
    std::fs::write(&path, "E x. Q(x)\n").unwrap();
    let out = finlin(&["decide", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("SAT-FIN {Q}"));
    std::fs::remove_dir_all(&dir).ok();
}
