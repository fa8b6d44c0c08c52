use std::path::PathBuf;
use std::process::Command;

use mdm_cli::app::{run, Outcome, EXIT_FAIL, EXIT_PASS, EXIT_UNKNOWN, EXIT_USAGE};

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn mdm(args: &[&str]) -> Outcome {
    run(std::iter::once("mdm").chain(args.iter().copied()))
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("mdm-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn binary_checks_the_self_application_derivation() {
    let out = Command::new(env!("CARGO_BIN_EXE_mdm"))
        .args(["check", &example("selfapp.mdm"), &example("deltadelta.drv")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok"));
}

#[test]
fn binary_reports_divergence_with_exit_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_mdm"))
        .args(["sn", "--fuel", "1000", r"(\a. a a) (\a. a a)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle of length 1"));
}

#[test]
fn both_self_application_variants_check() {
    assert_eq!(mdm(&["check", "selfapp", &example("deltadelta.drv")]).code, EXIT_PASS);
    assert_eq!(mdm(&["check", "selfapp-ab", &example("deltadelta-ab.drv")]).code, EXIT_PASS);
}

#[test]
fn check_fails_without_the_rule() {
    let o = mdm(&["check", "selfapp-ab", &example("deltadelta.drv")]);
    assert_ne!(o.code, EXIT_PASS, "{}", o.out);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(mdm(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(mdm(&["check"]).code, EXIT_USAGE);
    assert_eq!(mdm(&["sn", "a", "--fuel", "0"]).code, EXIT_USAGE);
    assert_eq!(mdm(&["check", "no-such-theory", "x.drv"]).code, EXIT_USAGE);
    assert_eq!(mdm(&["model-check", "empty", "--algebra", "powerset:9"]).code, EXIT_USAGE);
    assert_eq!(mdm(&["candidates", "verify", "empty", "--lemma", "mink", "--a", "P", "--bounds", "size=0"]).code, EXIT_USAGE);
}

#[test]
fn help_and_version_exit_zero() {
    let o = mdm(&["--help"]);
    assert_eq!(o.code, EXIT_PASS);
    assert!(o.out.contains("corpus"));
    assert_eq!(mdm(&["--version"]).code, EXIT_PASS);
}

#[test]
fn normalize_and_sn_exit_codes() {
    let o = mdm(&["normalize", r"(\a. \b. a) c d"]);
    assert_eq!(o.code, EXIT_PASS);
    assert_eq!(o.out, "normal: c (2 steps)\n");
    assert_eq!(mdm(&["normalize", "--fuel", "20", r"(\a. a a) (\a. a a)"]).code, EXIT_UNKNOWN);
    assert_eq!(mdm(&["sn", r"(\a. a) b"]).code, EXIT_PASS);
    let w3 = r"(\a. a a a) (\a. a a a)";
    assert_eq!(mdm(&["sn", "--fuel", "50", w3]).code, EXIT_UNKNOWN);
}

#[test]
fn tree_emits_dot() {
    let o = mdm(&["tree", r"(\a. a) ((\b. b) c)"]);
    assert_eq!(o.code, EXIT_PASS);
    assert!(o.out.starts_with("digraph"));
    assert!(o.out.trim_end().ends_with('}'));
}

#[test]
fn confusion_exit_codes() {
    let o = mdm(&["confusion", "confusion"]);
    assert_eq!(o.code, EXIT_FAIL, "{}", o.out);
    assert!(o.out.starts_with("confusing"));
    assert_eq!(mdm(&["confusion", "empty"]).code, EXIT_PASS);
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["--format", "json", "confusion", "confusion"];
    let a = mdm(&args);
    let b = mdm(&args);
    assert_eq!(a.out, b.out);
    let v: serde_json::Value = serde_json::from_str(&a.out).unwrap();
    assert!(v.get("verdict").is_some());
}

#[test]
fn corpus_output_passes_check() {
    for style in ["curry", "church"] {
        let path = tmp(&format!("corpus-{style}.drv"));
        let o = mdm(&["corpus", "gen", "--seed", "5", "--count", "12", "--style", style, "--out", &path]);
        assert_eq!(o.code, EXIT_PASS, "{}", o.out);
        let c = mdm(&["check", "corpus", &path, "--style", style]);
        assert_eq!(c.code, EXIT_PASS, "{}", c.out);
        assert_eq!(c.out.lines().count(), 12);
    }
}

#[test]
fn corpus_is_reproducible_from_its_seed() {
    let a = mdm(&["corpus", "gen", "--seed", "9", "--count", "5"]);
    let b = mdm(&["corpus", "gen", "--seed", "9", "--count", "5"]);
    let c = mdm(&["corpus", "gen", "--seed", "10", "--count", "5"]);
    assert_eq!(a.out, b.out);
    assert_ne!(a.out, c.out);
    assert!(a.out.starts_with("# corpus: theory corpus, style curry, seed 9"));
}

#[test]
fn erase_outputs_check() {
    let path = tmp("church.drv");
    assert_eq!(mdm(&["corpus", "gen", "--style", "church", "--count", "6", "--out", &path]).code, EXIT_PASS);
    let o = mdm(&["erase", "corpus", &path]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.out);
    assert_eq!(o.out.matches("# checks").count(), 6);
}

#[test]
fn model_check_detects_non_models() {
    assert_eq!(mdm(&["model-check", "selfapp", "--value", "bot"]).code, EXIT_FAIL);
    assert_eq!(mdm(&["model-check", "empty", "--universe-size", "2"]).code, EXIT_PASS);
    let good = tmp("good.tab");
    std::fs::write(&good, "A | | 3\nA => A | | 3\n").unwrap();
    assert_eq!(mdm(&["model-check", "selfapp", "--table", &good]).code, EXIT_PASS);
    let bad = tmp("bad.tab");
    std::fs::write(&bad, "A | | 1\nA => A | | 3\n").unwrap();
    assert_eq!(mdm(&["model-check", "selfapp", "--table", &bad]).code, EXIT_FAIL);
}

#[test]
fn closure_emits_stage_dump() {
    let path = tmp("stages.json");
    let o = mdm(&["closure", "empty", "--prop", "P => Q", "--size", "5", "--emit", &path]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.out);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        assert!(r["term"].is_string() && r["stage"].is_u64());
        assert!(r.get("sn_max_length").is_some());
    }
}

#[test]
fn lemmas_verify_within_bounds() {
    let slice = "P;Q;!x. R(x)";
    for args in [
        vec!["--lemma", "mink", "--a", "P => Q"],
        vec!["--lemma", "monotone", "--a", "P => Q"],
        vec!["--lemma", "clramorph", "--a", "P", "--b", "Q"],
        vec!["--lemma", "lambdacl", "--a", "P", "--b", "Q"],
        vec!["--lemma", "clsubst", "--a", "R(x) => Q", "--slice", slice],
        vec!["--lemma", "clfamorph", "--a", "R(x)", "--slice", slice],
    ] {
        let mut argv = vec!["candidates", "verify", "empty", "--bounds", "size=5,k=3,depth=3"];
        argv.extend(args);
        let o = mdm(&argv);
        assert_eq!(o.code, EXIT_PASS, "{argv:?}: {}", o.out);
        assert!(o.out.contains("checked"));
    }
}

#[test]
fn adequacy_on_a_single_axiom() {
    let path = tmp("axiom.drv");
    std::fs::write(&path, "(axiom ctx:\"p:P\" subj:\"p\" prop:\"P\" hyp:\"p\")\n").unwrap();
    let o = mdm(&["candidates", "verify", "empty", "--lemma", "adequacy", "--drv", &path, "--size", "5"]);
    assert_eq!(o.code, EXIT_PASS, "{}", o.out);
    assert!(o.out.ends_with("adequacy pass\n"));
}

#[test]
fn fuel_comes_from_the_environment() {
    let w = r"(\a. a a) (\a. a a)";
    let bad = Command::new(env!("CARGO_BIN_EXE_mdm")).env("MDM_FUEL_DEFAULT", "0").args(["sn", "a"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("MDM_FUEL_DEFAULT"));
    let low = Command::new(env!("CARGO_BIN_EXE_mdm")).env("MDM_FUEL_DEFAULT", "3").args(["normalize", w]).output().unwrap();
    assert_eq!(low.status.code(), Some(EXIT_UNKNOWN));
    assert!(String::from_utf8_lossy(&low.stderr).contains("within 3 steps"));
}
