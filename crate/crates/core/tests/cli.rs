use std::process::Command;

use clap::CommandFactory;
use nctorus::cli::{run, Cli};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nctorus"))
}

fn stdout(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

/// One invocation per leaf subcommand; the list must cover the whole CLI.
const INVOCATIONS: &[&[&str]] = &[
    &["normal-form", "--expr", "W W* L"],
    &["confluence"],
    &["basis-product", "--range", "2"],
    &["casimir"],
    &["rep", "torus", "--N", "5", "--check"],
    &["rep", "sphere", "--N", "4", "--theta", "0.05", "--check"],
    &["scaling", "torus", "--N", "5"],
    &["scaling", "sphere", "--N", "4", "--theta", "0.1"],
    &["phi", "residuals", "--N", "5"],
    &["phi", "intertwine", "--N", "5"],
    &["phi", "roundtrip", "--N", "5"],
    &["phi", "independence", "--N", "11"],
    &["spectrum", "--N", "5"],
    &["module", "relations"],
    &["module", "leibniz"],
    &["module", "curvature"],
    &["poisson"],
];

#[test]
fn every_subcommand_is_exercised_and_passes() {
    let cmd = Cli::command();
    let mut leaves = Vec::new();
    for sub in cmd.get_subcommands() {
        let name = sub.get_name().to_string();
        let choices: Vec<String> = sub
            .get_positionals()
            .flat_map(|a| a.get_possible_values())
            .map(|v| v.get_name().to_string())
            .collect();
        if choices.is_empty() {
            leaves.push(vec![name]);
        } else {
            leaves.extend(choices.into_iter().map(|c| vec![name.clone(), c]));
        }
    }
    for leaf in &leaves {
        let hits = INVOCATIONS.iter().filter(|inv| inv.starts_with(&leaf.iter().map(String::as_str).collect::<Vec<_>>())).count();
        assert_eq!(hits, 1, "{leaf:?} covered {hits} times");
    }
    assert_eq!(leaves.len(), INVOCATIONS.len());
    for inv in INVOCATIONS {
        assert_eq!(run(std::iter::once("nctorus").chain(inv.iter().copied())), 0, "{inv:?}");
    }
}

#[test]
fn normal_form_prints_canonical_syntax() {
    let (code, out) = stdout(&["normal-form", "--expr", "W W* L", "--theta", "1/5", "--mu", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "z*L^2 + mu*L + zbar*I");
}

#[test]
fn confluence_report_is_versioned_and_passes() {
    let (code, out) = stdout(&["confluence", "--theta", "1/5", "--mu", "2", "--backend", "exact"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    let ambs = v["report"]["ambiguities"].as_array().unwrap();
    assert_eq!(ambs.len(), 12);
    assert!(ambs.iter().all(|a| a["pass"] == true));
}

#[test]
fn curvature_reports_the_constant() {
    let (code, out) = stdout(&["module", "curvature", "--m", "1", "--n", "2", "--theta", "1/5", "--mu", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let im = v["report"]["constant"][1].as_f64().unwrap();
    assert!((im - 1.0 / (1.4 * std::f64::consts::PI)).abs() < 1e-12);
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["module", "leibniz", "--seed", "7"][..],
        &["confluence", "--backend", "float"],
        &["scaling", "sphere", "--N", "4", "--theta", "0.1", "--format", "csv"],
    ] {
        let (_, a) = stdout(args);
        let (_, b) = stdout(args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(stdout(&["no-such-command"]).0, 2);
    assert_eq!(stdout(&["normal-form", "--expr", "W +"]).0, 2);
    // the exact backend refuses a float theta
    assert_eq!(stdout(&["confluence", "--theta", "0.2"]).0, 2);
    // outside the torus regime
    assert_eq!(stdout(&["spectrum", "--N", "5", "--mu", "1/2"]).0, 2);
    // a tolerance nothing can meet turns into a failed check
    assert_eq!(stdout(&["rep", "torus", "--N", "5", "--check", "--tol", "1e-30"]).0, 1);
}

#[test]
fn report_goes_to_the_output_path() {
    let dir = std::env::temp_dir().join(format!("nctorus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poisson.csv");
    let code = run(["nctorus", "poisson", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("key,value\n") && body.contains("schema,1"));
    std::fs::remove_dir_all(&dir).unwrap();
}
