use std::path::Path;
use std::process::{Command, Output};

fn chaoslab(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_chaoslab"));
    cmd.args(args).env_remove("CHAOSLAB_SEED");
    if let Some(s) = seed_env {
        cmd.env("CHAOSLAB_SEED", s);
    }
    cmd.output().expect("spawn chaoslab")
}

fn out_arg(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

fn csv_rows(dir: &Path) -> Vec<String> {
    std::fs::read_to_string(dir.join("report.csv")).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn list_prints_every_check() {
    let out = chaoslab(&["list"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 20);
    assert!(text.lines().any(|l| l.starts_with("ito_formula")));
}

#[test]
fn passing_check_exits_zero_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(&["check", "duality", "r2", "--instances", "5", "--out", out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(dir.path());
    assert_eq!(rows[0], chaoslab::cli::CSV_HEADER);
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("duality,exact-residual,") && rows[1].contains(",true,"));
}

#[test]
fn checks_flag_without_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(&["--checks", "r3,meyer", "--instances", "3", "--out", out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<String> = csv_rows(dir.path())[1..].iter().map(|r| r.split(',').next().unwrap().to_owned()).collect();
    assert_eq!(ids, ["r3", "meyer"]);
}

#[test]
fn invalid_configuration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["check", "duality", "--grid-cells", "10"],
        vec!["check", "duality", "--samples", "50"],
        vec!["check", "duality", "--degree-cap", "9"],
        vec!["check", "no_such_check"],
    ] {
        let mut args = args;
        args.extend(["--out", out_arg(dir.path())]);
        let out = chaoslab(&args, None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    }
    assert!(!dir.path().join("report.csv").exists());
}

#[test]
fn empty_check_list_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(&["check", "--out", out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(dir.path()), [chaoslab::cli::CSV_HEADER]);
}

#[test]
fn seed_precedence_flag_file_env() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(&config, "seed = 11\ninstances = 2\n").unwrap();
    let seed_of = |args: &[&str], env: Option<&str>| {
        let mut all = vec!["check", "r2", "--out", out_arg(dir.path())];
        all.extend_from_slice(args);
        assert_eq!(chaoslab(&all, env).status.code(), Some(0));
        csv_rows(dir.path())[1].split(',').nth(7).unwrap().to_owned()
    };
    let conf = config.to_str().unwrap();
    assert_eq!(seed_of(&["--instances", "2"], None), "7");
    assert_eq!(seed_of(&["--instances", "2"], Some("13")), "13");
    assert_eq!(seed_of(&["--config", conf], Some("13")), "11");
    assert_eq!(seed_of(&["--config", conf, "--seed", "5"], Some("13")), "5");
}

#[test]
fn ito_report_records_both_variants() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(&["check", "ito_formula", "--samples", "500", "--format", "json", "--out", out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let details = json[0]["details"].as_array().unwrap();
    let value = |name: &str| details.iter().find(|d| d["name"] == name).and_then(|d| d["value"].as_f64());
    assert_eq!(value("qv_variant_holds"), Some(1.0));
    assert_eq!(value("literal_variant_holds"), Some(0.0));
    assert!(value("disputed_term_mean_abs").unwrap() > 0.0);
    assert_eq!(value("anchor_residual_literal"), Some(-1.0));
}

#[test]
fn report_subcommand_summarizes_existing_output() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(chaoslab(&["report", "--out", out_arg(dir.path())], None).status.code(), Some(2));
    assert_eq!(chaoslab(&["check", "covariance", "--instances", "2", "--out", out_arg(dir.path())], None).status.code(), Some(0));
    let out = chaoslab(&["report", "--out", out_arg(dir.path())], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("1 passed, 0 failed"));
}

#[test]
fn timings_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    chaoslab(&["check", "r2", "--instances", "2", "--out", out_arg(dir.path())], None);
    assert!(csv_rows(dir.path())[1].ends_with(','));
    chaoslab(&["check", "r2", "--instances", "2", "--timings", "--out", out_arg(dir.path())], None);
    assert!(!csv_rows(dir.path())[1].ends_with(','));
}
