//! The binary's exit-code contract and report determinism.

use std::fs;
use std::process::{Command, Output};

use elongated::golden::{GoldenSet, GOLDEN_DIR_ENV};
use elongated::verifier::{run_suite, SuiteConfig};
use elongated::TruncatedSeries;

fn elongated(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elongated"))
        .args(args)
        .env_remove(GOLDEN_DIR_ENV)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_family_passes() {
    let out = elongated(&["verify", "family", "--alpha", "1", "--count", "500"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_l1_lists_matched_coefficients() {
    let out = elongated(&["verify", "l1", "--no-timing"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("18 coefficients matched"), "{text}");
}

#[test]
fn expand_then_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let out = elongated(&["expand", "8; 2^2 * 8^4 * 1^-4 * 4^-2; 1", "--trunc", "30"]);
    assert_eq!(code(&out), 0);
    let series = TruncatedSeries::from_text(&String::from_utf8(out.stdout.clone()).unwrap()).unwrap();
    assert_eq!(series.coeff_i64(1), Some(1));
    let path = dir.path().join("x.series");
    fs::write(&path, &out.stdout).unwrap();
    let out = elongated(&["reduce", "--input", path.to_str().unwrap(), "--maxdeg", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 1");
}

#[test]
fn modular_expansion_flag() {
    let out = elongated(&["expand", "2; 1^-22 * 2^7; 0", "--trunc", "8", "--mod-bits", "3"]);
    assert_eq!(code(&out), 0);
    let s = TruncatedSeries::from_text(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(s.ring().to_string(), "mod2^3");
    assert_eq!(s.coeff_i64(3), Some(2376 % 8));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["verify", "nothing"],
        vec!["expand", "8; 3^1; 0", "--trunc", "4"],
        vec!["expand", "8; 1^1; 0", "--trunc", "4", "--mod-bits", "65"],
        vec!["reduce", "--input", "/does/not/exist", "--maxdeg", "2"],
        vec!["verify", "all", "--config", "/does/not/exist.toml"],
        vec!["verify", "family", "--threads", "0"],
    ] {
        let out = elongated(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn corrupted_golden_dir_exits_1_and_names_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = GoldenSet::embedded();
    let mut l1 = g.l1().clone();
    l1.add_term(7, &1.into());
    g.set("l1", l1);
    g.write_dir(dir.path()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_elongated"))
        .args(["verify", "l1", "--no-timing"])
        .env(GOLDEN_DIR_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"name\":\"l1\"") && text.contains("x^7"), "{text}");
}

#[test]
fn report_file_and_failure_exit() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("suite.toml");
    fs::write(&config, "r_max = 60\nn_max = 40\nvspace_degree = 10\n").unwrap();
    let report = dir.path().join("report.jsonl");
    let out = elongated(&[
        "verify",
        "theorem41",
        "--config",
        config.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.lines().count() == 2 && text.contains("\"r_max\":\"60\""), "{text}");
    // Too few modular-equation terms is rejected up front.
    let out = elongated(&["verify", "modeq", "--trunc", "10"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn thread_count_does_not_change_reports() {
    let base = SuiteConfig {
        n_max: 60,
        r_max: 120,
        vspace_degree: 30,
        alpha_max: 2,
        ..SuiteConfig::default()
    };
    let one = run_suite(&SuiteConfig { threads: Some(1), ..base.clone() }, &[]).unwrap();
    let four = run_suite(&SuiteConfig { threads: Some(4), ..base }, &[]).unwrap();
    assert!(one.is_pass());
    assert_eq!(one.to_json_lines(false), four.to_json_lines(false));

    let a = elongated(&["verify", "family", "--count", "30", "--threads", "1", "--no-timing"]);
    let b = elongated(&["verify", "family", "--count", "30", "--threads", "3", "--no-timing"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
