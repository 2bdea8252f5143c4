use std::path::Path;
use std::process::{Command, Output};

fn nehari(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nehari")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn levels_switch_regime_at_the_n4_threshold() {
    let o = nehari(&["levels", "--N", "4", "--mu-sweep", "0:0.35:8"]);
    assert_eq!(code(&o), 0);
    let star = 6f64.sqrt() / 9.0;
    for r in rows(&stdout(&o)) {
        let mu: f64 = r[0].parse().unwrap();
        let expect = if (mu - star).abs() < 1e-12 {
            "Threshold"
        } else if mu < star {
            "NontrivialGround"
        } else {
            "SemitrivialGround"
        };
        assert_eq!(r[1], expect, "mu = {mu}");
    }
    assert!(stdout(&o).lines().any(|l| l.contains("Threshold")));
}

#[test]
fn n4_level_at_zero_coupling_is_a_quarter_of_four_thirds() {
    let o = nehari(&["levels", "--N", "4", "--mu", "0"]);
    let r = &rows(&stdout(&o))[0];
    let a: f64 = r[4].parse().unwrap();
    assert!((a - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn n7_is_always_nontrivial() {
    let o = nehari(&["levels", "--N", "7", "--mu-sweep", "0:20:9"]);
    assert_eq!(code(&o), 0);
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 9);
    assert!(rs.iter().all(|r| r[1] == "NontrivialGround"));
}

#[test]
fn n6_threshold_has_vanishing_k() {
    let o = nehari(&["levels", "--N", "6", "--mu", "1"]);
    let r = &rows(&stdout(&o))[0];
    assert_eq!(r[1], "Threshold");
    assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
    assert_eq!(r[3].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn coupling_and_thresholds_tables() {
    let o = nehari(&["coupling", "--N", "4", "--mu", "0.2"]);
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 2);
    for r in &rs {
        assert!(r[5].parse::<f64>().unwrap().abs() < 1e-12);
        assert!(r[6].parse::<f64>().unwrap().abs() < 1e-12);
    }
    let o = nehari(&["thresholds", "--N", "5"]);
    let r = &rows(&stdout(&o))[0];
    assert!((r[1].parse::<f64>().unwrap() - 0.6197314512).abs() < 1e-9);
    assert!((r[2].parse::<f64>().unwrap() - 0.575601372027).abs() < 1e-9);
    let o = nehari(&["thresholds", "--N", "8"]);
    let r = &rows(&stdout(&o))[0];
    assert_eq!(r[1], "inf");
    assert_eq!(r[2], "");
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let o = nehari(&["levels", "--N", "5", "--mu", "0.3"]);
    let r = &rows(&stdout(&o))[0];
    let mantissa = r[4].split('e').next().unwrap();
    assert_eq!(mantissa.replace(['.', '-'], "").len(), 17);
}

#[test]
fn limit_check_passes() {
    let o = nehari(&["limit-check", "--N", "6", "--mu-sweep", "0:1:3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let rs = rows(&stdout(&o));
    assert_eq!(rs.len(), 9);
    assert!(rs.iter().all(|r| r.last().unwrap() == "PASS"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["levels", "--mu-sweep", "0:1"],
        vec!["levels", "--mu-sweep", "1:0:4"],
        vec!["levels", "--N", "3"],
        vec!["levels", "--mu", "-1"],
        vec!["levels", "--mu", "0.1", "--mu-sweep", "0:1:3"],
        vec!["solve", "--R", "0"],
        vec!["bogus"],
    ] {
        assert_eq!(code(&nehari(&args)), 2, "{args:?}");
    }
}

#[test]
fn regime_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let out = out.to_str().unwrap();
    for args in [
        vec!["solve", "--lambda-frac", "1.2", "--M", "128", "--out", out],
        vec!["solve", "--N", "4", "--mu", "0.5", "--M", "128", "--out", out],
    ] {
        let o = nehari(&args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    }
    let o = nehari(&["solve", "--lambda-frac", "1.2", "--M", "128", "--out", out]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("first Dirichlet eigenvalue"));
}

#[test]
fn missing_config_is_a_usage_error_and_bad_output_path_exits_1() {
    assert_eq!(code(&nehari(&["levels", "--config", "/nonexistent/c.json"])), 2);
    assert_eq!(code(&nehari(&["levels", "--out", "/nonexistent/dir/out.csv"])), 1);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"N": 5, "mu_sweep": "0:0.5:3"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = rows(&stdout(&nehari(&["coupling", "--config", c])));
    assert!(from_file.iter().any(|r| r[0].starts_with("2.5")));
    let flagged = stdout(&nehari(&["thresholds", "--config", c, "--N", "6"]));
    assert!(flagged.lines().nth(1).unwrap().starts_with("6,"));
    let single = rows(&stdout(&nehari(&["levels", "--config", c, "--mu", "0.1"])));
    assert_eq!(single.len(), 1);
}

fn solve_in(dir: &Path, extra: &[&str]) -> (Output, String) {
    let out = dir.join("solve.csv");
    let mut args = vec!["solve", "--M", "128", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = nehari(&args);
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (o, text)
}

#[test]
fn solve_writes_table_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let (o, text) = solve_in(dir.path(), &[]);
    assert_eq!(code(&o), 0);
    let r = &rows(&text)[0];
    let (b, a): (f64, f64) = (r[5].parse().unwrap(), r[6].parse().unwrap());
    assert!(0.0 < b && b < a);
    assert_eq!(r[9], "true");
    let profile = std::fs::read_to_string(dir.path().join("solve.profile.csv")).unwrap();
    assert_eq!(profile.lines().next().unwrap(), "r,u,v");
    assert_eq!(profile.lines().count(), 1 + 128 + 2);
}

#[test]
fn solve_output_is_byte_stable_and_sweep_order_preserved() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let sweep = ["--mu-sweep", "0:0.2:3"];
    let (_, t1) = solve_in(d1.path(), &sweep);
    let (_, t2) = solve_in(d2.path(), &sweep);
    assert_eq!(t1, t2);
    let mus: Vec<f64> = rows(&t1).iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(mus, vec![0.0, 0.1, 0.2]);
}

#[test]
fn pohozaev_table_balances() {
    let o = nehari(&["pohozaev", "--M", "256"]);
    assert_eq!(code(&o), 0);
    let r = &rows(&stdout(&o))[0];
    assert!(r[10].parse::<f64>().unwrap() < 0.05);
    assert!(r[11].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn verify_passes_and_detects_a_perturbed_constant() {
    let o = nehari(&["verify", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = nehari(&["verify", "--perturb-s", "1e-4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("level_consistency_with_quadrature"));
    assert!(stdout(&o).lines().any(|l| l.contains("level_consistency") && l.ends_with("FAIL")));
}

#[test]
fn levels_output_is_byte_stable() {
    let a = stdout(&nehari(&["levels", "--N", "5", "--mu-sweep", "0:0.7:15"]));
    let b = stdout(&nehari(&["levels", "--N", "5", "--mu-sweep", "0:0.7:15"]));
    assert_eq!(a, b);
}
