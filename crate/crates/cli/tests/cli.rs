use std::path::PathBuf;
use std::process::{Command, Output};

use radspec_cli::output::{emit_csv, Cell};
use radspec_cli::tables::ritz_table;
use radspec_cli::{Failure, EXIT_MISMATCH, EXIT_NUMERICAL, EXIT_USAGE};
use radspec_core::{BigReal, Error};

fn radspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radspec"))
        .args(args)
        .env_remove("RADSPEC_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("radspec-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn table_one_last_row_prints_as_published() {
    let alpha = -BigReal::from(2).sqrt().unwrap();
    let table = ritz_table(&BigReal::zero(), &alpha, 10, 10, 4).unwrap();
    let csv = String::from_utf8(table.to_csv().unwrap()).unwrap();
    assert_eq!(
        csv,
        "N,W_0,W_1,W_2,W_3\n10,4.000000000,7.693978891,11.50604238,15.37592718\n"
    );
}

#[test]
fn emit_csv_trivial_cases() {
    let one = emit_csv(&[vec![Cell::Real(BigReal::from(4))]], &["W_0".into()]).unwrap();
    assert_eq!(one, b"W_0\n4.000000000\n");
    assert_eq!(emit_csv(&[], &["W_0".into()]).unwrap(), b"W_0\n");
    let ragged = emit_csv(&[vec![], vec![Cell::Int(1)]], &["a".into()]);
    assert!(matches!(ragged, Err(Error::Internal(_))));
}

#[test]
fn map_reduces_the_example_parameters() {
    let o = radspec(&[
        "map", "--l", "0", "--phi1", "0", "--m", "1", "--M", "1", "--B0", "1", "--omega", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gamma"], 0.0);
    assert_eq!(v["s"], 0.0);
    assert!((v["alpha"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-15);
}

#[test]
fn truncate_lists_every_solution() {
    let o = radspec(&["truncate", "--n", "2", "--s", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 3);
    for (k, item) in items.iter().enumerate() {
        assert_eq!(item["i"], k + 1);
        assert_eq!(item["nodes"], k);
        assert_eq!(item["W"], 7.0);
    }
    let csv = radspec(&["truncate", "--n", "1", "--s", "0", "--format", "csv"]);
    assert_eq!(
        stdout(&csv),
        "n,i,alpha,W\n1,1,-1.414213562,4.000000000\n1,2,1.414213562,4.000000000\n"
    );
}

#[test]
fn ritz_output_is_deterministic() {
    let args = [
        "ritz",
        "--s",
        "sqrt(2)",
        "--alpha=-sqrt(6)",
        "--nmax",
        "6",
        "--levels",
        "3",
    ];
    let a = radspec(&args);
    let b = radspec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 6);
}

#[test]
fn reproduce_checks_the_variational_tables() {
    for (target, rows) in [("table1", 9), ("table2", 12)] {
        let o = radspec(&["reproduce", target, "--check"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert_eq!(text.lines().count(), rows + 1);
        assert!(text.lines().all(|l| l.split(',').count() == 5));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        radspec(&["ritz", "--s", "0", "--alpha", "one", "--nmax", "3"])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(
        radspec(&["--precision", "32", "truncate", "--n", "1", "--s", "0"])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(
        radspec(&["ritz", "--s", "0", "--alpha", "1", "--nmax", "3", "--bogus"])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(
        radspec(&["truncate", "--n", "1", "--s", "-1"]).status.code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(radspec(&["reproduce", "table9"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_radspec"))
        .args(["ritz", "--s", "0", "--alpha", "1", "--nmax", "3"])
        .env("RADSPEC_PRECISION", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}

#[test]
fn failure_kinds_map_to_exit_codes() {
    assert_eq!(Failure::Mismatch(vec![]).exit_code(), EXIT_MISMATCH);
    assert_eq!(
        Failure::from(Error::IterationLimit { sweeps: 80 }).exit_code(),
        EXIT_NUMERICAL
    );
    assert_eq!(
        Failure::from(Error::InvalidArgument("x".into())).exit_code(),
        EXIT_USAGE
    );
}

#[test]
fn sweep_writes_curves_and_points() {
    let dir = scratch("sweep");
    let curves = dir.join("curves.csv");
    let o = radspec(&[
        "sweep",
        "--s",
        "0",
        "--amin",
        "-2",
        "--amax",
        "2",
        "--points",
        "5",
        "--levels",
        "3",
        "--overlay-nmax",
        "1",
        "--output",
        curves.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let c = std::fs::read_to_string(&curves).unwrap();
    assert_eq!(c.lines().next(), Some("alpha,W_0,W_1,W_2"));
    assert_eq!(c.lines().count(), 6);
    let p = std::fs::read_to_string(dir.join("curves.points.csv")).unwrap();
    assert_eq!(p.lines().next(), Some("n,i,alpha,W,residual"));
    assert_eq!(p.lines().count(), 1 + 1 + 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweep_points_need_a_destination() {
    let o = radspec(&[
        "sweep",
        "--s",
        "0",
        "--amin",
        "-1",
        "--amax",
        "1",
        "--points",
        "3",
        "--levels",
        "1",
        "--overlay-nmax",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}
