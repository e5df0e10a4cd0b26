use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fatpoints(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fatpoints"))
        .args(args)
        .env_remove("FATPOINTS_PRIMES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let out = path(dir, name);
    let mut all = args.to_vec();
    all.extend(["--out", &out]);
    let o = fatpoints(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn point_count(file: &str) -> usize {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    v["points"].as_array().unwrap().len()
}

#[test]
fn gen_sizes() {
    let dir = TempDir::new().unwrap();
    let cdr = gen(
        &dir,
        "cdr.json",
        &["--seed", "7", "gen", "cdr", "--d", "5", "--r", "1"],
    );
    assert_eq!(point_count(&cdr), 11);
    let cd = gen(&dir, "cd.json", &["gen", "cd", "--d", "3"]);
    assert_eq!(point_count(&cd), 3);
    let random = gen(
        &dir,
        "r.json",
        &["--seed", "1", "gen", "random", "--s", "11"],
    );
    assert_eq!(point_count(&random), 11);
}

#[test]
fn gen_prints_provenance_and_seed() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    let o = fatpoints(&[
        "--seed", "7", "gen", "cdr", "--d", "5", "--r", "1", "--out", &out,
    ]);
    let text = stdout(&o);
    assert!(text.contains("\"kind\":\"c_dr\""), "{text}");
    assert!(text.contains("seed: 7"), "{text}");
}

#[test]
fn gen_missing_params_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "x.json");
    assert_eq!(
        fatpoints(&["gen", "cdr", "--d", "5", "--out", &out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fatpoints(&["gen", "random", "--out", &out]).status.code(),
        Some(2)
    );
    assert_eq!(
        fatpoints(&["gen", "cd", "--d", "3", "--field", "100", "--out", &out])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(
        &dir,
        "a.json",
        &["--seed", "9", "gen", "cdr", "--d", "4", "--r", "2"],
    );
    let b = gen(
        &dir,
        "b.json",
        &["--seed", "9", "gen", "cdr", "--d", "4", "--r", "2"],
    );
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn hf_golden_table() {
    let dir = TempDir::new().unwrap();
    let file = gen(
        &dir,
        "c51.json",
        &["--seed", "7", "gen", "cdr", "--d", "5", "--r", "1"],
    );
    let o = fatpoints(&["hf", &file, "--multiplicity", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("H:  1 3 6 10 15 21 26 31 32 33\n"), "{text}");
    assert!(text.contains("dH: 1 2 3 4 5 6 5 5 1 1 0\n"), "{text}");
    assert!(
        text.contains("2147483647, 2147483629, 2147483587"),
        "{text}"
    );
    assert!(text.contains("fatpoints "), "{text}");
}

#[test]
fn hf_one_double_point_and_double_c5() {
    let dir = TempDir::new().unwrap();
    let one = gen(
        &dir,
        "one.json",
        &["gen", "random", "--s", "1", "--multiplicity", "2"],
    );
    let text = stdout(&fatpoints(&["hf", &one]));
    assert!(text.contains("H:  1 3\n"), "{text}");

    let c5 = gen(&dir, "c5.json", &["--seed", "3", "gen", "cd", "--d", "5"]);
    let text = stdout(&fatpoints(&["hf", &c5, "--multiplicity", "2"]));
    assert!(text.contains("H:  1 3 6 10 15 20 25 30\n"), "{text}");
}

#[test]
fn hf_exact_matches_modular() {
    let dir = TempDir::new().unwrap();
    let file = gen(
        &dir,
        "r.json",
        &[
            "--seed",
            "2",
            "gen",
            "random",
            "--s",
            "4",
            "--multiplicity",
            "2",
        ],
    );
    let modular: Value =
        serde_json::from_slice(&fatpoints(&["--format", "json", "hf", &file]).stdout).unwrap();
    let exact: Value =
        serde_json::from_slice(&fatpoints(&["--format", "json", "hf", &file, "--exact"]).stdout)
            .unwrap();
    assert_eq!(modular["hilbert_function"], exact["hilbert_function"]);
    assert_eq!(exact["method"], "exact");
}

#[test]
fn hf_csv_rows() {
    let dir = TempDir::new().unwrap();
    let file = gen(
        &dir,
        "c51.json",
        &["--seed", "7", "gen", "cdr", "--d", "5", "--r", "1"],
    );
    let text = stdout(&fatpoints(&[
        "--format",
        "csv",
        "hf",
        &file,
        "--multiplicity",
        "2",
    ]));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "t,H,dH");
    assert_eq!(rows[7], "6,26,5");
    assert_eq!(*rows.last().unwrap(), "10,33,0");
}

#[test]
fn hf_bad_file_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{ nope").unwrap();
    assert_eq!(fatpoints(&["hf", &bad]).status.code(), Some(2));
    assert_eq!(
        fatpoints(&["hf", &path(&dir, "missing.json")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn hf_prime_disagreement_exits_3() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "collide.json");
    // distinct over Q, equal modulo 2147483647
    std::fs::write(
        &file,
        r#"{"field":{"kind":"exact-rational"},"ambient_dim":2,
            "points":[[1,0,1],[2147483648,0,1]],"multiplicities":[1,1],
            "provenance":{"kind":"file"}}"#,
    )
    .unwrap();
    let o = fatpoints(&["hf", &file]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("2147483647"), "{text}");
    assert!(text.contains("2147483629"), "{text}");
}

#[test]
fn primes_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let file = gen(
        &dir,
        "c.json",
        &["gen", "cd", "--d", "3", "--multiplicity", "2"],
    );
    let text = stdout(&fatpoints(&["--primes", "2147483629", "hf", &file]));
    assert!(text.contains("primes: 2147483629\n"), "{text}");

    let o = Command::new(env!("CARGO_BIN_EXE_fatpoints"))
        .args(["hf", &file])
        .env("FATPOINTS_PRIMES", "2147483587")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("primes: 2147483587\n"));

    let o = Command::new(env!("CARGO_BIN_EXE_fatpoints"))
        .args(["--primes", "2147483629", "hf", &file])
        .env("FATPOINTS_PRIMES", "2147483587")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("primes: 2147483629\n"), "flag wins");

    assert_eq!(
        fatpoints(&["--primes", "1000", "hf", &file]).status.code(),
        Some(2)
    );
    assert_eq!(
        fatpoints(&["--primes", "101", "hf", &file]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_eq1_passes() {
    let o = fatpoints(&["verify", "eq1", "--dmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS] partition-identity"));
}

#[test]
fn verify_thm1_passes() {
    let o = fatpoints(&["verify", "thm1", "--d", "5", "--seeds", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trials: 20/20 passed"));
}

#[test]
fn verify_unknown_statement_exits_2() {
    assert_eq!(fatpoints(&["verify", "thm9"]).status.code(), Some(2));
}

#[test]
fn verify_rejects_small_primes() {
    assert_eq!(
        fatpoints(&["--primes", "2", "verify", "thm1", "--d", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_json_is_deterministic_and_has_provenance() {
    let args = [
        "--seed",
        "5",
        "--format",
        "json",
        "--trials",
        "5",
        "verify",
        "first-half",
        "--d",
        "4",
    ];
    let a = fatpoints(&args);
    let b = fatpoints(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["primes_used"].as_array().unwrap().len(), 3);
    assert!(v["tool_version"]
        .as_str()
        .unwrap()
        .starts_with("fatpoints "));
    assert!(v["caveat"].as_str().unwrap().contains("not by proof"));
    assert!(v.get("runtime_seconds").is_none());

    let timed = fatpoints(&[
        "--format",
        "json",
        "--trials",
        "2",
        "verify",
        "first-half",
        "--d",
        "3",
        "--timings",
    ]);
    let v: Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["runtime_seconds"].is_number());
}

#[test]
fn verify_csv_has_one_row_per_trial() {
    let o = fatpoints(&[
        "--format", "csv", "--trials", "7", "verify", "ah", "--s", "3",
    ]);
    let text = stdout(&o);
    let trials = text
        .lines()
        .filter(|l| l.starts_with("ah-bound-achieved,") && !l.contains(",check,"))
        .count();
    assert_eq!(trials, 7, "{text}");
}

#[test]
fn diag_counts() {
    let dir = TempDir::new().unwrap();
    let c51 = gen(
        &dir,
        "c51.json",
        &["--seed", "7", "gen", "cdr", "--d", "5", "--r", "1"],
    );
    let v: Value = serde_json::from_slice(
        &fatpoints(&["--format", "json", "diag", &c51, "--max-degree", "1"]).stdout,
    )
    .unwrap();
    assert_eq!(v["incidences"][0]["count"], 5);
    assert_eq!(v["incidences"][0]["witness"].as_array().unwrap().len(), 5);

    let random = gen(
        &dir,
        "r.json",
        &["--seed", "1", "gen", "random", "--s", "11"],
    );
    let v: Value =
        serde_json::from_slice(&fatpoints(&["--format", "json", "diag", &random]).stdout).unwrap();
    assert_eq!(v["incidences"][0]["count"], 2);
    assert_eq!(v["incidences"][1]["count"], 5);

    let c5 = gen(&dir, "c5.json", &["gen", "cd", "--d", "5"]);
    let v: Value =
        serde_json::from_slice(&fatpoints(&["--format", "json", "diag", &c5]).stdout).unwrap();
    assert_eq!(v["incidences"][1]["count"], 7);
}

#[test]
fn diag_oversize_exits_2() {
    let dir = TempDir::new().unwrap();
    let big = gen(&dir, "big.json", &["gen", "random", "--s", "21"]);
    assert_eq!(fatpoints(&["diag", &big]).status.code(), Some(2));
    assert_eq!(
        fatpoints(&["diag", &big, "--max-degree", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_lists_subcommands() {
    let text = stdout(&fatpoints(&["--help"]));
    for cmd in ["gen", "hf", "verify", "diag"] {
        assert!(text.contains(cmd), "{text}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_fatpoints")).exists());
}
