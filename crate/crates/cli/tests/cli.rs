use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn expheat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expheat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn norm_of_unit_indicator() {
    let o = expheat(&["norm", &fixture("unit_indicator.csv")]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("luxemburg_norm"))
        .unwrap();
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((value - 1.20112).abs() < 1e-5, "{value}");
    assert!(text.contains("lp_norm L^1 = 1"));
}

#[test]
fn params_reports_sigma_and_case() {
    let o = expheat(&["params", "--N", "5", "--p", "2", "--m", "2", "--a", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("sigma = 0.5"), "{text}");
    assert!(text.contains("case: Supercritical"), "{text}");
    assert!(text.contains("admissible a: (2.5, ∞)"), "{text}");
}

#[test]
fn params_outside_the_parameter_domain_is_rejected() {
    let o = expheat(&["params", "--N", "1", "--p", "2", "--m", "1.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N(m-1)/2 >= p"), "{}", stderr(&o));
}

#[test]
fn params_table_outside_supercritical_case_is_informational() {
    let o = expheat(&["params", "--N", "1", "--p", "2", "--m", "5", "--a", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("parameter table unavailable"));
}

#[test]
fn unknown_flag_exits_with_usage_code() {
    let o = expheat(&["decay", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"epsilon": 1e-4, "epsilonn": 2}"#).unwrap();
    let o = expheat(&["--config", cfg.to_str().unwrap(), "decay"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`epsilonn`"), "{}", stderr(&o));
}

#[test]
fn invalid_value_is_named() {
    let o = expheat(&["--set", "data_shape=\"square\"", "decay"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`data_shape`"), "{}", stderr(&o));
}

#[test]
fn set_overrides_config_file_and_seed_overrides_set() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"points_per_axis": 512, "seed": 1}"#).unwrap();
    let out = dir.path().join("out");
    let o = expheat(&[
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "points_per_axis=2048",
        "--set",
        "seed=5",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
        "decay",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("decay_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 9);
    assert_eq!(summary["config"]["points_per_axis"], 2048);
}

fn run_into(dir: &Path, command: &str) {
    let o = expheat(&[
        "--seed",
        "7",
        "--set",
        "corpus_size=5",
        "--set",
        "corpus_n1=128",
        "--set",
        "corpus_n3=16",
        "--out",
        dir.to_str().unwrap(),
        command,
    ]);
    assert!(o.status.success(), "{command}: {}", stderr(&o));
}

#[test]
fn outputs_are_byte_identical_for_the_same_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run_into(dir, "suite");
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "summary.json"));
    assert!(names.iter().any(|n| n == "decay.svg"));
    for name in names {
        let x = fs::read(a.path().join(&name)).unwrap();
        let y = fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}

#[test]
fn csv_and_summary_carry_hash_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), "limit");
    let csv = fs::read_to_string(dir.path().join("limit.csv")).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("limit_summary.json")).unwrap())
            .unwrap();
    let hash = summary["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(csv.starts_with(&format!("# config_hash={hash}\n# seed=7\n# units=")));
}
