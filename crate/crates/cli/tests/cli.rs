use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use irsa_cli::{Cell, ExperimentConfig, Format, Provenance, ResultTable};
use tempfile::TempDir;

const SIM: &str = r#"{
  "command": "sim",
  "scenario": {
    "slots": 100,
    "classes": [
      { "count": 20, "weight": 0.7, "dist": "e" },
      { "count": 20, "weight": 0.3, "dist": { "2": 0.5, "3": 0.5 } }
    ]
  },
  "sweep": { "from": 0.3, "to": 0.7, "step": 0.2 },
  "trials": 200,
  "seed": 11
}"#;

const THRESHOLD: &str = r#"{
  "command": "threshold",
  "tolerance": 1e-5,
  "scenario": { "slots": 200, "classes": [ { "count": 50, "weight": 1.0, "dist": { "2": 1.0 } } ] }
}"#;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn irsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irsa"))
        .args(args)
        .env_remove("IRSA_SEED")
        .env_remove("IRSA_THREADS")
        .output()
        .unwrap()
}

fn run_to_file(cfg: &Path, out: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args = vec![
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = irsa(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn config_round_trips_through_a_file() {
    let dir = TempDir::new().unwrap();
    let cfg = ExperimentConfig::parse(SIM, "inline").unwrap();
    let path = write(dir.path(), "again.json", &cfg.to_json());
    assert_eq!(ExperimentConfig::load(&path).unwrap(), cfg);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sim.json", SIM);
    let a = run_to_file(&cfg, &dir.path().join("a.csv"), &["--threads", "1"]);
    let b = run_to_file(&cfg, &dir.path().join("b.csv"), &["--threads", "4"]);
    assert_eq!(a, b);
    let c = run_to_file(&cfg, &dir.path().join("c.csv"), &["--seed", "12"]);
    assert_ne!(a, c);
    let j1 = run_to_file(&cfg, &dir.path().join("a.json"), &["--format", "json"]);
    let j2 = run_to_file(&cfg, &dir.path().join("b.json"), &["--format", "json"]);
    assert_eq!(j1, j2);
}

#[test]
fn sim_csv_layout() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "sim.json", SIM);
    let text = String::from_utf8(run_to_file(&cfg, &dir.path().join("o.csv"), &[])).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# seed=11 "));
    assert_eq!(
        lines[1],
        "G,class,count,pe_theory,pe_sim,throughput,utility_theory,utility_mean,utility_ci95"
    );
    // three sweep points, two classes each
    assert_eq!(lines.len(), 2 + 6);
    assert!(lines[2].starts_with("0.3,1,15,"));
    assert!(!text.contains('\r'));
}

#[test]
fn two_by_two_table_emits_header_and_two_rows() {
    let mut t = ResultTable::new(&["x", "y"], Provenance::new(5, "{}"));
    t.push(vec![Cell::Int(1), Cell::Float(0.25)]);
    t.push(vec![Cell::Int(2), "b".into()]);
    let csv = t.render(Format::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# seed=5 "));
    assert_eq!(&lines[1..], ["x,y", "1,0.25", "2,b"]);

    let json: serde_json::Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
    let records = json.as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["y"], 0.25);
    assert_eq!(records[1]["y"], "b");
}

#[test]
fn provenance_comment_carries_seed_and_digest() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "t.json", THRESHOLD);
    let o = Command::new(env!("CARGO_BIN_EXE_irsa"))
        .args(["--config", cfg.to_str().unwrap()])
        .env("IRSA_SEED", "99")
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# seed=99 tool=irsa/"), "{first}");
    let digest = first.rsplit("config=").next().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn threshold_of_regular_two_is_one_half() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "t.json", THRESHOLD);
    let out = dir.path().join("t.json.out");
    let o = irsa(&[
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let g = rows[0]["g_star"].as_f64().unwrap();
    assert!((g - 0.5).abs() <= 1e-5, "{g}");
    assert_eq!(rows[0]["stable_counts"], "99");
}

#[test]
fn empty_sweep_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let text = SIM.replace("\"from\": 0.3, \"to\": 0.7", "\"from\": 0.7, \"to\": 0.3");
    let cfg = write(dir.path(), "bad.json", &text);
    let o = irsa(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty sweep"));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_exit_with_one_and_locate_the_field() {
    let dir = TempDir::new().unwrap();
    let text = SIM.replace("\"slots\": 100", "\"slots\": -4");
    let cfg = write(dir.path(), "bad.json", &text);
    let o = irsa(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json:4:"), "{err}");
    assert!(err.contains("scenario.slots"), "{err}");
}

#[test]
fn io_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.json");
    let o = irsa(&["--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let cfg = write(dir.path(), "t.json", THRESHOLD);
    let unwritable = dir.path().join("no_such_dir").join("out.csv");
    let o = irsa(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = irsa(&[]);
    assert_eq!(o.status.code(), Some(1));
    let o = irsa(&["--figure", "fig3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = irsa(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{e}"));
            n += 1;
        }
    }
    assert!(n >= 5);
}
