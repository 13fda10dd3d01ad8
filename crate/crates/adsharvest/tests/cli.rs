use std::process::Command;

use adsharvest::config::parse_config;
use adsharvest::sweep::{run_sweep, write_csv};

const BIN: &str = env!("CARGO_BIN_EXE_adsharvest");

const CONFIG: &str = r#"
[scenario]
kind = "static"
epsilon = 1
length = 2.0
gap = 2.0

[sweep]
axes = ["separation", "delay"]
separation = { min = 0.5, max = 2.0, count = 5 }
delay = { min = -2.0, max = 2.0, count = 7 }
"#;

fn csv_bytes(workers: usize) -> Vec<u8> {
    let spec = parse_config(CONFIG).unwrap();
    let mut out = Vec::new();
    write_csv(&spec, &run_sweep(&spec, workers).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let one = csv_bytes(1);
    assert_eq!(one, csv_bytes(2));
    assert_eq!(one, csv_bytes(8));
}

#[test]
fn sweep_command_writes_csv_with_fingerprint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let out = dir.path().join("out.csv");
    std::fs::write(&cfg, CONFIG).unwrap();
    let status = Command::new(BIN)
        .args(["sweep", cfg.to_str().unwrap(), "--workers", "3", "--output", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# config: kind=static epsilon=1 length=2"));
    assert!(text.contains("lambda_A = lambda_B = 0.01"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "separation");
    assert_eq!(&header[header.len() - 1], "flags");
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 35);
    assert_eq!(text.as_bytes(), csv_bytes(1).as_slice());
}

#[test]
fn bad_config_fails_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, CONFIG.replace("length = 2.0", "length = -2.0")).unwrap();
    let out = Command::new(BIN).args(["sweep", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scenario.length"));
}

#[test]
fn elements_and_rate_print_values() {
    let out = Command::new(BIN)
        .args(["elements", "--kind", "geodesic", "--epsilon", "-1", "--length", "5", "--gap", "3", "--separation", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("L_AA = ") && text.contains("N2 = ") && text.contains("flags: ok"), "{text}");

    let out = Command::new(BIN)
        .args(["rate", "--length", "1", "--gap-range", "-1", "2", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5, "{text}");
}

#[test]
fn shipped_configs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let text = std::fs::read_to_string(&path).unwrap();
            parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            n += 1;
        }
    }
    assert!(n >= 5);
}
