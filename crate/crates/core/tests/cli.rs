use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn config(lattice: &str, model: &str, matrix: &str) -> String {
    let initial = if lattice == "honeycomb" { "honeycomb-paper" } else { "square-paper" };
    format!("lattice = \"{lattice}\"\nmodel = \"{model}\"\nmatrix = \"{matrix}\"\ninitial = \"{initial}\"\n")
}

/// Parses a grid file into (probability column sum, row count).
fn grid_stats(path: &Path) -> (f64, usize) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,position_kind,j,k,orientation,probability"));
    let mut total = 0.0;
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7, "{line}");
        total += cols[6].parse::<f64>().unwrap();
        rows += 1;
    }
    (total, rows)
}

fn report(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn square_grover_run_writes_normalized_grids() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &config("square", "coined", "grover4"));
    let out_dir = dir.path().join("out");
    let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (total, rows) = grid_stats(&out_dir.join("native.csv"));
    assert!((total - 1.0).abs() < 1e-9);
    assert!(rows <= 41 * 41);
    let (total, _) = grid_stats(&out_dir.join("cross.csv"));
    assert!((total - 1.0).abs() < 1e-9);
    let meta = fs::read_to_string(out_dir.join("metadata.txt")).unwrap();
    assert!(meta.contains("config_sha256="));
    assert!(meta.contains("runtime_ms="));
    assert!(meta.contains("steps=20"));
}

#[test]
fn identical_configs_give_identical_grids() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &config("honeycomb", "scattering", "bia3"));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["native.csv", "cross.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
    }
}

#[test]
fn zero_steps_reproduces_initial_distribution() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &config("square", "coined", "dft4"));
    let out_dir = dir.path().join("out");
    let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap(), "--steps", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(out_dir.join("native.csv")).unwrap();
    assert_eq!(text, "x,y,position_kind,j,k,orientation,probability\n0,0,site,0,0,,1\n");
}

#[test]
fn output_selection() {
    let dir = TempDir::new().unwrap();
    let text = config("line", "coined", "h2").replace("initial = \"square-paper\"", "initial = [{ j = 0, sigma = 1, re = 1.0 }]")
        + "output = \"cross-grid\"\nsteps = 3\n";
    let cfg = write_config(dir.path(), "c.toml", &text);
    let out_dir = dir.path().join("out");
    let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_dir.join("native.csv").exists());
    let (total, _) = grid_stats(&out_dir.join("cross.csv"));
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn verify_examples_pass() {
    let dir = TempDir::new().unwrap();
    let sq = write_config(dir.path(), "sq.toml", &config("square", "coined", "dft4"));
    let out = qwalk(&["verify", "--config", sq.to_str().unwrap(), "--check", "equivalence", "--window", "4", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).contains("result=pass"));

    let hc = write_config(dir.path(), "hc.toml", &config("honeycomb", "coined", "dht3"));
    let out = qwalk(&["verify", "--config", hc.to_str().unwrap(), "--check", "cross-recovery", "--tol", "1e-10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = report(&out);
    assert!(text.contains("steps=20"));
    assert!(text.contains("result=pass"));

    let out = qwalk(&["verify", "--config", hc.to_str().unwrap(), "--check", "unitarity", "--window", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out).lines().any(|l| l.starts_with("coined.max_deviation=")));
}

#[test]
fn impossible_tolerance_fails_with_status_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &config("honeycomb", "coined", "dht3"));
    let out = qwalk(&["verify", "--config", cfg.to_str().unwrap(), "--check", "unitarity", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out).contains("result=fail"));
    let out = qwalk(&["verify", "--config", cfg.to_str().unwrap(), "--check", "unitarity", "--tol=-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_unitary_matrix_rejected_at_load() {
    let dir = TempDir::new().unwrap();
    let text = r#"
lattice = "honeycomb"
model = "coined"
matrix = { rows = [[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0], [1.01, 0.0]]] }
initial = "honeycomb-paper"
"#;
    let cfg = write_config(dir.path(), "c.toml", text);
    let out = qwalk(&["verify", "--config", cfg.to_str().unwrap(), "--check", "unitarity"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unitary"));
}

#[test]
fn invalid_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "lattice = \"cube\"\nmodel = \"coined\"\nmatrix = \"h4\"\ninitial = \"square-paper\"\n");
    let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lattice"));
    let out = qwalk(&["verify", "--config", "/nonexistent/qwalk.toml", "--check", "unitarity"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qwalk(&["verify", "--config", cfg.to_str().unwrap(), "--check", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_figure_setup_is_expressible() {
    let dir = TempDir::new().unwrap();
    let setups = [
        ("square", ["h2h2", "h4", "grover4", "dft4"].as_slice()),
        ("honeycomb", ["unb3", "bia3", "dht3", "grover3", "dft3"].as_slice()),
    ];
    for (lattice, matrices) in setups {
        for matrix in matrices {
            for model in ["coined", "scattering"] {
                let cfg = write_config(dir.path(), "c.toml", &config(lattice, model, matrix));
                let out_dir = dir.path().join(format!("{lattice}-{matrix}-{model}"));
                let out = qwalk(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
                assert_eq!(out.status.code(), Some(0), "{lattice} {matrix} {model}");
                for name in ["native.csv", "cross.csv"] {
                    let (total, _) = grid_stats(&out_dir.join(name));
                    assert!((total - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}
