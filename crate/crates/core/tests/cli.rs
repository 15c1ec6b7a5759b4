mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rnca::io::{read_matrix, write_matrix};
use rnca::Matrix;

fn rnca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rnca"))
        .args(args)
        .output()
        .unwrap()
}

fn rnca_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rnca"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn put(dir: &Path, name: &str, m: &Matrix) -> String {
    let p = dir.join(name);
    write_matrix(&p, m, None).unwrap();
    p.to_string_lossy().into_owned()
}

fn paired(dir: &Path) -> (String, String) {
    let x = common::normal(80, 2, 1);
    let noise = common::normal(80, 1, 2);
    let y = Matrix::from_fn(80, 1, |i, _| x[(i, 0)].powi(2) + 0.1 * noise[(i, 0)]);
    (put(dir, "x.csv", &x), put(dir, "y.csv", &y))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn help_and_success_exit_zero() {
    assert_eq!(rnca(&["--help"]).status.code(), Some(0));
    assert_eq!(rnca(&["--version"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let (x, _) = paired(dir.path());
    let o = rnca(&["pca", "--x", &x, "--m", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = paired(dir.path());
    for args in [
        vec!["pca", "--x", &x, "--m", "0"],
        vec!["cca", "--x", &x, "--y", &y, "--gamma", "-1"],
        vec!["bounds", "--vary", "m", "--grid", "64,32"],
        vec!["pca", "--x", &x, "--bandwidth", "wide"],
        vec!["nonsense"],
    ] {
        let o = rnca(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn data_problems_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let (x, _) = paired(dir.path());
    let short = put(dir.path(), "short.csv", &common::normal(50, 1, 3));
    let o = rnca(&["cca", "--x", &x, "--y", &short, "--m", "20"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let corrupt = dir.path().join("corrupt.csv");
    std::fs::write(&corrupt, "a,b\n1.0,2.0\n3.0\n").unwrap();
    let o = rnca(&["pca", "--x", &corrupt.to_string_lossy(), "--m", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    let missing = path(dir.path(), "missing.csv");
    assert_eq!(rnca(&["pca", "--x", &missing]).status.code(), Some(3));
}

#[test]
fn oracle_cap_refusal_exits_four_and_names_the_cap() {
    let o = rnca_env(
        &[
            "bounds", "--vary", "m", "--grid", "8,16", "--n", "40", "--trials", "2",
        ],
        "RNCA_ORACLE_CAP",
        "30",
    );
    assert_eq!(o.status.code(), Some(4));
    let msg = stderr(&o);
    assert!(
        msg.contains("30") && msg.contains("RNCA_ORACLE_CAP"),
        "{msg}"
    );
}

#[test]
fn saved_cca_model_reproduces_training_projection() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = paired(dir.path());
    let (direct, model, again) = (
        path(dir.path(), "uv.csv"),
        path(dir.path(), "cca.model"),
        path(dir.path(), "uv2.csv"),
    );
    let o = rnca(&[
        "--seed", "4", "cca", "--x", &x, "--y", &y, "--m", "40", "--r", "2", "--out", &direct,
        "--model", &model,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rhos: Vec<f64> = stdout(&o).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(rhos.len(), 2);
    assert!(rhos[0] >= rhos[1] && rhos[0] <= 1.0);

    let o = rnca(&[
        "transform",
        "--model",
        &model,
        "--x",
        &x,
        "--y",
        &y,
        "--out",
        &again,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = read_matrix(Path::new(&direct)).unwrap();
    let b = read_matrix(Path::new(&again)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn commands_leave_inputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = paired(dir.path());
    let before = (std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
    let out = path(dir.path(), "o.csv");
    for args in [
        vec!["pca", "--x", &x, "--m", "20", "--out", &out],
        vec!["cca", "--x", &x, "--y", &y, "--m", "20", "--out", &out],
        vec!["rdc", "--x", &x, "--y", &y],
        vec![
            "autoencode",
            "--x",
            &x,
            "--m",
            "20",
            "--d",
            "1",
            "--test",
            &x,
        ],
    ] {
        assert_eq!(rnca(&args).status.code(), Some(0), "{args:?}");
    }
    assert_eq!(
        before,
        (std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap())
    );
}

#[test]
fn rdc_prints_one_value_in_unit_interval() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = paired(dir.path());
    let o = rnca(&["rdc", "--x", &x, "--y", &y, "--m", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: f64 = lines[0].parse().unwrap();
    assert!((0.0..=1.0).contains(&v));
    assert!(v > 0.5, "x vs x² should look dependent, got {v}");
}

#[test]
fn bounds_writes_one_record_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("sweep.csv");
    let o = rnca(&[
        "bounds",
        "--vary",
        "m",
        "--grid",
        "8,16,32",
        "--n",
        "30",
        "--trials",
        "3",
        "--out",
        &out.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("slope "));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,mean_error,stddev,bound");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let fields: Vec<f64> = l.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        assert!(fields[1] <= fields[3], "error above bound in {l}");
    }
}

#[test]
fn convert_idx_round_trips_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("t.idx");
    let mut bytes = vec![0u8, 0, 8, 2, 0, 0, 0, 2, 0, 0, 0, 3];
    bytes.extend_from_slice(&[0, 1, 2, 253, 254, 255]);
    std::fs::write(&idx, bytes).unwrap();
    let out = path(dir.path(), "t.csv");
    let o = rnca(&[
        "convert-idx",
        "--input",
        &idx.to_string_lossy(),
        "--out",
        &out,
        "--raw",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = read_matrix(Path::new(&out)).unwrap();
    assert_eq!(
        m,
        Matrix::from_row_slice(2, 3, &[0.0, 1.0, 2.0, 253.0, 254.0, 255.0])
    );
}
