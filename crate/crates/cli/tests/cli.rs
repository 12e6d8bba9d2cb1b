use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sparsepath::csvio::{read_path, write_matrix, write_path, write_vector};
use sparsepath::datagen::{figure1_problem, sample_problem};
use sparsepath::{Method, SetupLabel, SimSetup};

fn sparsepath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsepath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_problem(dir: &Path, label: SetupLabel, seed: u64) -> (String, String) {
    let prob = sample_problem(&SimSetup::from_label(label), seed).unwrap();
    let (x, y) = (dir.join("x.csv"), dir.join("y.csv"));
    write_matrix(fs::File::create(&x).unwrap(), &prob.x).unwrap();
    write_vector(fs::File::create(&y).unwrap(), "y", &prob.y).unwrap();
    (x.display().to_string(), y.display().to_string())
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&sparsepath(&["--help"])), 0);
    assert_eq!(code(&sparsepath(&["path", "--help"])), 0);
    assert_eq!(code(&sparsepath(&[])), 1);
    assert_eq!(code(&sparsepath(&["frobnicate"])), 1);
    assert_eq!(code(&sparsepath(&["check-theorem1", "--bogus", "1"])), 1);
    assert_eq!(code(&sparsepath(&["path", "--method", "ridge", "--design", "x", "--response", "y"])), 1);
    let out = sparsepath(&["path", "--method", "lasso", "--design", "/nonexistent/x.csv", "--response", "y.csv"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/x.csv"));
    assert_eq!(code(&sparsepath(&["check-theorem1", "--n", "3", "--p", "4"])), 1);
}

#[test]
fn check_theorem1_on_two_predictors() {
    let out = sparsepath(&["check-theorem1", "--n", "20", "--p", "2", "--trials", "10"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("attempts,dominance_hits,max_path_discrepancy\n10,10,"));
}

#[test]
fn solver_failures_exit_two() {
    assert_eq!(code(&sparsepath(&["check-theorem1", "--n", "15", "--p", "15", "--trials", "1"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    fs::write(&x, "x1,x2\n1,0.99999999999999\n0,1.4e-7\n0,0\n").unwrap();
    fs::write(&y, "y\n1\n1\n0.5\n").unwrap();
    let out = sparsepath(&["path", "--method", "lasso", "--design", x.to_str().unwrap(), "--response", y.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn lasso_path_starts_at_zero_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = write_problem(dir.path(), SetupLabel::A, 3);
    let out_file = dir.path().join("path.csv");
    let out = sparsepath(&["path", "--method", "lasso", "--design", &x, "--response", &y, "--out", out_file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = fs::read(&out_file).unwrap();
    let path = read_path(bytes.as_slice(), Method::Lasso).unwrap();
    let prob = sample_problem(&SimSetup::from_label(SetupLabel::A), 3).unwrap();
    assert_eq!(path.samples[0].lambda, prob.lambda_max());
    assert!(path.samples[0].beta.iter().all(|b| *b == 0.0));
    assert_eq!(path.terminal_lambda(), 0.0);
    let mut again = Vec::new();
    write_path(&mut again, &path).unwrap();
    assert_eq!(again, bytes);
}

#[test]
fn dantzig_and_boost_paths_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let prob = figure1_problem(0.6).unwrap();
    let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
    // headerless input
    let rows: Vec<String> = (0..3)
        .map(|i| (0..3).map(|j| prob.x[(i, j)].to_string()).collect::<Vec<_>>().join(","))
        .collect();
    fs::write(&x, rows.join("\n") + "\n").unwrap();
    fs::write(&y, prob.y.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n") + "\n").unwrap();
    let (xs, ys) = (x.to_str().unwrap(), y.to_str().unwrap());
    let out = sparsepath(&["path", "--method", "dantzig", "--design", xs, "--response", ys, "--no-header", "--grid", "11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lambda,beta_1,beta_2,beta_3,degenerate\n"));
    assert_eq!(text.lines().count(), 12);
    let out = sparsepath(&["path", "--method", "boost", "--design", xs, "--response", ys, "--no-header"]);
    assert_eq!(code(&out), 0);
    let path = read_path(out.stdout.as_slice(), Method::Boost).unwrap();
    assert!(path.samples.len() > 2);
    assert!(path.terminal_lambda() < 0.01 * path.first_lambda());
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = sparsepath(&["simulate", "--setup", "a", "--reps", "2", "--seed", "7", "--out", d.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut names: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    for expected in ["mse_beta.csv", "mse_fit.csv", "selection_curve.csv", "summary.csv", "meta.csv"] {
        assert!(names.iter().any(|n| n == expected), "missing {expected}");
    }
    for name in &names {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name} differs");
    }
    let meta = fs::read_to_string(a.join("meta.csv")).unwrap();
    assert!(meta.contains("master_seed,7\n"));
    assert!(meta.contains("lasso_knots_failed,0\n"));
}

#[test]
fn figure1_and_dd_select() {
    let dir = tempfile::tempdir().unwrap();
    let contour = dir.path().join("contour.csv");
    let out = sparsepath(&["figure1", "--rsteps", "4", "--grid", "20", "--out", contour.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&contour).unwrap();
    assert!(text.starts_with("r,lambda,beta3_lasso,beta3_dantzig,dantzig_degenerate\n"));
    assert_eq!(text.lines().count(), 1 + 4 * 20);

    let (x, y) = write_problem(dir.path(), SetupLabel::C, 1);
    let beta = dir.path().join("beta.csv");
    let out = sparsepath(&["dd-select", "--design", &x, "--response", &y, "--grid", "40", "--out", beta.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("lambda_dd="));
    let text = fs::read_to_string(&beta).unwrap();
    assert_eq!(text.lines().count(), 61);
}
