use std::f64::consts::E;
use std::process::{Command, Output};

fn timemap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timemap")).args(args).output().expect("binary runs")
}

fn table(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

fn e() -> String {
    E.to_string()
}

#[test]
fn norms_agree_with_oracle() {
    let out = timemap(&["norms", "--a", "0", "--b", "1", "--p", "3", "--q", "1,2,p"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["p", "q", "xi_p", "lq_norm", "lq_pow", "oracle_lq", "rel_err"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2][1], 3.0);
    assert!(column(&header, &rows, "rel_err").iter().all(|&e| e < 1e-6));
    assert!((rows[0][2] - 3.708_149_5).abs() < 1e-6);
}

#[test]
fn norms_large_p_tends_to_four_over_length() {
    let out = timemap(&["norms", "--a", "0", "--b", "1", "--sweep", "50,100,200,400", "--q", "p"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    let pow = column(&header, &rows, "lq_pow");
    assert!(pow.windows(2).all(|w| w[1] < w[0]));
    assert!((pow[3] - 4.0).abs() / 4.0 < 0.15);
}

#[test]
fn norms_usage_errors() {
    assert_eq!(timemap(&["norms", "--a", "0", "--b", "1", "--p", "3", "--q", "0"]).status.code(), Some(2));
    assert_eq!(timemap(&["norms", "--a", "0", "--b", "1", "--p", "3"]).status.code(), Some(2));
    assert_eq!(timemap(&["norms", "--a", "1", "--b", "0", "--p", "3", "--q", "1"]).status.code(), Some(2));
    assert_eq!(timemap(&["norms", "--a", "0", "--b", "1", "--p", "0.5", "--q", "1"]).status.code(), Some(2));
    assert_eq!(timemap(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn profile_power_planar() {
    let b = e();
    let out = timemap(&["profile", "--kind", "power_planar", "--a", "1", "--b", &b, "--p", "100", "--grid", "401"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["r", "u", "tent_limit", "abs_err"]);
    assert_eq!(rows.len(), 401);
    assert!(column(&header, &rows, "abs_err").iter().all(|&e| e < 0.1));
}

#[test]
fn profile_exp_planar_unstable() {
    let b = e();
    let out = timemap(&["profile", "--kind", "exp_planar", "--a", "1", "--b", &b, "--mu", "20", "--grid", "101"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["r", "delta_u", "green_limit", "abs_err"]);
    let err = column(&header, &rows, "abs_err");
    assert!(err.iter().all(|&e| e < 0.1));
    let out = timemap(&[
        "profile", "--kind", "exp_planar", "--a", "1", "--b", &b, "--lambda", "0.5", "--branch", "unstable",
    ]);
    assert!(out.status.success());
}

#[test]
fn profile_grid_outside_annulus() {
    let out = timemap(&["profile", "--kind", "power_planar", "--a", "1", "--b", "2", "--p", "3", "--grid", "0.5:2:5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn profile_local_window() {
    let out = timemap(&["profile", "--a", "0", "--b", "1", "--p", "200", "--regime", "local", "--window=-4:4"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["t", "rescaled", "liouville", "abs_err"]);
    assert_eq!(rows[0][0], -4.0);
    assert!(column(&header, &rows, "abs_err").iter().all(|&e| e < 0.05));
}

#[test]
fn bifurcation_diagram() {
    let out = timemap(&["bifurcation", "--a", "0", "--b", "1", "--grid", "200"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.lines().last().unwrap().starts_with("# lambda_star=3.5138"));
    let (header, rows) = table(&out);
    assert_eq!(rows.len(), 200);
    let top = column(&header, &rows, "lambda").into_iter().fold(0.0, f64::max);
    assert!((top - 3.5138).abs() < 1e-3);

    let sweep = "0.1,1,5,20";
    let (_, one) = table(&timemap(&["bifurcation", "--a", "0", "--b", "1", "--sweep", sweep]));
    let (_, two) = table(&timemap(&["bifurcation", "--a", "0", "--b", "2", "--sweep", sweep]));
    for (x, y) in one.iter().zip(&two) {
        assert!((y[1] - x[1] / 4.0).abs() < 1e-12 * x[1]);
    }
}

#[test]
fn bifurcation_empty_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.toml");
    std::fs::write(&path, "a = 0.0\nb = 1.0\nsweep = []\n").unwrap();
    let out = timemap(&["bifurcation", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(timemap(&["bifurcation", "--a", "0", "--b", "1", "--sweep", ""]).status.code(), Some(2));
    let power = timemap(&["bifurcation", "--kind", "power_planar", "--a", "1", "--b", "2"]);
    assert_eq!(power.status.code(), Some(2));
}

fn converge(args: &[&str]) -> (Option<i32>, Vec<f64>) {
    let out = timemap(args);
    let (header, rows) = table(&out);
    (out.status.code(), column(&header, &rows, "sup_distance"))
}

#[test]
fn converge_regimes() {
    let base = ["converge", "--a", "0", "--b", "1"];
    let (code, d) = converge(&[&base[..], &["--regime", "p_infty", "--sweep", "20,50,100,200"]].concat());
    assert_eq!(code, Some(0));
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    let (code, d) = converge(&[&base[..], &["--regime", "local", "--sweep", "20,50,100,200", "--window=-4:4"]].concat());
    assert_eq!(code, Some(0));
    assert!(d[3] < 0.05);
    let (code, d) = converge(&[&base[..], &["--regime", "p_one", "--sweep", "1.5,1.2,1.1,1.05"]].concat());
    assert_eq!(code, Some(0));
    assert!(d[3] < 0.05);
    let b = e();
    let (code, _) = converge(&[
        "converge", "--kind", "hardy_henon", "--N", "3", "--a", "1", "--b", "3", "--regime", "p_infty", "--sweep",
        "20,50,100,200",
    ]);
    assert_eq!(code, Some(0));
    let (code, _) =
        converge(&["converge", "--kind", "exp_planar", "--a", "1", "--b", &b, "--regime", "lambda_zero", "--sweep", "5,10,20"]);
    assert_eq!(code, Some(0));
}

#[test]
fn converge_exit_codes() {
    let base = ["converge", "--a", "0", "--b", "1"];
    let non_monotone = timemap(&[&base[..], &["--regime", "p_infty", "--sweep", "20,100,50"]].concat());
    assert_eq!(non_monotone.status.code(), Some(2));
    let (code, d) = converge(&[&base[..], &["--regime", "p_infty", "--sweep", "200,100"]].concat());
    assert_eq!(code, Some(1));
    assert!(d[1] > d[0]);
    let missing = timemap(&[&base[..], &["--sweep", "20,50"]].concat());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn residual_table() {
    let out = timemap(&["residual", "--kind", "power_higher", "--N", "3", "--a", "0.5", "--b", "1", "--p", "3"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(rows.len(), 10);
    assert!(column(&header, &rows, "residual").iter().all(|&r| r < 1e-3));
    let beyond = timemap(&[
        "residual", "--kind", "exp_higher", "--N", "3", "--a", "0.5", "--b", "1", "--lambda", "100", "--branch", "minimal",
    ]);
    assert_eq!(beyond.status.code(), Some(3));
    let no_branch = timemap(&["residual", "--kind", "exp_higher", "--N", "3", "--a", "0.5", "--b", "1", "--lambda", "1"]);
    assert_eq!(no_branch.status.code(), Some(2));
    assert_eq!(timemap(&["residual", "--a", "0", "--b", "1", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["norms", "--a", "0", "--b", "1", "--sweep", "2,3,5,8,13", "--q", "1,p"];
    let first = timemap(&args);
    let second = timemap(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    let out = dir.path().join("table.csv");
    std::fs::write(&config, "kind = \"power_higher\"\nN = 3\na = 0.5\nb = 1.0\np = 3.0\nq = [\"p\", 2]\n").unwrap();
    let status = timemap(&["norms", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("3.0000000000000000e0,3.0000000000000000e0"));

    let flagged = timemap(&["norms", "--config", config.to_str().unwrap(), "--p", "5", "--q", "1"]);
    let (_, rows) = table(&flagged);
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][0], rows[0][1]), (5.0, 1.0));

    std::fs::write(&config, "a = 0.0\nb = 1.0\nbogus = 1\n").unwrap();
    assert_eq!(timemap(&["norms", "--config", config.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(timemap(&["norms", "--config", "/nonexistent.toml"]).status.code(), Some(2));
}
