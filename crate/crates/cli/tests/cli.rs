use std::path::Path;
use std::process::{Command, Output};

use polyberg_core::transforms::ChannelSet;

const SMALL_GRID: [&str; 10] =
    ["--grid.nx", "128", "--grid.ns", "64", "--grid.x", "30", "--grid.smin", "1e-4", "--grid.smax", "300"];

fn polyberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyberg")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const CHANNELS: &str = r#"{"channels":[
  {"basis":"laguerre-alpha1","coeffs":[[1,0],[0.5,-0.25],[0,0.125]]},
  {"basis":"laguerre-alpha1","coeffs":[[0,1],[0.1,0.2],[-0.3,0]]},
  {"basis":"laguerre-alpha1","coeffs":[[0.25,0.25],[0,0],[0.7,-0.1]]}
]}"#;

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&polyberg(&["--help"])), 0);
    assert_eq!(code(&polyberg(&["verify", "--help"])), 0);
    assert_eq!(code(&polyberg(&[])), 2);
    assert_eq!(code(&polyberg(&["frame-scan"])), 2);
    assert_eq!(code(&polyberg(&["verify", "--seed", "x"])), 2);
    assert_eq!(code(&polyberg(&["basis", "--n", "0", "--m", "0", "--grid.nx", "0"])), 2);
}

#[test]
fn coarse_verification_fails() {
    let out = polyberg(&["verify", "--grid.nx", "8"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stderr(&out).contains("FAIL isometry"), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["grid"]["n_x"], 8);
}

#[test]
fn verification_passes_on_default_grid() {
    let out = polyberg(&["verify"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["measured"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap()));
    let calibration = report["calibration"]["entries"].as_array().unwrap();
    assert!(calibration.iter().any(|e| e["name"] == "bergman_isometry"));
}

#[test]
fn verification_output_is_deterministic() {
    let a = polyberg(&["verify", "--grid.nx", "8", "--seed", "7"]);
    let b = polyberg(&["verify", "--grid.nx", "8", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = polyberg(&["verify", "--grid.nx", "8", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn mux_demux_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", CHANNELS);
    let mux_path = dir.path().join("mux.json");
    let out = polyberg(&["mux", &input, "--out", mux_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let field: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&mux_path).unwrap()).unwrap();
    assert_eq!((field["n"].as_u64(), field["M"].as_u64()), (Some(3), Some(3)));

    let out = polyberg(&["demux", mux_path.to_str().unwrap(), "--n", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let original: ChannelSet<f64> = serde_json::from_str(CHANNELS).unwrap();
    let decoded: ChannelSet<f64> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(decoded, original);
    let mut canonical = serde_json::to_string_pretty(&original).unwrap();
    canonical.push('\n');
    assert_eq!(stdout(&out), canonical);

    assert_eq!(code(&polyberg(&["demux", mux_path.to_str().unwrap(), "--n", "2"])), 2);
}

#[test]
fn sampled_demux_recovers_channels() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", CHANNELS);
    let csv = dir.path().join("field.csv");
    let mut args = vec!["mux", &input, "--render", csv.to_str().unwrap()];
    args.extend(SMALL_GRID);
    assert_eq!(code(&polyberg(&args)), 0);

    let mut args = vec!["demux", csv.to_str().unwrap(), "--reference", &input];
    args.extend(SMALL_GRID);
    let out = polyberg(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let errors: Vec<f64> = stderr(&out)
        .lines()
        .filter_map(|l| l.strip_prefix("channel ").and_then(|l| l.split("relative error ").nth(1)))
        .map(|v| v.trim().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.iter().all(|&e| e < 1e-3), "{errors:?}");

    let mut args = vec!["demux", csv.to_str().unwrap(), "--n", "2"];
    args.extend(SMALL_GRID);
    assert_eq!(code(&polyberg(&args)), 2);
    // rendered on a different grid
    assert_eq!(code(&polyberg(&["demux", csv.to_str().unwrap(), "--grid.nx", "64"])), 2);
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&polyberg(&["mux", "/nonexistent/in.json"])), 2);
    let bad = write(dir.path(), "bad.json", r#"{"channels": ["#);
    let out = polyberg(&["mux", &bad]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 1 column"), "{}", stderr(&out));
    let ragged = write(dir.path(), "ragged.json", r#"{"channels":[{"coeffs":[[1,0]]},{"coeffs":[]}]}"#);
    assert_eq!(code(&polyberg(&["mux", &ragged])), 3);
    let nine = format!(r#"{{"channels":[{}]}}"#, [r#"{"coeffs":[[1,0]]}"#; 9].join(","));
    assert_eq!(code(&polyberg(&["mux", &write(dir.path(), "nine.json", &nine)])), 3);
    let config = write(dir.path(), "config.json", r#"{"grid": {"nx": 8}}"#);
    assert_eq!(code(&polyberg(&["verify", "--config", &config])), 2);
}

#[test]
fn config_file_sets_grid_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.json", r#"{"grid": {"n_x": 8}, "seed": 7}"#);
    let from_config = polyberg(&["verify", "--config", &config]);
    assert_eq!(code(&from_config), 1);
    assert_eq!(from_config.stdout, polyberg(&["verify", "--grid.nx", "8", "--seed", "7"]).stdout);
}

fn scan(args: &[&str]) -> Vec<Vec<String>> {
    let out = polyberg(args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# polyberg "));
    assert_eq!(lines.next().unwrap(), "a,b,n,density_value,threshold,lower_est,upper_est,satisfied");
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn frame_scan_marks_the_density_threshold() {
    let rows = scan(&["frame-scan", "--a", "2", "--b", "1..12", "--n", "0", "--trials", "10"]);
    assert_eq!(rows.len(), 12);
    let satisfied: Vec<bool> = rows.iter().map(|r| r[7] == "true").collect();
    assert!(satisfied[..9].iter().all(|&s| s) && satisfied[9..].iter().all(|&s| !s), "{satisfied:?}");

    let rows = scan(&["frame-scan", "--a", "2", "--b", "18,19", "--n", "1", "--trials", "10"]);
    assert_eq!((rows[0][7].as_str(), rows[1][7].as_str()), ("true", "false"));

    assert_eq!(code(&polyberg(&["frame-scan", "--b", ""])), 2);
    assert_eq!(code(&polyberg(&["frame-scan", "--b", "5..1"])), 2);
    assert_eq!(code(&polyberg(&["frame-scan", "--a", "1", "--b", "1"])), 2);
}

#[test]
fn frame_scan_is_deterministic() {
    let args = ["frame-scan", "--b", "2,8", "--trials", "5", "--seed", "11"];
    assert_eq!(polyberg(&args).stdout, polyberg(&args).stdout);
}

fn field_values(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .skip(2)
        .map(|l| {
            let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            (cols[2], cols[3])
        })
        .collect()
}

#[test]
fn basis_and_kernel_samples() {
    let grid = ["--grid.nx", "16", "--grid.ns", "8"];
    let mut args = vec!["basis", "--n", "1", "--m", "2"];
    args.extend(grid);
    let out = polyberg(&args);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().nth(1) == Some("x,s,re,im"));
    assert_eq!(field_values(&stdout(&out)).len(), 16 * 8);

    let mut sum = vec!["kernel", "--n", "1", "--x", "-0.5", "--s", "1"];
    sum.extend(grid);
    let mut closed = sum.clone();
    closed.extend(["--modes", "0"]);
    let a = field_values(&stdout(&polyberg(&sum)));
    let b = field_values(&stdout(&polyberg(&closed)));
    assert_eq!(a.len(), b.len());
    // nodes near the axis are outside the basis-sum convergence region
    let close = a.iter().zip(&b).filter(|(p, q)| (p.0 - q.0).hypot(p.1 - q.1) <= 1e-6 * q.0.hypot(q.1)).count();
    assert!(close * 2 > a.len(), "{close} of {}", a.len());
    assert_eq!(code(&polyberg(&["kernel", "--n", "0", "--x", "0", "--s", "-1", "--grid.nx", "4"])), 2);
}

#[test]
fn time_signal_import() {
    let dir = tempfile::tempdir().unwrap();
    // inverse transform of l_0¹(ω) = √ω e^{-ω/2}: Γ(3/2) (2π)^{-1/2} (1/2 - it)^{-3/2}
    let mut text = String::from("t,re,im\n");
    let gamma = std::f64::consts::PI.sqrt() / 2.0;
    for j in 0..1024 {
        let t = -51.2 + 0.1 * j as f64;
        let z = num_complex::Complex64::new(0.5, -t).powf(-1.5) * gamma / std::f64::consts::TAU.sqrt();
        text.push_str(&format!("{t},{},{}\n", z.re, z.im));
    }
    let input = write(dir.path(), "signal.csv", &text);
    let out = polyberg(&["import-time-signal", &input, "--modes", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let coeffs: polyberg_core::transforms::RPlusCoeffs<f64> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((coeffs.coeffs[0] - 1.0).norm() < 1e-3, "{:?}", coeffs.coeffs);
    assert!(coeffs.coeffs[1].norm() < 1e-3 && coeffs.coeffs[2].norm() < 1e-3);

    let uneven = write(dir.path(), "uneven.csv", "0,1\n1,1\n3,1\n");
    assert_eq!(code(&polyberg(&["import-time-signal", &uneven])), 2);
}
