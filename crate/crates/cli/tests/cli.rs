use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use conjugate_jumps::sample_signal;
use conjugate_jumps::signal::reference_pulse;

fn cjumps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cjumps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

fn numbers(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name)
        .iter()
        .map(|v| v.parse().unwrap())
        .collect()
}

fn write_lines(dir: &Path, name: &str, values: &[f64]) -> String {
    let path = dir.join(name);
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn detect_staircase_reports_four_jumps() {
    let out = stdout(&cjumps(&["detect", "--signal", "staircase", "--n", "1024"]));
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "location_rad,magnitude_est,score,n,K_used,normalizer,note"
    );
    assert_eq!(lines.count(), 4);
    let loc = numbers(&out, "location_rad");
    for (x, k) in loc.iter().zip(1..=4) {
        assert!((x - k as f64 * TAU / 5.0).abs() <= PI / 1024.0);
    }
    assert!(column(&out, "n").iter().all(|n| n == "1024"));
}

#[test]
fn analyze_constant_is_all_zero() {
    let out = stdout(&cjumps(&[
        "analyze", "--signal", "constant", "--n", "64", "--grid", "1024",
    ]));
    let y = numbers(&out, "y_n");
    assert_eq!(y.len(), 1024);
    assert!(y.iter().all(|v| *v == 0.0));
    assert!(column(&out, "note").iter().all(|v| v.is_empty()));
}

#[test]
fn sweep_grows_logarithmically_at_probe() {
    let out = stdout(&cjumps(&[
        "sweep",
        "--signal",
        "staircase",
        "--probe",
        "1/5*2pi",
        "--n-range",
        "256:16384:2",
    ]));
    let s = numbers(&out, "conj_partial_sum");
    let n = numbers(&out, "n");
    assert_eq!(n.len(), 7);
    // the +2 jump drives S̃_n towards −∞ like −(2/π) log n
    assert!(s.windows(2).all(|w| w[1] < w[0]), "{s:?}");
    let per_octave = (s[0] - s[6]) / (6.0 * 2f64.ln());
    assert!(
        (per_octave - 2.0 / PI).abs() < 0.05 * 2.0 / PI,
        "{per_octave}"
    );
    let g = numbers(&out, "g_n");
    assert!(g.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn variation_over_interval() {
    let out = stdout(&cjumps(&[
        "variation",
        "--signal",
        "pulse",
        "--n",
        "256",
        "--interval",
        "1/6*2pi:1/2*2pi",
    ]));
    let mass = numbers(&out, "jump_mass_est");
    assert_eq!(mass.len(), 1);
    // the calibration interval itself, so exactly one unit jump
    assert!((mass[0] - 1.0).abs() < 1e-9, "{mass:?}");
}

#[test]
fn detect2d_on_cross_field() {
    let out = stdout(&cjumps(&["detect2d", "--signal", "cross", "--n", "128"]));
    let dirs = column(&out, "direction");
    assert_eq!(dirs, ["1", "1", "2", "2"]);
    let off = numbers(&out, "offset_rad");
    let truth = [TAU / 3.0, 2.0 * TAU / 3.0, TAU / 5.0, 3.0 * TAU / 5.0];
    for (o, t) in off.iter().zip(truth) {
        assert!((o - t).abs() <= PI / 128.0);
    }
    let one = stdout(&cjumps(&[
        "detect2d",
        "--signal",
        "pulse-x",
        "--n",
        "128",
        "--direction",
        "2",
    ]));
    assert_eq!(one.lines().count(), 1);
}

#[test]
fn samples_drive_detection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_lines(
        dir.path(),
        "pulse.txt",
        &sample_signal(&reference_pulse(), 1 << 16),
    );
    let out = stdout(&cjumps(&["detect", "--samples", &path, "--n", "512"]));
    let loc = numbers(&out, "location_rad");
    assert_eq!(loc.len(), 2);
    assert!((loc[0] - TAU / 3.0).abs() <= PI / 512.0);
    assert!((loc[1] - 2.0 * TAU / 3.0).abs() <= PI / 512.0);
}

#[test]
fn zero_signal_gives_warning_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_lines(dir.path(), "zeros.txt", &[0.0; 64]);
    let out = stdout(&cjumps(&["detect", "--samples", &path, "--n", "8"]));
    assert_eq!(column(&out, "note"), ["warning: G(n)=0"]);
    assert_eq!(column(&out, "location_rad"), [""]);
}

#[test]
fn jsonl_mirrors_columns() {
    let out = stdout(&cjumps(&[
        "detect", "--signal", "pulse2", "--n", "256", "--format", "jsonl",
    ]));
    let rows: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    for key in [
        "location_rad",
        "magnitude_est",
        "score",
        "n",
        "K_used",
        "normalizer",
        "note",
    ] {
        assert!(rows[0].get(key).is_some(), "{key}");
    }
    assert!(rows[0]["magnitude_est"].as_f64().unwrap() > 0.0);
    assert!(rows[1]["magnitude_est"].as_f64().unwrap() < 0.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = cjumps(&[
            "analyze",
            "--signal",
            "ramp",
            "--n",
            "300",
            "--grid",
            "5000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cjumps(args).status.code().unwrap();
    // configuration
    assert_eq!(code(&["detect", "--signal", "pulse"]), 2);
    assert_eq!(code(&["detect", "--signal", "pulse", "--n", "1"]), 2);
    assert_eq!(
        code(&["detect", "--signal", "pulse", "--n", "64", "--grid", "100"]),
        2
    );
    assert_eq!(
        code(&[
            "detect",
            "--signal",
            "pulse",
            "--n",
            "64",
            "--threshold",
            "1.5"
        ]),
        2
    );
    assert_eq!(code(&["variation", "--signal", "pulse", "--n", "64"]), 2);
    assert_eq!(
        code(&["sweep", "--signal", "pulse", "--n-range", "4:64:2"]),
        2
    );
    assert_eq!(
        code(&[
            "detect2d",
            "--signal",
            "cross",
            "--n",
            "16",
            "--direction",
            "3"
        ]),
        2
    );
    assert_eq!(code(&["detect", "--bogus"]), 2);
    // input
    assert_eq!(
        code(&["detect", "--signal", "no-such-signal", "--n", "64"]),
        3
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0\n1\nx\n").unwrap();
    let o = cjumps(&["analyze", "--samples", bad.to_str().unwrap(), "--n", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(
        code(&["analyze", "--samples", empty.to_str().unwrap(), "--n", "2"]),
        3
    );
    // too few samples for the order is a configuration problem
    let four = write_lines(dir.path(), "four.txt", &[0.0, 1.0, 0.0, 1.0]);
    assert_eq!(code(&["analyze", "--samples", &four, "--n", "2"]), 2);
}

#[test]
fn signal_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("step.toml");
    fs::write(
        &path,
        "name = \"two-level\"\n\
         [[pieces]]\nstart = \"0\"\nend = \"1/4\"\ncoeffs = [0.0]\n\
         [[pieces]]\nstart = \"1/4\"\nend = \"3/4\"\ncoeffs = [1.5]\n\
         [[pieces]]\nstart = \"3/4\"\nend = \"1\"\ncoeffs = [0.0]\n",
    )
    .unwrap();
    let out = stdout(&cjumps(&[
        "detect",
        "--signal",
        path.to_str().unwrap(),
        "--n",
        "512",
    ]));
    let mag = numbers(&out, "magnitude_est");
    assert_eq!(mag.len(), 2);
    assert!(
        (mag[0] - 1.5).abs() < 0.45 && (mag[1] + 1.5).abs() < 0.45,
        "{mag:?}"
    );
}
