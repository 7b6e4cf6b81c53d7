use std::path::Path;
use std::process::{Command, Output};

use uncertainty::models::{build_model, closed_form_u, mathieu_be, MeasureKind, ModelKind};
use uncertainty::stationary::log_grid;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncertainty"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exited normally")
}

/// Header names and numeric rows of a CSV file, skipping `#` comments.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let columns = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect())
        .collect();
    (columns, rows)
}

fn border_csv(dir: &Path, extra: &[&str]) -> (Vec<String>, Vec<Vec<f64>>) {
    let path = dir.join("border.csv");
    let mut args = vec!["border", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let output = run(&args);
    assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));
    read_csv(&path)
}

#[test]
fn qubit_variance_border_is_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let (columns, rows) = border_csv(dir.path(), &["--model", "pauli", "--measure", "variance"]);
    assert_eq!(&columns[..5], ["alpha", "beta", "u", "x", "y"]);
    assert_eq!(rows.len(), 201);
    for r in &rows {
        assert!((r[3] + r[4] - 1.0).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn qutrit_border_lies_on_the_ellipse() {
    let dir = tempfile::tempdir().unwrap();
    let (_, rows) = border_csv(
        dir.path(),
        &["--model", "weyl:3", "--measure", "mtc", "--grid", "101:1e-6:1e6"],
    );
    for r in &rows {
        let (x, y) = (r[3], r[4]);
        let ellipse = (2.0 * x + 2.0 * y - 3.0).powi(2) / 3.0 + 2.0 * (x - y).powi(2) / 3.0;
        assert!((ellipse - 1.0).abs() < 1e-8, "{r:?}");
    }
    // The arc runs from (1, 0) to (0, 1) and passes the diagonal at u(1, 1).
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    assert!((first[3] - 1.0).abs() < 1e-5 && first[4].abs() < 1e-5);
    assert!(last[3].abs() < 1e-5 && (last[4] - 1.0).abs() < 1e-5);
    let middle = &rows[50];
    assert_eq!(middle[0], 1.0);
    assert!((middle[2] - 0.75 * (2.0 - (4.0f64 / 3.0).sqrt())).abs() < 1e-12);
}

#[test]
fn rotor_border_matches_the_mathieu_value() {
    let dir = tempfile::tempdir().unwrap();
    let (_, rows) = border_csv(
        dir.path(),
        &[
            "--model",
            "rotor",
            "--measure",
            "ssd",
            "--trunc",
            "64",
            "--grid",
            "21:1e-2:1e2",
        ],
    );
    for r in &rows {
        let (alpha, beta) = (r[0], r[1]);
        let exact = 0.25 * beta * mathieu_be(0, 8.0 * alpha / beta).unwrap();
        assert!((r[2] - exact).abs() < 1e-6, "{r:?} vs {exact}");
    }
}

#[test]
fn csv_reproduces_library_values_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (columns, rows) = border_csv(
        dir.path(),
        &["--model", "spin1", "--measure", "ssd", "--grid", "17:1e-2:1e2"],
    );
    let spec = build_model(ModelKind::Spin1, MeasureKind::Ssd).unwrap();
    let curve = spec
        .solver()
        .trace_border(&spec.pair, &log_grid(17, 1e-2, 1e2).unwrap())
        .unwrap();
    assert_eq!(columns.len(), 8);
    for (r, p) in rows.iter().zip(&curve.points) {
        for (written, value) in r.iter().zip([p.alpha, p.beta, p.u, p.x, p.y]) {
            assert_eq!(written.to_bits(), value.to_bits());
        }
        assert_eq!(
            r[5].to_bits(),
            closed_form_u(ModelKind::Spin1, MeasureKind::Ssd, p.alpha, p.beta)
                .unwrap()
                .to_bits()
        );
    }
}

#[test]
fn json_has_config_columns_rows() {
    let output = run(&["border", "--model", "pauli", "--grid", "3:0.5:2", "--format", "json"]);
    assert_eq!(code(&output), 0);
    let text = String::from_utf8(output.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["config"]["model"], "pauli");
    assert_eq!(value["columns"].as_array().unwrap().len(), 8);
    assert_eq!(value["rows"].as_array().unwrap().len(), 3);
    let (c, k, r) = (
        text.find("\"config\"").unwrap(),
        text.find("\"columns\"").unwrap(),
        text.find("\"rows\"").unwrap(),
    );
    assert!(c < k && k < r);
}

#[test]
fn samples_are_reproducible_and_physical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let output = run(&[
            "sample",
            "--model",
            "pauli",
            "--count",
            "20000",
            "--seed",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&output), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (_, rows) = read_csv(&a);
    assert_eq!(rows.len(), 20000);
    assert!(rows.iter().all(|r| r[0] + r[1] >= 1.0 - 1e-10));
    let other = run(&["sample", "--model", "pauli", "--count", "20000", "--seed", "4"]);
    assert_ne!(other.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn spin1_samples_respect_the_border() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let output = run(&[
        "sample",
        "--model",
        "spin1",
        "--measure",
        "variance",
        "--count",
        "5000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);
    let (_, rows) = read_csv(&path);
    for t in log_grid(41, 1e-2, 1e2).unwrap() {
        let u = closed_form_u(ModelKind::Spin1, MeasureKind::Variance, t, 1.0).unwrap();
        assert!(rows.iter().all(|r| t * r[0] + r[1] >= u - 1e-8), "t={t}");
    }
}

#[test]
fn check_reports_and_sets_exit_codes() {
    let pass = run(&[
        "check",
        "--inequality",
        "robertson",
        "--model",
        "spin1",
        "--count",
        "10000",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&pass), 0);
    assert!(String::from_utf8_lossy(&pass.stdout).contains("PASS"));
    let transform = run(&["check", "--inequality", "a15", "--model", "pauli", "--count", "10000"]);
    assert_eq!(code(&transform), 0);
    let line = String::from_utf8(transform.stdout).unwrap();
    let mismatch: f64 = line
        .split("max_mismatch=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(mismatch < 1e-9);

    let ratio = run(&["check", "--inequality", "vonmises-ratio"]);
    assert_eq!(code(&ratio), 0);
    let line = String::from_utf8(ratio.stdout).unwrap();
    let field = |key: &str| -> f64 {
        line.split(&format!("{key}="))
            .nth(1)
            .unwrap()
            .split_whitespace()
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(field("max_ratio") <= 1.0158);
    assert!((field("argmax") - 2.164).abs() < 0.1);

    assert_eq!(code(&run(&["check", "--inequality", "nonsense"])), 2);
    assert_eq!(
        code(&run(&["check", "--inequality", "robertson", "--model", "rotor"])),
        2
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["border", "--model", "weyl:1"])), 2);
    assert_eq!(code(&run(&["border", "--grid", "5:2:1"])), 2);
    assert_eq!(code(&run(&["border", "--model", "pauli", "--measure", "mtc"])), 2);
    assert_eq!(code(&run(&["sample", "--count", "0"])), 2);
    assert_eq!(code(&run(&["figure", "6"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

fn figure(id: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.svg");
    let output = run(&[
        "figure",
        id,
        "--grid",
        "41:1e-3:1e3",
        "--count",
        "500",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "{}", String::from_utf8_lossy(&output.stderr));
    std::fs::read_to_string(path).unwrap()
}

fn polylines<'a>(svg: &'a str, color: &str) -> Vec<&'a str> {
    svg.lines()
        .filter(|l| l.starts_with("<polyline") && l.contains(&format!("stroke=\"{color}\"")))
        .collect()
}

#[test]
fn figures_carry_their_layers() {
    let svg = figure("1a");
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<circle").count(), 500);
    assert_eq!(polylines(&svg, "blue").len(), 1);
    assert_eq!(polylines(&svg, "red").len(), 2);

    let svg = figure("2");
    assert_eq!(polylines(&svg, "red").len(), 3);
    assert_eq!(polylines(&svg, "blue").len(), 1);

    assert!(!polylines(&figure("3"), "gray").is_empty());
    for id in ["1b", "4", "5"] {
        let svg = figure(id);
        assert_eq!(polylines(&svg, "blue").len(), 1, "figure {id}");
        assert!(svg.contains("<circle"), "figure {id}");
    }

    let svg = figure("7");
    assert_eq!(polylines(&svg, "blue").len(), 1);
    assert!(svg.contains(">0.01<") && svg.contains(">100<"));
}
