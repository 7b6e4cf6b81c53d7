//! The four subcommands. Each returns the text to emit and an exit code, or a
//! [`Failure`] when nothing useful can be written.

use uncertainty::inequalities::{sweep, Suite};
use uncertainty::models::{
    build_model, inequality_pair, sample_states, von_mises_ratio_curve, MeasureKind, ModelKind, ModelSpec,
};
use uncertainty::stationary::log_grid;
use uncertainty::{BorderCurve, Error};

use crate::config::{Format, Grid, RunConfig};
use crate::dataset::Dataset;
use crate::svg::Plot;

pub const EXIT_SUITE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

/// Lowest accepted `ũ/u`: the von Mises states can never beat the minimum.
const RATIO_FLOOR: f64 = 1.0 - 1e-9;
/// Highest accepted `ũ/u`.
const RATIO_CEILING: f64 = 1.0158;
/// Edge amplitude of a truncated basis above which border values lose
/// accuracy visibly.
const TAIL_WARNING: f64 = 1e-8;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    NoConvergence(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::NoConvergence(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) => Failure::NoConvergence(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn ratios(grid: Grid) -> Result<Vec<f64>, Failure> {
    Ok(log_grid(grid.count, grid.tmin, grid.tmax)?)
}

fn encode(config: &RunConfig, data: &Dataset, plot: impl FnOnce() -> Plot) -> String {
    match config.format {
        Format::Csv => data.to_csv(&config.echo()),
        Format::Json => data.to_json(config),
        Format::Svg => plot().render(),
    }
}

/// `(0, 1.05·max)` over the finite entries of `values`.
fn auto_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let top = values.filter(|v| v.is_finite()).fold(0.0, f64::max);
    (0.0, if top > 0.0 { 1.05 * top } else { 1.0 })
}

/// Solver border with closed-form columns appended when the model has them.
pub fn border_dataset(spec: &ModelSpec, grid: Grid) -> Result<(Dataset, usize), Failure> {
    let ts = ratios(grid)?;
    let curve = spec.solver().trace_border(&spec.pair, &ts)?;
    let exact = spec.closed_form_u(1.0, 1.0).is_ok();
    let mut data = if exact {
        Dataset::new(&["alpha", "beta", "u", "x", "y", "u_exact", "x_exact", "y_exact"])
    } else {
        Dataset::new(&["alpha", "beta", "u", "x", "y"])
    };
    for p in &curve.points {
        let mut row = vec![p.alpha, p.beta, p.u, p.x, p.y];
        if exact {
            let u = spec.closed_form_u(p.alpha, p.beta).unwrap_or(f64::NAN);
            let (x, y) = spec
                .closed_form_border_point(p.alpha / p.beta)
                .unwrap_or((f64::NAN, f64::NAN));
            row.extend([u, x, y]);
        }
        data.push(row);
    }
    let clipped: Vec<f64> = curve
        .points
        .iter()
        .filter(|p| p.state.as_ref().is_some_and(|s| spec.truncation_tail(s) > TAIL_WARNING))
        .map(|p| p.alpha / p.beta)
        .collect();
    if let (Some(lo), Some(hi)) = (clipped.first(), clipped.last()) {
        eprintln!(
            "warning: {} of {} points reach the truncation edge (alpha/beta from {lo:e} to {hi:e}); raise --trunc",
            clipped.len(),
            curve.points.len()
        );
    }
    let invalid = curve.points.iter().filter(|p| !p.is_valid()).count();
    Ok((data, invalid))
}

pub fn border(config: &RunConfig) -> Result<Outcome, Failure> {
    let spec = build_model(config.model, config.measure)?;
    let (data, invalid) = border_dataset(&spec, config.grid)?;
    let text = encode(config, &data, || {
        let (xs, ys) = (data.column("x").unwrap(), data.column("y").unwrap());
        let mut plot = Plot::new(
            format!("border {}", spec.name()),
            auto_range(xs.iter().copied()),
            auto_range(ys.iter().copied()),
        );
        plot.line(xs.into_iter().zip(ys).collect(), "blue");
        plot
    });
    if invalid > 0 {
        eprintln!("{invalid} of {} grid points did not converge", data.rows.len());
    }
    Ok(Outcome {
        text,
        code: if invalid > 0 { EXIT_NO_CONVERGENCE } else { 0 },
    })
}

fn sample_points(spec: &ModelSpec, count: usize, seed: u64) -> Result<Vec<(f64, f64)>, Failure> {
    sample_states(spec.kind, count, seed)?
        .iter()
        .map(|s| spec.pair.measures(s).map_err(Failure::from))
        .collect()
}

pub fn sample(config: &RunConfig) -> Result<Outcome, Failure> {
    if config.count == 0 {
        return Err(Failure::Usage("sample needs --count > 0".into()));
    }
    let spec = build_model(config.model, config.measure)?;
    let points = sample_points(&spec, config.count, config.seed)?;
    let mut data = Dataset::new(&["x", "y"]);
    for &(x, y) in &points {
        data.push(vec![x, y]);
    }
    let text = encode(config, &data, || {
        let mut plot = Plot::new(
            format!("samples {}", spec.name()),
            auto_range(points.iter().map(|p| p.0)),
            auto_range(points.iter().map(|p| p.1)),
        );
        plot.scatter(points.clone(), "black");
        plot
    });
    Ok(Outcome { text, code: 0 })
}

pub fn check(inequality: &str, config: &RunConfig) -> Result<Outcome, Failure> {
    if inequality.trim().eq_ignore_ascii_case("vonmises-ratio") {
        return check_von_mises(config);
    }
    let suite: Suite = inequality.parse()?;
    let (a, b) = inequality_pair(config.model)?;
    let report = sweep(suite, &a, &b, config.count, config.seed)?;
    let label = if suite == Suite::Transform {
        "max_mismatch"
    } else {
        "min_slack"
    };
    let text = format!(
        "inequality={suite} model={} count={} seed={} skipped={} {label}={:e} {}\n",
        config.model,
        report.count,
        config.seed,
        report.skipped,
        report.worst,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(Outcome {
        text,
        code: if report.passed { 0 } else { EXIT_SUITE },
    })
}

fn check_von_mises(config: &RunConfig) -> Result<Outcome, Failure> {
    let curve = von_mises_ratio_curve(&ratios(config.grid)?)?;
    let min = curve.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let peak = curve
        .iter()
        .max_by(|p, q| p.ratio.total_cmp(&q.ratio))
        .expect("grid has at least two points");
    let passed = min >= RATIO_FLOOR && peak.ratio <= RATIO_CEILING;
    let text = format!(
        "inequality=vonmises-ratio grid={} min_ratio={:.9} max_ratio={:.9} argmax={:.6} {}\n",
        config.grid,
        min,
        peak.ratio,
        peak.alpha_over_beta,
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(Outcome {
        text,
        code: if passed { 0 } else { EXIT_SUITE },
    })
}

pub const FIGURES: [&str; 7] = ["1a", "1b", "2", "3", "4", "5", "7"];

/// Plotted interval of one axis.
type Axis = (f64, f64);

/// Model, measure and axis ranges of each scatter-and-border figure.
fn figure_setup(id: &str, trunc: Option<usize>) -> Option<(ModelKind, MeasureKind, Axis, Axis)> {
    let unit = (0.0, 1.05);
    Some(match id {
        "1a" => (ModelKind::Pauli, MeasureKind::Variance, unit, unit),
        "1b" => (ModelKind::Pauli, MeasureKind::Ssd, (0.0, 2.0), (0.0, 2.0)),
        "2" => (ModelKind::Spin1, MeasureKind::Variance, unit, unit),
        "3" => (ModelKind::Spin1, MeasureKind::Ssd, unit, unit),
        "4" => (ModelKind::Weyl(3), MeasureKind::Mtc, unit, unit),
        "5" => (
            ModelKind::Rotor(trunc.unwrap_or(uncertainty::models::DEFAULT_ROTOR_CUTOFF)),
            MeasureKind::Ssd,
            (0.0, 1.0),
            (0.0, 1.5),
        ),
        _ => return None,
    })
}

/// Points of a parametrised curve `f(s)`, `s` evenly spaced on `[lo, hi]`.
fn parametric(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> (f64, f64)) -> Vec<(f64, f64)> {
    (0..n).map(|k| f(lo + (hi - lo) * k as f64 / (n - 1) as f64)).collect()
}

pub fn figure(id: &str, config: &RunConfig, trunc: Option<usize>) -> Result<Outcome, Failure> {
    if id == "7" {
        return figure_von_mises(config);
    }
    let Some((kind, measure, x_range, y_range)) = figure_setup(id, trunc) else {
        return Err(Failure::Usage(format!(
            "unknown figure {id:?}; expected one of {}",
            FIGURES.join(", ")
        )));
    };
    let spec = build_model(kind, measure)?;
    let curve: BorderCurve = spec.solver().trace_border(&spec.pair, &ratios(config.grid)?)?;
    let mut plot = Plot::new(format!("figure {id}: {}", spec.name()), x_range, y_range)
        .labels(&format!("{measure}(A)"), &format!("{measure}(B)"));
    plot.scatter(sample_points(&spec, config.count, config.seed)?, "#555555");
    match id {
        "1a" => {
            // Robertson states of a qubit: one variance is 1, the other free.
            plot.line(vec![(1.0, 0.0), (1.0, 1.0)], "red");
            plot.line(vec![(0.0, 1.0), (1.0, 1.0)], "red");
        }
        "2" => {
            // The three Robertson families of spin one.
            plot.line(
                parametric(0.0, std::f64::consts::FRAC_PI_2, 91, |p| {
                    (p.sin().powi(2), p.cos().powi(2))
                }),
                "red",
            );
            plot.line(parametric(0.0, 8.0, 161, |q| (0.5 * q.tanh().powi(2), 0.5)), "red");
            plot.line(parametric(0.0, 8.0, 161, |q| (0.5, 0.5 * q.tanh().powi(2))), "red");
        }
        "3" => {
            // Supporting lines αx + βy = u at a few ratios.
            for p in curve.valid_points().filter(|p| {
                [0.2, 0.5, 1.0, 2.0, 5.0]
                    .iter()
                    .any(|t| (p.alpha / t - 1.0).abs() < 0.05)
            }) {
                plot.line(vec![(0.0, p.u / p.beta), (p.u / p.alpha, 0.0)], "gray");
            }
        }
        _ => {}
    }
    plot.line(curve.points.iter().map(|p| (p.x, p.y)).collect(), "blue");
    let invalid = curve.points.iter().filter(|p| !p.is_valid()).count();
    Ok(Outcome {
        text: plot.render(),
        code: if invalid > 0 { EXIT_NO_CONVERGENCE } else { 0 },
    })
}

fn figure_von_mises(config: &RunConfig) -> Result<Outcome, Failure> {
    let curve = von_mises_ratio_curve(&ratios(config.grid)?)?;
    let mut plot = Plot::new("figure 7: von Mises ratio", (1e-2, 1e2), (1.0, 1.016)).labels("alpha/beta", "ratio");
    plot.log_x = true;
    plot.line(curve.iter().map(|r| (r.alpha_over_beta, r.ratio)).collect(), "blue");
    Ok(Outcome {
        text: plot.render(),
        code: 0,
    })
}
