//! Run configuration shared by every subcommand.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use uncertainty::models::{MeasureKind, ModelKind};
use uncertainty::Error;

/// `N:TMIN:TMAX`, log-spaced ratios `α/β` with `0 < TMIN < TMAX`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub count: usize,
    pub tmin: f64,
    pub tmax: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            count: 201,
            tmin: 1e-3,
            tmax: 1e3,
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [count, tmin, tmax] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not N:TMIN:TMAX"));
        };
        let count: usize = count.parse().map_err(|e| format!("grid count: {e}"))?;
        let tmin: f64 = tmin.parse().map_err(|e| format!("grid TMIN: {e}"))?;
        let tmax: f64 = tmax.parse().map_err(|e| format!("grid TMAX: {e}"))?;
        if count < 2 || !(tmin > 0.0 && tmin < tmax && tmax.is_finite()) {
            return Err(format!("grid {s:?} needs N >= 2 and 0 < TMIN < TMAX"));
        }
        Ok(Self { count, tmin, tmax })
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{:e}:{:e}", self.count, self.tmin, self.tmax)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Everything that determines a command's output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(serialize_with = "display")]
    pub model: ModelKind,
    #[serde(serialize_with = "display")]
    pub measure: MeasureKind,
    pub grid: Grid,
    pub count: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl RunConfig {
    /// Resolves the model (with `trunc` as the cutoff of truncated models)
    /// and the measure, falling back to the model's natural measure.
    pub fn resolve(
        model: &str,
        measure: Option<&str>,
        trunc: Option<usize>,
    ) -> Result<(ModelKind, MeasureKind), Error> {
        let kind = ModelKind::parse_with_cutoff(model, trunc)?;
        let measure = match measure {
            Some(m) => MeasureKind::from_str(m)?,
            None => kind.default_measure(),
        };
        Ok((kind, measure))
    }

    /// One `key=value` pair per line, for `#` comment headers.
    pub fn echo(&self) -> Vec<String> {
        vec![
            format!("command={}", self.command),
            format!("model={}", self.model),
            format!("measure={}", self.measure),
            format!("grid={}", self.grid),
            format!("count={}", self.count),
            format!("seed={}", self.seed),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parses_and_rejects() {
        let g: Grid = "11:0.01:100".parse().unwrap();
        assert_eq!(
            g,
            Grid {
                count: 11,
                tmin: 0.01,
                tmax: 100.0
            }
        );
        assert_eq!(g.to_string().parse::<Grid>().unwrap(), g);
        for bad in ["11:1:1", "11:0:1", "1:1:2", "11:2:1", "11:1", "x:1:2", "3:-1:2"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn measure_defaults_to_the_model() {
        let (kind, measure) = RunConfig::resolve("rotor", None, Some(16)).unwrap();
        assert_eq!(kind, ModelKind::Rotor(16));
        assert_eq!(measure, MeasureKind::Ssd);
        assert!(RunConfig::resolve("weyl:1", None, None).is_err());
    }
}
