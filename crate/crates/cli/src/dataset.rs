//! Column-oriented numeric tables and their CSV and JSON encodings.
//!
//! CSV: `#` comment lines echo the configuration, then one header row, then
//! one row per record. Values carry 17 significant digits so that parsing a
//! written file returns the in-memory values bit for bit.

use std::fmt::Write;

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub columns: Vec<String>,
    /// Every row has `columns.len()` entries; `NaN` marks a missing value.
    pub rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let index = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[index]).collect())
    }

    pub fn to_csv(&self, header: &[String]) -> String {
        let mut s = String::new();
        for line in header {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    #[cfg(test)]
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
        let header = lines.next().ok_or("missing header row")?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| format!("row {k}: {e}")))
                .collect::<Result<Vec<f64>, String>>()?;
            if row.len() != columns.len() {
                return Err(format!("row {k} has {} cells, expected {}", row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    /// `{config, columns, rows}`; non-finite values become `null`.
    pub fn to_json(&self, config: &RunConfig) -> String {
        #[derive(Serialize)]
        struct Document<'a> {
            config: &'a RunConfig,
            columns: &'a [String],
            rows: Vec<Vec<Option<f64>>>,
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.is_finite().then_some(*v)).collect())
            .collect();
        let document = Document {
            config,
            columns: &self.columns,
            rows,
        };
        let mut text = serde_json::to_string_pretty(&document).expect("plain data serialises");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_exactly() {
        let mut d = Dataset::new(&["a", "b"]);
        d.push(vec![0.1 + 0.2, std::f64::consts::PI]);
        d.push(vec![1e-300, f64::NAN]);
        d.push(vec![-123456.789, 5e-324]);
        let back = Dataset::from_csv(&d.to_csv(&["note=x".into()])).unwrap();
        assert_eq!(back.columns, d.columns);
        for (r, s) in back.rows.iter().zip(&d.rows) {
            for (x, y) in r.iter().zip(s) {
                assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
            }
        }
    }

    #[test]
    fn ragged_rows_are_rejected() {
        assert!(Dataset::from_csv("a,b\n1,2,3\n").is_err());
        assert!(Dataset::from_csv("# only a comment\n").is_err());
    }
}
