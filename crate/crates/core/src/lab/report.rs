//! Output writers: CSV tables, a run manifest, and gnuplot scripts.
//!
//! Floats are printed with 17 significant digits so a rerun can be compared
//! byte for byte; timing lives only in the manifest, never in table cells.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv write failed: {other:?}")),
    }
}

pub fn cell_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cell_of(x: Option<f64>) -> String {
    x.map(cell_f).unwrap_or_default()
}

pub fn cell_u(x: usize) -> String {
    x.to_string()
}

pub fn cell_b(x: bool) -> String {
    if x { "true" } else { "false" }.to_string()
}

#[derive(Serialize)]
pub struct RowStatus {
    pub id: String,
    pub status: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    pub jobs: usize,
    pub config: BTreeMap<String, BTreeMap<String, String>>,
    pub overrides: BTreeMap<String, String>,
    pub wall_seconds: f64,
    pub violations: usize,
    pub summary: serde_json::Value,
    pub rows: Vec<RowStatus>,
}

impl Manifest {
    pub fn new(experiment: &str, seed: u64, jobs: usize) -> Self {
        Manifest {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            jobs,
            config: BTreeMap::new(),
            overrides: BTreeMap::new(),
            wall_seconds: 0.0,
            violations: 0,
            summary: serde_json::Value::Null,
            rows: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("manifest serialization failed: {e}")))?;
        fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// A plot script referencing the CSV by file name, so the output directory
/// is relocatable as a unit.
pub fn write_gnuplot(
    path: &Path,
    csv_name: &str,
    title: &str,
    xlabel: &str,
    extra: &[&str],
    series: &[(usize, usize, &str)],
) -> Result<()> {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!("set xlabel '{xlabel}'\n"));
    s.push_str("set grid\n");
    for line in extra {
        s.push_str(line);
        s.push('\n');
    }
    let plots: Vec<String> = series
        .iter()
        .map(|(x, y, label)| {
            format!("'{csv_name}' using {x}:{y} with linespoints title '{label}'")
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells_round_trip_exactly() {
        for &x in &[0.1, 2.0 / 3.0, 1e-300, -5.5e17, f64::MIN_POSITIVE] {
            let cell = cell_f(x);
            assert_eq!(cell.parse::<f64>().unwrap(), x, "{cell}");
        }
    }

    #[test]
    fn csv_and_manifest_land_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(vec!["x", "y"]);
        t.push(vec![cell_f(1.0), cell_b(true)]);
        t.push(vec![cell_of(None), cell_u(7)]);
        let csv_path = dir.path().join("t.csv");
        t.write_csv(&csv_path).unwrap();
        let body = std::fs::read_to_string(&csv_path).unwrap();
        assert!(body.starts_with("x,y\n"));
        assert!(body.contains("1.0000000000000000e0,true"));

        let mut m = Manifest::new("demo", 42, 0);
        m.summary = serde_json::json!({ "rows": 2 });
        let man_path = dir.path().join("m.json");
        m.write(&man_path).unwrap();
        let text = std::fs::read_to_string(&man_path).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["experiment"], "demo");
        assert_eq!(back["seed"], 42);

        write_gnuplot(
            &dir.path().join("p.gp"),
            "t.csv",
            "demo",
            "x",
            &["set logscale y"],
            &[(1, 2, "y")],
        )
        .unwrap();
        let gp = std::fs::read_to_string(dir.path().join("p.gp")).unwrap();
        assert!(gp.contains("set logscale y"));
        assert!(gp.contains("'t.csv' using 1:2"));
    }
}
