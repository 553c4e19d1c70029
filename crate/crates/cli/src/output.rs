//! CSV and JSON writers plus the metadata sidecar.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Resolved;
use crate::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Column-labelled rows, rendered as CSV or as JSON `{columns, rows}`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Field::Num(x)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|f| match f {
                    Field::Num(x) => num(*x),
                    Field::Text(s) => quote(s),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Non-finite numbers become `null`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| match f {
                        Field::Num(x) => serde_json::Number::from_f64(*x)
                            .map_or(serde_json::Value::Null, serde_json::Value::Number),
                        Field::Text(s) => serde_json::Value::String(s.clone()),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }
}

/// `rho_<i><j>_re`, `rho_<i><j>_im` for every entry, row-major.
pub fn matrix_columns(prefix: &str, dim: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let s = format!("{prefix}_{i}{j}");
            out.push(format!("{s}_re"));
            out.push(format!("{s}_im"));
        }
    }
    out
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Sidecar<'a> {
    program: &'static str,
    version: &'static str,
    config: &'a Resolved,
    seed: u64,
    wall_time_s: f64,
    tolerances: Tolerances,
    extra: serde_json::Value,
}

#[derive(Serialize)]
struct Tolerances {
    resid: f64,
    hermitian: f64,
    physical: f64,
    traceless: f64,
    degenerate: f64,
    max_eigvec_condition: f64,
    phase_boundary: f64,
    blowup: f64,
}

fn tolerances() -> Tolerances {
    use antideph::tol;
    Tolerances {
        resid: tol::EPS_RESID,
        hermitian: tol::EPS_HERM,
        physical: tol::EPS_PHYSICAL,
        traceless: tol::EPS_TRACELESS,
        degenerate: tol::EPS_DEGENERATE,
        max_eigvec_condition: tol::MAX_EIGVEC_CONDITION,
        phase_boundary: tol::EPS_PHASE_BOUNDARY,
        blowup: tol::BLOWUP,
    }
}

/// Writes `data` to the configured path with its sidecar, or to stdout.
pub fn emit(cfg: &Resolved, data: &str, wall_time_s: f64, extra: serde_json::Value) -> Result<(), CliError> {
    match &cfg.output.path {
        None => {
            print!("{data}");
            Ok(())
        }
        Some(path) => {
            let io = |p: &Path, e: std::io::Error| CliError::Config(format!("output.path: cannot write {}: {e}", p.display()));
            std::fs::write(path, data).map_err(|e| io(path, e))?;
            let meta = Sidecar {
                program: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                config: cfg,
                seed: cfg.numerics.seed,
                wall_time_s,
                tolerances: tolerances(),
                extra,
            };
            let text = serde_json::to_string_pretty(&meta).expect("serializable") + "\n";
            let side = sidecar_path(path);
            std::fs::write(&side, text).map_err(|e| io(&side, e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(["a", "b"]);
        t.push_numbers(&[1.0, 0.5]);
        t.push(vec![Field::Num(f64::NAN), "x, y".into()]);
        assert_eq!(
            t.to_csv(),
            "a,b\n1.0000000000000000e0,5.0000000000000000e-1\nNaN,\"x, y\"\n"
        );
        assert_eq!(t.to_json()["rows"][1][0], serde_json::Value::Null);
        assert_eq!(matrix_columns("rho", 2)[2], "rho_01_re");
        assert_eq!(sidecar_path(Path::new("out/x.csv")), PathBuf::from("out/x.csv.meta.json"));
    }
}
