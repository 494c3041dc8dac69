//! Tabular reports of direct values against explicit-formula breakdowns,
//! written as CSV (with a trailing `#` summary block) or JSON, plus run
//! manifests with SHA-256 checksums.

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::explicit::ExplicitBreakdown;

/// A report cell: real or complex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(Complex64),
    Missing,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Complex(z) => write!(f, "{}{:+}i", z.re, z.im),
            Value::Missing => Ok(()),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Real(v) => s.serialize_f64(*v),
            Value::Complex(z) => [z.re, z.im].serialize(s),
            Value::Missing => s.serialize_none(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex(z)
    }
}

/// One sample point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub point: Value,
    pub direct: Value,
    pub main: Value,
    pub single: Value,
    pub double: Value,
    pub total: Value,
    pub residual: f64,
    pub envelope: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub zeros_used: usize,
    pub pair_terms: usize,
}

impl Row {
    pub fn real(point: f64, direct: f64, b: &ExplicitBreakdown) -> Self {
        Self {
            point: point.into(),
            direct: direct.into(),
            main: b.main_term.into(),
            single: b.single_sum.into(),
            double: b.double_sum.into(),
            total: b.total.into(),
            residual: (direct - b.total).abs(),
            envelope: b.envelope,
            t: b.truncation_t,
            zeros_used: b.zeros_used,
            pair_terms: b.pair_terms,
        }
    }

    pub fn complex(point: Complex64, direct: Complex64, b: &ExplicitBreakdown<Complex64>) -> Self {
        Self {
            point: point.into(),
            direct: direct.into(),
            main: b.main_term.into(),
            single: b.single_sum.into(),
            double: b.double_sum.into(),
            total: b.total.into(),
            residual: (direct - b.total).norm(),
            envelope: b.envelope,
            t: b.truncation_t,
            zeros_used: b.zeros_used,
            pair_terms: b.pair_terms,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub target: String,
    /// Name of the sample column: x, s, y, eta or trial.
    pub point_name: String,
    pub rows: Vec<Row>,
    /// Ordered key/value summary lines.
    pub summary: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl Report {
    pub fn new(target: impl Into<String>, point_name: impl Into<String>) -> Self {
        Self { target: target.into(), point_name: point_name.into(), ..Self::default() }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.summary.push((key.into(), value.to_string()));
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.residual).collect()
    }

    pub fn write<W: Write>(&self, w: W, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "{},direct,main,single,double,total,residual,envelope,T,zeros_used,pair_terms",
            self.point_name
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.point, r.direct, r.main, r.single, r.double, r.total, r.residual, r.envelope, r.t, r.zeros_used, r.pair_terms
            )?;
        }
        writeln!(w, "# target: {}", self.target)?;
        for (k, v) in &self.summary {
            writeln!(w, "# {k}: {v}")?;
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Out<'a> {
            target: &'a str,
            point_name: &'a str,
            rows: &'a [Row],
            summary: serde_json::Map<String, serde_json::Value>,
        }
        let summary = self.summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        let out = Out { target: &self.target, point_name: &self.point_name, rows: &self.rows, summary };
        serde_json::to_writer_pretty(&mut w, &out)?;
        writeln!(w)?;
        w.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>, format: Format) -> io::Result<()> {
        self.write(io::BufWriter::new(fs::File::create(path)?), format)
    }
}

/// Median of finite values (NaN-free input assumed), 0 for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Lowercase hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_file(path: impl AsRef<Path>) -> io::Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

/// Everything needed to repeat a run.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub config: serde_json::Value,
    pub workers: usize,
    pub inputs: Vec<Checksum>,
    pub outputs: Vec<Checksum>,
    pub machine: Machine,
    pub results: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checksum {
    pub path: String,
    pub sha256: String,
}

impl Checksum {
    pub fn of(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref();
        Ok(Self { path: path.display().to_string(), sha256: sha256_file(path)? })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Machine {
    pub os: String,
    pub arch: String,
    pub cpus: usize,
}

impl Machine {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl Manifest {
    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        let mut f = io::BufWriter::new(fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        f.flush()
    }
}
