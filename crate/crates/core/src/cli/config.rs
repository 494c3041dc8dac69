//! Run configuration: key=value files merged under command-line flags,
//! then parsed and validated before any computation starts.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::Kind;

/// Keys accepted in a config file; each matches a long flag name.
pub const CONFIG_KEYS: &[&str] = &[
    "limit",
    "zeros",
    "count",
    "T",
    "d",
    "s",
    "y",
    "samples",
    "output",
    "format",
    "workers",
    "trials",
    "kind",
    "method",
    "a",
    "b",
    "eta",
    "p",
    "seed",
    "extrapolated",
];

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got `{line}`", i + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", i + 1)));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", i + 1)));
        }
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Sample points: `log:count:lo:hi`, `lin:count:lo:hi` or a comma list.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "spacing", rename_all = "lowercase")]
pub enum Grid {
    Log { count: usize, lo: f64, hi: f64 },
    Lin { count: usize, lo: f64, hi: f64 },
    List { points: Vec<f64> },
}

impl Grid {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("bad --samples `{text}`: {why}"));
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let grid = match parts.as_slice() {
            [spacing, count, lo, hi] => {
                let count: usize = count.parse().map_err(|_| bad("count is not an integer"))?;
                let lo: f64 = lo.parse().map_err(|_| bad("lower end is not a number"))?;
                let hi: f64 = hi.parse().map_err(|_| bad("upper end is not a number"))?;
                if count == 0 || !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
                    return Err(bad("need count > 0 and 0 < lo <= hi"));
                }
                if count == 1 && hi != lo {
                    return Err(bad("a single point needs lo = hi"));
                }
                match *spacing {
                    "log" => Grid::Log { count, lo, hi },
                    "lin" => Grid::Lin { count, lo, hi },
                    _ => return Err(bad("spacing must be log or lin")),
                }
            }
            [list] => Grid::List { points: parse_list(list, "--samples")? },
            _ => return Err(bad("expected log:count:lo:hi, lin:count:lo:hi or a comma list")),
        };
        if let Grid::List { points } = &grid {
            if points.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(bad("points must be positive"));
            }
        }
        Ok(grid)
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Log { count, lo, hi } => {
                let mut v: Vec<f64> = spaced(count, lo.ln(), hi.ln()).into_iter().map(f64::exp).collect();
                v[0] = lo;
                v[count - 1] = hi;
                v
            }
            Grid::Lin { count, lo, hi } => spaced(count, lo, hi),
            Grid::List { ref points } => points.clone(),
        }
    }
}

fn spaced(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect()
}

pub fn parse_list(text: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{flag}: `{v}` is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage(format!("{flag}: empty list")));
    }
    Ok(values)
}

/// Complex points `re,im`, several separated by `;`. A lone `re` means im = 0.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .map(|item| {
            let parts = parse_list(item, "--s")?;
            match parts.as_slice() {
                [re] => Ok(Complex64::new(*re, 0.0)),
                [re, im] => Ok(Complex64::new(*re, *im)),
                _ => Err(CliError::Usage(format!("--s: expected re,im, got `{item}`"))),
            }
        })
        .collect()
}

/// How many zeros enter: a count K or a height T.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    Count(usize),
    Height(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Bin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Fft,
    Blocked,
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BumpParams {
    pub a: f64,
    pub b: f64,
    pub p: u32,
}

/// Fully parsed settings for one invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub target: Option<String>,
    pub limit: Option<usize>,
    pub zeros: Option<PathBuf>,
    pub config_file: Option<PathBuf>,
    pub truncation: Option<Truncation>,
    pub d: Option<usize>,
    #[serde(serialize_with = "ser_complex")]
    pub s: Option<Vec<Complex64>>,
    pub y: Option<Vec<f64>>,
    pub samples: Option<Grid>,
    pub eta: Option<Vec<f64>>,
    pub bump: BumpParams,
    pub output: Option<String>,
    pub format: Option<OutputFormat>,
    pub workers: usize,
    pub trials: usize,
    pub seed: u64,
    pub kind: Option<Kind>,
    pub method: Method,
    pub extrapolated: bool,
}

fn ser_complex<S: serde::Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|zs| zs.iter().map(|z| format!("{},{}", z.re, z.im)).collect::<Vec<_>>()).serialize(s)
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CliError::Usage(format!("--{key}: cannot parse `{v}`"))))
        .transpose()
}

fn flag(map: &BTreeMap<String, String>, key: &str) -> Result<bool, CliError> {
    match map.get(key).map(|v| v.to_ascii_lowercase()) {
        None => Ok(false),
        Some(v) if matches!(v.as_str(), "true" | "1" | "yes") => Ok(true),
        Some(v) if matches!(v.as_str(), "false" | "0" | "no") => Ok(false),
        Some(v) => Err(CliError::Usage(format!("--{key}: expected true or false, got `{v}`"))),
    }
}

impl RunConfig {
    /// Builds the configuration from merged key/value settings.
    pub fn from_map(
        command: &str,
        target: Option<&str>,
        map: &BTreeMap<String, String>,
        config_file: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let truncation = match (num::<usize>(map, "count")?, num::<f64>(map, "T")?) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --count or --T, not both".into())),
            (Some(k), None) => Some(Truncation::Count(k)),
            (None, Some(t)) if t > 0.0 && t.is_finite() => Some(Truncation::Height(t)),
            (None, Some(t)) => return Err(CliError::Usage(format!("--T must be positive, got {t}"))),
            (None, None) => None,
        };
        let limit = num::<usize>(map, "limit")?;
        if limit == Some(0) {
            return Err(CliError::Usage("--limit must be positive".into()));
        }
        let d = num::<usize>(map, "d")?;
        if let Some(d) = d {
            if !(2..=8).contains(&d) {
                return Err(CliError::Usage(format!("--d must be between 2 and 8, got {d}")));
            }
        }
        let positive_list = |key: &str| -> Result<Option<Vec<f64>>, CliError> {
            let Some(text) = map.get(key) else { return Ok(None) };
            let v = parse_list(text, &format!("--{key}"))?;
            if v.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(CliError::Usage(format!("--{key}: values must be positive")));
            }
            Ok(Some(v))
        };
        let s = map.get("s").map(|t| parse_complex_list(t)).transpose()?;
        let format = match map.get("format").map(|f| f.to_ascii_lowercase()) {
            None => None,
            Some(f) => Some(match f.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                "bin" | "binary" => OutputFormat::Bin,
                other => return Err(CliError::Usage(format!("--format: unknown format `{other}`"))),
            }),
        };
        let method = match map.get("method").map(|m| m.to_ascii_lowercase()).as_deref() {
            None | Some("auto") => Method::Auto,
            Some("fft") => Method::Fft,
            Some("blocked") => Method::Blocked,
            Some("naive") => Method::Naive,
            Some(other) => return Err(CliError::Usage(format!("--method: unknown method `{other}`"))),
        };
        let kind = map.get("kind").map(|k| k.parse::<Kind>().map_err(CliError::Usage)).transpose()?;
        let bump = BumpParams {
            a: num(map, "a")?.unwrap_or(0.5),
            b: num(map, "b")?.unwrap_or(1.0),
            p: num(map, "p")?.unwrap_or(3),
        };
        if !(bump.a < bump.b) || !bump.b.is_finite() || !(bump.b > 0.0) || bump.p < 2 {
            return Err(CliError::Usage("weight needs a < b, b > 0 and p >= 2".into()));
        }
        let zeros = map.get("zeros").map(PathBuf::from);
        if let Some(path) = &zeros {
            if !path.is_file() {
                return Err(CliError::Usage(format!("zeros file {} not found", path.display())));
            }
        }
        Ok(Self {
            command: command.to_string(),
            target: target.map(str::to_string),
            limit,
            zeros,
            config_file,
            truncation,
            d,
            s,
            y: positive_list("y")?,
            samples: map.get("samples").map(|g| Grid::parse(g)).transpose()?,
            eta: positive_list("eta")?,
            bump,
            output: map.get("output").cloned(),
            format,
            workers: num(map, "workers")?.unwrap_or(0),
            trials: num(map, "trials")?.unwrap_or(20),
            seed: num(map, "seed")?.unwrap_or(1),
            kind,
            method,
            extrapolated: flag(map, "extrapolated")?,
        })
    }

    /// The report format; binary output is only meaningful for tables.
    pub fn report_format(&self) -> Result<crate::report::Format, CliError> {
        match self.format {
            None | Some(OutputFormat::Csv) => Ok(crate::report::Format::Csv),
            Some(OutputFormat::Json) => Ok(crate::report::Format::Json),
            Some(OutputFormat::Bin) => Err(CliError::Usage(format!("{} writes csv or json, not bin", self.command))),
        }
    }

    pub fn kind_or(&self, default: Kind) -> Kind {
        self.kind.unwrap_or(default)
    }
}
