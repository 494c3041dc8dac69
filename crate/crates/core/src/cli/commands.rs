use std::io::Write;
use std::time::Instant;

use super::config::{Method, OutputFormat, RunConfig};
use super::{load_zeros, output_path, CliError, Outcome};
use crate::convolve::{convolve, convolve_blocked, convolve_fft, convolve_naive, ConvolutionSeries};
use crate::report::sha256_hex;
use crate::sieve::build_sieve;
use crate::Kind;

fn required_limit(cfg: &RunConfig) -> Result<usize, CliError> {
    cfg.limit.ok_or_else(|| CliError::Usage(format!("{} needs --limit", cfg.command)))
}

pub(crate) fn sieve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let limit = required_limit(cfg)?;
    let kind = cfg.kind_or(Kind::Liouville);
    let format = cfg.format.unwrap_or(OutputFormat::Bin);
    if format == OutputFormat::Json {
        return Err(CliError::Usage("sieve writes bin or csv".into()));
    }
    let table = build_sieve(kind, limit)?;
    let mut bytes = Vec::new();
    let ext = match format {
        OutputFormat::Csv => {
            writeln!(bytes, "n,value,summatory")?;
            for n in 1..=limit {
                writeln!(bytes, "{n},{},{}", table.values()[n], table.prefix()[n])?;
            }
            "csv"
        }
        _ => {
            table.write_to(&mut bytes)?;
            "bin"
        }
    };
    Ok(Outcome {
        path: output_path(cfg, &format!("sieve_{kind}_{limit}"), ext),
        bytes,
        inputs: Vec::new(),
        results: serde_json::json!({ "kind": kind, "limit": limit, "summatory_at_limit": table.prefix()[limit] }),
        failures: Vec::new(),
    })
}

fn series_bytes(series: &ConvolutionSeries) -> Vec<u8> {
    series.values().iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub(crate) fn convolve_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let limit = required_limit(cfg)?;
    let kind = cfg.kind_or(Kind::Liouville);
    let d = cfg.d.unwrap_or(2);
    let table = build_sieve(kind, limit)?;
    let series = match cfg.method {
        Method::Auto => convolve(&table, d, limit)?,
        Method::Fft => convolve_fft(&table, d, limit)?,
        Method::Blocked => convolve_blocked(&table, d, limit)?,
        Method::Naive => convolve_naive(&table, d, limit)?,
    };
    let mut bytes = Vec::new();
    let ext = match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            series.write_csv(&mut bytes)?;
            "csv"
        }
        OutputFormat::Json => {
            let values = &series.values()[d.min(series.values().len())..];
            serde_json::to_writer(&mut bytes, &serde_json::json!({ "kind": kind, "d": d, "first_n": d, "values": values }))
                .map_err(|e| CliError::Input(e.to_string()))?;
            bytes.push(b'\n');
            "json"
        }
        OutputFormat::Bin => return Err(CliError::Usage("convolve writes csv or json".into())),
    };
    let failures = if d == 2 { conjecture_violations(&series) } else { Vec::new() };
    Ok(Outcome {
        path: output_path(cfg, &format!("convolve_{kind}_d{d}_{limit}"), ext),
        bytes,
        inputs: Vec::new(),
        results: serde_json::json!({
            "kind": kind,
            "d": d,
            "limit": limit,
            "method": cfg.method,
            "series_sha256": sha256_hex(&series_bytes(&series)),
            "strict_bound_violations": failures,
        }),
        failures: Vec::new(),
    })
}

/// The N ≥ 2 with |S(N)| ≥ N - 1, reported but not fatal: for N = 2, 3
/// every pair has the same sign and equality holds.
pub(crate) fn conjecture_violations(series: &ConvolutionSeries) -> Vec<String> {
    (2..=series.limit())
        .filter(|&n| series.value(n).unsigned_abs() >= (n - 1) as u64)
        .map(|n| format!("|S({n})| = {} >= {}", series.value(n).abs(), n - 1))
        .collect()
}

pub(crate) fn zeros_enrich(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let path = cfg.zeros.as_ref().ok_or_else(|| CliError::Usage("zeros-enrich needs --zeros".into()))?;
    let loaded = load_zeros(path, cfg.truncation)?;
    let set = match cfg.truncation {
        Some(_) => loaded.set.first(loaded.set.count_up_to(loaded.t)?)?,
        None => loaded.set,
    };
    let mut bytes = Vec::new();
    let ext = match cfg.format.unwrap_or(OutputFormat::Bin) {
        OutputFormat::Bin => {
            bytes = set.to_bytes();
            "bin"
        }
        OutputFormat::Csv => {
            set.write_csv(&mut bytes)?;
            "csv"
        }
        OutputFormat::Json => return Err(CliError::Usage("zeros-enrich writes bin or csv".into())),
    };
    let sz = if set.is_empty() { None } else { Some(set.sz_diagnostic(set.t_max())?) };
    Ok(Outcome {
        path: output_path(cfg, "zeros", ext),
        bytes,
        inputs: vec![loaded.checksum],
        results: serde_json::json!({ "zeros": set.len(), "t_max": set.t_max(), "sz": sz }),
        failures: Vec::new(),
    })
}

#[derive(serde::Serialize)]
struct BenchRow {
    n: usize,
    d: usize,
    sieve_ms: f64,
    naive_ms: f64,
    fft_ms: f64,
    speedup: f64,
    naive_sha256: String,
    fft_sha256: String,
    equal: bool,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

pub(crate) fn bench(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sizes = match cfg.limit {
        Some(n) if n.is_power_of_two() => vec![n],
        Some(n) => return Err(CliError::Usage(format!("bench sizes must be powers of two, got {n}"))),
        None => vec![1 << 8, 1 << 12, 1 << 16, 1 << 18],
    };
    let d = cfg.d.unwrap_or(2);
    let kind = cfg.kind_or(Kind::Liouville);
    let mut rows = Vec::new();
    for n in sizes {
        let (table, sieve_ms) = timed(|| build_sieve(kind, n));
        let table = table?;
        let (naive, naive_ms) = timed(|| convolve_naive(&table, d, n));
        let (fft, fft_ms) = timed(|| convolve_fft(&table, d, n));
        let (naive_hash, fft_hash) = (sha256_hex(&series_bytes(&naive?)), sha256_hex(&series_bytes(&fft?)));
        rows.push(BenchRow {
            n,
            d,
            sieve_ms,
            naive_ms,
            fft_ms,
            speedup: naive_ms / fft_ms.max(1e-6),
            equal: naive_hash == fft_hash,
            naive_sha256: naive_hash,
            fft_sha256: fft_hash,
        });
    }
    let failures: Vec<String> =
        rows.iter().filter(|r| !r.equal).map(|r| format!("N = {}: FFT output differs from the naive oracle", r.n)).collect();
    let mut bytes = Vec::new();
    let ext = match cfg.report_format()? {
        crate::report::Format::Csv => {
            writeln!(bytes, "N,d,sieve_ms,naive_ms,fft_ms,speedup,naive_sha256,fft_sha256,equal")?;
            for r in &rows {
                writeln!(
                    bytes,
                    "{},{},{:.3},{:.3},{:.3},{:.2},{},{},{}",
                    r.n, r.d, r.sieve_ms, r.naive_ms, r.fft_ms, r.speedup, r.naive_sha256, r.fft_sha256, r.equal
                )?;
            }
            "csv"
        }
        crate::report::Format::Json => {
            serde_json::to_writer_pretty(&mut bytes, &rows).map_err(|e| CliError::Input(e.to_string()))?;
            bytes.push(b'\n');
            "json"
        }
    };
    for r in &rows {
        eprintln!("N = {:>7}  naive {:>10.2} ms  fft {:>8.2} ms  speedup {:>8.1}x", r.n, r.naive_ms, r.fft_ms, r.speedup);
    }
    Ok(Outcome {
        path: output_path(cfg, "bench", ext),
        bytes,
        inputs: Vec::new(),
        results: serde_json::json!({ "rows": rows }),
        failures,
    })
}
