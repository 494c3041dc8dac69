//! `verify <target>`: direct values against explicit formulas or exact
//! identities, one report row per sample point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::config::{Grid, RunConfig};
use super::{load_zeros, output_path, CliError, LoadedZeros, Outcome, Target};
use crate::convolve::{convolve, LaplacePieces};
use crate::explicit::{
    dirichlet_direct, dirichlet_explicit, exponential_direct, exponential_explicit, restricted_dirichlet,
    weighted_average_direct, weighted_average_explicit, weighted_identity_rhs, CesaroExplicit,
    DirichletPartialSummation, SummatoryExplicit, WeightSpec, EXPONENTIAL_TAIL,
};
use crate::report::{median, Checksum, Report, Row, Value};
use crate::sieve::{build_sieve, SieveTable};
use crate::specfun::zeta_half;
use crate::Kind;

/// Largest N for which the O(N²) Laplace cross-check runs.
const LAPLACE_CHECK_MAX: usize = 20_000;
/// Relative tolerance of exact identities.
const IDENTITY_TOL: f64 = 1e-8;

pub(crate) fn verify(target: Target, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match target {
        Target::L => summatory(Kind::Liouville, cfg),
        Target::M => summatory(Kind::Moebius, cfg),
        Target::Cesaro => cesaro(Kind::Liouville, fixed_d(cfg, 2)?, cfg),
        Target::CesaroMu => cesaro(Kind::Moebius, fixed_d(cfg, 2)?, cfg),
        Target::Dfold => cesaro(cfg.kind_or(Kind::Liouville), cfg.d.unwrap_or(3), cfg),
        Target::Dirichlet => dirichlet(cfg),
        Target::Exponential => exponential(cfg),
        Target::Weighted => weighted(cfg),
        Target::Identity => identity(cfg),
    }
}

fn fixed_d(cfg: &RunConfig, d: usize) -> Result<usize, CliError> {
    match cfg.d {
        Some(given) if given != d => Err(CliError::Usage(format!("this target is defined for d = {d}; use dfold"))),
        _ => Ok(d),
    }
}

fn need_zeros(cfg: &RunConfig) -> Result<LoadedZeros, CliError> {
    let path = cfg
        .zeros
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("verify {} needs --zeros", cfg.target.as_deref().unwrap_or(""))))?;
    load_zeros(path, cfg.truncation)
}

/// The sieve limit: --limit if given (and large enough), else ⌈top⌉.
fn limit_for(cfg: &RunConfig, top: f64) -> Result<usize, CliError> {
    let needed = top.ceil() as usize;
    match cfg.limit {
        Some(n) if n < needed => Err(CliError::Usage(format!("--limit {n} is below the largest sample {top}"))),
        Some(n) => Ok(n),
        None => Ok(needed.max(1)),
    }
}

fn grid(cfg: &RunConfig, default: Grid) -> Vec<f64> {
    cfg.samples.clone().unwrap_or(default).points()
}

fn note_residuals(report: &mut Report) {
    let r = report.residuals();
    report.note("median_residual", median(&r));
    report.note("max_residual", r.iter().copied().fold(0.0, f64::max));
}

fn note_zeros(report: &mut Report, zeros: &LoadedZeros, used: usize) {
    report.note("T", zeros.t);
    report.note("zeros_used", used);
}

fn realness(report: &Report, residues: &[f64], failures: &mut Vec<String>) {
    for (row, &res) in report.rows.iter().zip(residues) {
        let scale = match row.total {
            Value::Real(v) => v.abs(),
            Value::Complex(z) => z.norm(),
            Value::Missing => 0.0,
        };
        if !(res < 1e-8 * (1.0 + scale)) {
            failures.push(format!("{} = {}: imaginary residue {res:e} in a real sum", report.point_name, row.point));
        }
    }
}

fn finish(
    cfg: &RunConfig,
    report: Report,
    inputs: Vec<Checksum>,
    failures: Vec<String>,
) -> Result<Outcome, CliError> {
    let format = cfg.report_format()?;
    let mut bytes = Vec::new();
    report.write(&mut bytes, format)?;
    let ext = match format {
        crate::report::Format::Csv => "csv",
        crate::report::Format::Json => "json",
    };
    let summary: serde_json::Map<String, serde_json::Value> =
        report.summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
    Ok(Outcome {
        path: output_path(cfg, &format!("verify_{}", report.target), ext),
        bytes,
        inputs,
        results: serde_json::json!({ "rows": report.rows.len(), "summary": summary, "failures": failures }),
        failures,
    })
}

fn summatory(kind: Kind, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zeros = need_zeros(cfg)?;
    let xs = grid(cfg, Grid::Log { count: 50, lo: 10.0, hi: 1e4 });
    let table = build_sieve(kind, limit_for(cfg, xs.iter().copied().fold(0.0, f64::max))?)?;
    let formula = SummatoryExplicit::new(kind, &zeros.set, zeros.t)?;
    let mut report = Report::new(if kind == Kind::Liouville { "L" } else { "M" }, "x");
    let mut residues = Vec::new();
    for &x in &xs {
        let b = formula.at(x)?;
        residues.push(b.imag_residue);
        report.rows.push(Row::real(x, table.summatory(x)? as f64, &b));
    }
    let mut failures = Vec::new();
    realness(&report, &residues, &mut failures);
    note_residuals(&mut report);
    note_zeros(&mut report, &zeros, formula.zeros_used());
    // medians at K/100, K/10, K
    let k = formula.zeros_used();
    let mut ladder: Vec<usize> = [k / 100, k / 10, k].into_iter().filter(|&c| c > 0).collect();
    ladder.dedup();
    let mut medians = Vec::new();
    for &c in &ladder {
        let f = SummatoryExplicit::new(kind, &zeros.set, zeros.set.height_for_count(c)?)?;
        let r = xs
            .iter()
            .map(|&x| Ok((table.summatory(x)? as f64 - f.at(x)?.total).abs()))
            .collect::<Result<Vec<_>, CliError>>()?;
        medians.push(median(&r));
        report.note(format!("median_residual_K{c}"), median(&r));
    }
    report.note("median_decreasing", medians.windows(2).all(|w| w[1] < w[0]));
    finish(cfg, report, vec![zeros.checksum], failures)
}

fn cesaro(kind: Kind, d: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zeros = need_zeros(cfg)?;
    let formula = CesaroExplicit::new(kind, &zeros.set, zeros.t, d, cfg.extrapolated)?;
    let xs = grid(cfg, Grid::Log { count: 40, lo: 1e3, hi: 1e5 });
    let limit = limit_for(cfg, xs.iter().copied().fold(0.0, f64::max))?;
    let table = build_sieve(kind, limit)?;
    let series = convolve(&table, d, limit)?;
    let target = match (kind, d) {
        (Kind::Liouville, 2) => "cesaro".to_string(),
        (Kind::Moebius, 2) => "cesaro-mu".to_string(),
        (k, d) => format!("dfold-{}-d{d}", if k == Kind::Liouville { "L" } else { "M" }),
    };
    let mut report = Report::new(target, "x");
    let mut residues = Vec::new();
    for &x in &xs {
        let b = formula.at(x)?;
        residues.push(b.imag_residue);
        report.rows.push(Row::real(x, series.cesaro_sum(x)?, &b));
    }
    let mut failures = Vec::new();
    realness(&report, &residues, &mut failures);
    let df = d as f64;
    let constant = report.rows.iter().zip(&xs).map(|(r, &x)| r.residual / x.powf(df - 0.5)).fold(0.0, f64::max);
    let ratios: Vec<f64> = report
        .rows
        .iter()
        .zip(&xs)
        .map(|(r, &x)| match r.direct {
            Value::Real(v) => v / x.powf(df),
            _ => 0.0,
        })
        .collect();
    note_residuals(&mut report);
    note_zeros(&mut report, &zeros, formula.zeros_used());
    report.note("reported_constant", constant);
    report.note("mean_ratio", ratios.iter().sum::<f64>() / ratios.len() as f64);
    report.note("main_coefficient", formula.main_term(1.0));
    if d > 2 {
        // the d-fold right side is the (d-2)-times integrated two-fold average
        let pair = convolve(&table, 2, limit)?;
        let mut worst: f64 = 0.0;
        for (row, &x) in report.rows.iter().zip(&xs) {
            if let Value::Real(total) = row.total {
                worst = worst.max((pair.cesaro_sum_of_order(x, d - 1)? - total).abs() / x.powf(df - 0.5));
            }
        }
        report.note("iterated_pair_constant", worst);
    }
    if limit <= LAPLACE_CHECK_MAX {
        let pieces = LaplacePieces::new(&table, d, limit)?;
        let mut worst: f64 = 0.0;
        for &x in &xs {
            let direct = series.cesaro_sum(x)?;
            let diff = (direct - pieces.eval(x)?).abs();
            let tol = 1e-9 * (1.0 + x.powi((d as i32 - 1).max(2)));
            worst = worst.max(diff / tol);
            if diff > tol {
                failures.push(format!("x = {x}: Cesàro sum and Laplace convolution differ by {diff:e}"));
            }
        }
        report.note("laplace_check", format!("max diff/tolerance {worst:e}"));
    } else {
        report.note("laplace_check", format!("skipped above N = {LAPLACE_CHECK_MAX}"));
    }
    finish(cfg, report, vec![zeros.checksum], failures)
}

fn dirichlet(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zeros = need_zeros(cfg)?;
    let kind = cfg.kind_or(Kind::Liouville);
    let points = cfg.s.clone().unwrap_or_else(|| vec![Complex64::new(6.0, 0.0), Complex64::new(6.0, 2.0)]);
    if let Some(s) = points.iter().find(|s| !(s.re > 1.0)) {
        return Err(CliError::Usage(format!("--s needs Re s > 1, got {s}")));
    }
    let n = cfg.limit.unwrap_or(10_000);
    let table = build_sieve(kind, n)?;
    let series = convolve(&table, 2, n)?;
    let mut report = Report::new("dirichlet", "s");
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for &s in &points {
        let direct = dirichlet_direct(&series, s, n)?;
        let b = dirichlet_explicit(kind, s, &zeros.set, zeros.t)?;
        report.rows.push(Row::complex(s, direct, &b));
        let ps = DirichletPartialSummation::new(&table, &series, s, n)?;
        let restricted = restricted_dirichlet(&table, &series, s, n)?;
        let tol = 1e-9 * (1.0 + direct.norm());
        let cesaro_res = (ps.cesaro - direct).norm();
        let restricted_res = (ps.bracket() - restricted).norm();
        if cesaro_res > tol {
            failures.push(format!("s = {s}: Cesàro integral differs from the direct sum by {cesaro_res:e}"));
        }
        if restricted_res > tol {
            failures.push(format!("s = {s}: partial-summation bracket differs from the restricted sum by {restricted_res:e}"));
        }
        notes.push((format!("partial_summation_residual[{s}]"), (ps.bracket() - direct).norm()));
        notes.push((format!("cesaro_part_residual[{s}]"), cesaro_res));
        notes.push((format!("restricted_residual[{s}]"), restricted_res));
    }
    note_residuals(&mut report);
    let used = report.rows.first().map_or(0, |r| r.zeros_used);
    note_zeros(&mut report, &zeros, used);
    report.note("N", n);
    for (k, v) in notes {
        report.note(k, v);
    }
    finish(cfg, report, vec![zeros.checksum], failures)
}

fn exponential(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zeros = need_zeros(cfg)?;
    let kind = cfg.kind_or(Kind::Liouville);
    let ys = cfg.y.clone().unwrap_or_else(|| vec![0.1, 0.05, 0.02, 0.01]);
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let n = cfg.limit.unwrap_or((EXPONENTIAL_TAIL / y_min).ceil() as usize);
    if (n as f64) * y_min < EXPONENTIAL_TAIL {
        return Err(CliError::Usage(format!("N·y = {} < {EXPONENTIAL_TAIL} at y = {y_min}", n as f64 * y_min)));
    }
    let table = build_sieve(kind, n)?;
    let series = convolve(&table, 2, n)?;
    let limit_main = match kind {
        Kind::Liouville => PI / (4.0 * zeta_half().powi(2)),
        Kind::Moebius => 0.0,
    };
    let mut report = Report::new("exponential", "y");
    let mut residues = Vec::new();
    let mut deviations = Vec::new();
    for &y in &ys {
        let direct = exponential_direct(&series, y, n)?;
        let b = exponential_explicit(kind, y, &zeros.set, zeros.t)?;
        residues.push(b.imag_residue);
        deviations.push((y, (y * direct - limit_main).abs()));
        report.rows.push(Row::real(y, direct, &b));
    }
    let mut failures = Vec::new();
    realness(&report, &residues, &mut failures);
    note_residuals(&mut report);
    let used = report.rows.first().map_or(0, |r| r.zeros_used);
    note_zeros(&mut report, &zeros, used);
    report.note("N", n);
    report.note("limit_of_y_times_sum", limit_main);
    for &(y, dev) in &deviations {
        report.note(format!("deviation[y={y}]"), dev);
    }
    report.note("deviation_decreasing", deviations.windows(2).all(|w| w[1].1 < w[0].1));
    finish(cfg, report, vec![zeros.checksum], failures)
}

fn weighted(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zeros = need_zeros(cfg)?;
    let kind = cfg.kind_or(Kind::Liouville);
    let d = cfg.d.unwrap_or(2);
    let bump = cfg.bump;
    let etas = cfg.eta.clone().unwrap_or_else(|| vec![100.0, 200.0, 400.0, 800.0]);
    let top = etas.iter().copied().fold(0.0, f64::max) * bump.b;
    let table = build_sieve(kind, limit_for(cfg, top)?)?;
    let mut report = Report::new("weighted", "eta");
    let mut residues = Vec::new();
    let mut failures = Vec::new();
    let mut worst_identity: f64 = 0.0;
    for &eta in &etas {
        let w = WeightSpec::power_bump(bump.a, bump.b, eta, bump.p)?;
        let direct = weighted_average_direct(&w, &table, d)?;
        let identity = weighted_identity_rhs(&w, &table, d)?;
        let rel = (direct - identity).abs() / direct.abs().max(1.0);
        worst_identity = worst_identity.max(rel);
        if rel > IDENTITY_TOL {
            failures.push(format!("eta = {eta}: weighted identity relative residual {rel:e}"));
        }
        let b = weighted_average_explicit(kind, &w, &zeros.set, zeros.t, d, Some(&table))?;
        residues.push(b.imag_residue);
        report.rows.push(Row::real(eta, direct, &b));
    }
    realness(&report, &residues, &mut failures);
    note_residuals(&mut report);
    let used = report.rows.first().map_or(0, |r| r.zeros_used);
    note_zeros(&mut report, &zeros, used);
    report.note("weight", format!("(b - w)^{} on [{}, {})", bump.p, bump.a, bump.b));
    report.note("d", d);
    report.note("identity_max_relative_residual", worst_identity);
    finish(cfg, report, vec![zeros.checksum], failures)
}

struct Trial {
    kind: Kind,
    d: usize,
    eta: f64,
    a: f64,
    b: f64,
    p: u32,
}

/// Random configurations cycling through both kinds, d ∈ {2, 3} and both
/// sides of ηa = 1.
fn draw_trials(cfg: &RunConfig) -> Vec<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.trials)
        .map(|i| {
            let kind = if i % 2 == 0 { Kind::Liouville } else { Kind::Moebius };
            let d = cfg.d.unwrap_or(2 + (i / 2) % 2);
            let eta: f64 = rng.gen_range(20.0..300.0);
            let a = if (i / 4) % 2 == 1 { rng.gen_range(1.0 / eta..1.5) } else { rng.gen_range(-0.5..1.0 / eta) };
            let b = a.max(0.0) + rng.gen_range(0.3..1.5);
            Trial { kind, d, eta, a, b, p: rng.gen_range(2..=4) }
        })
        .collect()
}

fn identity(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let trials = draw_trials(cfg);
    let top = trials.iter().map(|t| t.eta * t.b).fold(0.0, f64::max);
    let limit = limit_for(cfg, top)?;
    let tables: Vec<SieveTable> =
        [Kind::Liouville, Kind::Moebius].into_iter().map(|k| build_sieve(k, limit)).collect::<Result<_, _>>()?;
    let mut report = Report::new("identity", "trial");
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (i, t) in trials.iter().enumerate() {
        let table = &tables[usize::from(t.kind == Kind::Moebius)];
        let w = WeightSpec::power_bump(t.a, t.b, t.eta, t.p)?;
        let direct = weighted_average_direct(&w, table, t.d)?;
        let rhs = weighted_identity_rhs(&w, table, t.d)?;
        let rel = (direct - rhs).abs() / direct.abs().max(1.0);
        worst = worst.max(rel);
        if rel > IDENTITY_TOL {
            failures.push(format!("trial {i}: relative residual {rel:e}"));
        }
        report.rows.push(Row {
            point: Value::Real(i as f64),
            direct: direct.into(),
            main: Value::Missing,
            single: Value::Missing,
            double: Value::Missing,
            total: rhs.into(),
            residual: (direct - rhs).abs(),
            envelope: 0.0,
            t: 0.0,
            zeros_used: 0,
            pair_terms: 0,
        });
        notes.push((
            format!("trial {i}"),
            format!(
                "kind={} d={} eta={} a={} b={} p={} extra_term={}",
                t.kind,
                t.d,
                t.eta,
                t.a,
                t.b,
                t.p,
                w.has_extra_term()
            ),
        ));
    }
    note_residuals(&mut report);
    report.note("max_relative_residual", worst);
    report.note("seed", cfg.seed);
    for (k, v) in notes {
        report.note(k, v);
    }
    finish(cfg, report, Vec::new(), failures)
}
