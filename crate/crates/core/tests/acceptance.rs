//! Acceptance criteria 1–13, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting. Tests share a lock so
//! the reported runtimes are not inflated by each other.

mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use liouville_conv::convolve::{convolve_fft, convolve_naive, LaplacePieces};
use liouville_conv::explicit::{
    dirichlet_direct, double_series_diagnostic, exponential_direct, exponential_explicit, restricted_dirichlet,
    weighted_average_direct, weighted_identity_rhs, CesaroExplicit, DirichletPartialSummation, SummatoryExplicit,
    WeightSpec,
};
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::{log_gamma, zeta, zeta_derivative, zeta_half};
use liouville_conv::Kind;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Writes the verdict line and fails the test on FAIL. The line goes to
/// stderr directly so it is shown without `--nocapture`.
fn verdict(n: u32, ok: bool, elapsed: Duration, budget: Option<Duration>, detail: &str) {
    let in_time = budget.map_or(true, |b| elapsed <= b);
    let pass = ok && in_time;
    let budget_text = budget.map_or(String::new(), |b| format!(" / {:.0} s budget", b.as_secs_f64()));
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n}: {} {detail} [{:.2} s{budget_text}]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded its runtime budget");
}

#[test]
fn criterion_01_sieve_identities() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 100_000;
    let lambda = build_sieve(Kind::Liouville, N).unwrap();
    let mu = build_sieve(Kind::Moebius, N).unwrap();
    let mut divisor_sum = vec![0i64; N + 1];
    let mut square_sum = vec![0i64; N + 1];
    for d in 1..=N {
        let l = lambda.value(d) as i64;
        for m in (d..=N).step_by(d) {
            divisor_sum[m] += l;
        }
        if d * d <= N {
            // Σ_{d²|n} μ(n/d²)
            for k in 1..=N / (d * d) {
                square_sum[k * d * d] += mu.value(k) as i64;
            }
        }
    }
    let mut bad = Vec::new();
    for n in 1..=N {
        let r = (n as f64).sqrt() as usize;
        let is_square = (r.saturating_sub(1)..=r + 1).any(|k| k * k == n);
        if divisor_sum[n] != i64::from(is_square) || square_sum[n] != lambda.value(n) as i64 {
            bad.push(n);
        }
    }
    verdict(
        1,
        bad.is_empty(),
        start.elapsed(),
        Some(Duration::from_secs(5)),
        &format!("both identities hold for n <= {N} ({} failures)", bad.len()),
    );
}

#[test]
fn criterion_02_fft_matches_naive() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 4096;
    let mut mismatches = Vec::new();
    for kind in [Kind::Liouville, Kind::Moebius] {
        let table = build_sieve(kind, N).unwrap();
        for d in 2..=4 {
            if convolve_fft(&table, d, N).unwrap() != convolve_naive(&table, d, N).unwrap() {
                mismatches.push(format!("{kind} d={d}"));
            }
        }
    }
    verdict(
        2,
        mismatches.is_empty(),
        start.elapsed(),
        Some(Duration::from_secs(10)),
        &format!("FFT == naive for d in 2..=4, N = {N}, both kinds; mismatches: {mismatches:?}"),
    );
}

#[test]
fn criterion_03_strict_bound() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 1_000_000;
    let table = build_sieve(Kind::Liouville, N).unwrap();
    let s = convolve_fft(&table, 2, N).unwrap();
    let violations: Vec<(usize, i64)> =
        (2..=N).filter(|&n| s.value(n).unsigned_abs() >= (n - 1) as u64).map(|n| (n, s.value(n))).collect();
    let first_clean = violations.last().map_or(2, |&(n, _)| n + 1);
    let ratio = (first_clean..=N).map(|n| s.value(n).abs() as f64 / (n - 1) as f64).fold(0.0, f64::max);
    verdict(
        3,
        violations.is_empty(),
        start.elapsed(),
        Some(Duration::from_secs(30)),
        &format!(
            "|S(N)| < N - 1 on 2..={N}; violations (N, S(N)): {violations:?}; \
             strict bound holds for {first_clean} <= N <= {N} with max |S(N)|/(N-1) = {ratio:.4}"
        ),
    );
}

#[test]
fn criterion_04_cesaro_laplace() {
    let _g = serial();
    let start = Instant::now();
    const X_MAX: usize = 5000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let table = build_sieve(Kind::Liouville, X_MAX).unwrap();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for d in [2usize, 3] {
        let series = convolve_fft(&table, d, X_MAX).unwrap();
        let pieces = LaplacePieces::new(&table, d, X_MAX).unwrap();
        for _ in 0..200 {
            let x: f64 = rng.gen_range(0.0..X_MAX as f64).max(f64::MIN_POSITIVE);
            let diff = (series.cesaro_sum(x).unwrap() - pieces.eval(x).unwrap()).abs();
            let tol = 1e-9 * (1.0 + x * x);
            worst = worst.max(diff / tol);
            failures += usize::from(diff > tol);
        }
    }
    verdict(
        4,
        failures == 0,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        &format!("200 random x per d in {{2, 3}}: max |diff|/(1e-9(1+x^2)) = {worst:.3e}"),
    );
}

#[test]
fn criterion_05_weighted_identity() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tables = [build_sieve(Kind::Liouville, 2000).unwrap(), build_sieve(Kind::Moebius, 2000).unwrap()];
    let mut worst: f64 = 0.0;
    let mut covered = std::collections::BTreeSet::new();
    for i in 0..20 {
        let kind_ix = i % 2;
        let d = 2 + (i / 2) % 2;
        let eta: f64 = rng.gen_range(20.0..400.0);
        let extra = (i / 4) % 2 == 1;
        let a = if extra { rng.gen_range(1.0 / eta..1.5) } else { rng.gen_range(-0.5..1.0 / eta) };
        let b = a.max(0.0) + rng.gen_range(0.3..2.0);
        let w = WeightSpec::power_bump(a, b, eta, rng.gen_range(2..=4)).unwrap();
        let direct = weighted_average_direct(&w, &tables[kind_ix], d).unwrap();
        let rhs = weighted_identity_rhs(&w, &tables[kind_ix], d).unwrap();
        worst = worst.max((direct - rhs).abs() / direct.abs().max(1.0));
        covered.insert((kind_ix, d, w.has_extra_term()));
    }
    verdict(
        5,
        worst <= 1e-8 && covered.len() == 8,
        start.elapsed(),
        Some(Duration::from_secs(120)),
        &format!("20 configurations covering {} of 8 (kind, d, eta*a >= 1) cells: max relative residual {worst:.3e}", covered.len()),
    );
}

#[test]
fn criterion_06_dirichlet_partial_summation() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 10_000;
    let table = build_sieve(Kind::Liouville, N).unwrap();
    let series = convolve_fft(&table, 2, N).unwrap();
    let mut worst: f64 = 0.0;
    let mut extras = Vec::new();
    for s in [Complex64::new(6.0, 0.0), Complex64::new(6.0, 2.0)] {
        let direct = dirichlet_direct(&series, s, N).unwrap();
        let ps = DirichletPartialSummation::new(&table, &series, s, N).unwrap();
        let restricted = restricted_dirichlet(&table, &series, s, N).unwrap();
        worst = worst.max((ps.bracket() - direct).norm());
        extras.push(format!(
            "s={s}: |bracket-direct| = {:.3e}, |cesaro part-direct| = {:.3e}, |bracket-restricted| = {:.3e}",
            (ps.bracket() - direct).norm(),
            (ps.cesaro - direct).norm(),
            (ps.bracket() - restricted).norm()
        ));
    }
    verdict(
        6,
        worst < 1e-6,
        start.elapsed(),
        Some(Duration::from_secs(30)),
        &format!("N = H = {N}: max residual {worst:.3e}; {}", extras.join("; ")),
    );
}

/// Medians of |direct - formula - shift| with 1e2, 1e3, 1e4 zeros.
fn summatory_medians(kind: Kind, xs: &[f64], shift: f64) -> Vec<f64> {
    let table = build_sieve(kind, 10_000).unwrap();
    let zs = common::zeros(10_000);
    [100, 1000, 10_000]
        .iter()
        .map(|&k| {
            let f = SummatoryExplicit::new(kind, &zs, common::height(&zs, k)).unwrap();
            let r: Vec<f64> = xs
                .iter()
                .map(|&x| (table.summatory(x).unwrap() as f64 - f.at(x).unwrap().total - shift).abs())
                .collect();
            common::median(&r)
        })
        .collect()
}

#[test]
fn criterion_07_explicit_summatory() {
    let _g = serial();
    let start = Instant::now();
    let xs = common::log_grid(50, 10.0, 1e4);
    let l = summatory_medians(Kind::Liouville, &xs, 0.0);
    let m = summatory_medians(Kind::Moebius, &xs, 0.0);
    // residues at s = 0: ζ(0)/ζ(0) = 1 for L, 1/ζ(0) = -2 for M
    let l0 = summatory_medians(Kind::Liouville, &xs, 1.0);
    let m0 = summatory_medians(Kind::Moebius, &xs, -2.0);
    let ok_for = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]) && v[2] <= 5.0;
    verdict(
        7,
        ok_for(&l) && ok_for(&m),
        start.elapsed(),
        Some(Duration::from_secs(120)),
        &format!(
            "median residual with 1e2/1e3/1e4 zeros: L {l:.4?}, M {m:.4?}; \
             with the s = 0 constant added: L {l0:.4?}, M {m0:.4?}"
        ),
    );
}

#[test]
fn criterion_08_explicit_cesaro() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 1_000_000;
    let zs = common::zeros(1000);
    let t = common::height(&zs, 1000);
    let points = [1e3, 1e4, 1e5, 1e6];
    let mut detail = Vec::new();
    let mut ok = true;
    for kind in [Kind::Liouville, Kind::Moebius] {
        let table = build_sieve(kind, N).unwrap();
        let series = convolve_fft(&table, 2, N).unwrap();
        let formula = CesaroExplicit::new(kind, &zs, t, 2, false).unwrap();
        let constant = points
            .iter()
            .map(|&x| (series.cesaro_sum(x).unwrap() - formula.at(x).unwrap().total).abs() / x.powf(1.5))
            .fold(0.0, f64::max);
        ok &= constant <= 50.0;
        detail.push(format!("{kind}: reported constant {constant:.4}"));
        if kind == Kind::Liouville {
            let grid = common::log_grid(40, 1e3, 1e6);
            let mean = grid.iter().map(|&x| series.cesaro_sum(x).unwrap() / (x * x)).sum::<f64>() / 40.0;
            let target = PI / (8.0 * zeta_half().powi(2));
            ok &= (mean - target).abs() <= 0.03;
            detail.push(format!("mean C/x^2 = {mean:.5} vs {target:.5}"));
        }
    }
    verdict(8, ok, start.elapsed(), Some(Duration::from_secs(600)), &detail.join("; "));
}

#[test]
fn criterion_09_exponential() {
    let _g = serial();
    let start = Instant::now();
    const N: usize = 2000;
    let table = build_sieve(Kind::Liouville, N).unwrap();
    let series = convolve_fft(&table, 2, N).unwrap();
    let zs = common::zeros(100);
    let t = common::height(&zs, 100);
    let limit = PI / (4.0 * zeta_half().powi(2));
    let mut devs = Vec::new();
    let mut residuals = Vec::new();
    for y in [0.1, 0.05, 0.02, 0.01] {
        let direct = exponential_direct(&series, y, N).unwrap();
        let b = exponential_explicit(Kind::Liouville, y, &zs, t).unwrap();
        devs.push((y * direct - limit).abs());
        residuals.push(format!("y={y}: residual {:.3} envelope {:.3}", (direct - b.total).abs(), b.envelope));
    }
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    verdict(
        9,
        monotone && devs[3] < 0.05,
        start.elapsed(),
        Some(Duration::from_secs(60)),
        &format!("|y*sum - {limit:.5}| = {devs:.4?} (monotone: {monotone}, need < 0.05 at y = 0.01); {}", residuals.join("; ")),
    );
}

#[test]
fn criterion_10_double_series() {
    let _g = serial();
    let start = Instant::now();
    let zs = common::zeros(1000);
    let mut ratios = Vec::new();
    for kind in [Kind::Liouville, Kind::Moebius] {
        let a = double_series_diagnostic(&zs, 1.0, kind, 1000).unwrap();
        let get = |k: usize| a.iter().find(|d| d.zeros == k).unwrap().abs_sum;
        ratios.push((kind, get(250), get(500), get(1000), get(1000) / get(500)));
    }
    let ok = ratios.iter().all(|r| r.4 < 1.01);
    let text: Vec<String> = ratios
        .iter()
        .map(|(k, a250, a500, a1000, r)| format!("{k}: A(250) {a250:.6} A(500) {a500:.6} A(1000) {a1000:.6} ratio {r:.6}"))
        .collect();
    verdict(10, ok, start.elapsed(), Some(Duration::from_secs(60)), &text.join("; "));
}

#[test]
fn criterion_11_special_functions() {
    let _g = serial();
    let start = Instant::now();
    let mut worst_gamma: f64 = 0.0;
    for y in [1.0, 14.134725, 50.0] {
        let g2 = (2.0 * log_gamma(Complex64::new(0.5, y)).unwrap().re).exp();
        let exact = PI / (PI * y).cosh();
        worst_gamma = worst_gamma.max((g2 - exact).abs() / exact);
    }
    let zeta2 = (zeta(Complex64::new(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_deriv: f64 = 0.0;
    for _ in 0..10 {
        let s = Complex64::new(rng.gen_range(0.5..2.0), rng.gen_range(-100.0..100.0));
        if (s - 1.0).norm() < 0.1 {
            continue;
        }
        let h = 1e-5;
        let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
        let d = zeta_derivative(s).unwrap();
        worst_deriv = worst_deriv.max((d - fd).norm() / d.norm());
    }
    verdict(
        11,
        worst_gamma <= 1e-10 && zeta2 <= 1e-12 && worst_deriv <= 1e-6,
        start.elapsed(),
        None,
        &format!("|Gamma|^2 rel {worst_gamma:.2e}, zeta(2) abs {zeta2:.2e}, zeta' vs difference rel {worst_deriv:.2e}"),
    );
}

#[test]
fn criterion_12_determinism() {
    let _g = serial();
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let zeros = common::data_file();
    let mut reports = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("cesaro_{workers}.csv"));
        let code = liouville_conv::cli::run([
            "lconv",
            "verify",
            "cesaro",
            "--zeros",
            zeros.to_str().unwrap(),
            "--count",
            "1000",
            "--samples",
            "log:40:1000:1000000",
            "--workers",
            workers,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        reports.push(std::fs::read(&out).unwrap());
    }
    verdict(
        12,
        reports[0] == reports[1],
        start.elapsed(),
        None,
        &format!("cesaro report with 1 and 8 workers: {} bytes, identical = {}", reports[0].len(), reports[0] == reports[1]),
    );
}

#[test]
fn criterion_13_fft_speedup() {
    let _g = serial();
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let code = liouville_conv::cli::run(["lconv", "bench", "--limit", "262144", "--d", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("bench.csv.manifest.json")).unwrap()).unwrap();
    let row = &manifest["results"]["rows"][0];
    let speedup = row["speedup"].as_f64().unwrap();
    verdict(
        13,
        speedup >= 10.0 && row["equal"] == true,
        start.elapsed(),
        None,
        &format!(
            "N = 2^18, d = 2: naive {:.1} ms, FFT {:.1} ms, speedup {speedup:.1}x, outputs equal = {}",
            row["naive_ms"].as_f64().unwrap_or(f64::NAN),
            row["fft_ms"].as_f64().unwrap_or(f64::NAN),
            row["equal"]
        ),
    );
}
