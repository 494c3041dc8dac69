//! d-fold additive convolutions S_d(n) of a λ or μ table, their Cesàro
//! averages, and the exact Laplace self-convolution of the summatory
//! function.

mod fft;
mod laplace;

pub use fft::{convolve, convolve_blocked, convolve_fft, predicted_fft_error, GUARD_CONSTANT, GUARD_LIMIT};
pub use laplace::{laplace_convolution_exact, LaplacePieces};

use rayon::prelude::*;
use std::io::{self, Write};
use thiserror::Error;

use crate::sieve::SieveTable;
use crate::Kind;

#[derive(Debug, Error)]
pub enum ConvolveError {
    #[error("number of summands must be at least 2, got {0}")]
    InvalidFold(usize),
    #[error("requested length {n} exceeds the table limit {limit}")]
    TableTooSmall { n: usize, limit: usize },
    #[error("x = {x} is beyond the series limit {limit}")]
    OutOfRange { x: f64, limit: usize },
    #[error("x = {0} is negative or not a number")]
    InvalidArgument(f64),
    #[error(
        "FFT rounding guard failed at fold {fold}: predicted error {predicted:.3e} >= {limit}; \
         use convolve_blocked (limb-split exact convolution) instead"
    )]
    GuardFailed { fold: usize, predicted: f64, limit: f64 },
    #[error("integer overflow while accumulating fold {0}")]
    Overflow(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Exact values S_d(n), 0 ≤ n ≤ limit (zero for n < d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionSeries {
    kind: Kind,
    d: usize,
    values: Vec<i64>,
}

impl ConvolutionSeries {
    pub(crate) fn new(kind: Kind, d: usize, values: Vec<i64>) -> Self {
        debug_assert!(values.iter().take(d.min(values.len())).all(|&v| v == 0));
        Self { kind, d, values }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Number of summands.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `values()[n] = S_d(n)` for 0 ≤ n ≤ limit.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, n: usize) -> i64 {
        self.values[n]
    }

    /// (1/(d-1)!) Σ_{n≤x} S_d(n) (x-n)^{d-1}.
    pub fn cesaro_sum(&self, x: f64) -> Result<f64, ConvolveError> {
        self.cesaro_sum_of_order(x, self.d - 1)
    }

    /// (1/k!) Σ_{n≤x} S_d(n) (x-n)^k.
    ///
    /// With m = ⌊x⌋ and τ = x - m, (x-n)^k is expanded in powers of τ
    /// so that every moment Σ_{n≤m} S_d(n)(m-n)^j is an exact integer; only
    /// the final combination is done in floating point.
    pub fn cesaro_sum_of_order(&self, x: f64, order: usize) -> Result<f64, ConvolveError> {
        if x.is_nan() || x < 0.0 {
            return Err(ConvolveError::InvalidArgument(x));
        }
        if x > self.limit() as f64 {
            return Err(ConvolveError::OutOfRange { x, limit: self.limit() });
        }
        let m = x.floor() as usize;
        let tau = x - m as f64;
        let moments = self.moments(m, order)?;
        let mut value = 0.0;
        let mut binom = 1.0;
        let mut tau_pow = 1.0;
        for i in 0..=order {
            value += binom * tau_pow * moments[order - i] as f64;
            binom = binom * (order - i) as f64 / (i + 1) as f64;
            tau_pow *= tau;
        }
        Ok(value / factorial(order))
    }

    /// E_j = Σ_{n≤m} S_d(n)(m-n)^j for j = 0..=order.
    fn moments(&self, m: usize, order: usize) -> Result<Vec<i128>, ConvolveError> {
        let mut acc = vec![0i128; order + 1];
        for n in self.d..=m {
            let s = self.values[n] as i128;
            if s == 0 {
                continue;
            }
            let gap = (m - n) as i128;
            let mut term = s;
            for slot in acc.iter_mut() {
                *slot = slot.checked_add(term).ok_or(ConvolveError::Overflow(self.d))?;
                term = term.checked_mul(gap).ok_or(ConvolveError::Overflow(self.d))?;
            }
        }
        Ok(acc)
    }

    /// CSV with header `n,value`, one row per d ≤ n ≤ limit.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), ConvolveError> {
        writeln!(w, "n,value")?;
        for (n, v) in self.values.iter().enumerate().skip(self.d) {
            writeln!(w, "{n},{v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub(crate) fn check_request(table: &SieveTable, d: usize, n: usize) -> Result<(), ConvolveError> {
    if d < 2 {
        return Err(ConvolveError::InvalidFold(d));
    }
    if n > table.limit() {
        return Err(ConvolveError::TableTooSmall { n, limit: table.limit() });
    }
    Ok(())
}

/// Direct O(d·N²) evaluation of S_d(n) for n ≤ N, the reference oracle.
pub fn convolve_naive(table: &SieveTable, d: usize, n: usize) -> Result<ConvolutionSeries, ConvolveError> {
    check_request(table, d, n)?;
    let base = &table.values()[..=n];
    let mut current = if d == 2 {
        pair_sums(base)
    } else {
        let base64: Vec<i64> = base.iter().map(|&v| v as i64).collect();
        let mut cur = base64.clone();
        for fold in 2..=d {
            cur = naive_step(&cur, base, fold)?;
        }
        cur
    };
    for v in current.iter_mut().take(d.min(n + 1)) {
        *v = 0;
    }
    Ok(ConvolutionSeries::new(table.kind(), d, current))
}

/// S(k) = Σ_{m=1}^{k-1} v(m) v(k-m), using the symmetry m ↔ k - m.
fn pair_sums(v: &[i8]) -> Vec<i64> {
    let n = v.len() - 1;
    let rev: Vec<i8> = v.iter().rev().copied().collect(); // rev[i] = v[n - i]
    (0..n + 1)
        .into_par_iter()
        .with_min_len(256)
        .map(|k| {
            if k < 2 {
                return 0;
            }
            let half = (k - 1) / 2;
            // v[k - m] = rev[n - k + m] for m = 1..=half
            let a = &v[1..=half];
            let b = &rev[n - k + 1..=n - k + half];
            let dot: i32 = a.iter().zip(b).map(|(&x, &y)| x as i32 * y as i32).sum();
            let mut s = 2 * dot as i64;
            if k % 2 == 0 {
                let mid = v[k / 2] as i64;
                s += mid * mid;
            }
            s
        })
        .collect()
}

fn naive_step(cur: &[i64], base: &[i8], fold: usize) -> Result<Vec<i64>, ConvolveError> {
    let n = cur.len() - 1;
    (0..n + 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|k| {
            let mut acc = 0i128;
            for m in 1..k {
                acc += cur[m] as i128 * base[k - m] as i128;
            }
            i64::try_from(acc).map_err(|_| ConvolveError::Overflow(fold))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve;

    /// Enumerates all compositions of n into d positive parts.
    fn brute(v: &[i8], d: usize, n: usize) -> i64 {
        fn rec(v: &[i8], parts: usize, rest: usize) -> i64 {
            if parts == 1 {
                return if rest >= 1 && rest < v.len() { v[rest] as i64 } else { 0 };
            }
            (1..rest).map(|m| v[m] as i64 * rec(v, parts - 1, rest - m)).sum()
        }
        rec(v, d, n)
    }

    #[test]
    fn naive_small_values() {
        let t = build_sieve(Kind::Liouville, 10).unwrap();
        let s = convolve_naive(&t, 2, 10).unwrap();
        assert_eq!(s.value(2), 1);
        assert_eq!(s.value(3), -2);
        assert_eq!(s.value(4), -1);
        assert_eq!(s.value(0), 0);
        assert_eq!(s.value(1), 0);
        let m = build_sieve(Kind::Moebius, 10).unwrap();
        assert_eq!(convolve_naive(&m, 2, 10).unwrap().value(2), 1);
    }

    #[test]
    fn naive_matches_enumeration() {
        for kind in [Kind::Liouville, Kind::Moebius] {
            let t = build_sieve(kind, 40).unwrap();
            for d in 2..=4 {
                let s = convolve_naive(&t, d, 40).unwrap();
                for n in 0..=40 {
                    assert_eq!(s.value(n), brute(t.values(), d, n), "{kind} d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn cesaro_small_cases() {
        let t = build_sieve(Kind::Liouville, 10).unwrap();
        let s = convolve_naive(&t, 2, 10).unwrap();
        assert_eq!(s.cesaro_sum(3.0).unwrap(), 1.0);
        assert_eq!(s.cesaro_sum(2.5).unwrap(), 0.5);
        assert_eq!(s.cesaro_sum(1.5).unwrap(), 0.0);
        assert_eq!(s.cesaro_sum(4.0).unwrap(), 0.0);
        assert!(matches!(s.cesaro_sum(10.5), Err(ConvolveError::OutOfRange { .. })));
        let s3 = convolve_naive(&t, 3, 10).unwrap();
        assert_eq!(s3.cesaro_sum(2.9).unwrap(), 0.0);
        // S_3(3) = 1, S_3(4) = 3·λ(2) = -3
        assert!((s3.cesaro_sum(4.5).unwrap() - (1.5f64.powi(2) - 3.0 * 0.25) / 2.0).abs() < 1e-15);
        // S(2) = 1, S(3) = -2, S(4) = -1: (2.5² - 2·1.5² - 0.5²)/2
        assert_eq!(s.cesaro_sum_of_order(4.5, 2).unwrap(), (6.25 - 4.5 - 0.25) / 2.0);
        assert_eq!(s.cesaro_sum_of_order(3.5, 0).unwrap(), -1.0);
    }

    #[test]
    fn rejects_bad_requests() {
        let t = build_sieve(Kind::Liouville, 10).unwrap();
        assert!(matches!(convolve_naive(&t, 1, 10), Err(ConvolveError::InvalidFold(1))));
        assert!(matches!(convolve_naive(&t, 2, 11), Err(ConvolveError::TableTooSmall { .. })));
    }

    #[test]
    fn csv_export() {
        let t = build_sieve(Kind::Liouville, 5).unwrap();
        let s = convolve_naive(&t, 2, 5).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,value\n2,1\n3,-2\n4,-1\n5,4\n");
    }
}
