use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::{check_request, ConvolutionSeries, ConvolveError};
use crate::sieve::SieveTable;

/// Constant c in the rounding bound ε·c·M·log₂M·max|a|·max|b|.
pub const GUARD_CONSTANT: f64 = 8.0;
/// Largest predicted absolute error at which rounding to integers is accepted.
pub const GUARD_LIMIT: f64 = 0.25;

/// Predicted worst-case absolute error of a length-`m` FFT product of
/// sequences bounded by `max_a` and `max_b`.
pub fn predicted_fft_error(m: usize, max_a: f64, max_b: f64) -> f64 {
    let log2m = (m.max(2) as f64).log2();
    f64::EPSILON * GUARD_CONSTANT * m as f64 * log2m * max_a * max_b
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Strict,
    Blocked,
    Auto,
}

/// S_d(n) for n ≤ N by certified FFT products.
///
/// Each of the d-1 products is rounded to integers only if the rounding
/// guard certifies it; otherwise [`ConvolveError::GuardFailed`] is returned.
pub fn convolve_fft(table: &SieveTable, d: usize, n: usize) -> Result<ConvolutionSeries, ConvolveError> {
    run(table, d, n, Mode::Strict)
}

/// S_d(n) for n ≤ N by limb-split FFT products: the running series is cut
/// into balanced limbs small enough for the guard to pass and the limb
/// products are recombined in 128-bit integers. Always exact.
pub fn convolve_blocked(table: &SieveTable, d: usize, n: usize) -> Result<ConvolutionSeries, ConvolveError> {
    run(table, d, n, Mode::Blocked)
}

/// Direct FFT products where the guard passes, limb-split products otherwise.
pub fn convolve(table: &SieveTable, d: usize, n: usize) -> Result<ConvolutionSeries, ConvolveError> {
    run(table, d, n, Mode::Auto)
}

struct Plan {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    base: Vec<Complex64>,
}

impl Plan {
    fn new(base: &[i8]) -> Self {
        let size = (2 * base.len()).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(size);
        let inverse = planner.plan_fft_inverse(size);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); size];
        for (slot, &v) in spectrum.iter_mut().zip(base) {
            slot.re = v as f64;
        }
        forward.process(&mut spectrum);
        Self { size, forward, inverse, base: spectrum }
    }

    /// Linear product of `a` with the base sequence, truncated to `a.len()`,
    /// together with the largest distance of any output from an integer.
    fn multiply(&self, a: &[i64]) -> (Vec<f64>, f64) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        for (slot, &v) in buf.iter_mut().zip(a) {
            slot.re = v as f64;
        }
        self.forward.process(&mut buf);
        for (z, b) in buf.iter_mut().zip(&self.base) {
            *z *= b;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        let mut worst = 0.0f64;
        let out = buf[..a.len()]
            .iter()
            .map(|z| {
                let v = z.re * scale;
                worst = worst.max((v - v.round()).abs());
                v.round()
            })
            .collect();
        (out, worst)
    }
}

fn run(table: &SieveTable, d: usize, n: usize, mode: Mode) -> Result<ConvolutionSeries, ConvolveError> {
    check_request(table, d, n)?;
    let base = &table.values()[..=n];
    let plan = Plan::new(base);
    let base_max = base.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as f64;
    let mut cur: Vec<i64> = base.iter().map(|&v| v as i64).collect();
    for fold in 2..=d {
        let cur_max = cur.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as f64;
        let predicted = predicted_fft_error(plan.size, cur_max, base_max);
        let direct = match mode {
            Mode::Strict => {
                if predicted >= GUARD_LIMIT {
                    return Err(ConvolveError::GuardFailed { fold, predicted, limit: GUARD_LIMIT });
                }
                true
            }
            Mode::Blocked => false,
            Mode::Auto => predicted < GUARD_LIMIT,
        };
        cur = if direct {
            let (out, worst) = plan.multiply(&cur);
            if worst >= GUARD_LIMIT {
                return Err(ConvolveError::GuardFailed { fold, predicted: worst, limit: GUARD_LIMIT });
            }
            out.into_iter().map(|v| v as i64).collect()
        } else {
            limb_product(&plan, &cur, base_max, fold)?
        };
    }
    for v in cur.iter_mut().take(d.min(n + 1)) {
        *v = 0;
    }
    Ok(ConvolutionSeries::new(table.kind(), d, cur))
}

/// Bits per limb such that a limb product passes the guard.
fn limb_bits(size: usize, base_max: f64) -> u32 {
    let unit = predicted_fft_error(size, 1.0, base_max.max(1.0));
    // balanced limbs are bounded by 2^(bits-1)
    let room = (GUARD_LIMIT / unit).log2().floor() as i64;
    room.clamp(2, 31) as u32
}

fn limb_product(plan: &Plan, cur: &[i64], base_max: f64, fold: usize) -> Result<Vec<i64>, ConvolveError> {
    let bits = limb_bits(plan.size, base_max);
    let radix = 1i128 << bits;
    let half = radix / 2;
    let mut limbs: Vec<Vec<i64>> = Vec::new();
    let mut rest: Vec<i128> = cur.iter().map(|&v| v as i128).collect();
    while rest.iter().any(|&v| v != 0) {
        let limb: Vec<i64> = rest
            .iter_mut()
            .map(|v| {
                let mut r = v.rem_euclid(radix);
                if r >= half {
                    r -= radix;
                }
                *v = (*v - r) / radix;
                r as i64
            })
            .collect();
        limbs.push(limb);
    }
    let products: Vec<Vec<f64>> = limbs
        .par_iter()
        .map(|limb| {
            let (out, worst) = plan.multiply(limb);
            if worst >= GUARD_LIMIT {
                Err(ConvolveError::GuardFailed { fold, predicted: worst, limit: GUARD_LIMIT })
            } else {
                Ok(out)
            }
        })
        .collect::<Result<_, _>>()?;
    let mut acc = vec![0i128; cur.len()];
    for product in products.iter().rev() {
        for (a, &p) in acc.iter_mut().zip(product) {
            *a = a
                .checked_mul(radix)
                .and_then(|v| v.checked_add(p as i128))
                .ok_or(ConvolveError::Overflow(fold))?;
        }
    }
    acc.into_iter()
        .map(|v| i64::try_from(v).map_err(|_| ConvolveError::Overflow(fold)))
        .collect()
}
