use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{check_finite, SpecfunError};
use crate::sum::ComplexNeumaier;

/// Evaluates ζ and ζ′ on the half-plane where the explicit formulas need them.
pub trait ZetaEvaluator: Sync {
    fn zeta(&self, s: Complex64) -> Result<Complex64, SpecfunError>;
    fn zeta_derivative(&self, s: Complex64) -> Result<Complex64, SpecfunError>;
}

/// Euler–Maclaurin summation of ζ(s) = Σ n^{-s}.
///
/// With `n_terms = N` and `order = K` the value is
///
/// Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + Σ_{k=1}^{K} B_{2k}/(2k)! · s(s+1)⋯(s+2k-2) · N^{-s-2k+1}.
///
/// By default N ≥ |s|/3 and K grows until the correction terms drop below
/// machine precision relative to the running sum; if they start growing
/// first, N is doubled and the evaluation restarted.
#[derive(Clone, Copy, Debug)]
pub struct EulerMaclaurin {
    /// Smallest admissible real part.
    pub min_re: f64,
    /// Exclusion radius around the pole at s = 1.
    pub pole_tol: f64,
    fixed: Option<(usize, usize)>,
}

const MAX_ORDER: usize = 60;
const MIN_TERMS: usize = 12;

impl Default for EulerMaclaurin {
    fn default() -> Self {
        Self { min_re: 0.4, pole_tol: 1e-6, fixed: None }
    }
}

impl EulerMaclaurin {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fixed number of direct terms and correction terms, no adaptivity.
    pub fn fixed(n_terms: usize, order: usize) -> Self {
        Self { fixed: Some((n_terms.max(2), order.min(MAX_ORDER))), ..Self::default() }
    }

    fn check(&self, s: Complex64) -> Result<(), SpecfunError> {
        check_finite(s)?;
        if s.re < self.min_re {
            return Err(SpecfunError::OutsideDomain { re: s.re, min: self.min_re });
        }
        if (s - 1.0).norm() <= self.pole_tol {
            return Err(SpecfunError::NearPole { re: s.re, im: s.im, tol: self.pole_tol });
        }
        Ok(())
    }

    fn evaluate(&self, s: Complex64, derivative: bool) -> Result<Complex64, SpecfunError> {
        self.check(s)?;
        if let Some((n, order)) = self.fixed {
            return Ok(em_sum(s, n, Some(order), derivative).0);
        }
        let mut n = MIN_TERMS.max((s.norm() / 3.0).ceil() as usize);
        for _ in 0..6 {
            let (value, converged) = em_sum(s, n, None, derivative);
            if converged {
                return Ok(value);
            }
            n *= 2;
        }
        Err(SpecfunError::NoConvergence { re: s.re, im: s.im })
    }
}

impl ZetaEvaluator for EulerMaclaurin {
    fn zeta(&self, s: Complex64) -> Result<Complex64, SpecfunError> {
        self.evaluate(s, false)
    }

    fn zeta_derivative(&self, s: Complex64) -> Result<Complex64, SpecfunError> {
        self.evaluate(s, true)
    }
}

/// ζ(s) with the default adaptive evaluator.
pub fn zeta(s: Complex64) -> Result<Complex64, SpecfunError> {
    EulerMaclaurin::default().zeta(s)
}

/// ζ′(s) with the default adaptive evaluator.
pub fn zeta_derivative(s: Complex64) -> Result<Complex64, SpecfunError> {
    EulerMaclaurin::default().zeta_derivative(s)
}

/// ζ(1/2), computed once.
pub fn zeta_half() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        zeta(Complex64::new(0.5, 0.0)).expect("ζ(1/2) is inside the evaluator domain").re
    })
}

/// B_{2k} / (2k)! for k = 1..=MAX_ORDER, via B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}.
fn bernoulli_ratios() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let closed = [
            PI.powi(2) / 6.0,
            PI.powi(4) / 90.0,
            PI.powi(6) / 945.0,
            PI.powi(8) / 9450.0,
            PI.powi(10) / 93555.0,
        ];
        (1..=MAX_ORDER)
            .map(|k| {
                let two_k = 2 * k as i32;
                let zeta_2k = if k <= closed.len() {
                    closed[k - 1]
                } else {
                    // terms beyond n = 100 are below 1e-22 for 2k >= 12
                    (1..=100).rev().map(|n| (n as f64).powi(-two_k)).sum::<f64>()
                };
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta_2k / (2.0 * PI).powi(two_k)
            })
            .collect()
    })
}

/// Returns (value, converged). `order = None` means adaptive order.
fn em_sum(s: Complex64, n: usize, order: Option<usize>, derivative: bool) -> (Complex64, bool) {
    let mut direct = ComplexNeumaier::new();
    for k in (1..n).rev() {
        let ln_k = (k as f64).ln();
        let term = (-s * ln_k).exp();
        direct.add(if derivative { -term * ln_k } else { term });
    }

    let big_n = n as f64;
    let ln_n = big_n.ln();
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let sm1 = s - 1.0;
    let mut tail = if derivative {
        let a = n_pow * big_n / sm1;
        -a * ln_n - a / sm1 - n_pow * ln_n * 0.5
    } else {
        n_pow * big_n / sm1 + n_pow * 0.5
    };

    let ratios = bernoulli_ratios();
    let max_k = order.unwrap_or(MAX_ORDER);
    // T_k = ratio_k * (s)_{2k-1} * N^{-s-2k+1}
    let mut rising = s; // (s)_{2k-1}
    let mut power = n_pow / big_n; // N^{-s-2k+1}
    let mut harmonic = s.inv(); // Σ_{j=0}^{2k-2} 1/(s+j)
    let mut previous = f64::INFINITY;
    let mut converged = order.is_some();
    let scale = (direct.value() + tail).norm().max(1e-300);
    for k in 1..=max_k {
        let t = rising * power * ratios[k - 1];
        let term = if derivative { t * (harmonic - ln_n) } else { t };
        let size = term.norm();
        if order.is_none() {
            if size > previous {
                break;
            }
            previous = size;
        }
        tail += term;
        if order.is_none() && size <= 1e-17 * scale {
            converged = true;
            break;
        }
        let j = (2 * k - 1) as f64;
        rising *= (s + j) * (s + j + 1.0);
        power /= big_n * big_n;
        harmonic += (s + j).inv() + (s + j + 1.0).inv();
    }
    (direct.value() + tail, converged)
}
