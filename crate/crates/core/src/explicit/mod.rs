//! Truncated explicit formulas over the non-trivial zeros of ζ, evaluated
//! term by term, together with the direct sums they approximate.
//!
//! A truncation height T selects the zeros with 0 < γ ≤ T; each selected
//! zero also contributes through its conjugate.

mod diagnostic;
mod engine;
mod formulas;
mod weight;
mod weighted;

pub use diagnostic::{
    double_series_diagnostic, remainder_scale, restricted_dirichlet, DirichletPartialSummation, SeriesDiagnostic,
};
pub use engine::PRUNE_RELATIVE;
pub use formulas::{
    dirichlet_direct, dirichlet_explicit, explicit_cesaro, explicit_summatory, exponential_direct,
    exponential_explicit, exponential_zero_sum, CesaroExplicit, SummatoryExplicit, EXPONENTIAL_TAIL,
};
pub use weight::{Moments, WeightSpec};
pub use weighted::{
    weighted_average_direct, weighted_average_explicit, weighted_average_rhs, weighted_identity_rhs, RhsMode,
    WeightedRhs,
};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::convolve::ConvolveError;
use crate::sieve::SieveError;
use crate::specfun::SpecfunError;
use crate::zeros::{ZeroDatum, ZeroError, ZeroSet};

#[derive(Debug, Error)]
pub enum ExplicitError {
    #[error(transparent)]
    Zeros(#[from] ZeroError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Convolve(#[from] ConvolveError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the Möbius d-fold Cesàro formula is only given for d = 2 (got d = {0}); enable the extrapolated form")]
    UnsupportedFold(usize),
    #[error("pole: {0}")]
    Pole(String),
    #[error("N·y = {0} < 20: the dropped tail is not negligible")]
    TailNotNegligible(f64),
    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },
    #[error("unbounded support needs closed-form moments")]
    UnboundedSupport,
}

/// Term-by-term value of a truncated explicit formula.
///
/// `total` is always `main_term + single_sum + double_sum`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplicitBreakdown<V = f64> {
    pub main_term: V,
    pub single_sum: V,
    pub double_sum: V,
    pub total: V,
    pub truncation_t: f64,
    pub zeros_used: usize,
    /// Signed pair terms actually summed (after pruning).
    pub pair_terms: usize,
    /// Size of the imaginary part discarded from a structurally real sum.
    pub imag_residue: f64,
    /// Error term with constant 1, for scale only.
    pub envelope: f64,
}

impl<V: Copy + std::ops::Add<Output = V>> ExplicitBreakdown<V> {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        main_term: V,
        single_sum: V,
        double_sum: V,
        truncation_t: f64,
        zeros_used: usize,
        pair_terms: usize,
        imag_residue: f64,
        envelope: f64,
    ) -> Self {
        Self {
            main_term,
            single_sum,
            double_sum,
            total: main_term + single_sum + double_sum,
            truncation_t,
            zeros_used,
            pair_terms,
            imag_residue,
            envelope,
        }
    }
}

impl ExplicitBreakdown<f64> {
    /// True when the discarded imaginary part is below 10⁻⁸(1 + |total|).
    pub fn is_real(&self) -> bool {
        self.imag_residue < 1e-8 * (1.0 + self.total.abs())
    }
}

impl ExplicitBreakdown<Complex64> {
    pub fn is_real(&self) -> bool {
        self.imag_residue < 1e-8 * (1.0 + self.total.norm())
    }
}

/// The zeros with γ ≤ T.
pub(crate) fn select(zs: &ZeroSet, t: f64) -> Result<&[ZeroDatum], ExplicitError> {
    if !(t > 0.0) {
        return Err(ExplicitError::InvalidArgument(format!("truncation height must be positive, got {t}")));
    }
    Ok(zs.up_to(t)?)
}

pub(crate) fn positive(name: &str, v: f64) -> Result<(), ExplicitError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ExplicitError::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}
