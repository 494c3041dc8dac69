//! Complex special functions used by every explicit formula.
//!
//! All Gamma arithmetic happens in the log domain: at ordinates of a few
//! thousand, |Γ(½ + iγ)| is far below the smallest positive double, while
//! ratios such as Γ(ρ₁)Γ(ρ₂)/Γ(ρ₁ + ρ₂ + 2) are perfectly representable.

mod gamma;
mod zeta;

pub use gamma::{gamma_ratio, log_gamma};
pub use zeta::{zeta, zeta_derivative, zeta_half, EulerMaclaurin, ZetaEvaluator};

use num_complex::Complex64;
use thiserror::Error;

/// A complex number with finite components.
pub type ComplexValue = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("argument {re}{im:+}i is not finite")]
    NonFinite { re: f64, im: f64 },
    #[error("log_gamma requires Re z > 0, got {0}")]
    NonPositiveReal(f64),
    #[error("zeta requires Re s >= {min}, got {re}")]
    OutsideDomain { re: f64, min: f64 },
    #[error("s = {re}{im:+}i is within {tol:e} of the pole at s = 1")]
    NearPole { re: f64, im: f64, tol: f64 },
    #[error("Euler-Maclaurin expansion did not converge at s = {re}{im:+}i")]
    NoConvergence { re: f64, im: f64 },
}

pub(crate) fn check_finite(z: Complex64) -> Result<(), SpecfunError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpecfunError::NonFinite { re: z.re, im: z.im })
    }
}
