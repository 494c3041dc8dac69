//! Exact computation and explicit-formula verification for additive
//! convolutions of the Liouville and Möbius functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`sieve`] builds λ(n) / μ(n) tables with their summatory functions L, M.
//! * [`convolve`] computes S_d(n) = Σ_{m₁+⋯+m_d=n} v(m₁)⋯v(m_d) exactly
//!   (naive oracle, certified FFT, limb-split FFT), Cesàro sums and the
//!   exact Laplace self-convolution of L or M.
//! * [`specfun`] provides log Γ, Γ-ratios, ζ and ζ′.
//! * [`zeros`] ingests zeta-zero ordinates and attaches ζ′(ρ), ζ(2ρ).
//! * [`explicit`] evaluates the truncated zero-sum formulas and the exact
//!   weighted-average identity.
//! * [`cli`] holds the command implementations behind the `lconv` binary.
//!
//! Runnable walkthroughs live in `examples/`.

pub mod cli;
pub mod convolve;
pub mod explicit;
pub mod report;
pub mod sieve;
pub mod specfun;
pub mod sum;
pub mod zeros;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub use convolve::ConvolutionSeries;
pub use explicit::{ExplicitBreakdown, WeightSpec};
pub use sieve::SieveTable;
pub use zeros::{ZeroDatum, ZeroSet};

/// Which arithmetic function a table or series is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// λ(n) = (-1)^Ω(n)
    Liouville,
    /// μ(n)
    Moebius,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Liouville => "liouville",
            Kind::Moebius => "moebius",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "liouville" | "lambda" | "l" => Ok(Kind::Liouville),
            "moebius" | "mobius" | "mu" | "m" => Ok(Kind::Moebius),
            other => Err(format!("unknown kind `{other}` (expected liouville or moebius)")),
        }
    }
}
