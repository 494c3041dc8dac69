use num_complex::Complex64;
use std::f64::consts::PI;

use super::engine::{conjugate_sum, zero_terms, PairTable, ZeroTerm, PRUNE_RELATIVE};
use super::{positive, select, ExplicitBreakdown, ExplicitError};
use crate::convolve::{factorial, ConvolutionSeries};
use crate::specfun::{log_gamma, zeta_half};
use crate::sum::{block_sum, ComplexNeumaier, Neumaier};
use crate::zeros::ZeroSet;
use crate::Kind;

/// Smallest N·y accepted by [`exponential_direct`].
pub const EXPONENTIAL_TAIL: f64 = 20.0;

/// Pole tolerance for the Dirichlet formula.
const POLE_TOL: f64 = 1e-8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn log_floor(main: f64, envelope: f64) -> f64 {
    (PRUNE_RELATIVE * main.abs().max(envelope)).ln()
}

/// L(x) or M(x) from the first zeros:
/// x^{1/2}/ζ(1/2) + Σ_{|γ|≤T} ζ(2ρ)x^ρ/(ζ′(ρ)ρ) for λ, Σ x^ρ/(ζ′(ρ)ρ) for μ.
pub struct SummatoryExplicit {
    kind: Kind,
    t: f64,
    terms: Vec<ZeroTerm>,
}

impl SummatoryExplicit {
    pub fn new(kind: Kind, zs: &ZeroSet, t: f64) -> Result<Self, ExplicitError> {
        let zeros = select(zs, t)?;
        Ok(Self { kind, t, terms: zero_terms(kind, zeros)? })
    }

    pub fn zeros_used(&self) -> usize {
        self.terms.len()
    }

    pub fn at(&self, x: f64) -> Result<ExplicitBreakdown, ExplicitError> {
        positive("x", x)?;
        let ln_x = x.ln();
        let main = match self.kind {
            Kind::Liouville => x.sqrt() / zeta_half(),
            Kind::Moebius => 0.0,
        };
        let t = &self.terms;
        let (single, residue) = conjugate_sum(
            t.len(),
            |i| t[i].coeff * (t[i].rho * ln_x).exp() / t[i].rho,
            |i| t[i].coeff_conj * (t[i].rho.conj() * ln_x).exp() / t[i].rho.conj(),
        );
        let envelope = 1.0 + x * (ln_x.abs() + 1.0) / self.t;
        Ok(ExplicitBreakdown::new(main, single, 0.0, self.t, t.len(), 0, residue, envelope))
    }
}

pub fn explicit_summatory(kind: Kind, x: f64, zs: &ZeroSet, t: f64) -> Result<ExplicitBreakdown, ExplicitError> {
    SummatoryExplicit::new(kind, zs, t)?.at(x)
}

/// The d-fold Cesàro average (L*⋯*L)(x) from the first zeros, with the pair
/// table built once for evaluation at many x.
pub struct CesaroExplicit {
    kind: Kind,
    d: usize,
    t: f64,
    terms: Vec<ZeroTerm>,
    /// log Γ(ρ) - log Γ(ρ + d + 1/2) for ρ and ρ̄
    single_ratio: Vec<(Complex64, Complex64)>,
    pairs: PairTable,
}

impl CesaroExplicit {
    /// For μ only d = 2 is given explicitly; other d need `extrapolated`.
    pub fn new(kind: Kind, zs: &ZeroSet, t: f64, d: usize, extrapolated: bool) -> Result<Self, ExplicitError> {
        if d < 2 {
            return Err(ExplicitError::InvalidArgument(format!("d must be at least 2, got {d}")));
        }
        if kind == Kind::Moebius && d != 2 && !extrapolated {
            return Err(ExplicitError::UnsupportedFold(d));
        }
        let zeros = select(zs, t)?;
        let terms = zero_terms(kind, zeros)?;
        let shift = d as f64 + 0.5;
        let single_ratio = terms
            .iter()
            .map(|z| {
                Ok((
                    z.log_gamma - log_gamma(z.rho + shift)?,
                    z.log_gamma_conj - log_gamma(z.rho.conj() + shift)?,
                ))
            })
            .collect::<Result<_, ExplicitError>>()?;
        let pairs = PairTable::new(&terms, d as f64)?;
        Ok(Self { kind, d, t, terms, single_ratio, pairs })
    }

    pub fn zeros_used(&self) -> usize {
        self.terms.len()
    }

    pub fn main_term(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Liouville => x.powi(self.d as i32) * PI / (4.0 * zeta_half().powi(2) * factorial(self.d)),
            Kind::Moebius => 0.0,
        }
    }

    pub fn at(&self, x: f64) -> Result<ExplicitBreakdown, ExplicitError> {
        positive("x", x)?;
        let ln_x = x.ln();
        let d = self.d as f64;
        let main = self.main_term(x);
        let envelope = x.powf(d - 0.4) + x.powf(d - 1.0);
        let t = &self.terms;
        let (single, single_res) = match self.kind {
            Kind::Liouville => {
                let scale = PI.sqrt() / zeta_half();
                let (s, r) = conjugate_sum(
                    t.len(),
                    |i| t[i].coeff * (self.single_ratio[i].0 + (t[i].rho + d - 0.5) * ln_x).exp(),
                    |i| t[i].coeff_conj * (self.single_ratio[i].1 + (t[i].rho.conj() + d - 0.5) * ln_x).exp(),
                );
                (scale * s, scale.abs() * r)
            }
            Kind::Moebius => (0.0, 0.0),
        };
        let pairs = self.pairs.evaluate(
            t.len(),
            |z| ((z + d - 1.0) * ln_x).exp(),
            d * ln_x,
            log_floor(main, envelope),
        );
        Ok(ExplicitBreakdown::new(
            main,
            single,
            pairs.real(),
            self.t,
            t.len(),
            pairs.terms,
            single_res + pairs.residue(),
            envelope,
        ))
    }
}

/// d-fold Cesàro explicit formula; for μ, d ≠ 2 requires `extrapolated`.
pub fn explicit_cesaro(
    kind: Kind,
    x: f64,
    zs: &ZeroSet,
    t: f64,
    d: usize,
    extrapolated: bool,
) -> Result<ExplicitBreakdown, ExplicitError> {
    CesaroExplicit::new(kind, zs, t, d, extrapolated)?.at(x)
}

/// Σ_{n≤N} S_d(n) n^{-s}, compensated.
pub fn dirichlet_direct(series: &ConvolutionSeries, s: Complex64, n: usize) -> Result<Complex64, ExplicitError> {
    if n > series.limit() {
        return Err(ExplicitError::InvalidArgument(format!("N = {n} exceeds the series limit {}", series.limit())));
    }
    let mut acc = ComplexNeumaier::new();
    for (k, &v) in series.values().iter().enumerate().take(n + 1).skip(series.d()) {
        if v != 0 {
            acc.add(v as f64 * (-s * (k as f64).ln()).exp());
        }
    }
    Ok(acc.value())
}

/// Rejects s within 10⁻⁸ of s = 1, of ρ + 1/2, or of ρ₁ + ρ₂ (any signs).
pub(crate) fn check_poles(s: Complex64, gammas: &[f64]) -> Result<(), ExplicitError> {
    if (s - 1.0).norm() < POLE_TOL {
        return Err(ExplicitError::Pole(format!("s = {s} is at the pole s = 1")));
    }
    if (s.re - 1.0).abs() >= POLE_TOL {
        return Ok(());
    }
    for &g in gammas {
        if (s.im.abs() - g).abs() < POLE_TOL {
            return Err(ExplicitError::Pole(format!("s = {s} is at ρ + 1/2 for γ = {g}")));
        }
    }
    for &g1 in gammas {
        for &g2 in gammas {
            for im in [g1 + g2, g1 - g2, -g1 - g2] {
                if (s.im - im).abs() < POLE_TOL {
                    return Err(ExplicitError::Pole(format!("s = {s} equals ρ₁ + ρ₂ for γ₁ = {g1}, γ₂ = {g2}")));
                }
            }
        }
    }
    Ok(())
}

/// Explicit formula for Σ S(n)n^{-s} (λ) or Σ S*(n)n^{-s} (μ), Re s > 1.
pub fn dirichlet_explicit(
    kind: Kind,
    s: Complex64,
    zs: &ZeroSet,
    t: f64,
) -> Result<ExplicitBreakdown<Complex64>, ExplicitError> {
    if !(s.re > 1.0) || !s.im.is_finite() {
        return Err(ExplicitError::InvalidArgument(format!("Re s must exceed 1, got s = {s}")));
    }
    let zeros = select(zs, t)?;
    let gammas: Vec<f64> = zeros.iter().map(|z| z.gamma).collect();
    check_poles(s, &gammas)?;
    let terms = zero_terms(kind, zeros)?;
    let ss1 = s * (s + 1.0);
    let zh = zeta_half();
    let (main, single) = match kind {
        Kind::Liouville => {
            let main = ss1 * PI / (8.0 * zh * zh * (1.0 - s));
            let mut ratios = Vec::with_capacity(terms.len());
            for z in &terms {
                ratios.push((z.log_gamma - log_gamma(z.rho + 2.5)?, z.log_gamma_conj - log_gamma(z.rho.conj() + 2.5)?));
            }
            let sum = block_sum(terms.len(), |i| {
                let z = &terms[i];
                z.coeff * ratios[i].0.exp() / (z.rho - s + 0.5)
                    + z.coeff_conj * ratios[i].1.exp() / (z.rho.conj() - s + 0.5)
            });
            (main, ss1 * PI.sqrt() / zh * sum)
        }
        Kind::Moebius => (c(0.0), c(0.0)),
    };
    let pairs = PairTable::new(&terms, 2.0)?.evaluate(terms.len(), |z| (z - s).inv(), 0.0, f64::NEG_INFINITY);
    let double = ss1 * pairs.full();
    let envelope = ss1.norm() / (s.re - 0.6);
    Ok(ExplicitBreakdown::new(main, single, double, t, terms.len(), pairs.terms, 0.0, envelope))
}

/// Σ_{n≤N} S_d(n) e^{-ny}; requires N·y ≥ 20 so the tail is negligible.
pub fn exponential_direct(series: &ConvolutionSeries, y: f64, n: usize) -> Result<f64, ExplicitError> {
    positive("y", y)?;
    if n > series.limit() {
        return Err(ExplicitError::InvalidArgument(format!("N = {n} exceeds the series limit {}", series.limit())));
    }
    if (n as f64) * y < EXPONENTIAL_TAIL {
        return Err(ExplicitError::TailNotNegligible(n as f64 * y));
    }
    let mut acc = Neumaier::new();
    for (k, &v) in series.values().iter().enumerate().take(n + 1).skip(series.d()) {
        if v != 0 {
            acc.add(v as f64 * (-(k as f64) * y).exp());
        }
    }
    Ok(acc.value())
}

/// A = Σ_{|γ|≤T} c(ρ)Γ(ρ)y^{-ρ}, returned as (A, realness residue, zeros used).
pub fn exponential_zero_sum(kind: Kind, y: f64, zs: &ZeroSet, t: f64) -> Result<(f64, f64, usize), ExplicitError> {
    positive("y", y)?;
    let terms = zero_terms(kind, select(zs, t)?)?;
    let ln_y = y.ln();
    let (a, residue) = conjugate_sum(
        terms.len(),
        |i| terms[i].coeff * (terms[i].log_gamma - terms[i].rho * ln_y).exp(),
        |i| terms[i].coeff_conj * (terms[i].log_gamma_conj - terms[i].rho.conj() * ln_y).exp(),
    );
    Ok((a, residue, terms.len()))
}

/// Explicit formula for Σ S(n)e^{-ny}: π/(4ζ(1/2)²y) + (√π/ζ(1/2))y^{-1/2}A + A²
/// for λ and A² for μ, where A is [`exponential_zero_sum`].
pub fn exponential_explicit(kind: Kind, y: f64, zs: &ZeroSet, t: f64) -> Result<ExplicitBreakdown, ExplicitError> {
    let (a, residue, used) = exponential_zero_sum(kind, y, zs, t)?;
    let zh = zeta_half();
    let (main, single, single_res) = match kind {
        Kind::Liouville => {
            let scale = PI.sqrt() / (zh * y.sqrt());
            (PI / (4.0 * zh * zh * y), scale * a, scale.abs() * residue)
        }
        Kind::Moebius => (0.0, 0.0, 0.0),
    };
    let envelope = y.powf(-0.6) + 1.0;
    let pair_terms = 4 * used * used;
    Ok(ExplicitBreakdown::new(
        main,
        single,
        a * a,
        t,
        used,
        pair_terms,
        single_res + 2.0 * a.abs() * residue,
        envelope,
    ))
}
