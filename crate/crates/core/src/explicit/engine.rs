//! Per-zero precomputation and the deterministic single and double zero sums
//! shared by every explicit formula.
//!
//! Every real-valued zero sum is formed from the positive-ordinate zeros
//! only: Σ_ρ t(ρ) = 2 Re Σ_{γ>0} t(ρ), and for double sums
//! Σ_{ρ₁,ρ₂} t(ρ₁,ρ₂) = 2 Re Σ_{γᵢ,γⱼ>0} [t(ρᵢ,ρⱼ) + t(ρᵢ,ρ̄ⱼ)]. The conjugate
//! terms are also evaluated independently, through the same special
//! functions with conjugated arguments, and the imaginary part of the full
//! sum is reported as a realness residue.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::specfun::log_gamma;
use crate::sum::{block_fold, block_sum, ComplexNeumaier};
use crate::zeros::ZeroDatum;
use crate::Kind;

use super::ExplicitError;

/// Pair coefficients with log-magnitude below this are never stored.
const STORE_FLOOR: f64 = -60.0 * std::f64::consts::LN_10;
/// Relative size below which a pair term is skipped at evaluation time.
pub const PRUNE_RELATIVE: f64 = 1e-18;

/// ρ, its coefficient c(ρ) and log Γ(ρ), for ρ and for ρ̄ separately.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ZeroTerm {
    pub rho: Complex64,
    pub coeff: Complex64,
    pub log_gamma: Complex64,
    pub coeff_conj: Complex64,
    pub log_gamma_conj: Complex64,
}

/// c(ρ) = ζ(2ρ)/ζ′(ρ) for λ and 1/ζ′(ρ) for μ.
pub(crate) fn coefficient(kind: Kind, z2rho: Complex64, zprime: Complex64) -> Complex64 {
    match kind {
        Kind::Liouville => z2rho / zprime,
        Kind::Moebius => zprime.inv(),
    }
}

pub(crate) fn zero_terms(kind: Kind, zeros: &[ZeroDatum]) -> Result<Vec<ZeroTerm>, ExplicitError> {
    zeros
        .par_iter()
        .map(|z| {
            let rho = z.rho();
            Ok(ZeroTerm {
                rho,
                coeff: coefficient(kind, z.z2rho, z.zprime),
                log_gamma: log_gamma(rho)?,
                coeff_conj: coefficient(kind, z.z2rho.conj(), z.zprime.conj()),
                log_gamma_conj: log_gamma(rho.conj())?,
            })
        })
        .collect()
}

/// Σ_ρ of a term given for ρ and for ρ̄: returns (2 Re Σ_{γ>0} t(ρ), |Im Σ_ρ t|).
pub(crate) fn conjugate_sum<F, G>(n: usize, term: F, term_conj: G) -> (f64, f64)
where
    F: Fn(usize) -> Complex64 + Sync,
    G: Fn(usize) -> Complex64 + Sync,
{
    let primary = block_sum(n, term);
    let conj = block_sum(n, term_conj);
    (2.0 * primary.re, (primary + conj).im.abs())
}

#[derive(Clone, Copy, Debug)]
struct PairEntry {
    j: u32,
    /// ρᵢ + ρⱼ*
    sum: Complex64,
    /// c(ρᵢ)c(ρⱼ*)Γ(ρᵢ)Γ(ρⱼ*)/Γ(ρᵢ+ρⱼ*+shift), ρⱼ* = ρⱼ or ρ̄ⱼ
    coeff: Complex64,
    /// the same for the conjugate pattern, evaluated independently
    coeff_conj: Complex64,
    log_mag: f64,
}

/// Γ-ratio pair coefficients for a fixed shift, for all stored pairs.
///
/// The same-sign pattern (ρᵢ, ρⱼ) decays polynomially while the mixed
/// pattern (ρᵢ, ρ̄ⱼ) decays like e^{-π min(γᵢ,γⱼ)}; entries below 10^{-60}
/// are dropped when the table is built.
pub(crate) struct PairTable {
    rows: Vec<Vec<PairEntry>>,
}

impl PairTable {
    pub(crate) fn new(terms: &[ZeroTerm], shift: f64) -> Result<Self, ExplicitError> {
        let rows = terms
            .par_iter()
            .map(|ti| {
                let mut row = Vec::with_capacity(terms.len() + 8);
                for (j, tj) in terms.iter().enumerate() {
                    for mixed in [false, true] {
                        let (rj, cj, gj, cj_c, gj_c) = if mixed {
                            (tj.rho.conj(), tj.coeff_conj, tj.log_gamma_conj, tj.coeff, tj.log_gamma)
                        } else {
                            (tj.rho, tj.coeff, tj.log_gamma, tj.coeff_conj, tj.log_gamma_conj)
                        };
                        let log_c = (ti.coeff * cj).ln();
                        let upper = ti.log_gamma + gj + log_c;
                        let lower = log_gamma(ti.rho + rj + shift)?;
                        let log_term = upper - lower;
                        if log_term.re < STORE_FLOOR {
                            continue;
                        }
                        let lower_conj = log_gamma(ti.rho.conj() + rj.conj() + shift)?;
                        let conj = ti.log_gamma_conj + gj_c + (ti.coeff_conj * cj_c).ln() - lower_conj;
                        row.push(PairEntry {
                            j: j as u32,
                            sum: ti.rho + rj,
                            coeff: log_term.exp(),
                            coeff_conj: conj.exp(),
                            log_mag: log_term.re,
                        });
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, ExplicitError>>()?;
        Ok(Self { rows })
    }

    /// Σ over the first `k` zeros of coeff·kernel(ρᵢ + ρⱼ*). The conjugate
    /// patterns use `coeff_conj` and the kernel at the conjugate argument.
    /// Entries whose log-magnitude plus `log_scale` falls below `log_floor`
    /// are skipped.
    pub(crate) fn evaluate<K>(&self, k: usize, kernel: K, log_scale: f64, log_floor: f64) -> PairSum
    where
        K: Fn(Complex64) -> Complex64 + Sync,
    {
        let k = k.min(self.rows.len());
        let zero = Complex64::new(0.0, 0.0);
        let init = (ComplexNeumaier::new(), ComplexNeumaier::new(), 0usize);
        let (primary, conj, terms) = block_fold(
            k,
            init,
            |acc, i| {
                let mut row = zero;
                let mut row_conj = zero;
                for e in &self.rows[i] {
                    if e.j as usize >= k || e.log_mag + log_scale < log_floor {
                        continue;
                    }
                    row += e.coeff * kernel(e.sum);
                    row_conj += e.coeff_conj * kernel(e.sum.conj());
                    acc.2 += 2;
                }
                acc.0.add(row);
                acc.1.add(row_conj);
            },
            |a, b| {
                let mut p = a.0;
                p.add(b.0.value());
                let mut c = a.1;
                c.add(b.1.value());
                (p, c, a.2 + b.2)
            },
        );
        PairSum { primary: primary.value(), conj: conj.value(), terms }
    }
}

/// Raw double sum: `primary` over the patterns (ρᵢ,ρⱼ), (ρᵢ,ρ̄ⱼ) and `conj`
/// over their conjugates.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairSum {
    pub primary: Complex64,
    pub conj: Complex64,
    pub terms: usize,
}

impl PairSum {
    /// Sum over all four sign patterns.
    pub fn full(&self) -> Complex64 {
        self.primary + self.conj
    }

    /// 2 Re of the primary half, for structurally real sums.
    pub fn real(&self) -> f64 {
        2.0 * self.primary.re
    }

    pub fn residue(&self) -> f64 {
        self.full().im.abs()
    }
}
