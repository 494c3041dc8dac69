//! Weighted averages Σ v(n₁)⋯v(n_d) f((n₁+⋯+n_d)/η), computed directly,
//! through the exact boundary-term + f″-integral identity, and through the
//! explicit formula over zeros.
//!
//! The sums split into the first summand n₁ and the remaining d - 1
//! summands, whose combined weight is S_{d-1}. The identity holds for the
//! sum restricted to n₁ > ηa; for ηa < 1 the restriction is empty.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::engine::{conjugate_sum, zero_terms, PairTable};
use super::{select, ExplicitBreakdown, ExplicitError, WeightSpec};
use crate::convolve::{convolve, factorial};
use crate::sieve::SieveTable;
use crate::specfun::{log_gamma, zeta_half};
use crate::sum::{block_fold, Neumaier};
use crate::zeros::ZeroSet;
use crate::Kind;

/// Inputs to the right-hand side of the weighted identity.
#[derive(Clone, Copy, Debug)]
pub enum RhsMode<'a> {
    /// Boundary term plus (1/η)∫ f″(w) P(ηw) dw, exact up to rounding.
    ExactIdentity,
    /// The explicit formula over the zeros with γ ≤ T.
    ExplicitFormula { zeros: &'a ZeroSet, t: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightedRhs {
    Exact(f64),
    Explicit(ExplicitBreakdown),
}

impl WeightedRhs {
    pub fn total(&self) -> f64 {
        match self {
            Self::Exact(v) => *v,
            Self::Explicit(b) => b.total,
        }
    }
}

/// Values g(k) = S_{d-1}(k) and prefix sums G(k) = Σ_{j≤k} g(j), k ≤ n.
struct Inner {
    g: Vec<i64>,
    prefix: Vec<i64>,
}

impl Inner {
    fn new(table: &SieveTable, d: usize, n: usize) -> Result<Self, ExplicitError> {
        let g: Vec<i64> = if d == 2 {
            table.values()[..=n].iter().map(|&v| v as i64).collect()
        } else {
            convolve(table, d - 1, n)?.values().to_vec()
        };
        let mut prefix = Vec::with_capacity(g.len());
        let mut acc = 0i64;
        for &v in &g {
            acc += v;
            prefix.push(acc);
        }
        Ok(Self { g, prefix })
    }

    fn summatory(&self, x: f64) -> i64 {
        if x < 1.0 {
            0
        } else {
            self.prefix[(x.floor() as usize).min(self.prefix.len() - 1)]
        }
    }
}

fn check_finite_support(w: &WeightSpec, table: &SieveTable, d: usize) -> Result<usize, ExplicitError> {
    if d < 2 {
        return Err(ExplicitError::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    if !w.b().is_finite() {
        return Err(ExplicitError::UnboundedSupport);
    }
    let top = w.eta() * w.b();
    if top > table.limit() as f64 {
        return Err(ExplicitError::InvalidArgument(format!(
            "η·b = {top} exceeds the table limit {}",
            table.limit()
        )));
    }
    Ok(top.max(0.0).floor() as usize)
}

fn summatory(table: &SieveTable, x: f64) -> i64 {
    if x < 1.0 {
        0
    } else {
        table.prefix()[x.floor() as usize]
    }
}

/// Σ_{n₁ > ηa} Σ_{n₂,…,n_d} v(n₁)⋯v(n_d) f((n₁+⋯+n_d)/η).
pub fn weighted_average_direct(w: &WeightSpec, table: &SieveTable, d: usize) -> Result<f64, ExplicitError> {
    let n = check_finite_support(w, table, d)?;
    let inner = Inner::new(table, d, n)?;
    let ea = w.eta() * w.a();
    let first = if ea < 1.0 { 1 } else { ea.floor() as usize + 1 };
    let v = table.values();
    let eta = w.eta();
    let total = block_fold(
        n + 1,
        Neumaier::new(),
        |acc, n1| {
            if n1 < first || v[n1] == 0 {
                return;
            }
            let mut row = Neumaier::new();
            for r in 1..=n - n1 {
                let g = inner.g[r];
                if g != 0 {
                    row.add(g as f64 * w.f((n1 + r) as f64 / eta));
                }
            }
            acc.add(v[n1] as f64 * row.value());
        },
        |a, b| {
            let mut s = *a;
            s.add(b.value());
            s
        },
    );
    Ok(total.value())
}

/// G₂(ηa)∫ₐᵇ G₁(ηv - ηa) f′(v) dv with G₂ = L or M and G₁ = Σ S_{d-1}.
fn boundary_term(w: &WeightSpec, table: &SieveTable, inner: &Inner) -> f64 {
    let (a, b, eta) = (w.a(), w.b(), w.eta());
    let head = summatory(table, eta * a);
    if head == 0 {
        return 0.0;
    }
    // G₁(η(v - a)) = G₁(k) on [a + k/η, a + (k+1)/η)
    let mut acc = Neumaier::new();
    let mut k = 1usize;
    while a + k as f64 / eta < b {
        let lo = a + k as f64 / eta;
        let hi = (a + (k + 1) as f64 / eta).min(b);
        let g = inner.summatory(k as f64);
        if g != 0 {
            acc.add(g as f64 * (w.f(hi) - w.f(lo)));
        }
        k += 1;
    }
    head as f64 * acc.value()
}

/// Boundary term plus (1/η)∫ₐᵇ f″(w) P(ηw) dw with
/// P(u) = ∫_{ηa}^{u} G₂(s) G₁(u - s) ds.
///
/// P is continuous and piecewise linear with kinks where ηw or ηw - ηa is
/// an integer; on each panel ∫ f″·P = [f′P] - ηP′[f] exactly.
pub fn weighted_identity_rhs(w: &WeightSpec, table: &SieveTable, d: usize) -> Result<f64, ExplicitError> {
    let n = check_finite_support(w, table, d)?;
    let inner = Inner::new(table, d, n)?;
    let (a, b, eta) = (w.a(), w.b(), w.eta());
    let ea = eta * a;

    let mut edges = vec![a, b];
    let mut k = (ea.floor() + 1.0).max(0.0);
    while k / eta < b {
        edges.push(k / eta);
        k += 1.0;
    }
    let mut k = 1.0;
    while a + k / eta < b {
        edges.push(a + k / eta);
        k += 1.0;
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * y.abs().max(1.0));

    // P′(u) = Σ_{1≤k≤u-ηa} g₁(k) G₂(u - k)
    let slope = |u: f64| -> f64 {
        let top = (u - ea).floor();
        if top < 1.0 {
            return 0.0;
        }
        let mut s = 0i128;
        for k in 1..=(top as usize).min(n) {
            let g = inner.g[k];
            if g != 0 {
                s += g as i128 * summatory(table, u - k as f64) as i128;
            }
        }
        s as f64
    };

    let mut acc = Neumaier::new();
    let mut p_lo = 0.0;
    for pair in edges.windows(2) {
        let (w0, w1) = (pair[0], pair[1]);
        if w1 <= w0 {
            continue;
        }
        let p = slope(eta * 0.5 * (w0 + w1));
        let p_hi = p_lo + p * eta * (w1 - w0);
        acc.add(w.f_prime(w1) * p_hi);
        acc.add(-w.f_prime(w0) * p_lo);
        acc.add(-p * eta * (w.f(w1) - w.f(w0)));
        p_lo = p_hi;
    }
    Ok(boundary_term(w, table, &inner) + acc.value() / eta)
}

/// Explicit formula for the weighted d-fold average:
/// main πη^{d-1}/(4ζ(1/2)²d!)·I(d-1), single (√π/ζ(1/2))Σ c(ρ)Γ(ρ)η^{ρ+d-3/2}/Γ(ρ+d+1/2)·I(ρ+d-3/2),
/// double ΣΣ c(ρ₁)c(ρ₂)Γ(ρ₁)Γ(ρ₂)/Γ(ρ₁+ρ₂+2)·η^{ρ₁+ρ₂+d-2}·I(ρ₁+ρ₂+d-2),
/// with I(z) = ∫ f″(w)w^{z+1}dw. For μ only the double sum is present.
/// When ηa ≥ 1 the boundary term is added to the main term, which needs the
/// sieve table.
pub fn weighted_average_explicit(
    kind: Kind,
    w: &WeightSpec,
    zs: &ZeroSet,
    t: f64,
    d: usize,
    table: Option<&SieveTable>,
) -> Result<ExplicitBreakdown, ExplicitError> {
    if d < 2 {
        return Err(ExplicitError::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    let zeros = select(zs, t)?;
    let terms = zero_terms(kind, zeros)?;
    let eta = w.eta();
    let ln_eta = eta.ln();
    let df = d as f64;
    let zh = zeta_half();

    let mut main = 0.0;
    if kind == Kind::Liouville {
        main = PI * eta.powf(df - 1.0) / (4.0 * zh * zh * factorial(d)) * w.moment(Complex64::new(df - 1.0, 0.0))?.re;
    }
    if w.has_extra_term() {
        let table = table.ok_or_else(|| {
            ExplicitError::InvalidArgument("η·a ≥ 1: the boundary term needs the sieve table".into())
        })?;
        if table.kind() != kind {
            return Err(ExplicitError::InvalidArgument("sieve table kind does not match".into()));
        }
        let n = check_finite_support(w, table, d)?;
        main += boundary_term(w, table, &Inner::new(table, d, n)?);
    }

    let (single, single_res) = match kind {
        Kind::Liouville => {
            let shift = df + 0.5;
            let mut parts = Vec::with_capacity(terms.len());
            for z in &terms {
                let mut pair = [Complex64::new(0.0, 0.0); 2];
                for (slot, (rho, c, lg)) in pair
                    .iter_mut()
                    .zip([(z.rho, z.coeff, z.log_gamma), (z.rho.conj(), z.coeff_conj, z.log_gamma_conj)])
                {
                    let e = rho + df - 1.5;
                    *slot = c * (lg - log_gamma(rho + shift)? + e * ln_eta).exp() * w.moment(e)?;
                }
                parts.push(pair);
            }
            let (s, r) = conjugate_sum(terms.len(), |i| parts[i][0], |i| parts[i][1]);
            let scale = PI.sqrt() / zh;
            (scale * s, scale.abs() * r)
        }
        Kind::Moebius => (0.0, 0.0),
    };

    let table_pairs = PairTable::new(&terms, 2.0)?;
    let failure = std::sync::Mutex::new(None);
    let pairs = table_pairs.evaluate(
        terms.len(),
        |z| {
            let e = z + df - 2.0;
            match w.moment(e) {
                Ok(m) => (e * ln_eta).exp() * m,
                Err(err) => {
                    failure.lock().unwrap().get_or_insert(err);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        0.0,
        f64::NEG_INFINITY,
    );
    if let Some(err) = failure.into_inner().unwrap() {
        return Err(err);
    }

    let eps = 0.1;
    let envelope = eta.powf(df - 1.5 + eps) * w.abs_moment(df - 0.5 + eps)? + eta.powf(df - 2.0) * w.abs_moment(df - 1.0)?;
    Ok(ExplicitBreakdown::new(
        main,
        single,
        pairs.real(),
        t,
        terms.len(),
        pairs.terms,
        single_res + pairs.residue(),
        envelope,
    ))
}

/// Right-hand side of the weighted identity in the requested mode; the
/// kind is taken from the table.
pub fn weighted_average_rhs(
    w: &WeightSpec,
    table: &SieveTable,
    d: usize,
    mode: RhsMode<'_>,
) -> Result<WeightedRhs, ExplicitError> {
    match mode {
        RhsMode::ExactIdentity => Ok(WeightedRhs::Exact(weighted_identity_rhs(w, table, d)?)),
        RhsMode::ExplicitFormula { zeros, t } => Ok(WeightedRhs::Explicit(weighted_average_explicit(
            table.kind(),
            w,
            zeros,
            t,
            d,
            Some(table),
        )?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve;
    use std::sync::Arc;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn direct_small_cases() {
        let t = build_sieve(Kind::Liouville, 100).unwrap();
        let w = WeightSpec::power_bump(0.3, 3.0, 1.0, 2).unwrap();
        assert_eq!(weighted_average_direct(&w, &t, 2).unwrap(), 1.0);
        let narrow = WeightSpec::power_bump(0.1, 2.0, 1.0, 2).unwrap();
        assert_eq!(weighted_average_direct(&narrow, &t, 2).unwrap(), 0.0);
    }

    #[test]
    fn direct_matches_triple_loop() {
        let t = build_sieve(Kind::Moebius, 100).unwrap();
        let w = WeightSpec::power_bump(0.5, 11.3, 1.7, 3).unwrap();
        let v = t.values();
        let mut brute = 0.0;
        for i in 1..20 {
            for j in 1..20 {
                for k in 1..20 {
                    brute += (v[i] * v[j] * v[k]) as f64 * w.f((i + j + k) as f64 / 1.7);
                }
            }
        }
        assert!(close(weighted_average_direct(&w, &t, 3).unwrap(), brute));
    }

    #[test]
    fn identity_holds() {
        for kind in [Kind::Liouville, Kind::Moebius] {
            let t = build_sieve(kind, 400).unwrap();
            for &(a, b, eta, p) in &[(0.3, 30.0, 1.0, 2), (2.0, 30.0, 1.0, 2), (-0.7, 12.5, 3.3, 3), (1.3, 40.0, 2.5, 4)] {
                let w = WeightSpec::power_bump(a, b, eta, p).unwrap();
                for d in [2, 3] {
                    let direct = weighted_average_direct(&w, &t, d).unwrap();
                    let rhs = weighted_identity_rhs(&w, &t, d).unwrap();
                    assert!(close(direct, rhs), "{kind} a={a} b={b} η={eta} d={d}: {direct} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn linear_weight_is_zero() {
        let t = build_sieve(Kind::Liouville, 50).unwrap();
        let zero: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(|_| 0.0);
        let w = WeightSpec::new(0.5, 20.0, 1.0, zero.clone(), zero.clone(), zero).unwrap();
        assert_eq!(weighted_identity_rhs(&w, &t, 2).unwrap(), 0.0);
        assert_eq!(weighted_average_direct(&w, &t, 2).unwrap(), 0.0);
    }

    #[test]
    fn rejects_unbounded_and_oversized() {
        let t = build_sieve(Kind::Liouville, 50).unwrap();
        let w = WeightSpec::exponential(1.0, 0.1).unwrap();
        assert!(matches!(weighted_average_direct(&w, &t, 2), Err(ExplicitError::UnboundedSupport)));
        let big = WeightSpec::power_bump(0.0, 60.0, 1.0, 2).unwrap();
        assert!(weighted_identity_rhs(&big, &t, 2).is_err());
    }
}
