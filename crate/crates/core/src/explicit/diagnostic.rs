use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::engine::zero_terms;
use super::ExplicitError;
use crate::convolve::ConvolutionSeries;
use crate::sieve::SieveTable;
use crate::specfun::log_gamma;
use crate::sum::{ComplexNeumaier, Neumaier};
use crate::zeros::ZeroSet;
use crate::Kind;

/// Absolute partial sum of the double series over the first `zeros` zeros.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesDiagnostic {
    pub zeros: usize,
    pub abs_sum: f64,
}

/// A(K′) = Σ |c(ρ₁)c(ρ₂)Γ(ρ₁)Γ(ρ₂)/Γ(ρ₁+ρ₂+1+k)| over all four sign patterns
/// of the first K′ positive-ordinate zeros, for K′ ∈ {K/8, K/4, K/2, K}.
/// c = ζ(2ρ)/ζ′(ρ) for λ and 1/ζ′(ρ) for μ.
pub fn double_series_diagnostic(
    zs: &ZeroSet,
    k: f64,
    kind: Kind,
    count: usize,
) -> Result<Vec<SeriesDiagnostic>, ExplicitError> {
    if count > zs.len() {
        return Err(ExplicitError::InvalidArgument(format!("K = {count} exceeds the {} available zeros", zs.len())));
    }
    if !(k > 0.5) {
        return Err(ExplicitError::InvalidArgument(format!("the double series needs k > 1/2, got {k}")));
    }
    let mut cuts = vec![count / 8, count / 4, count / 2, count];
    cuts.dedup();
    let terms = zero_terms(kind, &zs.zeros()[..count])?;
    let shift = 1.0 + k;
    // rows[i][c] = Σ_{j < cuts[c]} |term(i, j)| + |term(i, j̄)|
    let rows: Vec<Vec<f64>> = terms
        .par_iter()
        .map(|ti| {
            let mut out = Vec::with_capacity(cuts.len());
            let mut acc = Neumaier::new();
            let mut j = 0;
            for &cut in &cuts {
                while j < cut {
                    let tj = &terms[j];
                    let same = ti.log_gamma + tj.log_gamma - log_gamma(ti.rho + tj.rho + shift)?;
                    let mixed = ti.log_gamma + tj.log_gamma_conj - log_gamma(ti.rho + tj.rho.conj() + shift)?;
                    let c = ti.coeff.norm() * tj.coeff.norm();
                    acc.add(c * (same.re.exp() + mixed.re.exp()));
                    j += 1;
                }
                out.push(acc.value());
            }
            Ok(out)
        })
        .collect::<Result<_, ExplicitError>>()?;
    Ok(cuts
        .iter()
        .enumerate()
        .map(|(c, &cut)| {
            let mut acc = Neumaier::new();
            for row in &rows[..cut] {
                acc.add(row[c]);
            }
            SeriesDiagnostic { zeros: cut, abs_sum: 2.0 * acc.value() }
        })
        .collect())
}

/// (x - x^{1/4})/log x, with its limit 3/4 at x = 1.
pub fn remainder_scale(x: f64) -> f64 {
    let t = x.ln();
    if t.abs() < 1e-4 {
        // e^t - e^{t/4} = (3/4)t + (15/32)t² + (63/384)t³ + …
        0.75 + t * (15.0 / 32.0 + t * 63.0 / 384.0)
    } else {
        (x - x.powf(0.25)) / t
    }
}

/// The two integrals of the partial-summation route for Σ S(n)n^{-s}:
/// boundary = -s∫₀^H L(g)(g+1)^{-s-1} dg and
/// cesaro = s(s+1)∫₁^H C(h)h^{-s-2} dh, both exact on unit panels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletPartialSummation {
    pub s: Complex64,
    pub h: usize,
    pub boundary: Complex64,
    pub cesaro: Complex64,
}

fn cpow(n: f64, e: Complex64) -> Complex64 {
    (e * n.ln()).exp()
}

impl DirichletPartialSummation {
    /// `table` holds λ or μ, `series` the matching S with d = 2; H ≤ both limits.
    pub fn new(table: &SieveTable, series: &ConvolutionSeries, s: Complex64, h: usize) -> Result<Self, ExplicitError> {
        if series.d() != 2 || series.kind() != table.kind() {
            return Err(ExplicitError::InvalidArgument("need the d = 2 series of the same kind".into()));
        }
        if h > table.limit() || h > series.limit() || h < 1 {
            return Err(ExplicitError::InvalidArgument(format!("H = {h} outside the table range")));
        }
        // L(g) = L(k) on [k, k+1): ∫ (g+1)^{-s-1} = ((k+1)^{-s} - (k+2)^{-s})/s
        let mut boundary = ComplexNeumaier::new();
        for k in 1..h {
            let l = table.prefix()[k];
            if l != 0 {
                boundary.add(-(l as f64) * (cpow((k + 1) as f64, -s) - cpow((k + 2) as f64, -s)));
            }
        }
        // C(h) = A_m h - B_m on [m, m+1), A_m = Σ_{n≤m} S(n), B_m = Σ_{n≤m} nS(n)
        let mut cesaro = ComplexNeumaier::new();
        let (mut a, mut b) = (0i128, 0i128);
        for m in 1..h {
            let v = series.value(m) as i128;
            a += v;
            b += m as i128 * v;
            if a == 0 && b == 0 {
                continue;
            }
            let (lo, hi) = (m as f64, (m + 1) as f64);
            cesaro.add(a as f64 * (s + 1.0) * (cpow(lo, -s) - cpow(hi, -s)));
            cesaro.add(-(b as f64) * s * (cpow(lo, -s - 1.0) - cpow(hi, -s - 1.0)));
        }
        Ok(Self { s, h, boundary: boundary.value(), cesaro: cesaro.value() })
    }

    /// boundary + cesaro, the right-hand side of the partial-summation display.
    pub fn bracket(&self) -> Complex64 {
        self.boundary + self.cesaro
    }
}

/// Σ v(m)v(k)(m+k)^{-s} over m ≥ 2, k ≥ 1, m + k ≤ N: the pair sum with the
/// first summand above 1.
pub fn restricted_dirichlet(table: &SieveTable, series: &ConvolutionSeries, s: Complex64, n: usize) -> Result<Complex64, ExplicitError> {
    let full = super::dirichlet_direct(series, s, n)?;
    let mut head = ComplexNeumaier::new();
    for k in 1..n.min(table.limit() + 1) {
        head.add(table.values()[k] as f64 * cpow((k + 1) as f64, -s));
    }
    Ok(full - head.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolve::convolve_naive;
    use crate::explicit::dirichlet_direct;
    use crate::sieve::build_sieve;
    use crate::specfun::EulerMaclaurin;
    use crate::zeros::{enrich, DEFAULT_RESIDUAL_TOL};

    #[test]
    fn remainder_scale_limit() {
        assert_eq!(remainder_scale(1.0), 0.75);
        for x in [1.0 + 1e-7, 1.0 - 1e-7, 1.00009] {
            let direct = (x - f64::powf(x, 0.25)) / x.ln();
            assert!((remainder_scale(x) - direct).abs() < 1e-8);
        }
        assert!((remainder_scale(16.0) - 14.0 / 16f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn single_zero_diagnostic() {
        let g = 14.134725141734694;
        let zs = enrich(&[g], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL).unwrap();
        let a = double_series_diagnostic(&zs, 1.0, Kind::Moebius, 1).unwrap();
        let zp = zs.zeros()[0].zprime.norm();
        let rho = zs.zeros()[0].rho();
        let mixed = std::f64::consts::PI / (2.0 * (std::f64::consts::PI * g).cosh());
        let same = crate::specfun::gamma_ratio(rho, rho, 2.0).unwrap().norm();
        let expected = 2.0 * (mixed + same) / (zp * zp);
        let last = a.last().unwrap();
        assert_eq!(last.zeros, 1);
        assert!((last.abs_sum - expected).abs() < 1e-12 * expected);
        assert!(double_series_diagnostic(&ZeroSet::empty(), 1.0, Kind::Moebius, 0).unwrap().iter().all(|d| d.abs_sum == 0.0));
        assert!(double_series_diagnostic(&zs, 1.0, Kind::Moebius, 2).is_err());
    }

    #[test]
    fn partial_summation_structure() {
        let t = build_sieve(Kind::Liouville, 2000).unwrap();
        let s2 = convolve_naive(&t, 2, 2000).unwrap();
        let s = Complex64::new(6.0, 2.0);
        let p = DirichletPartialSummation::new(&t, &s2, s, 2000).unwrap();
        let direct = dirichlet_direct(&s2, s, 2000).unwrap();
        assert!((p.cesaro - direct).norm() < 1e-13);
        let restricted = restricted_dirichlet(&t, &s2, s, 2000).unwrap();
        assert!((p.bracket() - restricted).norm() < 1e-13);
    }
}
