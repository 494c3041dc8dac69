use rayon::prelude::*;

use super::{factorial, ConvolveError};
use crate::sieve::SieveTable;

/// The d-fold Laplace self-convolution G*⋯*G(x) of the step function
/// G(y) = Σ_{n≤y} v(n), held as an exact piecewise polynomial.
///
/// G = Σ_k g_k·1_{[k,k+1)} with g_k = G(k), so the d-fold convolution is
/// Σ_m c_m B_d(x - m), where c = g*⋯*g is an integer sequence and B_d is the
/// cardinal B-spline of order d on [0, d]. The c_m are computed by direct
/// integer convolution, independently of the FFT path.
#[derive(Clone, Debug)]
pub struct LaplacePieces {
    d: usize,
    coeffs: Vec<i128>,
}

impl LaplacePieces {
    /// Pieces valid for 0 ≤ x < limit + 1. Costs O(d·limit²) integer operations.
    pub fn new(table: &SieveTable, d: usize, limit: usize) -> Result<Self, ConvolveError> {
        if d < 2 {
            return Err(ConvolveError::InvalidFold(d));
        }
        if limit > table.limit() {
            return Err(ConvolveError::TableTooSmall { n: limit, limit: table.limit() });
        }
        let g: Vec<i128> = table.prefix()[..=limit].iter().map(|&v| v as i128).collect();
        let mut coeffs = g.clone();
        for _ in 1..d {
            coeffs = (0..limit + 1)
                .into_par_iter()
                .with_min_len(64)
                .map(|m| (0..=m).map(|k| coeffs[k] * g[m - k]).sum())
                .collect();
        }
        Ok(Self { d, coeffs })
    }

    pub fn limit(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// G*⋯*G(x) for 0 ≤ x < limit + 1.
    pub fn eval(&self, x: f64) -> Result<f64, ConvolveError> {
        if x.is_nan() || x < 0.0 {
            return Err(ConvolveError::InvalidArgument(x));
        }
        if x.floor() > self.limit() as f64 {
            return Err(ConvolveError::OutOfRange { x, limit: self.limit() });
        }
        let m0 = x.floor() as usize;
        let tau = x - m0 as f64;
        let mut total = 0.0;
        for j in 0..self.d.min(m0 + 1) {
            let c = self.coeffs[m0 - j];
            if c != 0 {
                total += c as f64 * bspline(self.d, tau + j as f64);
            }
        }
        Ok(total)
    }
}

/// Cardinal B-spline of order d (d-fold convolution of 1_{[0,1)}).
fn bspline(d: usize, t: f64) -> f64 {
    if t <= 0.0 || t >= d as f64 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=d {
        let u = t - k as f64;
        if u > 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * u.powi(d as i32 - 1);
        }
        binom = binom * (d - k) as f64 / (k + 1) as f64;
    }
    acc / factorial(d - 1)
}

/// ∫ G(y₁)⋯G(y_d) over y₁+⋯+y_d = x, i.e. ∫₀ˣ G(y)G(x-y) dy for d = 2.
pub fn laplace_convolution_exact(table: &SieveTable, x: f64, d: usize) -> Result<f64, ConvolveError> {
    if x.is_nan() || x < 0.0 {
        return Err(ConvolveError::InvalidArgument(x));
    }
    if x > table.limit() as f64 {
        return Err(ConvolveError::OutOfRange { x, limit: table.limit() });
    }
    LaplacePieces::new(table, d, x.floor() as usize)?.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolve::convolve_naive;
    use crate::sieve::build_sieve;
    use crate::Kind;

    #[test]
    fn bspline_partition_of_unity() {
        for d in 2..=5 {
            for t in [0.0, 0.25, 0.5, 0.9] {
                let s: f64 = (0..d).map(|j| bspline(d, t + j as f64)).sum();
                assert!((s - 1.0).abs() < 1e-14, "d={d} t={t}");
            }
        }
        assert_eq!(bspline(2, 1.0), 1.0);
    }

    #[test]
    fn small_values() {
        let t = build_sieve(Kind::Liouville, 10).unwrap();
        assert_eq!(laplace_convolution_exact(&t, 3.0, 2).unwrap(), 1.0);
        assert_eq!(laplace_convolution_exact(&t, 1.5, 2).unwrap(), 0.0);
        assert_eq!(laplace_convolution_exact(&t, 4.0, 2).unwrap(), 0.0);
        assert!(matches!(laplace_convolution_exact(&t, 11.0, 2), Err(ConvolveError::OutOfRange { .. })));
    }

    #[test]
    fn agrees_with_cesaro() {
        for kind in [Kind::Liouville, Kind::Moebius] {
            let t = build_sieve(kind, 300).unwrap();
            for d in 2..=4 {
                let pieces = LaplacePieces::new(&t, d, 300).unwrap();
                let series = convolve_naive(&t, d, 300).unwrap();
                for i in 0..200 {
                    let x = 0.37 + i as f64 * 1.4917;
                    let a = pieces.eval(x).unwrap();
                    let b = series.cesaro_sum(x).unwrap();
                    assert!((a - b).abs() <= 1e-9 * (1.0 + x * x), "{kind} d={d} x={x}: {a} vs {b}");
                }
            }
        }
    }
}
