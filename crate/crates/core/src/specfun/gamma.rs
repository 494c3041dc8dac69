use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_finite, SpecfunError};

/// Stirling coefficients B_{2k} / (2k (2k - 1)), k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Below this modulus the argument is shifted upwards with the recurrence.
const STIRLING_MIN_MODULUS: f64 = 15.0;

/// Principal branch of log Γ(z) for Re z > 0.
///
/// The argument is moved to |z| ≥ 15 with Γ(z) = Γ(z + n) / (z (z+1) ⋯ (z+n-1))
/// and the Stirling series is summed there. Each shift contributes a
/// principal logarithm, which keeps the result on the branch that is
/// continuous from the positive real axis.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecfunError> {
    check_finite(z)?;
    if z.re <= 0.0 {
        return Err(SpecfunError::NonPositiveReal(z.re));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < STIRLING_MIN_MODULUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + half_ln_2pi + series
}

/// Γ(r1) Γ(r2) / Γ(r1 + r2 + shift), formed from log-Gamma values only.
pub fn gamma_ratio(r1: Complex64, r2: Complex64, shift: f64) -> Result<Complex64, SpecfunError> {
    let a = log_gamma(r1)?;
    let b = log_gamma(r2)?;
    let c = log_gamma(r1 + r2 + shift)?;
    Ok((a + b - c).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert_eq!(half.im, 0.0);
    }

    #[test]
    fn matches_high_precision_values() {
        // reference values from an arbitrary-precision evaluation
        let cases = [
            (c(3.0, 4.0), c(-1.756_626_784_603_784_1, 4.742_664_438_034_657_9)),
            (c(0.5, 100.0), c(-156.160_694_146_284_99, 360.517_435_267_906_44)),
            (c(0.1, 0.2), c(1.419_622_556_608_801_5, -1.189_458_456_191_653_5)),
            (c(2.5, 1000.0), c(-1556.061_876_453_729, 5910.894_913_303_562_6)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!(close(got, want, 1e-13), "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn recurrence_and_conjugation() {
        for &(re, im) in &[(0.3, 0.1), (0.5, 14.134725), (1.7, -3.2), (4.0, 250.0), (0.9, 0.0)] {
            let z = c(re, im);
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0), "{z}");
            let conj = log_gamma(z.conj()).unwrap();
            assert!((conj - log_gamma(z).unwrap().conj()).norm() < 1e-13 * conj.norm().max(1.0));
        }
    }

    #[test]
    fn critical_line_modulus() {
        for y in [1.0, 14.134725, 50.0] {
            let lg = log_gamma(c(0.5, y)).unwrap();
            let want = 0.5 * (PI / (PI * y).cosh()).ln();
            assert!(((lg.re - want) / want).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn gamma_ratio_closed_forms() {
        let r = gamma_ratio(c(1.0, 0.0), c(1.0, 0.0), 2.0).unwrap();
        assert!((r - c(1.0 / 6.0, 0.0)).norm() < 1e-15);

        let g = 14.134725;
        let rho = c(0.5, g);
        let r = gamma_ratio(rho, rho.conj(), 2.0).unwrap();
        let want = PI / (2.0 * (PI * g).cosh());
        assert!((r.re - want).abs() < 1e-10 * want);
        assert!(r.im.abs() < 1e-10 * want);
    }

    #[test]
    fn gamma_ratio_against_stirling_estimate() {
        // |Γ(x+iy)| ~ sqrt(2π) e^{-π|y|/2} |y|^{x-1/2}
        let g = 14.13_f64;
        let rho = c(0.5, g);
        let got = gamma_ratio(rho, rho, 2.0).unwrap().norm();
        let num = (2.0 * PI).sqrt() * (-PI * g / 2.0).exp();
        let den = (2.0 * PI).sqrt() * (-PI * g).exp() * (2.0 * g).powf(2.5);
        let estimate = num * num / den;
        assert!((got / estimate - 1.0).abs() < 0.05, "{got} vs {estimate}");
    }

    #[test]
    fn rejects_left_half_plane() {
        assert!(matches!(log_gamma(c(0.0, 1.0)), Err(SpecfunError::NonPositiveReal(_))));
        assert!(matches!(log_gamma(c(-1.5, 0.0)), Err(SpecfunError::NonPositiveReal(_))));
        assert!(matches!(log_gamma(c(f64::NAN, 0.0)), Err(SpecfunError::NonFinite { .. })));
    }
}
