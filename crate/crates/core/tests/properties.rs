use num_complex::Complex64;
use proptest::prelude::*;

use liouville_conv::convolve::{convolve_blocked, convolve_fft, convolve_naive, laplace_convolution_exact};
use liouville_conv::explicit::{weighted_average_direct, weighted_identity_rhs, WeightSpec};
use liouville_conv::sieve::{build_sieve, build_sieve_with, SieveOptions, Strategy};
use liouville_conv::specfun::{gamma_ratio, log_gamma, zeta};
use liouville_conv::Kind;

fn kind() -> impl proptest::strategy::Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Liouville), Just(Kind::Moebius)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn liouville_is_completely_multiplicative(m in 1usize..300, n in 1usize..300) {
        let t = build_sieve(Kind::Liouville, m * n).unwrap();
        prop_assert_eq!(t.value(m * n), t.value(m) * t.value(n));
    }

    #[test]
    fn moebius_is_multiplicative_on_coprime_pairs(m in 1usize..300, n in 1usize..300) {
        let t = build_sieve(Kind::Moebius, m * n).unwrap();
        let (mut a, mut b) = (m, n);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        if a == 1 {
            prop_assert_eq!(t.value(m * n), t.value(m) * t.value(n));
        }
    }

    #[test]
    fn segmented_sieve_agrees(kind in kind(), limit in 1usize..5000, seg in 16usize..700) {
        let opts = SieveOptions { strategy: Strategy::Segmented { segment_len: seg }, ..SieveOptions::default() };
        prop_assert_eq!(build_sieve_with(kind, limit, opts).unwrap(), build_sieve(kind, limit).unwrap());
    }

    #[test]
    fn convolution_paths_agree(kind in kind(), n in 2usize..700, d in 2usize..6) {
        let t = build_sieve(kind, n).unwrap();
        let naive = convolve_naive(&t, d, n).unwrap();
        prop_assert_eq!(&convolve_fft(&t, d, n).unwrap(), &naive);
        prop_assert_eq!(&convolve_blocked(&t, d, n).unwrap(), &naive);
    }

    #[test]
    fn pair_sum_parity_and_trivial_bound(n in 2usize..3000) {
        let t = build_sieve(Kind::Liouville, n).unwrap();
        let s = convolve_fft(&t, 2, n).unwrap().value(n);
        // n - 1 terms of ±1
        prop_assert!(s.unsigned_abs() <= (n - 1) as u64);
        prop_assert_eq!((s - (n as i64 - 1)).rem_euclid(2), 0);
    }

    #[test]
    fn cesaro_equals_laplace(kind in kind(), x in 0.0f64..600.0, d in 2usize..4) {
        let t = build_sieve(kind, 600).unwrap();
        let s = convolve_fft(&t, d, 600).unwrap();
        let lhs = s.cesaro_sum(x).unwrap();
        let rhs = laplace_convolution_exact(&t, x, d).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + x * x), "{lhs} vs {rhs}");
    }

    #[test]
    fn log_gamma_recurrence(re in 0.1f64..30.0, im in -200.0f64..200.0) {
        let z = Complex64::new(re, im);
        let step = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        // equal modulo 2πi
        let turns = step.im / (2.0 * std::f64::consts::PI);
        prop_assert!(step.re.abs() < 1e-10 * (1.0 + z.norm()));
        prop_assert!((turns - turns.round()).abs() < 1e-10 * (1.0 + z.norm()));
    }

    #[test]
    fn gamma_ratio_is_symmetric(g1 in 10.0f64..300.0, g2 in 10.0f64..300.0, shift in 1.0f64..4.0) {
        let r1 = Complex64::new(0.5, g1);
        let r2 = Complex64::new(0.5, -g2);
        let a = gamma_ratio(r1, r2, shift).unwrap();
        let b = gamma_ratio(r2, r1, shift).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn zeta_schwarz_reflection(re in 0.4f64..4.0, im in 1.0f64..500.0) {
        let s = Complex64::new(re, im);
        let a = zeta(s).unwrap();
        let b = zeta(s.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn weighted_identity_random(
        kind in kind(),
        d in 2usize..4,
        eta in 5.0f64..120.0,
        a in -1.0f64..1.5,
        width in 0.2f64..2.0,
        p in 2u32..5,
    ) {
        let b = a.max(0.0) + width;
        let t = build_sieve(kind, (eta * b).ceil() as usize + 1).unwrap();
        let w = WeightSpec::power_bump(a, b, eta, p).unwrap();
        let direct = weighted_average_direct(&w, &t, d).unwrap();
        let rhs = weighted_identity_rhs(&w, &t, d).unwrap();
        prop_assert!((direct - rhs).abs() <= 1e-9 * direct.abs().max(1.0), "{direct} vs {rhs}");
    }
}
