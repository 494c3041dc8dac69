//! S_d(n) by the naive oracle and by the certified FFT, and the pair sum
//! against the bound |S(N)| < N - 1.

use std::time::Instant;

use liouville_conv::convolve::{convolve_fft, convolve_naive, predicted_fft_error};
use liouville_conv::sieve::build_sieve;
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 1 << 14;
    let table = build_sieve(Kind::Liouville, n)?;
    for d in 2..=4 {
        let t0 = Instant::now();
        let naive = convolve_naive(&table, d, n)?;
        let t1 = Instant::now();
        let fft = convolve_fft(&table, d, n)?;
        let t2 = Instant::now();
        println!(
            "d = {d}: naive {:?}, fft {:?}, identical = {}, S_d(N) = {}",
            t1 - t0,
            t2 - t1,
            naive == fft,
            fft.value(n)
        );
    }
    println!("predicted rounding error for 2^20 products of +-1: {:.2e}", predicted_fft_error(1 << 21, 1.0, 1.0));

    let big = 1_000_000;
    let table = build_sieve(Kind::Liouville, big)?;
    let s = convolve_fft(&table, 2, big)?;
    let equal: Vec<usize> = (2..=big).filter(|&k| s.value(k).unsigned_abs() >= (k - 1) as u64).collect();
    let worst = (11..=big).map(|k| s.value(k).abs() as f64 / (k - 1) as f64).fold(0.0, f64::max);
    println!("N <= {big} with |S(N)| = N - 1: {equal:?}");
    println!("max |S(N)|/(N - 1) over 11 <= N <= {big}: {worst:.4}");
    Ok(())
}
