//! y Σ S(n) e^{-ny} tends to π/(4ζ(1/2)²); the explicit formula with zeros.

use std::f64::consts::PI;

use liouville_conv::convolve::convolve;
use liouville_conv::explicit::{exponential_direct, exponential_explicit};
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::{zeta_half, EulerMaclaurin};
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates[..100], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    let n = 200_000;
    let table = build_sieve(Kind::Liouville, n)?;
    let series = convolve(&table, 2, n)?;
    let limit = PI / (4.0 * zeta_half().powi(2));
    println!("limit {limit:.6}");
    for y in [0.1, 0.05, 0.02, 0.01, 0.001, 0.0001] {
        let direct = exponential_direct(&series, y, n)?;
        let b = exponential_explicit(Kind::Liouville, y, &zs, zs.t_max())?;
        println!(
            "y = {y:<7} y*sum = {:>9.6} |diff from limit| = {:.4}  formula residual {:>9.4} (envelope {:.2})",
            y * direct,
            (y * direct - limit).abs(),
            (direct - b.total).abs(),
            b.envelope
        );
    }
    Ok(())
}
