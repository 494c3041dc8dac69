//! The order-(d-1) Cesàro sum of S_d equals the d-fold Laplace
//! self-convolution of L, computed independently as a B-spline expansion.

use liouville_conv::convolve::{convolve, LaplacePieces};
use liouville_conv::sieve::build_sieve;
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3000;
    for kind in [Kind::Liouville, Kind::Moebius] {
        let table = build_sieve(kind, n)?;
        for d in [2, 3] {
            let series = convolve(&table, d, n)?;
            let pieces = LaplacePieces::new(&table, d, n)?;
            for x in [10.5, 123.25, 2999.9] {
                let c = series.cesaro_sum(x)?;
                let l = pieces.eval(x)?;
                println!("{kind:>9} d={d} x={x:>7}: cesaro {c:>16.6} laplace {l:>16.6} diff {:.1e}", (c - l).abs());
            }
        }
    }
    Ok(())
}
