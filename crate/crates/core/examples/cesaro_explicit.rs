//! Cesàro averages C(x) = Σ_{n≤x} S(n)(x - n) for λ and μ against the
//! explicit formulas, and the d-fold variant.

use liouville_conv::convolve::convolve;
use liouville_conv::explicit::CesaroExplicit;
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates[..1000], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    let t = zs.t_max();
    let n = 1_000_000;
    for (kind, d) in [(Kind::Liouville, 2), (Kind::Moebius, 2), (Kind::Liouville, 3)] {
        let table = build_sieve(kind, n)?;
        let series = convolve(&table, d, n)?;
        let formula = CesaroExplicit::new(kind, &zs, t, d, false)?;
        println!("{kind}, d = {d}, {} zeros, {} pair terms", formula.zeros_used(), formula.at(1e3)?.pair_terms);
        for x in [1e3, 1e4, 1e5, 1e6] {
            let direct = series.cesaro_sum(x)?;
            let b = formula.at(x)?;
            println!(
                "  x = {x:>8}: direct {direct:>20.3} formula {:>20.3} main {:>20.3} |diff|/x^(d-1/2) {:.4}",
                b.total,
                b.main_term,
                (direct - b.total).abs() / x.powf(d as f64 - 0.5)
            );
        }
    }
    Ok(())
}
