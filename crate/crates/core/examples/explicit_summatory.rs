//! L(x) and M(x) against their explicit formulas with growing numbers of zeros.

use liouville_conv::explicit::SummatoryExplicit;
use liouville_conv::report::median;
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates, &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    let xs: Vec<f64> = (0..50).map(|i| 10f64 * 1000f64.powf(i as f64 / 49.0)).collect();
    for kind in [Kind::Liouville, Kind::Moebius] {
        let table = build_sieve(kind, 10_000)?;
        for k in [100, 1000, 10_000] {
            let f = SummatoryExplicit::new(kind, &zs, zs.height_for_count(k)?)?;
            let r = xs
                .iter()
                .map(|&x| Ok((table.summatory(x)? as f64 - f.at(x)?.total).abs()))
                .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
            println!("{kind:>9}, {k:>5} zeros: median |direct - formula| = {:.4}", median(&r));
        }
        let b = SummatoryExplicit::new(kind, &zs, zs.t_max())?.at(5000.5)?;
        println!("  at x = 5000.5: direct {} formula {b:#?}", table.summatory(5000.5)?);
    }
    Ok(())
}
