//! Absolute partial sums of the double series over pairs of zeros.

use liouville_conv::explicit::double_series_diagnostic;
use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates[..2000], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    for kind in [Kind::Liouville, Kind::Moebius] {
        for k in [0.75, 1.0, 2.0] {
            let rows = double_series_diagnostic(&zs, k, kind, 2000)?;
            let text: Vec<String> = rows.iter().map(|r| format!("A({}) = {:.8}", r.zeros, r.abs_sum)).collect();
            println!("{kind:>9} k = {k}: {}", text.join(", "));
        }
    }
    Ok(())
}
