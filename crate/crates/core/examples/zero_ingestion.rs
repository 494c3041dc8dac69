//! Reading ordinates, attaching ζ′(ρ) and ζ(2ρ), the binary cache and the
//! Σ 1/|ζ′(ρ)| diagnostic.

use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, ZeroSet, DEFAULT_RESIDUAL_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt");
    let ordinates = read_ordinates(path)?;
    println!("{} ordinates, largest {}", ordinates.len(), ordinates.last().unwrap());
    let set = enrich(&ordinates[..2000], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    for z in &set.zeros()[..5] {
        println!("gamma = {:>12.6}  |zeta'(rho)| = {:.6}  zeta(2 rho) = {:.6}", z.gamma, z.zprime.norm(), z.z2rho);
    }
    for t in [100.0, 500.0, 1000.0, set.t_max()] {
        let sz = set.sz_diagnostic(t)?;
        println!(
            "T = {:>8.2}: {:>5} zeros, sum 1/|zeta'| = {:>9.4}, normalised {:.4}",
            t, sz.zeros_used, sz.sum_inv_zp, sz.normalized
        );
    }
    let cache = std::env::temp_dir().join("zeros_2000.bin");
    set.save(&cache)?;
    println!("cache round trip: {}", ZeroSet::load(&cache)? == set);
    Ok(())
}
