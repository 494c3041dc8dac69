//! λ and μ tables with their summatory functions, and the binary table format.

use liouville_conv::sieve::{build_sieve, SieveTable};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = build_sieve(Kind::Liouville, 1_000_000)?;
    let mu = build_sieve(Kind::Moebius, 1_000_000)?;
    println!("{:>9} {:>8} {:>8}", "x", "L(x)", "M(x)");
    for k in 1..=6 {
        let x = 10f64.powi(k);
        println!("{:>9} {:>8} {:>8}", x, lambda.summatory(x)?, mu.summatory(x)?);
    }
    println!("lambda(1..=12) = {:?}", &lambda.values()[1..=12]);
    println!("mu(1..=12)     = {:?}", &mu.values()[1..=12]);

    let path = std::env::temp_dir().join("lambda_1e6.bin");
    lambda.save(&path)?;
    let back = SieveTable::load(&path)?;
    println!("round trip through {}: {}", path.display(), back == lambda);
    Ok(())
}
