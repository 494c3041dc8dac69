//! Weighted sums Σ λ(n₁)⋯λ(n_d) f((n₁+⋯+n_d)/η): direct, exact identity
//! and explicit formula, with and without the extra boundary term.

use liouville_conv::explicit::{
    weighted_average_direct, weighted_average_rhs, RhsMode, WeightSpec, WeightedRhs,
};
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates[..300], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    let table = build_sieve(Kind::Liouville, 20_000)?;
    for (a, b, eta) in [(0.0, 1.0, 2000.0), (0.0, 1.0, 20_000.0), (0.3, 1.0, 5000.0)] {
        for d in [2, 3] {
            let w = WeightSpec::power_bump(a, b, eta, 3)?;
            let direct = weighted_average_direct(&w, &table, d)?;
            let exact = weighted_average_rhs(&w, &table, d, RhsMode::ExactIdentity)?.total();
            let explicit = weighted_average_rhs(&w, &table, d, RhsMode::ExplicitFormula { zeros: &zs, t: zs.t_max() })?;
            let WeightedRhs::Explicit(bd) = explicit else { unreachable!() };
            println!(
                "a={a} b={b} eta={eta} d={d} extra={}: direct {direct:.6} identity {exact:.6} explicit {:.6} (main {:.6})",
                w.has_extra_term(),
                bd.total,
                bd.main_term
            );
        }
    }
    Ok(())
}
