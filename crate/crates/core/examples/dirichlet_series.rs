//! Σ S(n) n^{-s} directly, through the partial-summation integrals and
//! through the explicit formula.

use num_complex::Complex64;

use liouville_conv::convolve::convolve;
use liouville_conv::explicit::{dirichlet_direct, dirichlet_explicit, restricted_dirichlet, DirichletPartialSummation};
use liouville_conv::sieve::build_sieve;
use liouville_conv::specfun::EulerMaclaurin;
use liouville_conv::zeros::{enrich, read_ordinates, DEFAULT_RESIDUAL_TOL};
use liouville_conv::Kind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ordinates = read_ordinates(concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt"))?;
    let zs = enrich(&ordinates[..500], &EulerMaclaurin::default(), DEFAULT_RESIDUAL_TOL)?;
    let n = 10_000;
    let table = build_sieve(Kind::Liouville, n)?;
    let series = convolve(&table, 2, n)?;
    for s in [Complex64::new(3.0, 0.0), Complex64::new(6.0, 0.0), Complex64::new(6.0, 2.0)] {
        let direct = dirichlet_direct(&series, s, n)?;
        let ps = DirichletPartialSummation::new(&table, &series, s, n)?;
        let restricted = restricted_dirichlet(&table, &series, s, n)?;
        let b = dirichlet_explicit(Kind::Liouville, s, &zs, zs.t_max())?;
        println!("s = {s}");
        println!("  direct                {direct:.10}");
        println!("  boundary + cesaro     {:.10} (restricted sum {restricted:.10})", ps.bracket());
        println!("  cesaro integral only  {:.10}", ps.cesaro);
        println!("  explicit formula      {:.6} (main {:.6}, envelope {:.3})", b.total, b.main_term, b.envelope);
    }
    Ok(())
}
