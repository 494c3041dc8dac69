//! log Γ, Γ ratios, ζ and ζ′ on and near the critical line.

use num_complex::Complex64;
use std::f64::consts::PI;

use liouville_conv::specfun::{gamma_ratio, log_gamma, zeta, zeta_derivative, zeta_half};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for y in [1.0, 14.134725, 50.0, 1000.0] {
        let lg = log_gamma(Complex64::new(0.5, y))?;
        // ln(π / cosh πy) without overflow
        let exact = PI.ln() + 2f64.ln() - PI * y - (-2.0 * PI * y).exp().ln_1p();
        println!("log|Gamma(1/2+{y}i)|^2 = {:.12} (closed form {exact:.12})", 2.0 * lg.re);
    }
    println!("zeta(2) = {} (pi^2/6 = {})", zeta(Complex64::new(2.0, 0.0))?.re, PI * PI / 6.0);
    println!("zeta(1/2) = {}", zeta_half());
    let rho = Complex64::new(0.5, 14.134725141734693);
    println!("|zeta(rho_1)| = {:.2e}", zeta(rho)?.norm());
    let zp = zeta_derivative(rho)?;
    println!("zeta'(rho_1) = {zp}, modulus {:.8}", zp.norm());
    let r = gamma_ratio(rho, rho.conj(), 2.0)?;
    println!("Gamma(rho)Gamma(conj rho)/Gamma(rho + conj rho + 2) = {r:.6e}");
    Ok(())
}
