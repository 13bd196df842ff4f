//! Adaptive composite Gauss-Legendre quadrature on smooth, oscillatory and
//! jet-valued integrands.

use std::f64::consts::PI;

use hedgehog::kernel::{integrate, integrate_split, lemma1_constant, Jet, QuadratureSpec, Real};

fn main() -> hedgehog::Result<()> {
    let spec = QuadratureSpec::default().with_tolerances(1e-15, 1e-14);
    let smooth = integrate(|x: f64| (-x * x).exp(), 0.0, 3.0, &spec)?;
    println!("int_0^3 exp(-x^2) dx      = {smooth:.16}");
    let wiggly = integrate_split(|y: f64| y.sin().powi(2), 0.0, 40.0 * PI, PI, &spec)?;
    println!("int_0^40pi sin^2 y dy     = {wiggly:.16} (exact {:.16})", 20.0 * PI);
    println!("int_0^pi sin y (3/4 - sin^2 y) dy = {:.16} (exact 1/6)", lemma1_constant(&spec)?);
    // Differentiating under the integral sign with a jet in the parameter.
    let a = Jet::var(2.0);
    let v = integrate(|x: f64| (a * x).sin(), 0.0, 1.0, &spec)?;
    println!("d/da int_0^1 sin(a x) dx at a = 2: {:.16}", v.d1);
    Ok(())
}
