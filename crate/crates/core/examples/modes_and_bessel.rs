// Eigenvalue groups on the unit square and the unit disc, and a few Bessel zeros.

use regional_sensors::spectral::bessel::{bessel_j, bessel_zero, ZeroKind};
use regional_sensors::spectral::{enumerate_modes, Cutoff, Domain, Spectrum};
use regional_sensors::{Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    let square = enumerate_modes(
        &Spectrum::new(Domain::unit_square()),
        Cutoff::square(2),
        &tol,
    )?;
    println!(
        "unit square, cutoff 2: {} modes in {} groups",
        square.len(),
        square.groups.len()
    );
    for (n, g) in square.groups.iter().enumerate() {
        let members: Vec<String> = square
            .group_members(n)
            .iter()
            .map(|m| m.index.to_string())
            .collect();
        println!(
            "  lambda/pi^2 = {:>6.2}  r = {}  {}",
            g.eigenvalue / std::f64::consts::PI.powi(2),
            g.multiplicity,
            members.join(" ")
        );
    }

    let disc = enumerate_modes(
        &Spectrum::new(Domain::disc(1)?),
        Cutoff::Disc {
            max_angular: 2,
            max_radial: 2,
        },
        &tol,
    )?;
    println!(
        "unit disc: {} modes, largest multiplicity {}",
        disc.len(),
        disc.max_multiplicity()
    );
    for m in disc.modes.iter().take(5) {
        println!(
            "  {:<12} lambda = {:.10}",
            m.index.to_string(),
            m.eigenvalue
        );
    }

    for order in 0..3 {
        let z = bessel_zero(order, 1, ZeroKind::Function)?;
        let d = bessel_zero(order, 1, ZeroKind::Derivative)?;
        println!("J_{order}: first zero {z:.12}, first zero of J_{order}' {d:.12}, J_{order}(10) = {:.12}", bessel_j(order, 10.0)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("modes example");
}
