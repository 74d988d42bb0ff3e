// Simulate noisy outputs of two pointwise sensors and recover the trace of
// the initial state on the south edge.

use regional_sensors::boundary::{BoundaryRegion, Edge, QuadratureRule};
use regional_sensors::reconstruction::{default_times, reconstruct_with, reconstruction_error};
use regional_sensors::sensors::{coefficient_matrix, simulate_outputs, Location, Noise, Sensor};
use regional_sensors::spectral::{enumerate_modes, Cutoff, Domain, ModeIndex, Spectrum};
use regional_sensors::{Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    let rule = QuadratureRule::default();
    let full = enumerate_modes(
        &Spectrum::new(Domain::unit_square()),
        Cutoff::square(2),
        &tol,
    )?;
    let basis = full.select(|_, m| m.eigenvalue > -6.0 * std::f64::consts::PI.powi(2));
    let south = BoundaryRegion::edge(Domain::unit_square(), Edge::South)?;
    let sensors = [
        Sensor::internal_pointwise("p", Location::xy(0.23, 0.57)),
        Sensor::internal_pointwise("q", Location::xy(0.41, 0.13)),
    ];
    let c = coefficient_matrix(&sensors, &basis, &rule)?;
    let mut x0 = vec![0.0; basis.len()];
    x0[basis
        .position(&ModeIndex::rect(0, 0))
        .expect("constant mode")] = 0.5;
    x0[basis.position(&ModeIndex::rect(2, 1)).expect("mode (2,1)")] = 1.0;
    let times = default_times(basis.len());
    for sigma in [0.0, 1e-6, 1e-4] {
        let noise = (sigma > 0.0).then_some(Noise { sigma, seed: 7 });
        let samples = simulate_outputs(&c, &basis, &x0, &times, noise)?;
        let result = reconstruct_with(&samples, &c, &basis, 0.0, &tol)?;
        let err = reconstruction_error(&x0, &result, &basis, &south, &rule)?;
        println!(
            "sigma {sigma:.0e}: Gamma error {:.3e}, boundary error {:.3e}, design sigma ratio {:.2e}",
            err.gamma, err.boundary, result.conditioning.ratio
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("reconstruction");
}
