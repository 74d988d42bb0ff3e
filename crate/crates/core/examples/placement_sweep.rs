// Sweep one pointwise sensor over a 5x5 rational grid and compare the kernel
// test with the closed-form rule at every location.

use regional_sensors::boundary::{BoundaryRegion, Edge};
use regional_sensors::observability::{placement_sweep, AnalysisSettings, SweepGrid};
use regional_sensors::sensors::{Location, Sensor};
use regional_sensors::spectral::{enumerate_modes, Cutoff, Domain, Spectrum};
use regional_sensors::Result;

pub fn run_example() -> Result<()> {
    let cutoff = Cutoff::square(4);
    let basis = enumerate_modes(
        &Spectrum::new(Domain::unit_square()),
        cutoff,
        &Default::default(),
    )?;
    let south = BoundaryRegion::edge(Domain::unit_square(), Edge::South)?;
    let template = Sensor::internal_pointwise("b", Location::xy(0.5, 0.5));
    let table = placement_sweep(
        &template,
        &[],
        SweepGrid::new(5, 5),
        &basis,
        &south,
        &AnalysisSettings::for_cutoff(cutoff),
    )?;
    for row in table.rows.chunks(5).rev() {
        let line: Vec<String> = row
            .iter()
            .map(|r| match (r.verdict_gamma, r.sigma_min) {
                (Some(true), Some(s)) => format!("{s:9.2e}"),
                _ => format!("{:>9}", "blind"),
            })
            .collect();
        println!("{}", line.join(" "));
    }
    println!(
        "{} locations where the rule and the kernel test disagree",
        table.disagreements.len()
    );
    for d in table.disagreements.iter().take(5) {
        println!(
            "  ({:.4}, {:.4}) rule {} says {}, kernel says {}",
            d.x, d.y, d.rule, d.corollary_pass, d.kernel_pass
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("placement sweep");
}
