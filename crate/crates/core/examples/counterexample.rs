// One boundary zone sensor on the west edge, `f = cos(πy)`: blind to half of
// a degenerate eigenvalue pair, yet enough to observe the south edge.

use regional_sensors::reconstruction::counterexample_run;
use regional_sensors::Result;

pub fn run_example() -> Result<()> {
    let report = counterexample_run()?;
    let g = &report.degenerate_group;
    println!(
        "whole-domain verdict: {}",
        if report.verdict_omega.pass {
            "pass"
        } else {
            "fail"
        }
    );
    println!(
        "  group {:?}: rank {} of {}",
        g.members, g.rank, g.multiplicity
    );
    println!(
        "south-edge verdict:   {}",
        if report.verdict_gamma.pass {
            "pass"
        } else {
            "fail"
        }
    );
    println!(
        "  kernel sigma_min = {:.6}, nu = {:?} ({})",
        report.verdict_gamma.sigma_min, report.observability.nu, report.observability.norm_label
    );
    println!(
        "reconstruction of mode {} from noiseless outputs:",
        report.initial_mode
    );
    println!(
        "  trace error on Gamma = {:.3e}, on the whole boundary = {:.3e}",
        report.trace_error.gamma, report.trace_error.boundary
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("counterexample");
}
