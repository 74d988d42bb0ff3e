// Closed-form placement rules, evaluated with exact rational coordinates.

use regional_sensors::boundary::QuadratureRule;
use regional_sensors::observability::{corollary_check, CorollaryRule};
use regional_sensors::sensors::{Location, Sensor};
use regional_sensors::spectral::Domain;
use regional_sensors::{Real, Result};

pub fn run_example() -> Result<()> {
    let rule = QuadratureRule::default();
    let square = Domain::unit_square();
    for (x, y) in [
        (Real::ratio(1, 3), Real::ratio(1, 2)),
        (Real::ratio(2, 7), Real::ratio(3, 11)),
        (Real::ratio_pi(1, 8), Real::ratio(1, 5)),
    ] {
        let s = Sensor::internal_pointwise("b", Location::xy(x, y));
        let r = corollary_check(CorollaryRule::InternalPoint, &[s], &square, 6, &rule)?;
        println!(
            "point ({x}, {y}): {} witness {:?}",
            if r.pass { "pass" } else { "fail" },
            r.witness
        );
    }
    let disc = Domain::disc(1)?;
    for theta in [
        Real::ratio_pi(1, 1),
        Real::ratio_pi(2, 3),
        Real::ratio(1, 1),
    ] {
        let sensors = [
            Sensor::internal_pointwise("p1", Location::polar(Real::ratio(1, 2), theta)),
            Sensor::internal_pointwise("p2", Location::polar(Real::ratio(1, 2), Real::ratio(0, 1))),
        ];
        let r = corollary_check(CorollaryRule::DiscPointPair, &sensors, &disc, 6, &rule)?;
        println!(
            "disc pair, angle difference {theta}: {} witness {:?}",
            if r.pass { "pass" } else { "fail" },
            r.witness
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("corollary checks");
}
