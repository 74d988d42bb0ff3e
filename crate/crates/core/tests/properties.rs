use proptest::prelude::*;

use regional_sensors::boundary::{
    BoundaryRegion, Edge, EdgeSegment, GammaSpec, PlanarSupport, QuadratureRule, RegionSpec,
};
use regional_sensors::observability::{gamma_kernel_test, omega_strategic_test};
use regional_sensors::reconstruction::{
    coefficient_error, default_times, reconstruct_with, reconstruction_error,
};
use regional_sensors::sensors::{
    coefficient_matrix, simulate_outputs, Location, Noise, Sensor, SpatialDistribution,
};
use regional_sensors::spectral::{enumerate_modes, Cutoff, Domain, ModeBasis, Spectrum};
use regional_sensors::{Real, Tolerances};

fn basis(n: u32) -> ModeBasis {
    enumerate_modes(
        &Spectrum::new(Domain::unit_square()),
        Cutoff::square(n),
        &Tolerances::default(),
    )
    .unwrap()
}

fn point() -> impl Strategy<Value = (f64, f64)> {
    (0.02f64..0.98, 0.02f64..0.98)
}

fn sensors(points: &[(f64, f64)]) -> Vec<Sensor> {
    points
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| Sensor::internal_pointwise(format!("s{k}"), Location::xy(x, y)))
        .collect()
}

fn region(edge: usize, a: f64, len: f64) -> BoundaryRegion {
    let edge = [Edge::South, Edge::East, Edge::North, Edge::West][edge];
    let spec = RegionSpec::Segments(vec![EdgeSegment::new(edge, a, (a + len).min(1.0))]);
    BoundaryRegion::new(Domain::unit_square(), spec).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn simulated_outputs_are_linear_in_the_initial_state(
        pts in prop::collection::vec(point(), 1..4),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        x in prop::collection::vec(-1.0f64..1.0, 16),
        z in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        let basis = basis(3);
        let rule = QuadratureRule::default();
        let c = coefficient_matrix(&sensors(&pts), &basis, &rule).unwrap();
        let times = default_times(basis.len());
        let combo: Vec<f64> = x.iter().zip(&z).map(|(p, q)| a * p + b * q).collect();
        let yx = simulate_outputs(&c, &basis, &x, &times, None).unwrap();
        let yz = simulate_outputs(&c, &basis, &z, &times, None).unwrap();
        let yc = simulate_outputs(&c, &basis, &combo, &times, None).unwrap();
        for i in 0..pts.len() {
            for k in 0..times.len() {
                let expect = a * yx.values[i][k] + b * yz.values[i][k];
                prop_assert!((yc.values[i][k] - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
            }
        }
    }

    #[test]
    fn scaling_a_sensor_keeps_verdicts(
        pts in prop::collection::vec(point(), 1..4),
        factor in prop_oneof![-5.0f64..-0.2, 0.2f64..5.0],
        edge in 0usize..4,
    ) {
        let basis = basis(3);
        let (rule, tol) = (QuadratureRule::default(), Tolerances::default());
        let gamma = region(edge, 0.0, 1.0);
        let plain: Vec<Sensor> = pts
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                let (x, y) = (x.min(0.9), y.min(0.9));
                Sensor::internal_zone(format!("z{k}"), PlanarSupport::rect(x, x + 0.05, y, y + 0.05), SpatialDistribution::uniform())
            })
            .collect();
        let scaled: Vec<Sensor> = plain.iter().map(|s| s.scaled(factor)).collect();
        let o1 = omega_strategic_test(&plain, &basis, &rule, &tol).unwrap();
        let o2 = omega_strategic_test(&scaled, &basis, &rule, &tol).unwrap();
        prop_assert_eq!(o1.pass, o2.pass);
        let g1 = gamma_kernel_test(&plain, &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        let g2 = gamma_kernel_test(&scaled, &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        prop_assert_eq!(g1.pass, g2.pass);
        prop_assert!(close(g2.sigma_min, factor.abs() * g1.sigma_min, 1e-9) || g1.sigma_min < 1e-12 * g1.sigma_max);
    }

    #[test]
    fn sensor_order_does_not_matter(
        pts in prop::collection::vec(point(), 2..5),
        rotate in 1usize..4,
        edge in 0usize..4,
    ) {
        let basis = basis(3);
        let (rule, tol) = (QuadratureRule::default(), Tolerances::default());
        let gamma = region(edge, 0.1, 0.6);
        let mut permuted = pts.clone();
        permuted.rotate_left(rotate % pts.len());
        permuted.reverse();
        let g1 = gamma_kernel_test(&sensors(&pts), &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        let g2 = gamma_kernel_test(&sensors(&permuted), &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        prop_assert_eq!(g1.pass, g2.pass);
        prop_assert!(close(g1.sigma_min, g2.sigma_min, 1e-9) || g1.sigma_min.max(g2.sigma_min) < 1e-12 * g1.sigma_max);
        let o1 = omega_strategic_test(&sensors(&pts), &basis, &rule, &tol).unwrap();
        let o2 = omega_strategic_test(&sensors(&permuted), &basis, &rule, &tol).unwrap();
        prop_assert_eq!(o1.pass, o2.pass);
    }

    #[test]
    fn appending_a_sensor_never_hurts(
        pts in prop::collection::vec(point(), 1..4),
        extra in point(),
        edge in 0usize..4,
        a in 0.0f64..0.5,
        len in 0.1f64..0.5,
    ) {
        let basis = basis(3);
        let (rule, tol) = (QuadratureRule::default(), Tolerances::default());
        let gamma = region(edge, a, len);
        let before = gamma_kernel_test(&sensors(&pts), &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        let mut more = pts.clone();
        more.push(extra);
        let after = gamma_kernel_test(&sensors(&more), &basis, &gamma, GammaSpec::RestrictedModes, &rule, &tol).unwrap();
        prop_assert!(after.sigma_min >= before.sigma_min * (1.0 - 1e-12));
        prop_assert!(!before.pass || after.pass);
    }

    #[test]
    fn gamma_error_never_exceeds_boundary_error(
        x in prop::collection::vec(-1.0f64..1.0, 16),
        y in prop::collection::vec(-1.0f64..1.0, 16),
        edge in 0usize..4,
        a in 0.0f64..0.8,
        len in 0.05f64..1.0,
    ) {
        let basis = basis(3);
        let e = coefficient_error(&x, &y, None, &basis, &region(edge, a, len), &QuadratureRule::default()).unwrap();
        prop_assert!(e.gamma <= e.boundary + 1e-14);
    }

    #[test]
    fn reconstruction_error_is_proportional_to_noise(
        seed in any::<u64>(),
        sigma in 1e-8f64..1e-4,
    ) {
        let basis = basis(1);
        let (rule, tol) = (QuadratureRule::default(), Tolerances::default());
        let s = sensors(&[(0.23, 0.57), (0.41, 0.13)]);
        let c = coefficient_matrix(&s, &basis, &rule).unwrap();
        let x0 = vec![0.4, -0.7, 0.2, 1.0];
        let times = default_times(basis.len());
        let south = region(0, 0.0, 1.0);
        let err = |sigma: f64| {
            let samples = simulate_outputs(&c, &basis, &x0, &times, Some(Noise { sigma, seed })).unwrap();
            let result = reconstruct_with(&samples, &c, &basis, 0.0, &tol).unwrap();
            reconstruction_error(&x0, &result, &basis, &south, &rule).unwrap().gamma
        };
        let (e1, e2) = (err(sigma), err(2.0 * sigma));
        prop_assert!(e2 >= e1);
        prop_assert!(close(e2, 2.0 * e1, 1e-4), "{} vs {}", e2, 2.0 * e1);
    }

    #[test]
    fn exact_reals_round_trip_through_text(n in -500i64..500, d in 1i64..500, pi in any::<bool>()) {
        let r = if pi { Real::ratio_pi(n, d) } else { Real::ratio(n, d) };
        let back: Real = r.to_string().parse().unwrap();
        prop_assert_eq!(back.exact(), r.exact());
        let json = serde_json::to_string(&r).unwrap();
        let back: Real = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.exact(), r.exact());
    }

    #[test]
    fn groups_are_sorted_and_tight(a1 in 0.5f64..2.0, a2 in 0.5f64..2.0, n in 1u32..6) {
        let tol = Tolerances::default();
        let basis = enumerate_modes(
            &Spectrum::new(Domain::rectangle(a1, a2).unwrap()),
            Cutoff::square(n),
            &tol,
        ).unwrap();
        prop_assert_eq!(basis.len(), ((n + 1) * (n + 1)) as usize);
        for w in basis.groups.windows(2) {
            prop_assert!(w[0].eigenvalue > w[1].eigenvalue);
        }
        for g in &basis.groups {
            for m in g.range() {
                let lam = basis.modes[m].eigenvalue;
                prop_assert!((lam - g.eigenvalue).abs() <= tol.group_relative * (1.0 + lam.abs()));
            }
        }
    }
}
