use std::f64::consts::PI;

use super::*;
use crate::boundary::Edge;
use crate::sensors::{Coordinate, Location, SpatialDistribution};
use crate::spectral::{enumerate_modes, Domain, Spectrum};
use crate::Real;

fn square(n: u32) -> ModeBasis {
    enumerate_modes(
        &Spectrum::new(Domain::unit_square()),
        Cutoff::square(n),
        &Tolerances::default(),
    )
    .unwrap()
}

fn west_sensor() -> Sensor {
    let west = BoundaryRegion::edge(Domain::unit_square(), Edge::West).unwrap();
    Sensor::boundary_zone(
        "gamma0",
        west,
        SpatialDistribution::cosine(Coordinate::Y, Real::ratio_pi(1, 1)),
    )
}

fn south() -> BoundaryRegion {
    BoundaryRegion::edge(Domain::unit_square(), Edge::South).unwrap()
}

fn group_at(basis: &ModeBasis, lambda: f64) -> usize {
    basis
        .groups
        .iter()
        .position(|g| (g.eigenvalue - lambda).abs() < 1e-9 * (1.0 + lambda.abs()))
        .unwrap()
}

fn rule() -> QuadratureRule {
    QuadratureRule::default()
}

#[test]
fn degenerate_group_seen_through_one_boundary_sensor() {
    let basis = square(5);
    let g = assemble_group_matrix(
        &[west_sensor()],
        &basis,
        group_at(&basis, -5.0 * PI * PI),
        &rule(),
        &Tolerances::default(),
    )
    .unwrap();
    assert_eq!(
        g.members,
        vec![ModeIndex::rect(1, 2), ModeIndex::rect(2, 1)]
    );
    assert!(g.entries[(0, 0)].abs() < 1e-12);
    assert!((g.entries[(0, 1)] - 1.0).abs() < 1e-12);
    assert_eq!(g.rank, 1);
    assert_eq!(g.sigma_min, 0.0);
}

#[test]
fn two_points_resolve_a_degenerate_pair() {
    let basis = square(2);
    let sensors = [
        Sensor::internal_pointwise("p", Location::xy(0.23, 0.57)),
        Sensor::internal_pointwise("q", Location::xy(0.41, 0.13)),
    ];
    let g = assemble_group_matrix(
        &sensors,
        &basis,
        group_at(&basis, -5.0 * PI * PI),
        &rule(),
        &Tolerances::default(),
    )
    .unwrap();
    let phi = |i: f64, j: f64, x: f64, y: f64| 2.0 * (i * PI * x).cos() * (j * PI * y).cos();
    let det = phi(1.0, 2.0, 0.23, 0.57) * phi(2.0, 1.0, 0.41, 0.13)
        - phi(2.0, 1.0, 0.23, 0.57) * phi(1.0, 2.0, 0.41, 0.13);
    assert!(det.abs() > 1e-3);
    assert_eq!(g.rank, 2);
}

#[test]
fn blind_group_has_rank_zero() {
    let basis = square(2);
    let center = [Sensor::internal_pointwise("c", Location::xy(0.5, 0.5))];
    let g = assemble_group_matrix(
        &center,
        &basis,
        group_at(&basis, -PI * PI),
        &rule(),
        &Tolerances::default(),
    )
    .unwrap();
    assert_eq!(g.rank, 0);
    assert!(assemble_group_matrix(&center, &basis, 99, &rule(), &Tolerances::default()).is_err());
}

#[test]
fn counterexample_fails_omega_and_passes_gamma() {
    let basis = square(5);
    let tol = Tolerances::default();
    let omega = omega_strategic_test(&[west_sensor()], &basis, &rule(), &tol).unwrap();
    assert!(!omega.pass);
    let g = omega.group(-5.0 * PI * PI, &tol).unwrap();
    assert_eq!((g.multiplicity, g.rank), (2, 1));
    assert!(omega.failing_groups.contains(&g.group));
    let gamma = gamma_kernel_test(
        &[west_sensor()],
        &basis,
        &south(),
        GammaSpec::Cosine { size: 6 },
        &rule(),
        &tol,
    )
    .unwrap();
    assert!(gamma.pass, "{gamma:?}");
    assert!(gamma.sigma_min > 1e-6);
}

#[test]
fn one_sensor_on_a_disc_has_too_few_sensors() {
    let disc = enumerate_modes(
        &Spectrum::new(Domain::disc(1).unwrap()),
        Cutoff::Disc {
            max_angular: 2,
            max_radial: 2,
        },
        &Tolerances::default(),
    )
    .unwrap();
    let s = [Sensor::internal_pointwise("p", Location::polar(0.5, 0.3))];
    let v = omega_strategic_test(&s, &disc, &rule(), &Tolerances::default()).unwrap();
    assert!(!v.pass);
    assert_eq!(
        v.first_failure.unwrap().condition,
        OmegaCondition::TooFewSensors
    );
}

#[test]
fn omega_verdict_matches_brute_force_group_ranks() {
    let basis = square(2);
    let sensors = [
        Sensor::internal_pointwise("p", Location::xy(0.23, 0.57)),
        Sensor::internal_pointwise("q", Location::xy(0.41, 0.13)),
    ];
    let tol = Tolerances::default();
    let v = omega_strategic_test(&sensors, &basis, &rule(), &tol).unwrap();
    let c = coefficient_matrix(&sensors, &basis, &rule()).unwrap();
    let brute = basis.groups.iter().all(|g| {
        let block = c.columns(g.start, g.multiplicity).into_owned();
        let svd = block.svd(false, false);
        let top = svd.singular_values.max();
        svd.singular_values
            .iter()
            .filter(|&&s| s > 1e-8 * top)
            .count()
            == g.multiplicity
    });
    assert_eq!(v.pass, brute);
    assert!(v.pass);
}

#[test]
fn kernel_test_rejects_empty_and_central_sensors() {
    let tol = Tolerances::default();
    let none = gamma_kernel_test(
        &[],
        &square(5),
        &south(),
        GammaSpec::Cosine { size: 6 },
        &rule(),
        &tol,
    )
    .unwrap();
    assert!(!none.pass);
    assert_eq!(none.rows, 0);
    let center = [Sensor::internal_pointwise("c", Location::xy(0.5, 0.5))];
    let v = gamma_kernel_test(
        &center,
        &square(4),
        &south(),
        GammaSpec::RestrictedModes,
        &rule(),
        &tol,
    )
    .unwrap();
    assert!(!v.pass);
    let k = observability_constant(
        &[],
        &square(3),
        &south(),
        GammaSpec::RestrictedModes,
        &rule(),
        &tol,
        NormSurrogate::L2,
    )
    .unwrap();
    assert_eq!((k.sigma_min, k.nu), (0.0, None));
}

#[test]
fn gamma_basis_size_beyond_resolution_is_rejected() {
    let r = gamma_kernel_test(
        &[west_sensor()],
        &square(3),
        &south(),
        GammaSpec::Cosine { size: 10_000 },
        &rule(),
        &Tolerances::default(),
    );
    assert!(matches!(r, Err(crate::Error::InvalidArgument(_))));
}

#[test]
fn effective_multiplicities() {
    let tol = Tolerances::default();
    let basis = square(5);
    let g = group_at(&basis, -5.0 * PI * PI);
    assert_eq!(
        effective_gamma_multiplicity(&basis, g, &south(), &rule(), &tol).unwrap(),
        2
    );
    let small = square(4);
    let full = BoundaryRegion::full(Domain::unit_square());
    for (n, group) in small.groups.iter().enumerate() {
        assert_eq!(
            effective_gamma_multiplicity(&small, n, &full, &rule(), &tol).unwrap(),
            group.multiplicity
        );
    }
}

#[test]
fn duplicating_a_sensor_scales_sigma_by_sqrt_two() {
    let basis = square(4);
    let tol = Tolerances::default();
    let s = Sensor::internal_pointwise("p", Location::xy(0.23, 0.57));
    let one = observability_constant(
        std::slice::from_ref(&s),
        &basis,
        &south(),
        GammaSpec::RestrictedModes,
        &rule(),
        &tol,
        NormSurrogate::L2,
    )
    .unwrap();
    let two = observability_constant(
        &[s.clone(), s.renamed("p2")],
        &basis,
        &south(),
        GammaSpec::RestrictedModes,
        &rule(),
        &tol,
        NormSurrogate::L2,
    )
    .unwrap();
    assert!(one.sigma_min > 0.0);
    assert!((two.sigma_min / one.sigma_min - 2f64.sqrt()).abs() < 1e-10);
}

#[test]
fn analyze_reports_everything() {
    let basis = square(5);
    let mut settings = AnalysisSettings::for_cutoff(basis.cutoff);
    settings.gamma = GammaSpec::Cosine { size: 6 };
    let report = analyze(&[west_sensor()], &basis, &south(), &settings).unwrap();
    assert!(!report.verdict_omega.pass && report.verdict_gamma.pass);
    assert_eq!(report.truncation.gamma_size, 6);
    assert!(report.observability.nu.unwrap() > 0.0);
    assert!(report
        .verdict_omega
        .groups
        .iter()
        .all(|g| g.effective_gamma_multiplicity.is_some()));
    assert!(
        report.corollaries.is_empty()
            || report
                .corollaries
                .iter()
                .all(|c| c.rule == CorollaryRule::OneSideBoundaryZone)
    );
    assert!(analyze(&[], &basis, &south(), &settings).is_err());
}

#[test]
fn sweep_marks_the_center_and_matches_direct_calls() {
    let basis = square(4);
    let settings = AnalysisSettings::for_cutoff(basis.cutoff);
    let template = Sensor::internal_pointwise("b", Location::xy(0.1, 0.1));
    let table = placement_sweep(
        &template,
        &[],
        SweepGrid::new(3, 3),
        &basis,
        &south(),
        &settings,
    )
    .unwrap();
    assert_eq!(table.rows.len(), 9);
    let center = &table.rows[4];
    assert_eq!(
        center.location,
        Location::xy(Real::ratio(1, 2), Real::ratio(1, 2))
    );
    assert_eq!(center.verdict_gamma, Some(false));

    let single = placement_sweep(
        &template,
        &[],
        SweepGrid::new(1, 1),
        &basis,
        &south(),
        &settings,
    )
    .unwrap();
    let direct = gamma_kernel_test(
        &[Sensor::internal_pointwise(
            "b",
            Location::xy(Real::ratio(1, 2), Real::ratio(1, 2)),
        )],
        &basis,
        &south(),
        settings.gamma,
        &settings.rule,
        &settings.tolerances,
    )
    .unwrap();
    assert_eq!(single.rows.len(), 1);
    assert_eq!(single.rows[0].sigma_min, Some(direct.sigma_min));
    assert_eq!(single.rows[0].verdict_gamma, Some(direct.pass));

    let empty = placement_sweep(
        &template,
        &[],
        SweepGrid::new(0, 4),
        &basis,
        &south(),
        &settings,
    )
    .unwrap();
    assert!(empty.rows.is_empty());
    assert_eq!("3x4".parse::<SweepGrid>().unwrap(), SweepGrid::new(3, 4));
}
