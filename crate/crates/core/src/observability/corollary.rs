//! Closed-form placement rules.
//!
//! Each rule states a sufficient arithmetic condition of the form
//! `i·x ∉ ℕ` for `i = 1..=J`, where `x` is a location ratio such as `b₁/a₁`
//! or an angle difference over `π`. Membership in ℕ (taken as `{0, 1, 2, …}`)
//! is decided exactly when every coordinate involved is an exact rational
//! or rational multiple of π; otherwise the ratio is replaced by its best
//! rational approximation with denominator ≤ 10⁶ and the result is advisory.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::boundary::{Piece, PlanarSupport, QuadratureRule, RegionSpec};
use crate::error::{invalid, Error, Result};
use crate::real::{best_rational, Real};
use crate::sensors::{
    filament_centroid, Location, SampleSite, Sensor, SensorKind, SpatialDistribution,
};
use crate::spectral::{Cutoff, Domain, Point};

const ADVISORY_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryRule {
    /// Rectangle, one interior zone with `f` symmetric about the support center.
    SymmetricZone,
    /// Rectangle, one boundary zone on a single edge, `f` symmetric about its midpoint.
    OneSideBoundaryZone,
    /// Rectangle, one boundary zone on one horizontal and one vertical edge.
    TwoSideBoundaryZone,
    /// Disc, interior sector zones symmetric about their center rays.
    DiscZonePair,
    /// Disc, boundary arc zones symmetric about their midpoints.
    DiscBoundaryZonePair,
    /// Rectangle, one interior pointwise sensor.
    InternalPoint,
    /// Rectangle, one filament with center `b`.
    Filament,
    /// Rectangle, one boundary pointwise sensor.
    BoundaryPoint,
    /// Disc, interior pointwise sensors.
    DiscPointPair,
    /// Disc, boundary pointwise sensors.
    DiscBoundaryPointPair,
}

impl CorollaryRule {
    pub const ALL: [CorollaryRule; 10] = [
        CorollaryRule::SymmetricZone,
        CorollaryRule::OneSideBoundaryZone,
        CorollaryRule::TwoSideBoundaryZone,
        CorollaryRule::DiscZonePair,
        CorollaryRule::DiscBoundaryZonePair,
        CorollaryRule::InternalPoint,
        CorollaryRule::Filament,
        CorollaryRule::BoundaryPoint,
        CorollaryRule::DiscPointPair,
        CorollaryRule::DiscBoundaryPointPair,
    ];

    pub fn name(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    fn on_disc(&self) -> bool {
        matches!(
            self,
            CorollaryRule::DiscZonePair
                | CorollaryRule::DiscBoundaryZonePair
                | CorollaryRule::DiscPointPair
                | CorollaryRule::DiscBoundaryPointPair
        )
    }

    fn pairwise(&self) -> bool {
        self.on_disc()
    }
}

impl fmt::Display for CorollaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CorollaryRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorollaryRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown placement rule {s:?}")))
    }
}

/// Which rules a report evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollarySelection {
    /// Every rule whose hypotheses the sensors satisfy.
    #[default]
    Auto,
    /// Exactly these rules; a hypothesis mismatch is an error.
    Rules(Vec<CorollaryRule>),
}

/// Smallest index violating a condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    pub index: u32,
    /// `index·x`, which lies in ℕ.
    pub value: String,
}

/// A ratio entering a condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub name: String,
    /// Exact rational, `"irrational"`, or the advisory approximation.
    pub value: String,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryResult {
    pub rule: CorollaryRule,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Set when some ratio came from floating-point coordinates.
    pub advisory: bool,
    pub bound: u32,
    pub sensors: Vec<String>,
    pub ratios: Vec<RatioRecord>,
}

/// Default mode bound `J` for a truncation.
pub fn default_bound(cutoff: Cutoff) -> u32 {
    match cutoff {
        Cutoff::Rect { max_i, max_j } => max_i.max(max_j).max(1),
        Cutoff::Disc { max_angular, .. } => max_angular.max(1),
    }
}

/// `rat + pi·π` with rational parts.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Linear {
    rat: Rational64,
    pi: Rational64,
}

impl Linear {
    fn of(r: Real) -> Option<Self> {
        let e = r.exact()?;
        let zero = Rational64::from_integer(0);
        Some(if e.times_pi {
            Linear {
                rat: zero,
                pi: e.ratio,
            }
        } else {
            Linear {
                rat: e.ratio,
                pi: zero,
            }
        })
    }

    fn midpoint(a: Self, b: Self) -> Self {
        let half = Rational64::new(1, 2);
        Linear {
            rat: (a.rat + b.rat) * half,
            pi: (a.pi + b.pi) * half,
        }
    }

    fn minus(a: Self, b: Self) -> Self {
        Linear {
            rat: a.rat - b.rat,
            pi: a.pi - b.pi,
        }
    }

    fn abs(self) -> Self {
        let v = to_f64(self.rat) + PI * to_f64(self.pi);
        if v < 0.0 {
            Linear {
                rat: -self.rat,
                pi: -self.pi,
            }
        } else {
            self
        }
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact quotient of two [`Linear`] values.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Quotient {
    Rational(Rational64),
    Irrational,
}

fn quotient(b: Linear, a: Linear) -> Option<Quotient> {
    let zero = Rational64::from_integer(0);
    if a.rat == zero && a.pi == zero {
        return None;
    }
    // b/a is rational iff b = k·a componentwise, since π is irrational.
    if b.rat * a.pi != b.pi * a.rat {
        return Some(Quotient::Irrational);
    }
    Some(Quotient::Rational(if a.rat != zero {
        b.rat / a.rat
    } else {
        b.pi / a.pi
    }))
}

/// A location ratio `x` with its provenance.
#[derive(Debug, Clone)]
struct Ratio {
    name: String,
    value: Quotient,
    exact: bool,
}

impl Ratio {
    fn new(name: &str, exact: Option<Quotient>, fallback: f64) -> Self {
        match exact {
            Some(q) => Ratio {
                name: name.into(),
                value: q,
                exact: true,
            },
            None => Ratio {
                name: name.into(),
                value: Quotient::Rational(best_rational(fallback, ADVISORY_DENOMINATOR)),
                exact: false,
            },
        }
    }

    /// `num/den` for coordinates given as reals.
    fn of(name: &str, num: Option<Linear>, den: Option<Linear>, fallback: f64) -> Self {
        Self::new(
            name,
            num.zip(den).and_then(|(n, d)| quotient(n, d)),
            fallback,
        )
    }

    fn record(&self) -> RatioRecord {
        let value = match self.value {
            Quotient::Rational(r) => r.to_string(),
            Quotient::Irrational => "irrational".into(),
        };
        RatioRecord {
            name: self.name.clone(),
            value,
            exact: self.exact,
        }
    }
}

/// One condition `index·x ∉ ℕ`, or `x ∉ ℕ` when `scaled` is false.
struct Condition {
    label: String,
    ratio: Ratio,
    scaled: bool,
}

fn first_violation(c: &Condition, bound: u32) -> Option<Witness> {
    let Quotient::Rational(x) = c.ratio.value else {
        return None;
    };
    (1..=bound).find_map(|i| {
        let v = if c.scaled {
            x * Rational64::from_integer(i64::from(i))
        } else {
            x
        };
        (v.is_integer() && *v.numer() >= 0).then(|| Witness {
            condition: c.label.clone(),
            index: i,
            value: v.to_string(),
        })
    })
}

fn mismatch<T>(rule: CorollaryRule, msg: impl fmt::Display) -> Result<T> {
    invalid(format!("placement rule {rule} does not apply: {msg}"))
}

/// Evaluates one rule for the given sensors.
pub fn corollary_check(
    rule: CorollaryRule,
    sensors: &[Sensor],
    domain: &Domain,
    bound: u32,
    quadrature: &QuadratureRule,
) -> Result<CorollaryResult> {
    if bound == 0 {
        return invalid("the mode bound J must be at least 1");
    }
    if rule.on_disc() != domain.is_disc() {
        return mismatch(
            rule,
            if rule.on_disc() {
                "requires a disc domain"
            } else {
                "requires a rectangle domain"
            },
        );
    }
    let used = if rule.pairwise() {
        if sensors.len() < 2 {
            return mismatch(rule, "needs at least two sensors");
        }
        2
    } else {
        if sensors.len() != 1 {
            return mismatch(rule, "needs exactly one sensor");
        }
        1
    };
    for s in sensors {
        if !kind_matches(rule, &s.kind) {
            return mismatch(
                rule,
                format!("sensor {:?} has the wrong kind or support", s.id),
            );
        }
    }
    let conditions = conditions(rule, &sensors[..used], domain, quadrature)?;
    let witness = conditions.iter().find_map(|c| first_violation(c, bound));
    Ok(CorollaryResult {
        rule,
        pass: witness.is_none(),
        witness,
        advisory: conditions.iter().any(|c| !c.ratio.exact),
        bound,
        sensors: sensors[..used].iter().map(|s| s.id.clone()).collect(),
        ratios: conditions.iter().map(|c| c.ratio.record()).collect(),
    })
}

fn kind_matches(rule: CorollaryRule, kind: &SensorKind) -> bool {
    use CorollaryRule as R;
    match (rule, kind) {
        (
            R::SymmetricZone,
            SensorKind::InternalZone {
                support: PlanarSupport::Rect { .. },
                ..
            },
        ) => true,
        (R::OneSideBoundaryZone, SensorKind::BoundaryZone { support, .. }) => {
            matches!(support.spec(), RegionSpec::Segments(s) if s.len() == 1)
        }
        (R::TwoSideBoundaryZone, SensorKind::BoundaryZone { support, .. }) => {
            match support.spec() {
                RegionSpec::Segments(s) => {
                    s.len() == 2 && s[0].edge.is_horizontal() != s[1].edge.is_horizontal()
                }
                _ => false,
            }
        }
        (
            R::DiscZonePair,
            SensorKind::InternalZone {
                support: PlanarSupport::Sector { .. },
                ..
            },
        ) => true,
        (R::DiscBoundaryZonePair, SensorKind::BoundaryZone { support, .. }) => {
            matches!(support.spec(), RegionSpec::Arcs(a) if a.len() == 1)
        }
        (R::InternalPoint | R::DiscPointPair, SensorKind::InternalPointwise { .. }) => true,
        (R::BoundaryPoint | R::DiscBoundaryPointPair, SensorKind::BoundaryPointwise { .. }) => true,
        (R::Filament, SensorKind::Filament { .. }) => true,
        _ => false,
    }
}

fn side_lengths(domain: &Domain) -> (Real, Real) {
    match *domain {
        Domain::Rectangle { a1, a2 } => (a1, a2),
        Domain::Disc { radius } => (radius, radius),
    }
}

fn midpoint(a: Real, b: Real) -> (Option<Linear>, f64) {
    (
        Linear::of(a)
            .zip(Linear::of(b))
            .map(|(a, b)| Linear::midpoint(a, b)),
        0.5 * (a.value() + b.value()),
    )
}

fn location_xy(location: &Location) -> ((Option<Linear>, f64), (Option<Linear>, f64)) {
    match *location {
        Location::Cartesian { x, y } => ((Linear::of(x), x.value()), (Linear::of(y), y.value())),
        Location::Polar { .. } => {
            let p = location.point();
            ((None, p.x), (None, p.y))
        }
    }
}

fn location_angle(location: &Location) -> (Option<Linear>, f64) {
    match *location {
        Location::Polar { theta, .. } => (Linear::of(theta), theta.value()),
        Location::Cartesian { .. } => (None, location.point().angle()),
    }
}

/// `|θ₁ − θ₂| / π`.
fn angle_ratio(t1: (Option<Linear>, f64), t2: (Option<Linear>, f64)) -> Ratio {
    let pi = Linear {
        rat: Rational64::from_integer(0),
        pi: Rational64::from_integer(1),
    };
    let diff = t1.0.zip(t2.0).map(|(a, b)| Linear::minus(a, b).abs());
    Ratio::of(
        "(theta1-theta2)/pi",
        diff,
        Some(pi),
        (t1.1 - t2.1).abs() / PI,
    )
}

fn scaled(label: &str, ratio: Ratio) -> Condition {
    Condition {
        label: label.into(),
        ratio,
        scaled: true,
    }
}

fn conditions(
    rule: CorollaryRule,
    sensors: &[Sensor],
    domain: &Domain,
    quadrature: &QuadratureRule,
) -> Result<Vec<Condition>> {
    use CorollaryRule as R;
    let (a1, a2) = side_lengths(domain);
    let (l1, l2) = (Linear::of(a1), Linear::of(a2));
    let s0 = &sensors[0];
    Ok(match (rule, &s0.kind) {
        (
            R::SymmetricZone,
            SensorKind::InternalZone {
                support: PlanarSupport::Rect { x0, x1, y0, y1 },
                distribution,
            },
        ) => {
            let (cx, cy) = (midpoint(*x0, *x1), midpoint(*y0, *y1));
            let c = Point::new(cx.1, cy.1);
            check_planar_symmetry(
                rule,
                distribution,
                s0,
                |p| Point::new(2.0 * c.x - p.x, p.y),
                quadrature,
            )?;
            check_planar_symmetry(
                rule,
                distribution,
                s0,
                |p| Point::new(p.x, 2.0 * c.y - p.y),
                quadrature,
            )?;
            vec![
                scaled(
                    "i*xi01/a1",
                    Ratio::of("xi01/a1", cx.0, l1, cx.1 / a1.value()),
                ),
                scaled(
                    "j*xi02/a2",
                    Ratio::of("xi02/a2", cy.0, l2, cy.1 / a2.value()),
                ),
            ]
        }
        (
            R::OneSideBoundaryZone | R::TwoSideBoundaryZone,
            SensorKind::BoundaryZone {
                support,
                distribution,
            },
        ) => {
            check_boundary_symmetry(rule, s0, distribution, support)?;
            let RegionSpec::Segments(segs) = support.spec() else {
                unreachable!("checked by kind_matches")
            };
            segs.iter()
                .map(|seg| {
                    let m = midpoint(seg.start, seg.end);
                    let (name, a, l) = if seg.edge.is_horizontal() {
                        ("eta01/a1", a1, l1)
                    } else {
                        ("eta02/a2", a2, l2)
                    };
                    let label = if seg.edge.is_horizontal() {
                        "i*eta01/a1"
                    } else {
                        "j*eta02/a2"
                    };
                    scaled(label, Ratio::of(name, m.0, l, m.1 / a.value()))
                })
                .collect()
        }
        (R::InternalPoint, SensorKind::InternalPointwise { location }) => {
            let (x, y) = location_xy(location);
            vec![
                scaled("i*b1/a1", Ratio::of("b1/a1", x.0, l1, x.1 / a1.value())),
                scaled("j*b2/a2", Ratio::of("b2/a2", y.0, l2, y.1 / a2.value())),
            ]
        }
        (R::BoundaryPoint, SensorKind::BoundaryPointwise { location }) => {
            let (x, y) = location_xy(location);
            let on_vertical =
                x.1.abs() <= 1e-9 * a1.value() || (x.1 - a1.value()).abs() <= 1e-9 * a1.value();
            if on_vertical {
                vec![scaled(
                    "i*b2/a2",
                    Ratio::of("b2/a2", y.0, l2, y.1 / a2.value()),
                )]
            } else {
                vec![scaled(
                    "i*b1/a1",
                    Ratio::of("b1/a1", x.0, l1, x.1 / a1.value()),
                )]
            }
        }
        (R::Filament, SensorKind::Filament { points, .. }) => {
            // The printed condition `i·b/(i·a)` does not depend on i.
            let b = filament_centroid(points, quadrature)?;
            vec![
                Condition {
                    label: "b1/a1".into(),
                    ratio: Ratio::of("b1/a1", None, None, b.x / a1.value()),
                    scaled: false,
                },
                Condition {
                    label: "b2/a2".into(),
                    ratio: Ratio::of("b2/a2", None, None, b.y / a2.value()),
                    scaled: false,
                },
            ]
        }
        (
            R::DiscZonePair | R::DiscBoundaryZonePair | R::DiscPointPair | R::DiscBoundaryPointPair,
            _,
        ) => {
            let angles = sensors
                .iter()
                .map(|s| disc_angle(rule, s, quadrature))
                .collect::<Result<Vec<_>>>()?;
            vec![scaled(
                "i*(theta1-theta2)/pi",
                angle_ratio(angles[0], angles[1]),
            )]
        }
        _ => {
            return mismatch(
                rule,
                format!("sensor {:?} has the wrong kind or support", s0.id),
            )
        }
    })
}

/// Center angle of a disc sensor, after checking its symmetry hypothesis.
fn disc_angle(
    rule: CorollaryRule,
    s: &Sensor,
    quadrature: &QuadratureRule,
) -> Result<(Option<Linear>, f64)> {
    match &s.kind {
        SensorKind::InternalZone {
            support: PlanarSupport::Sector { theta0, theta1, .. },
            distribution,
        } => {
            let t = midpoint(*theta0, *theta1);
            let (c, d) = ((2.0 * t.1).cos(), (2.0 * t.1).sin());
            check_planar_symmetry(
                rule,
                distribution,
                s,
                |p| Point::new(p.x * c + p.y * d, p.x * d - p.y * c),
                quadrature,
            )?;
            Ok(t)
        }
        SensorKind::BoundaryZone {
            support,
            distribution,
        } => {
            check_boundary_symmetry(rule, s, distribution, support)?;
            let RegionSpec::Arcs(arcs) = support.spec() else {
                unreachable!("checked by kind_matches")
            };
            Ok(midpoint(arcs[0].start, arcs[0].end))
        }
        SensorKind::InternalPointwise { location } | SensorKind::BoundaryPointwise { location } => {
            Ok(location_angle(location))
        }
        _ => mismatch(
            rule,
            format!("sensor {:?} has the wrong kind or support", s.id),
        ),
    }
}

fn symmetry_tolerance(values: impl Iterator<Item = f64>) -> f64 {
    1e-9 * (1.0 + values.fold(0.0, |m: f64, v| m.max(v.abs())))
}

fn check_planar_symmetry(
    rule: CorollaryRule,
    f: &SpatialDistribution,
    sensor: &Sensor,
    mirror: impl Fn(Point) -> Point,
    quadrature: &QuadratureRule,
) -> Result<()> {
    let SensorKind::InternalZone { support, .. } = &sensor.kind else {
        return Ok(());
    };
    let pairs: Vec<(f64, f64)> = support
        .nodes(quadrature)
        .into_iter()
        .map(|(p, _)| {
            let site = |q| SampleSite {
                point: q,
                arc: None,
            };
            (f.evaluate(&site(p)), f.evaluate(&site(mirror(p))))
        })
        .collect();
    let tol = symmetry_tolerance(pairs.iter().map(|p| p.0));
    if pairs.iter().any(|(a, b)| (a - b).abs() > tol) {
        return mismatch(
            rule,
            format!(
                "the distribution of sensor {:?} is not symmetric",
                sensor.id
            ),
        );
    }
    Ok(())
}

/// `f` must be even about the midpoint of every piece.
fn check_boundary_symmetry(
    rule: CorollaryRule,
    sensor: &Sensor,
    f: &SpatialDistribution,
    support: &crate::boundary::BoundaryRegion,
) -> Result<()> {
    let mut pairs = Vec::new();
    let mut base = 0.0;
    for piece in support.pieces() {
        let len = Piece::length(piece);
        for k in 0..16 {
            let u = (k as f64 + 0.5) * len / 16.0;
            let site = |s: f64| -> Result<f64> {
                let loc = support.resolve(s)?;
                Ok(f.evaluate(&SampleSite {
                    point: loc.point,
                    arc: Some(s),
                }))
            };
            pairs.push((site(base + u)?, site(base + len - u)?));
        }
        base += len;
    }
    let tol = symmetry_tolerance(pairs.iter().map(|p| p.0));
    if pairs.iter().any(|(a, b)| (a - b).abs() > tol) {
        return mismatch(
            rule,
            format!(
                "the distribution of sensor {:?} is not symmetric on its support",
                sensor.id
            ),
        );
    }
    Ok(())
}

/// Results for a selection; automatic selection skips rules whose
/// hypotheses do not hold.
pub fn evaluate_selection(
    selection: &CorollarySelection,
    sensors: &[Sensor],
    domain: &Domain,
    bound: u32,
    quadrature: &QuadratureRule,
) -> Result<Vec<CorollaryResult>> {
    match selection {
        CorollarySelection::Auto => Ok(CorollaryRule::ALL
            .into_iter()
            .filter_map(|r| corollary_check(r, sensors, domain, bound, quadrature).ok())
            .collect()),
        CorollarySelection::Rules(rules) => rules
            .iter()
            .map(|&r| corollary_check(r, sensors, domain, bound, quadrature))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{BoundaryRegion, Edge, EdgeSegment};
    use crate::sensors::Coordinate;

    fn check(
        rule: CorollaryRule,
        sensors: &[Sensor],
        domain: &Domain,
        bound: u32,
    ) -> Result<CorollaryResult> {
        corollary_check(rule, sensors, domain, bound, &QuadratureRule::default())
    }

    #[test]
    fn internal_point_third_fails_at_three() {
        let s = Sensor::internal_pointwise("b", Location::xy(Real::ratio(1, 3), Real::ratio(1, 2)));
        let r = check(
            CorollaryRule::InternalPoint,
            &[s],
            &Domain::unit_square(),
            3,
        )
        .unwrap();
        assert!(!r.pass && !r.advisory);
        let w = r.witness.unwrap();
        assert_eq!(
            (w.condition.as_str(), w.index, w.value.as_str()),
            ("i*b1/a1", 3, "1")
        );
    }

    #[test]
    fn irrational_location_always_passes() {
        let s = Sensor::internal_pointwise(
            "b",
            Location::xy(Real::ratio_pi(1, 5), Real::ratio_pi(1, 7)),
        );
        let r = check(
            CorollaryRule::InternalPoint,
            &[s],
            &Domain::unit_square(),
            50,
        )
        .unwrap();
        assert!(r.pass && !r.advisory);
        assert_eq!(r.ratios[0].value, "irrational");
    }

    #[test]
    fn float_location_is_advisory() {
        let s = Sensor::internal_pointwise("b", Location::xy(0.37, 0.71));
        let r = check(
            CorollaryRule::InternalPoint,
            &[s],
            &Domain::unit_square(),
            5,
        )
        .unwrap();
        assert!(r.pass && r.advisory);
    }

    #[test]
    fn angle_difference_pi_fails_at_one() {
        let disc = Domain::disc(1).unwrap();
        let sensors = [
            Sensor::internal_pointwise(
                "p1",
                Location::polar(Real::ratio(1, 2), Real::ratio_pi(1, 1)),
            ),
            Sensor::internal_pointwise("p2", Location::polar(Real::ratio(1, 2), Real::ratio(0, 1))),
        ];
        let r = check(CorollaryRule::DiscPointPair, &sensors, &disc, 4).unwrap();
        assert!(!r.pass);
        assert_eq!(r.witness.unwrap().index, 1);
        let sensors = [
            Sensor::internal_pointwise("p1", Location::polar(Real::ratio(1, 2), Real::ratio(1, 1))),
            Sensor::internal_pointwise("p2", Location::polar(Real::ratio(1, 2), Real::ratio(0, 1))),
        ];
        let r = check(CorollaryRule::DiscPointPair, &sensors, &disc, 4).unwrap();
        assert!(r.pass && !r.advisory);
    }

    #[test]
    fn boundary_zone_midpoint() {
        let square = Domain::unit_square();
        let region = BoundaryRegion::new(
            square,
            RegionSpec::Segments(vec![EdgeSegment::new(
                Edge::North,
                Real::ratio(27, 100),
                Real::ratio(47, 100),
            )]),
        )
        .unwrap();
        let s = Sensor::boundary_zone("g", region, SpatialDistribution::uniform());
        let r = check(
            CorollaryRule::OneSideBoundaryZone,
            std::slice::from_ref(&s),
            &square,
            5,
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.ratios[0].value, "37/100");
        assert!(
            check(CorollaryRule::OneSideBoundaryZone, &[s], &square, 100)
                .unwrap()
                .witness
                .is_some()
        );
    }

    #[test]
    fn hypotheses_are_enforced() {
        let square = Domain::unit_square();
        let zone = Sensor::internal_zone(
            "z",
            PlanarSupport::rect(0.1, 0.3, 0.1, 0.3),
            SpatialDistribution::Tabulated {
                coordinate: Coordinate::X,
                samples: vec![[0.0, 0.0], [1.0, 1.0]],
            },
        );
        assert!(check(
            CorollaryRule::SymmetricZone,
            std::slice::from_ref(&zone),
            &square,
            3
        )
        .is_err());
        assert!(check(
            CorollaryRule::InternalPoint,
            std::slice::from_ref(&zone),
            &square,
            3
        )
        .is_err());
        let results = evaluate_selection(
            &CorollarySelection::Auto,
            &[zone],
            &square,
            3,
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(results.is_empty());
        let even = Sensor::internal_zone(
            "z",
            PlanarSupport::rect(0.1, 0.3, 0.1, 0.3),
            SpatialDistribution::uniform(),
        );
        let results = evaluate_selection(
            &CorollarySelection::Auto,
            &[even],
            &square,
            3,
            &QuadratureRule::default(),
        )
        .unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].rule, CorollaryRule::SymmetricZone);
    }

    #[test]
    fn rule_names_round_trip() {
        for r in CorollaryRule::ALL {
            assert_eq!(r.name().parse::<CorollaryRule>().unwrap(), r);
        }
        assert!("nope".parse::<CorollaryRule>().is_err());
    }

    #[test]
    fn exact_quotients() {
        let l = |n, d| Linear::of(Real::ratio(n, d)).unwrap();
        let p = |n, d| Linear::of(Real::ratio_pi(n, d)).unwrap();
        assert_eq!(
            quotient(l(1, 3), l(2, 1)),
            Some(Quotient::Rational(Rational64::new(1, 6)))
        );
        assert_eq!(
            quotient(p(1, 2), p(1, 4)),
            Some(Quotient::Rational(Rational64::from_integer(2)))
        );
        assert_eq!(quotient(l(1, 2), p(1, 1)), Some(Quotient::Irrational));
        assert_eq!(
            quotient(l(0, 1), p(1, 1)),
            Some(Quotient::Rational(Rational64::from_integer(0)))
        );
        assert_eq!(quotient(l(1, 2), l(0, 1)), None);
    }
}
