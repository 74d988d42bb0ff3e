//! Sensor taxonomy and the modal output operator.
//!
//! Every sensor reduces to a discrete measure (points with weights that
//! already include the spatial distribution `f` and the length/area
//! element), so the output coefficient of mode `m` is `Σ w·φ_m(p)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryRegion, PlanarSupport, QuadratureRule, RegionSpec};
use crate::error::{invalid, Error, Result};
use crate::real::Real;
use crate::spectral::{Domain, Mode, ModeBasis, Point, Spectrum};

/// Coordinate a one-dimensional profile is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    X,
    Y,
    Radius,
    /// Polar angle in `[0, 2π)`.
    Angle,
    /// Arc length along the sensor's own support (boundary zones and filaments).
    Arc,
}

/// One term `amplitude·cos(wavenumber·(coordinate − center))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineTerm {
    pub coordinate: Coordinate,
    pub wavenumber: Real,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub center: f64,
}

fn one() -> f64 {
    1.0
}

impl CosineTerm {
    pub fn new(coordinate: Coordinate, wavenumber: impl Into<Real>) -> Self {
        Self {
            coordinate,
            wavenumber: wavenumber.into(),
            amplitude: 1.0,
            center: 0.0,
        }
    }
}

/// Spatial distribution `f` of a zone or filament sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialDistribution {
    Uniform {
        #[serde(default = "one")]
        level: f64,
    },
    CosineProfile {
        terms: Vec<CosineTerm>,
    },
    /// `amplitude · 3/(πh²) · (1 − ρ²/h²)²` for distance `ρ < h` from the
    /// center; unit mass in the plane when `amplitude = 1`.
    SymmetricBump {
        center: Point,
        half_width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Piecewise-linear interpolation of `(coordinate, value)` samples.
    Tabulated {
        coordinate: Coordinate,
        samples: Vec<[f64; 2]>,
    },
}

/// Where a distribution is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSite {
    pub point: Point,
    /// Arc length along the support, when the support is a curve.
    pub arc: Option<f64>,
}

fn coordinate_value(c: Coordinate, site: &SampleSite) -> f64 {
    match c {
        Coordinate::X => site.point.x,
        Coordinate::Y => site.point.y,
        Coordinate::Radius => site.point.radius(),
        Coordinate::Angle => site.point.angle(),
        Coordinate::Arc => site.arc.unwrap_or(0.0),
    }
}

impl SpatialDistribution {
    pub fn uniform() -> Self {
        SpatialDistribution::Uniform { level: 1.0 }
    }

    pub fn cosine(coordinate: Coordinate, wavenumber: impl Into<Real>) -> Self {
        SpatialDistribution::CosineProfile {
            terms: vec![CosineTerm::new(coordinate, wavenumber)],
        }
    }

    pub fn bump(center: Point, half_width: f64) -> Self {
        SpatialDistribution::SymmetricBump {
            center,
            half_width,
            amplitude: 1.0,
        }
    }

    pub fn evaluate(&self, site: &SampleSite) -> f64 {
        match self {
            SpatialDistribution::Uniform { level } => *level,
            SpatialDistribution::CosineProfile { terms } => terms
                .iter()
                .map(|t| {
                    t.amplitude
                        * (t.wavenumber.value() * (coordinate_value(t.coordinate, site) - t.center))
                            .cos()
                })
                .sum(),
            SpatialDistribution::SymmetricBump {
                center,
                half_width,
                amplitude,
            } => {
                let rho = site.point.distance(center) / half_width;
                if rho >= 1.0 {
                    0.0
                } else {
                    let b = 1.0 - rho * rho;
                    amplitude * 3.0 / (std::f64::consts::PI * half_width * half_width) * b * b
                }
            }
            SpatialDistribution::Tabulated {
                coordinate,
                samples,
            } => interpolate(samples, coordinate_value(*coordinate, site)),
        }
    }

    /// The same distribution multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self.clone() {
            SpatialDistribution::Uniform { level } => SpatialDistribution::Uniform {
                level: level * factor,
            },
            SpatialDistribution::CosineProfile { mut terms } => {
                terms.iter_mut().for_each(|t| t.amplitude *= factor);
                SpatialDistribution::CosineProfile { terms }
            }
            SpatialDistribution::SymmetricBump {
                center,
                half_width,
                amplitude,
            } => SpatialDistribution::SymmetricBump {
                center,
                half_width,
                amplitude: amplitude * factor,
            },
            SpatialDistribution::Tabulated {
                coordinate,
                mut samples,
            } => {
                samples.iter_mut().for_each(|s| s[1] *= factor);
                SpatialDistribution::Tabulated {
                    coordinate,
                    samples,
                }
            }
        }
    }

    fn uses_arc(&self) -> bool {
        match self {
            SpatialDistribution::CosineProfile { terms } => {
                terms.iter().any(|t| t.coordinate == Coordinate::Arc)
            }
            SpatialDistribution::Tabulated { coordinate, .. } => *coordinate == Coordinate::Arc,
            _ => false,
        }
    }

    fn validate(&self, curve_support: bool) -> Result<()> {
        if self.uses_arc() && !curve_support {
            return invalid("the arc coordinate is only defined on boundary zones and filaments");
        }
        match self {
            SpatialDistribution::Uniform { level } if !level.is_finite() => {
                invalid("uniform level must be finite")
            }
            SpatialDistribution::CosineProfile { terms } if terms.is_empty() => {
                invalid("cosine profile needs at least one term")
            }
            SpatialDistribution::SymmetricBump { half_width, .. }
                if !(*half_width > 0.0 && half_width.is_finite()) =>
            {
                invalid("symmetric bump half-width must be positive")
            }
            SpatialDistribution::Tabulated { samples, .. } => {
                if samples.len() < 2 {
                    return invalid("tabulated distribution needs at least two samples");
                }
                if samples.windows(2).any(|w| w[1][0] <= w[0][0]) {
                    return invalid("tabulated sample coordinates must be strictly increasing");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Checks that tabulated samples cover every site the sensor evaluates.
    fn check_coverage(&self, sites: impl Iterator<Item = SampleSite>) -> Result<()> {
        let SpatialDistribution::Tabulated {
            coordinate,
            samples,
        } = self
        else {
            return Ok(());
        };
        let (lo, hi) = (samples[0][0], samples[samples.len() - 1][0]);
        let slack = 1e-9 * (hi - lo).abs().max(1.0);
        for site in sites {
            let c = coordinate_value(*coordinate, &site);
            if c < lo - slack || c > hi + slack {
                return invalid(format!(
                    "tabulated samples [{lo}, {hi}] do not cover coordinate value {c}"
                ));
            }
        }
        Ok(())
    }
}

fn interpolate(samples: &[[f64; 2]], c: f64) -> f64 {
    let k = samples.partition_point(|s| s[0] <= c);
    if k == 0 {
        return samples[0][1];
    }
    if k == samples.len() {
        return samples[k - 1][1];
    }
    let ([x0, y0], [x1, y1]) = (samples[k - 1], samples[k]);
    y0 + (y1 - y0) * (c - x0) / (x1 - x0)
}

/// Point location in Cartesian or polar (disc) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Location {
    Cartesian { x: Real, y: Real },
    Polar { r: Real, theta: Real },
}

impl Location {
    pub fn xy(x: impl Into<Real>, y: impl Into<Real>) -> Self {
        Location::Cartesian {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn polar(r: impl Into<Real>, theta: impl Into<Real>) -> Self {
        Location::Polar {
            r: r.into(),
            theta: theta.into(),
        }
    }

    pub fn point(&self) -> Point {
        match *self {
            Location::Cartesian { x, y } => Point::new(x.value(), y.value()),
            Location::Polar { r, theta } => Point::from_polar(r.value(), theta.value()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SensorKind {
    InternalZone {
        support: PlanarSupport,
        distribution: SpatialDistribution,
    },
    BoundaryZone {
        support: BoundaryRegion,
        distribution: SpatialDistribution,
    },
    InternalPointwise {
        location: Location,
    },
    BoundaryPointwise {
        location: Location,
    },
    /// Curve through `points` (C¹ cubic interpolation); `f` along arc length.
    Filament {
        points: Vec<Point>,
        distribution: SpatialDistribution,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sensor {
    pub id: String,
    pub kind: SensorKind,
}

/// A measurement node: `y = Σ weight·x(point)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureNode {
    pub point: Point,
    /// Exact polar coordinates for nodes on a disc boundary.
    pub polar: Option<(f64, f64)>,
    pub weight: f64,
}

impl Sensor {
    pub fn new(id: impl Into<String>, kind: SensorKind) -> Self {
        Self {
            id: id.into(),
            kind,
        }
    }

    pub fn internal_pointwise(id: impl Into<String>, location: Location) -> Self {
        Self::new(id, SensorKind::InternalPointwise { location })
    }

    pub fn boundary_pointwise(id: impl Into<String>, location: Location) -> Self {
        Self::new(id, SensorKind::BoundaryPointwise { location })
    }

    pub fn internal_zone(
        id: impl Into<String>,
        support: PlanarSupport,
        distribution: SpatialDistribution,
    ) -> Self {
        Self::new(
            id,
            SensorKind::InternalZone {
                support,
                distribution,
            },
        )
    }

    pub fn boundary_zone(
        id: impl Into<String>,
        support: BoundaryRegion,
        distribution: SpatialDistribution,
    ) -> Self {
        Self::new(
            id,
            SensorKind::BoundaryZone {
                support,
                distribution,
            },
        )
    }

    pub fn filament(
        id: impl Into<String>,
        points: Vec<Point>,
        distribution: SpatialDistribution,
    ) -> Self {
        Self::new(
            id,
            SensorKind::Filament {
                points,
                distribution,
            },
        )
    }

    pub fn renamed(&self, id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: self.kind.clone(),
        }
    }

    pub fn distribution(&self) -> Option<&SpatialDistribution> {
        match &self.kind {
            SensorKind::InternalZone { distribution, .. }
            | SensorKind::BoundaryZone { distribution, .. }
            | SensorKind::Filament { distribution, .. } => Some(distribution),
            _ => None,
        }
    }

    /// Copy with the spatial distribution multiplied by `factor`; pointwise
    /// sensors are returned unchanged.
    pub fn scaled(&self, factor: f64) -> Self {
        let kind = match &self.kind {
            SensorKind::InternalZone {
                support,
                distribution,
            } => SensorKind::InternalZone {
                support: *support,
                distribution: distribution.scaled(factor),
            },
            SensorKind::BoundaryZone {
                support,
                distribution,
            } => SensorKind::BoundaryZone {
                support: support.clone(),
                distribution: distribution.scaled(factor),
            },
            SensorKind::Filament {
                points,
                distribution,
            } => SensorKind::Filament {
                points: points.clone(),
                distribution: distribution.scaled(factor),
            },
            other => other.clone(),
        };
        Self {
            id: self.id.clone(),
            kind,
        }
    }

    /// Discrete measure realizing this sensor, validating its geometry.
    pub fn measure(&self, domain: &Domain, rule: &QuadratureRule) -> Result<Vec<MeasureNode>> {
        let named = |e: Error| match e {
            Error::InvalidArgument(msg) => {
                Error::InvalidArgument(format!("sensor {:?}: {msg}", self.id))
            }
            other => other,
        };
        self.measure_inner(domain, rule).map_err(named)
    }

    fn measure_inner(&self, domain: &Domain, rule: &QuadratureRule) -> Result<Vec<MeasureNode>> {
        match &self.kind {
            SensorKind::InternalPointwise { location } => {
                let p = location.point();
                if !domain.contains(p) {
                    return invalid(format!("location ({}, {}) outside the domain", p.x, p.y));
                }
                Ok(vec![MeasureNode {
                    point: p,
                    polar: polar_of(location, domain),
                    weight: 1.0,
                }])
            }
            SensorKind::BoundaryPointwise { location } => {
                let p = location.point();
                if !domain.on_boundary(p) {
                    return invalid(format!(
                        "location ({}, {}) is not on the boundary",
                        p.x, p.y
                    ));
                }
                let polar = domain.radius().map(|a| (a, p.angle()));
                Ok(vec![MeasureNode {
                    point: p,
                    polar,
                    weight: 1.0,
                }])
            }
            SensorKind::InternalZone {
                support,
                distribution,
            } => {
                distribution.validate(false)?;
                support.check_within(domain)?;
                let nodes = support.nodes(rule);
                distribution.check_coverage(nodes.iter().map(|&(p, _)| SampleSite {
                    point: p,
                    arc: None,
                }))?;
                Ok(nodes
                    .into_iter()
                    .map(|(p, w)| MeasureNode {
                        point: p,
                        polar: None,
                        weight: w * distribution.evaluate(&SampleSite {
                            point: p,
                            arc: None,
                        }),
                    })
                    .collect())
            }
            SensorKind::BoundaryZone {
                support,
                distribution,
            } => {
                distribution.validate(true)?;
                if support.domain() != domain {
                    return invalid("boundary support belongs to a different domain");
                }
                let nodes = support.nodes(rule);
                let site = |n: &crate::boundary::BoundaryNode| SampleSite {
                    point: n.location.point,
                    arc: Some(n.location.arc),
                };
                distribution.check_coverage(nodes.iter().map(site))?;
                Ok(nodes
                    .iter()
                    .map(|n| MeasureNode {
                        point: n.location.point,
                        polar: n.location.polar,
                        weight: n.weight * distribution.evaluate(&site(n)),
                    })
                    .collect())
            }
            SensorKind::Filament {
                points,
                distribution,
            } => {
                distribution.validate(true)?;
                let nodes = filament_nodes(points, rule)?;
                for (p, _, _) in &nodes {
                    if !domain.contains(*p) {
                        return invalid(format!(
                            "filament leaves the domain near ({}, {})",
                            p.x, p.y
                        ));
                    }
                }
                let sites = nodes.iter().map(|&(p, s, _)| SampleSite {
                    point: p,
                    arc: Some(s),
                });
                distribution.check_coverage(sites)?;
                Ok(nodes
                    .into_iter()
                    .map(|(p, s, w)| MeasureNode {
                        point: p,
                        polar: None,
                        weight: w * distribution.evaluate(&SampleSite {
                            point: p,
                            arc: Some(s),
                        }),
                    })
                    .collect())
            }
        }
    }
}

/// Serialized sensor form; boundary supports are resolved against the
/// scenario domain by [`SensorSpec::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum SensorSpec {
    InternalZone {
        id: String,
        support: PlanarSupport,
        distribution: SpatialDistribution,
    },
    BoundaryZone {
        id: String,
        support: RegionSpec,
        distribution: SpatialDistribution,
    },
    InternalPointwise {
        id: String,
        location: Location,
    },
    BoundaryPointwise {
        id: String,
        location: Location,
    },
    Filament {
        id: String,
        points: Vec<Point>,
        distribution: SpatialDistribution,
    },
}

impl SensorSpec {
    pub fn id(&self) -> &str {
        match self {
            SensorSpec::InternalZone { id, .. }
            | SensorSpec::BoundaryZone { id, .. }
            | SensorSpec::InternalPointwise { id, .. }
            | SensorSpec::BoundaryPointwise { id, .. }
            | SensorSpec::Filament { id, .. } => id,
        }
    }

    pub fn resolve(&self, domain: &Domain) -> Result<Sensor> {
        let id = self.id().to_string();
        let kind = match self.clone() {
            SensorSpec::InternalZone {
                support,
                distribution,
                ..
            } => SensorKind::InternalZone {
                support,
                distribution,
            },
            SensorSpec::BoundaryZone {
                support,
                distribution,
                ..
            } => {
                let support = BoundaryRegion::new(*domain, support)
                    .map_err(|e| Error::InvalidArgument(format!("sensor {id:?}: {e}")))?;
                SensorKind::BoundaryZone {
                    support,
                    distribution,
                }
            }
            SensorSpec::InternalPointwise { location, .. } => {
                SensorKind::InternalPointwise { location }
            }
            SensorSpec::BoundaryPointwise { location, .. } => {
                SensorKind::BoundaryPointwise { location }
            }
            SensorSpec::Filament {
                points,
                distribution,
                ..
            } => SensorKind::Filament {
                points,
                distribution,
            },
        };
        Ok(Sensor { id, kind })
    }
}

impl From<&Sensor> for SensorSpec {
    fn from(s: &Sensor) -> Self {
        let id = s.id.clone();
        match s.kind.clone() {
            SensorKind::InternalZone {
                support,
                distribution,
            } => SensorSpec::InternalZone {
                id,
                support,
                distribution,
            },
            SensorKind::BoundaryZone {
                support,
                distribution,
            } => SensorSpec::BoundaryZone {
                id,
                support: support.spec().clone(),
                distribution,
            },
            SensorKind::InternalPointwise { location } => {
                SensorSpec::InternalPointwise { id, location }
            }
            SensorKind::BoundaryPointwise { location } => {
                SensorSpec::BoundaryPointwise { id, location }
            }
            SensorKind::Filament {
                points,
                distribution,
            } => SensorSpec::Filament {
                id,
                points,
                distribution,
            },
        }
    }
}

fn polar_of(location: &Location, domain: &Domain) -> Option<(f64, f64)> {
    match (location, domain) {
        (Location::Polar { r, theta }, Domain::Disc { .. }) => Some((
            r.value(),
            theta.value().rem_euclid(2.0 * std::f64::consts::PI),
        )),
        _ => None,
    }
}

/// Quadrature nodes `(point, arc length, weight)` along a Catmull–Rom
/// interpolation of `points`; weights include `|γ'|`.
fn filament_nodes(points: &[Point], rule: &QuadratureRule) -> Result<Vec<(Point, f64, f64)>> {
    if points.len() < 2 {
        return invalid("filament needs at least two points");
    }
    if points.windows(2).any(|w| w[0].distance(&w[1]) == 0.0) {
        return invalid("consecutive filament points must be distinct");
    }
    let n = points.len();
    let tangent = |k: usize| -> Point {
        let (a, b) = if k == 0 {
            (points[0], points[1])
        } else if k == n - 1 {
            (points[n - 2], points[n - 1])
        } else {
            (points[k - 1], points[k + 1])
        };
        let scale = if k == 0 || k == n - 1 { 1.0 } else { 0.5 };
        Point::new(scale * (b.x - a.x), scale * (b.y - a.y))
    };
    let mut out = Vec::new();
    let mut base = 0.0;
    for k in 0..n - 1 {
        let (p0, p1, m0, m1) = (points[k], points[k + 1], tangent(k), tangent(k + 1));
        let at = |t: f64| {
            let (t2, t3) = (t * t, t * t * t);
            let h = [
                2.0 * t3 - 3.0 * t2 + 1.0,
                t3 - 2.0 * t2 + t,
                -2.0 * t3 + 3.0 * t2,
                t3 - t2,
            ];
            Point::new(
                h[0] * p0.x + h[1] * m0.x + h[2] * p1.x + h[3] * m1.x,
                h[0] * p0.y + h[1] * m0.y + h[2] * p1.y + h[3] * m1.y,
            )
        };
        let speed = |t: f64| {
            let t2 = t * t;
            let d = [
                6.0 * t2 - 6.0 * t,
                3.0 * t2 - 4.0 * t + 1.0,
                -6.0 * t2 + 6.0 * t,
                3.0 * t2 - 2.0 * t,
            ];
            (d[0] * p0.x + d[1] * m0.x + d[2] * p1.x + d[3] * m1.x)
                .hypot(d[0] * p0.y + d[1] * m0.y + d[2] * p1.y + d[3] * m1.y)
        };
        for (t, w) in rule.nodes(0.0, 1.0) {
            let s = base + rule.integrate(0.0, t, speed);
            out.push((at(t), s, w * speed(t)));
        }
        base += rule.integrate(0.0, 1.0, speed);
    }
    Ok(out)
}

/// Arc-length centroid of a filament curve.
pub fn filament_centroid(points: &[Point], rule: &QuadratureRule) -> Result<Point> {
    let nodes = filament_nodes(points, rule)?;
    let total: f64 = nodes.iter().map(|n| n.2).sum();
    let (x, y) = nodes
        .iter()
        .fold((0.0, 0.0), |(x, y), &(p, _, w)| (x + w * p.x, y + w * p.y));
    Ok(Point::new(x / total, y / total))
}

fn evaluate_on(measure: &[MeasureNode], mode: &Mode, domain: &Domain) -> f64 {
    measure
        .iter()
        .map(|n| {
            let v = match n.polar {
                Some((r, theta)) => mode.value_polar(domain, r, theta),
                None => mode.value_at(domain, n.point),
            };
            n.weight * v
        })
        .sum()
}

/// `c = ⟨φ, f⟩` over the sensor support (Dirac pairing for pointwise sensors).
pub fn output_coefficient(
    sensor: &Sensor,
    spectrum: &Spectrum,
    mode: &Mode,
    rule: &QuadratureRule,
) -> Result<f64> {
    let measure = sensor.measure(&spectrum.domain, rule)?;
    Ok(evaluate_on(&measure, mode, &spectrum.domain))
}

/// Output coefficients for every sensor (rows) and mode (columns, basis order).
pub fn coefficient_matrix(
    sensors: &[Sensor],
    basis: &ModeBasis,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    if sensors.is_empty() {
        return invalid("at least one sensor is required");
    }
    let domain = basis.domain();
    let rows: Vec<Vec<f64>> = sensors
        .par_iter()
        .map(|s| {
            let measure = s.measure(domain, rule)?;
            Ok(basis
                .modes
                .iter()
                .map(|m| evaluate_on(&measure, m, domain))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(sensors.len(), basis.len(), |i, m| {
        rows[i][m]
    }))
}

/// Additive Gaussian noise with a mandatory seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    pub sigma: f64,
    pub seed: u64,
}

/// Sensor outputs sampled in time; `values[i][k] = y_i(t_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSamples {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub noise: Option<Noise>,
}

impl OutputSamples {
    pub fn sensor_count(&self) -> usize {
        self.values.len()
    }
}

pub fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return invalid("at least one sample time is required");
    }
    if !times.iter().all(|t| t.is_finite()) || times[0] < 0.0 {
        return invalid("sample times must be finite and nonnegative");
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("sample times must be strictly increasing");
    }
    Ok(())
}

/// `count` times evenly spaced over `[start, end]`, endpoints included.
pub fn uniform_times(start: f64, end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| start + (end - start) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// `y_i(t_k) = Σ_m c_{i,m} e^{λ_m t_k} x0_m`, plus optional noise.
pub fn simulate_outputs(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    x0: &[f64],
    times: &[f64],
    noise: Option<Noise>,
) -> Result<OutputSamples> {
    validate_times(times)?;
    if x0.len() != basis.len() || coefficients.ncols() != basis.len() {
        return invalid(format!(
            "expected {} modal coefficients, got {}",
            basis.len(),
            x0.len()
        ));
    }
    let mut values: Vec<Vec<f64>> = (0..coefficients.nrows())
        .map(|i| {
            times
                .iter()
                .map(|&t| {
                    basis
                        .modes
                        .iter()
                        .enumerate()
                        .map(|(m, mode)| coefficients[(i, m)] * (mode.eigenvalue * t).exp() * x0[m])
                        .sum()
                })
                .collect()
        })
        .collect();
    if let Some(n) = noise {
        if !(n.sigma >= 0.0 && n.sigma.is_finite()) {
            return invalid("noise sigma must be finite and >= 0");
        }
        if n.sigma > 0.0 {
            let normal =
                Normal::new(0.0, n.sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(n.seed);
            for row in values.iter_mut() {
                for v in row.iter_mut() {
                    *v += normal.sample(&mut rng);
                }
            }
        }
    }
    Ok(OutputSamples {
        times: times.to_vec(),
        values,
        noise,
    })
}
