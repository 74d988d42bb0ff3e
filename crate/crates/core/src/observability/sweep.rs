//! Grid sweeps of a sensor template over candidate locations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    constant_from, corollary, disagreements, gamma_verdict, omega_verdict, AnalysisSettings,
    TruncationRecord,
};
use crate::boundary::{BoundaryRegion, GammaBasis};
use crate::error::{invalid, Error, Result};
use crate::real::Real;
use crate::sensors::{
    coefficient_matrix, Coordinate, Location, Sensor, SensorKind, SpatialDistribution,
};
use crate::spectral::{Domain, ModeBasis, Point};

/// Interior grid: `x_k = k·a₁/(nx+1)`, `y_l = l·a₂/(ny+1)` on rectangles;
/// `r_k = k·a/(nx+1)`, `θ_l = 2πl/ny` on discs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub nx: usize,
    pub ny: usize,
}

impl SweepGrid {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self { nx, ny }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid locations in row order (x fastest), exact whenever the domain sizes are.
    pub fn locations(&self, domain: &Domain) -> Result<Vec<Location>> {
        let frac = |k: usize, n: usize, side: Real| -> Result<Real> {
            let (k, n) = (k as i64, n as i64 + 1);
            Ok(match side.exact() {
                Some(e) if !e.times_pi => {
                    let r = e.ratio * num_rational::Rational64::new(k, n);
                    Real::ratio(*r.numer(), *r.denom())
                }
                _ => Real::float(side.value() * k as f64 / n as f64),
            })
        };
        let mut out = Vec::with_capacity(self.len());
        match *domain {
            Domain::Rectangle { a1, a2 } => {
                for l in 1..=self.ny {
                    for k in 1..=self.nx {
                        out.push(Location::Cartesian {
                            x: frac(k, self.nx, a1)?,
                            y: frac(l, self.ny, a2)?,
                        });
                    }
                }
            }
            Domain::Disc { radius } => {
                for l in 0..self.ny {
                    for k in 1..=self.nx {
                        let theta = Real::ratio_pi(2 * l as i64, self.ny as i64);
                        out.push(Location::Polar {
                            r: frac(k, self.nx, radius)?,
                            theta,
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

impl std::str::FromStr for SweepGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("grid must look like <nx>x<ny>, got {s:?}"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(Self {
            nx: a.trim().parse().map_err(|_| bad())?,
            ny: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl SpatialDistribution {
    /// The distribution moved by `(dx, dy)`; radial and angular profiles are unchanged.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let shift = |c: Coordinate| match c {
            Coordinate::X => dx,
            Coordinate::Y => dy,
            _ => 0.0,
        };
        match self.clone() {
            SpatialDistribution::CosineProfile { mut terms } => {
                terms
                    .iter_mut()
                    .for_each(|t| t.center += shift(t.coordinate));
                SpatialDistribution::CosineProfile { terms }
            }
            SpatialDistribution::SymmetricBump {
                center,
                half_width,
                amplitude,
            } => SpatialDistribution::SymmetricBump {
                center: Point::new(center.x + dx, center.y + dy),
                half_width,
                amplitude,
            },
            SpatialDistribution::Tabulated {
                coordinate,
                mut samples,
            } => {
                samples.iter_mut().for_each(|s| s[0] += shift(coordinate));
                SpatialDistribution::Tabulated {
                    coordinate,
                    samples,
                }
            }
            uniform => uniform,
        }
    }
}

/// The template moved so that its reference point sits at `location`.
pub fn place_template(template: &Sensor, location: &Location) -> Result<Sensor> {
    let p = location.point();
    let kind = match &template.kind {
        SensorKind::InternalPointwise { .. } => SensorKind::InternalPointwise {
            location: *location,
        },
        SensorKind::InternalZone {
            support,
            distribution,
        } => {
            let c = support.center();
            SensorKind::InternalZone {
                support: support.recentered(p),
                distribution: distribution.translated(p.x - c.x, p.y - c.y),
            }
        }
        SensorKind::Filament {
            points,
            distribution,
        } => {
            let n = points.len() as f64;
            let (cx, cy) = points
                .iter()
                .fold((0.0, 0.0), |(x, y), q| (x + q.x / n, y + q.y / n));
            let moved = points
                .iter()
                .map(|q| Point::new(q.x + p.x - cx, q.y + p.y - cy))
                .collect();
            SensorKind::Filament {
                points: moved,
                distribution: distribution.translated(p.x - cx, p.y - cy),
            }
        }
        _ => return invalid("only interior pointwise, zone and filament sensors can be swept"),
    };
    Ok(Sensor {
        id: template.id.clone(),
        kind,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub location: Location,
    pub x: f64,
    pub y: f64,
    pub verdict_gamma: Option<bool>,
    pub verdict_omega: Option<bool>,
    pub sigma_min: Option<f64>,
    pub nu: Option<f64>,
    /// Rule name and verdict for every rule that applies at this location.
    pub corollaries: Vec<(String, bool)>,
    /// Why the location could not be evaluated.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDisagreement {
    pub row: usize,
    pub x: f64,
    pub y: f64,
    pub rule: corollary::CorollaryRule,
    pub corollary_pass: bool,
    pub kernel_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub grid: SweepGrid,
    pub template: String,
    pub truncation: TruncationRecord,
    pub rows: Vec<SweepRow>,
    pub disagreements: Vec<SweepDisagreement>,
}

/// Evaluates `fixed` plus the template at every grid location; rows follow
/// the grid order regardless of scheduling.
pub fn placement_sweep(
    template: &Sensor,
    fixed: &[Sensor],
    grid: SweepGrid,
    basis: &ModeBasis,
    region: &BoundaryRegion,
    settings: &AnalysisSettings,
) -> Result<SweepTable> {
    let (rule, tol) = (&settings.rule, &settings.tolerances);
    let gamma = GammaBasis::build(basis, region, settings.gamma, rule, tol)?;
    let locations = grid.locations(basis.domain())?;
    let evaluated: Vec<(SweepRow, Vec<corollary::CorollaryResult>)> = locations
        .par_iter()
        .map(|location| {
            let p = location.point();
            let mut row = SweepRow {
                location: *location,
                x: p.x,
                y: p.y,
                verdict_gamma: None,
                verdict_omega: None,
                sigma_min: None,
                nu: None,
                corollaries: Vec::new(),
                error: None,
            };
            let mut attempt = || -> Result<Vec<corollary::CorollaryResult>> {
                let mut sensors = fixed.to_vec();
                sensors.push(place_template(template, location)?);
                let c = coefficient_matrix(&sensors, basis, rule)?;
                let g = gamma_verdict(&c, basis, &gamma, rule, tol)?;
                let k = constant_from(&c, basis, &gamma, rule, settings.norm)?;
                row.verdict_omega = Some(omega_verdict(&c, basis, tol)?.pass);
                row.verdict_gamma = Some(g.pass);
                row.sigma_min = Some(g.sigma_min);
                row.nu = k.nu;
                let results = corollary::evaluate_selection(
                    &settings.corollaries,
                    &sensors,
                    basis.domain(),
                    settings.corollary_bound,
                    rule,
                )?;
                row.corollaries = results.iter().map(|r| (r.rule.name(), r.pass)).collect();
                Ok(results)
            };
            match attempt() {
                Ok(results) => (row, results),
                Err(e) => {
                    row.error = Some(e.to_string());
                    (row, Vec::new())
                }
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(evaluated.len());
    let mut found = Vec::new();
    for (i, (row, results)) in evaluated.into_iter().enumerate() {
        if let Some(kernel_pass) = row.verdict_gamma {
            for d in disagreements(&results, kernel_pass) {
                found.push(SweepDisagreement {
                    row: i,
                    x: row.x,
                    y: row.y,
                    rule: d.rule,
                    corollary_pass: d.corollary_pass,
                    kernel_pass,
                });
            }
        }
        rows.push(row);
    }
    Ok(SweepTable {
        grid,
        template: template.id.clone(),
        truncation: TruncationRecord::new(basis, settings, gamma.len()),
        rows,
        disagreements: found,
    })
}
