//! Boundary sub-regions Γ ⊆ ∂Ω, traces of eigenfunctions on them, and the
//! quadrature that realizes `L²(Γ)` pairings and planar sensor integrals.
//!
//! Rectangle regions are lists of edge segments. A segment's interval is
//! given in the coordinate running along its edge (`x` for south/north,
//! `y` for east/west). The region's own arc-length coordinate `s` visits the
//! segments in canonical order (south, east, north, west, then by start) and
//! traverses each one counterclockwise, so the south edge starts at `(0,0)`.
//! Disc regions are half-open angular arcs `[θ_lo, θ_hi) ⊆ [0, 2π]`.

pub mod gamma;
pub mod quadrature;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::real::Real;
use crate::spectral::{Domain, Mode, ModeBasis, ModeIndex, Point, Spectrum};

pub use gamma::{GammaBasis, GammaSpec, NormSurrogate};
pub use quadrature::{QuadratureParams, QuadratureRule};

const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    South,
    East,
    North,
    West,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::South, Edge::East, Edge::North, Edge::West];

    /// Length of this edge on a rectangle with sides `(a1, a2)`.
    pub fn length(&self, a1: f64, a2: f64) -> f64 {
        match self {
            Edge::South | Edge::North => a1,
            Edge::East | Edge::West => a2,
        }
    }

    /// Whether the edge runs along the `x` axis.
    pub fn is_horizontal(&self) -> bool {
        matches!(self, Edge::South | Edge::North)
    }
}

/// Interval `[start, end)` of an edge, in that edge's axis coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSegment {
    pub edge: Edge,
    pub start: Real,
    pub end: Real,
}

impl EdgeSegment {
    pub fn new(edge: Edge, start: impl Into<Real>, end: impl Into<Real>) -> Self {
        Self {
            edge,
            start: start.into(),
            end: end.into(),
        }
    }

    pub fn length(&self) -> f64 {
        self.end.value() - self.start.value()
    }
}

/// Angular interval `[start, end)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularArc {
    pub start: Real,
    pub end: Real,
}

impl AngularArc {
    pub fn new(start: impl Into<Real>, end: impl Into<Real>) -> Self {
        Self {
            start: start.into(),
            end: end.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Segments(Vec<EdgeSegment>),
    Arcs(Vec<AngularArc>),
    /// The whole boundary of the domain.
    Full,
}

/// A validated boundary sub-region with positive length.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRegion {
    domain: Domain,
    pieces: Vec<Piece>,
    spec: RegionSpec,
}

/// One connected piece of a region, parameterized by local arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment { edge: Edge, start: f64, end: f64 },
    Arc { start: f64, end: f64, radius: f64 },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { start, end, .. } => end - start,
            Piece::Arc { start, end, radius } => radius * (end - start),
        }
    }

    /// Boundary location at local arc length `u`.
    fn locate(&self, domain: &Domain, u: f64) -> (Point, Option<(f64, f64)>) {
        match *self {
            Piece::Segment { edge, start, end } => {
                let (a1, a2) = domain.sides().unwrap_or((1.0, 1.0));
                let p = match edge {
                    Edge::South => Point::new(start + u, 0.0),
                    Edge::East => Point::new(a1, start + u),
                    Edge::North => Point::new(end - u, a2),
                    Edge::West => Point::new(0.0, end - u),
                };
                (p, None)
            }
            Piece::Arc { start, radius, .. } => {
                let theta = start + u / radius;
                (Point::from_polar(radius, theta), Some((radius, theta)))
            }
        }
    }
}

/// A point of a region, with every coordinate a caller may need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLocation {
    /// Region arc-length coordinate `s`.
    pub arc: f64,
    /// Index of the piece containing the point.
    pub piece: usize,
    /// Arc length from the start of that piece.
    pub offset: f64,
    pub point: Point,
    /// `(r, θ)` on disc domains.
    pub polar: Option<(f64, f64)>,
}

/// A quadrature node on a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode {
    pub location: BoundaryLocation,
    pub weight: f64,
}

impl BoundaryRegion {
    pub fn new(domain: Domain, spec: RegionSpec) -> Result<Self> {
        domain.validate()?;
        let pieces = match (&spec, domain) {
            (RegionSpec::Full, Domain::Rectangle { a1, a2 }) => Edge::ALL
                .iter()
                .map(|&edge| Piece::Segment {
                    edge,
                    start: 0.0,
                    end: edge.length(a1.value(), a2.value()),
                })
                .collect(),
            (RegionSpec::Full, Domain::Disc { radius }) => {
                vec![Piece::Arc {
                    start: 0.0,
                    end: 2.0 * PI,
                    radius: radius.value(),
                }]
            }
            (RegionSpec::Segments(segs), Domain::Rectangle { a1, a2 }) => {
                let mut segs = segs.clone();
                segs.sort_by(|a, b| {
                    a.edge
                        .cmp(&b.edge)
                        .then(a.start.value().total_cmp(&b.start.value()))
                });
                let mut pieces = Vec::with_capacity(segs.len());
                for s in &segs {
                    let len = s.edge.length(a1.value(), a2.value());
                    let (lo, hi) = (s.start.value(), s.end.value());
                    if !(lo.is_finite() && hi.is_finite())
                        || lo < -SLACK * len
                        || hi > len * (1.0 + SLACK)
                        || lo >= hi
                    {
                        return invalid(format!(
                            "segment [{}, {}) on the {:?} edge must satisfy 0 <= start < end <= {len}",
                            s.start, s.end, s.edge
                        ));
                    }
                    pieces.push(Piece::Segment {
                        edge: s.edge,
                        start: lo.max(0.0),
                        end: hi.min(len),
                    });
                }
                for w in pieces.windows(2) {
                    if let (
                        Piece::Segment {
                            edge: e0,
                            end: end0,
                            ..
                        },
                        Piece::Segment {
                            edge: e1,
                            start: start1,
                            ..
                        },
                    ) = (w[0], w[1])
                    {
                        if e0 == e1 && start1 < end0 {
                            return invalid(format!("segments on the {e0:?} edge overlap"));
                        }
                    }
                }
                pieces
            }
            (RegionSpec::Arcs(arcs), Domain::Disc { radius }) => {
                let mut arcs = arcs.clone();
                arcs.sort_by(|a, b| a.start.value().total_cmp(&b.start.value()));
                let mut pieces = Vec::with_capacity(arcs.len());
                for a in &arcs {
                    let (lo, hi) = (a.start.value(), a.end.value());
                    if !(lo.is_finite() && hi.is_finite())
                        || lo < -SLACK
                        || hi > 2.0 * PI * (1.0 + SLACK)
                        || lo >= hi
                    {
                        return invalid(format!(
                            "arc [{}, {}) must satisfy 0 <= start < end <= 2pi",
                            a.start, a.end
                        ));
                    }
                    pieces.push(Piece::Arc {
                        start: lo.max(0.0),
                        end: hi.min(2.0 * PI),
                        radius: radius.value(),
                    });
                }
                for w in pieces.windows(2) {
                    if let (Piece::Arc { end: end0, .. }, Piece::Arc { start: start1, .. }) =
                        (w[0], w[1])
                    {
                        if start1 < end0 {
                            return invalid("angular arcs overlap");
                        }
                    }
                }
                pieces
            }
            (RegionSpec::Segments(_), Domain::Disc { .. }) => {
                return invalid("edge segments describe rectangle boundaries, not disc boundaries")
            }
            (RegionSpec::Arcs(_), Domain::Rectangle { .. }) => {
                return invalid("angular arcs describe disc boundaries, not rectangle boundaries")
            }
        };
        if pieces.is_empty() {
            return invalid("boundary region must contain at least one piece");
        }
        let canonical = match spec {
            RegionSpec::Segments(_) => RegionSpec::Segments(sorted_segments(&spec)),
            RegionSpec::Arcs(_) => RegionSpec::Arcs(sorted_arcs(&spec)),
            RegionSpec::Full => RegionSpec::Full,
        };
        Ok(Self {
            domain,
            pieces,
            spec: canonical,
        })
    }

    pub fn full(domain: Domain) -> Self {
        Self::new(domain, RegionSpec::Full).expect("full boundary of a valid domain")
    }

    /// A whole edge of a rectangle.
    pub fn edge(domain: Domain, edge: Edge) -> Result<Self> {
        let Some((a1, a2)) = domain.sides() else {
            return invalid("edges exist only on rectangle domains");
        };
        let len = match (edge.is_horizontal(), domain) {
            (true, Domain::Rectangle { a1, .. }) => a1,
            (false, Domain::Rectangle { a2, .. }) => a2,
            _ => Real::float(edge.length(a1, a2)),
        };
        Self::new(
            domain,
            RegionSpec::Segments(vec![EdgeSegment {
                edge,
                start: Real::ratio(0, 1),
                end: len,
            }]),
        )
    }

    pub fn arc(domain: Domain, start: impl Into<Real>, end: impl Into<Real>) -> Result<Self> {
        Self::new(domain, RegionSpec::Arcs(vec![AngularArc::new(start, end)]))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn spec(&self) -> &RegionSpec {
        &self.spec
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// The rest of the boundary, or `None` when the region is all of ∂Ω.
    pub fn complement(&self) -> Option<BoundaryRegion> {
        let total = self.domain.perimeter();
        let mut gaps = Vec::new();
        match self.domain {
            Domain::Rectangle { a1, a2 } => {
                for edge in Edge::ALL {
                    let len = edge.length(a1.value(), a2.value());
                    let mut cursor = 0.0;
                    for p in &self.pieces {
                        if let Piece::Segment {
                            edge: e,
                            start,
                            end,
                        } = *p
                        {
                            if e == edge {
                                if start > cursor + SLACK * len {
                                    gaps.push(Piece::Segment {
                                        edge,
                                        start: cursor,
                                        end: start,
                                    });
                                }
                                cursor = end;
                            }
                        }
                    }
                    if len > cursor + SLACK * len {
                        gaps.push(Piece::Segment {
                            edge,
                            start: cursor,
                            end: len,
                        });
                    }
                }
            }
            Domain::Disc { radius } => {
                let mut cursor = 0.0;
                for p in &self.pieces {
                    if let Piece::Arc { start, end, .. } = *p {
                        if start > cursor + SLACK {
                            gaps.push(Piece::Arc {
                                start: cursor,
                                end: start,
                                radius: radius.value(),
                            });
                        }
                        cursor = end;
                    }
                }
                if 2.0 * PI > cursor + SLACK {
                    gaps.push(Piece::Arc {
                        start: cursor,
                        end: 2.0 * PI,
                        radius: radius.value(),
                    });
                }
            }
        }
        if gaps.is_empty() || gaps.iter().map(Piece::length).sum::<f64>() <= SLACK * total {
            return None;
        }
        let spec = match self.domain {
            Domain::Rectangle { .. } => RegionSpec::Segments(
                gaps.iter()
                    .map(|g| match *g {
                        Piece::Segment { edge, start, end } => EdgeSegment::new(edge, start, end),
                        Piece::Arc { .. } => unreachable!(),
                    })
                    .collect(),
            ),
            Domain::Disc { .. } => RegionSpec::Arcs(
                gaps.iter()
                    .map(|g| match *g {
                        Piece::Arc { start, end, .. } => AngularArc::new(start, end),
                        Piece::Segment { .. } => unreachable!(),
                    })
                    .collect(),
            ),
        };
        Some(Self {
            domain: self.domain,
            pieces: gaps,
            spec,
        })
    }

    fn location(&self, piece: usize, offset: f64, arc: f64) -> BoundaryLocation {
        let (point, polar) = self.pieces[piece].locate(&self.domain, offset);
        BoundaryLocation {
            arc,
            piece,
            offset,
            point,
            polar,
        }
    }

    /// Resolve a region arc-length coordinate `0 <= s < length`.
    pub fn resolve(&self, s: f64) -> Result<BoundaryLocation> {
        if !(s >= 0.0 && s.is_finite()) {
            return invalid(format!("boundary coordinate must be >= 0, got {s}"));
        }
        let mut base = 0.0;
        for (k, p) in self.pieces.iter().enumerate() {
            let len = p.length();
            if s < base + len {
                return Ok(self.location(k, s - base, s));
            }
            base += len;
        }
        invalid(format!(
            "boundary coordinate {s} exceeds the region length {base}"
        ))
    }

    /// Quadrature nodes over the whole region, in increasing `s`.
    pub fn nodes(&self, rule: &QuadratureRule) -> Vec<BoundaryNode> {
        let mut out = Vec::with_capacity(self.pieces.len() * rule.nodes_per_interval());
        let mut base = 0.0;
        for (k, p) in self.pieces.iter().enumerate() {
            let len = p.length();
            for (u, w) in rule.nodes(0.0, len) {
                out.push(BoundaryNode {
                    location: self.location(k, u, base + u),
                    weight: w,
                });
            }
            base += len;
        }
        out
    }

    /// Evenly spaced sample locations at cell midpoints.
    pub fn samples(&self, count: usize) -> Vec<BoundaryLocation> {
        let len = self.length();
        (0..count)
            .map(|k| {
                self.resolve((k as f64 + 0.5) * len / count as f64)
                    .expect("inside region")
            })
            .collect()
    }
}

fn sorted_segments(spec: &RegionSpec) -> Vec<EdgeSegment> {
    let RegionSpec::Segments(segs) = spec else {
        return Vec::new();
    };
    let mut segs = segs.clone();
    segs.sort_by(|a, b| {
        a.edge
            .cmp(&b.edge)
            .then(a.start.value().total_cmp(&b.start.value()))
    });
    segs
}

fn sorted_arcs(spec: &RegionSpec) -> Vec<AngularArc> {
    let RegionSpec::Arcs(arcs) = spec else {
        return Vec::new();
    };
    let mut arcs = arcs.clone();
    arcs.sort_by(|a, b| a.start.value().total_cmp(&b.start.value()));
    arcs
}

impl Serialize for BoundaryRegion {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.spec.serialize(serializer)
    }
}

pub fn boundary_length(region: &BoundaryRegion) -> f64 {
    region.length()
}

/// Value of a mode's trace at a boundary location.
pub fn mode_trace(mode: &Mode, domain: &Domain, loc: &BoundaryLocation) -> f64 {
    match loc.polar {
        Some((r, theta)) => mode.value_polar(domain, r, theta),
        None => mode.value_at(domain, loc.point),
    }
}

/// Trace of the eigenfunction `index` at region coordinate `s`.
pub fn trace_value(
    spectrum: &Spectrum,
    index: &ModeIndex,
    region: &BoundaryRegion,
    s: f64,
) -> Result<f64> {
    if spectrum.domain != *region.domain() {
        return invalid("region and spectrum live on different domains");
    }
    let loc = region.resolve(s)?;
    let mode = spectrum.mode(index)?;
    Ok(mode_trace(&mode, &spectrum.domain, &loc))
}

pub fn integrate_boundary(
    region: &BoundaryRegion,
    integrand: impl Fn(&BoundaryLocation) -> f64,
    rule: &QuadratureRule,
) -> f64 {
    region
        .nodes(rule)
        .iter()
        .map(|n| n.weight * integrand(&n.location))
        .sum()
}

/// `L²` norms of `g` over Γ and over all of ∂Ω.
///
/// The full-boundary value is assembled as Γ plus its complement, so the
/// first norm never exceeds the second.
pub fn restricted_and_full_norms(
    region: &BoundaryRegion,
    g: impl Fn(&BoundaryLocation) -> f64,
    rule: &QuadratureRule,
) -> (f64, f64) {
    let on_gamma = integrate_boundary(region, |l| g(l).powi(2), rule);
    let rest = region
        .complement()
        .map_or(0.0, |c| integrate_boundary(&c, |l| g(l).powi(2), rule));
    (on_gamma.sqrt(), (on_gamma + rest).sqrt())
}

/// Planar sensor support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PlanarSupport {
    /// Axis-aligned rectangle `[x0,x1]×[y0,y1]`.
    Rect {
        x0: Real,
        x1: Real,
        y0: Real,
        y1: Real,
    },
    /// Annular sector `r0 <= r <= r1`, `theta0 <= θ <= theta1` of a disc.
    Sector {
        r0: Real,
        r1: Real,
        theta0: Real,
        theta1: Real,
    },
}

impl PlanarSupport {
    pub fn rect(
        x0: impl Into<Real>,
        x1: impl Into<Real>,
        y0: impl Into<Real>,
        y1: impl Into<Real>,
    ) -> Self {
        PlanarSupport::Rect {
            x0: x0.into(),
            x1: x1.into(),
            y0: y0.into(),
            y1: y1.into(),
        }
    }

    pub fn sector(
        r0: impl Into<Real>,
        r1: impl Into<Real>,
        theta0: impl Into<Real>,
        theta1: impl Into<Real>,
    ) -> Self {
        PlanarSupport::Sector {
            r0: r0.into(),
            r1: r1.into(),
            theta0: theta0.into(),
            theta1: theta1.into(),
        }
    }

    pub fn check_within(&self, domain: &Domain) -> Result<()> {
        match *self {
            PlanarSupport::Rect { x0, x1, y0, y1 } => {
                let (x0, x1, y0, y1) = (x0.value(), x1.value(), y0.value(), y1.value());
                if !(x0 < x1 && y0 < y1) {
                    return invalid("zone support must have x0 < x1 and y0 < y1");
                }
                let corners = [
                    Point::new(x0, y0),
                    Point::new(x1, y0),
                    Point::new(x0, y1),
                    Point::new(x1, y1),
                ];
                if corners.iter().all(|&c| domain.contains(c)) {
                    Ok(())
                } else {
                    invalid(format!(
                        "zone support [{x0}, {x1}]x[{y0}, {y1}] is not contained in the domain"
                    ))
                }
            }
            PlanarSupport::Sector {
                r0,
                r1,
                theta0,
                theta1,
            } => {
                let Some(a) = domain.radius() else {
                    return invalid("sector supports require a disc domain");
                };
                let (r0, r1, t0, t1) = (r0.value(), r1.value(), theta0.value(), theta1.value());
                if !(0.0 <= r0 && r0 < r1 && r1 <= a * (1.0 + SLACK)) {
                    return invalid(format!("sector radii must satisfy 0 <= r0 < r1 <= {a}"));
                }
                if !(t0 < t1 && t1 - t0 <= 2.0 * PI * (1.0 + SLACK)) {
                    return invalid("sector angles must satisfy theta0 < theta1 <= theta0 + 2pi");
                }
                Ok(())
            }
        }
    }

    /// Geometric center: midpoint of the rectangle, or the polar midpoint of the sector.
    pub fn center(&self) -> Point {
        match *self {
            PlanarSupport::Rect { x0, x1, y0, y1 } => Point::new(
                0.5 * (x0.value() + x1.value()),
                0.5 * (y0.value() + y1.value()),
            ),
            PlanarSupport::Sector {
                r0,
                r1,
                theta0,
                theta1,
            } => Point::from_polar(
                0.5 * (r0.value() + r1.value()),
                0.5 * (theta0.value() + theta1.value()),
            ),
        }
    }

    /// The same support moved so that its center lies at `p` (polar center for sectors).
    pub fn recentered(&self, p: Point) -> Self {
        match *self {
            PlanarSupport::Rect { x0, x1, y0, y1 } => {
                let hx = 0.5 * (x1.value() - x0.value());
                let hy = 0.5 * (y1.value() - y0.value());
                PlanarSupport::rect(p.x - hx, p.x + hx, p.y - hy, p.y + hy)
            }
            PlanarSupport::Sector {
                r0,
                r1,
                theta0,
                theta1,
            } => {
                let hr = 0.5 * (r1.value() - r0.value());
                let ht = 0.5 * (theta1.value() - theta0.value());
                let (r, t) = (p.radius(), p.angle());
                PlanarSupport::sector(r - hr, r + hr, t - ht, t + ht)
            }
        }
    }

    /// Tensor-product nodes with the area element folded into the weights.
    pub fn nodes(&self, rule: &QuadratureRule) -> Vec<(Point, f64)> {
        match *self {
            PlanarSupport::Rect { x0, x1, y0, y1 } => {
                let xs = rule.nodes(x0.value(), x1.value());
                let ys = rule.nodes(y0.value(), y1.value());
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for &(x, wx) in &xs {
                    for &(y, wy) in &ys {
                        out.push((Point::new(x, y), wx * wy));
                    }
                }
                out
            }
            PlanarSupport::Sector {
                r0,
                r1,
                theta0,
                theta1,
            } => {
                let rs = rule.nodes(r0.value(), r1.value());
                let ts = rule.nodes(theta0.value(), theta1.value());
                let mut out = Vec::with_capacity(rs.len() * ts.len());
                for &(r, wr) in &rs {
                    for &(t, wt) in &ts {
                        out.push((Point::from_polar(r, t), wr * wt * r));
                    }
                }
                out
            }
        }
    }
}

pub fn integrate_planar(
    domain: &Domain,
    support: &PlanarSupport,
    integrand: impl Fn(Point) -> f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    support.check_within(domain)?;
    Ok(support
        .nodes(rule)
        .into_iter()
        .map(|(p, w)| w * integrand(p))
        .sum())
}

/// Mode traces at every node of `region`, one row per mode.
pub(crate) fn trace_matrix(basis: &ModeBasis, nodes: &[BoundaryNode]) -> DMatrix<f64> {
    let domain = basis.domain();
    DMatrix::from_fn(basis.len(), nodes.len(), |m, k| {
        mode_trace(&basis.modes[m], domain, &nodes[k].location)
    })
}

/// Gram matrix of the restricted traces: entry `(m, m')` is `∫_Γ ψ_m ψ_m'`.
pub fn restricted_mode_gram(
    basis: &ModeBasis,
    region: &BoundaryRegion,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    if basis.domain() != region.domain() {
        return invalid("region and basis live on different domains");
    }
    let nodes = region.nodes(rule);
    let traces = trace_matrix(basis, &nodes);
    let weighted = DMatrix::from_fn(traces.nrows(), traces.ncols(), |m, k| {
        traces[(m, k)] * nodes[k].weight
    });
    let gram = &weighted * traces.transpose();
    Ok((&gram + gram.transpose()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_modes, Cutoff};
    use crate::tolerance::Tolerances;

    fn square() -> Domain {
        Domain::unit_square()
    }

    #[test]
    fn lengths() {
        assert_eq!(BoundaryRegion::full(square()).length(), 4.0);
        assert_eq!(
            BoundaryRegion::edge(square(), Edge::South)
                .unwrap()
                .length(),
            1.0
        );
        let arc = BoundaryRegion::arc(
            Domain::disc(1.0).unwrap(),
            0.0,
            "pi".parse::<Real>().unwrap(),
        )
        .unwrap();
        assert!((boundary_length(&arc) - PI).abs() < 1e-15);
    }

    #[test]
    fn invalid_regions() {
        let d = square();
        assert!(BoundaryRegion::new(d, RegionSpec::Segments(vec![])).is_err());
        assert!(BoundaryRegion::new(
            d,
            RegionSpec::Segments(vec![EdgeSegment::new(Edge::South, 0.5, 0.5)])
        )
        .is_err());
        assert!(BoundaryRegion::new(
            d,
            RegionSpec::Segments(vec![EdgeSegment::new(Edge::East, 0.0, 1.5)])
        )
        .is_err());
        let overlapping = vec![
            EdgeSegment::new(Edge::South, 0.0, 0.6),
            EdgeSegment::new(Edge::South, 0.5, 1.0),
        ];
        assert!(BoundaryRegion::new(d, RegionSpec::Segments(overlapping)).is_err());
        let touching = vec![
            EdgeSegment::new(Edge::South, 0.5, 1.0),
            EdgeSegment::new(Edge::South, 0.0, 0.5),
        ];
        assert!(BoundaryRegion::new(d, RegionSpec::Segments(touching)).is_ok());
        assert!(BoundaryRegion::new(d, RegionSpec::Arcs(vec![AngularArc::new(0.0, 1.0)])).is_err());
        let disc = Domain::disc(1.0).unwrap();
        assert!(BoundaryRegion::arc(disc, 1.0, 7.0).is_err());
    }

    #[test]
    fn counterclockwise_parameterization() {
        let full = BoundaryRegion::full(square());
        let at = |s: f64| full.resolve(s).unwrap().point;
        assert_eq!(at(0.25), Point::new(0.25, 0.0));
        assert_eq!(at(1.25), Point::new(1.0, 0.25));
        assert_eq!(at(2.25), Point::new(0.75, 1.0));
        assert_eq!(at(3.25), Point::new(0.0, 0.75));
        assert!(full.resolve(4.0).is_err());
        assert!(full.resolve(-0.1).is_err());
    }

    #[test]
    fn complement_partitions_boundary() {
        let d = square();
        let region = BoundaryRegion::new(
            d,
            RegionSpec::Segments(vec![
                EdgeSegment::new(Edge::South, 0.2, 0.7),
                EdgeSegment::new(Edge::West, 0.0, 1.0),
            ]),
        )
        .unwrap();
        let c = region.complement().unwrap();
        assert!((region.length() + c.length() - 4.0).abs() < 1e-14);
        assert!(BoundaryRegion::full(d).complement().is_none());

        let disc = Domain::disc(2.0).unwrap();
        let arc = BoundaryRegion::arc(disc, 1.0, 2.0).unwrap();
        let c = arc.complement().unwrap();
        assert_eq!(c.pieces().len(), 2);
        assert!((arc.length() + c.length() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn trace_examples() {
        let spectrum = Spectrum::new(square());
        let south = BoundaryRegion::edge(square(), Edge::South).unwrap();
        let v = trace_value(&spectrum, &ModeIndex::rect(2, 3), &south, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        let east = BoundaryRegion::edge(square(), Edge::East).unwrap();
        let v = trace_value(&spectrum, &ModeIndex::rect(1, 1), &east, 0.5).unwrap();
        assert!(v.abs() < 1e-15);

        let disc = Domain::disc(1.0).unwrap();
        let s = Spectrum::new(disc);
        let full = BoundaryRegion::full(disc);
        let mode = s.mode(&ModeIndex::cosine(1, 1)).unwrap();
        let v = trace_value(&s, &ModeIndex::cosine(1, 1), &full, 0.0).unwrap();
        let j1 = crate::spectral::bessel_j(1, 1.841183781340659).unwrap();
        assert!((j1 - 0.581865).abs() < 1e-6);
        assert!((v - mode.norm_constant * j1).abs() < 1e-12);
    }

    #[test]
    fn trace_agrees_with_interior_evaluation() {
        let d = Domain::rectangle(1.5, 0.75).unwrap();
        let spectrum = Spectrum::new(d);
        let full = BoundaryRegion::full(d);
        for s in [0.1, 1.6, 2.0, 3.3, 4.4] {
            let loc = full.resolve(s).unwrap();
            for ix in [ModeIndex::rect(3, 2), ModeIndex::rect(0, 5)] {
                let t = trace_value(&spectrum, &ix, &full, s).unwrap();
                let v = spectrum.eigenfunction_value(&ix, loc.point).unwrap();
                assert!((t - v).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn planar_integrals() {
        let rule = QuadratureRule::default();
        let d = square();
        let quarter = PlanarSupport::rect(0.0, 0.5, 0.0, 0.5);
        assert!((integrate_planar(&d, &quarter, |_| 1.0, &rule).unwrap() - 0.25).abs() < 1e-14);
        let spectrum = Spectrum::new(d);
        let m = spectrum.mode(&ModeIndex::rect(1, 1)).unwrap();
        let all = PlanarSupport::rect(0.0, 1.0, 0.0, 1.0);
        assert!(
            integrate_planar(&d, &all, |p| m.value_at(&d, p), &rule)
                .unwrap()
                .abs()
                < 1e-12
        );
        let sq = integrate_planar(&d, &all, |p| m.value_at(&d, p).powi(2), &rule).unwrap();
        assert!((sq - 1.0).abs() < 1e-10);
        assert!(
            integrate_planar(&d, &PlanarSupport::rect(0.5, 1.5, 0.0, 0.5), |_| 1.0, &rule).is_err()
        );

        let disc = Domain::disc(2.0).unwrap();
        let area = integrate_planar(
            &disc,
            &PlanarSupport::sector(0.0, 2.0, 0.0, 2.0 * PI),
            |_| 1.0,
            &rule,
        )
        .unwrap();
        assert!((area - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn restricted_gram_on_south_edge() {
        let d = square();
        let basis =
            enumerate_modes(&Spectrum::new(d), Cutoff::square(2), &Tolerances::default()).unwrap();
        let south = BoundaryRegion::edge(d, Edge::South).unwrap();
        let gram = restricted_mode_gram(&basis, &south, &QuadratureRule::default()).unwrap();
        let a = basis.position(&ModeIndex::rect(1, 2)).unwrap();
        let b = basis.position(&ModeIndex::rect(2, 1)).unwrap();
        // ψ_(1,2) = 2cos(πs), ψ_(2,1) = 2cos(2πs) on the south edge.
        assert!((gram[(a, a)] - 2.0).abs() < 1e-12);
        assert!((gram[(b, b)] - 2.0).abs() < 1e-12);
        assert!(gram[(a, b)].abs() < 1e-12);
    }

    #[test]
    fn norms_respect_restriction() {
        let d = square();
        let region = BoundaryRegion::new(
            d,
            RegionSpec::Segments(vec![EdgeSegment::new(Edge::North, 0.1, 0.4)]),
        )
        .unwrap();
        let g = |l: &BoundaryLocation| (3.0 * l.point.x).sin() + l.point.y;
        let (a, b) = restricted_and_full_norms(&region, g, &QuadratureRule::default());
        assert!(a <= b);
        assert!(a > 0.0);
    }
}
