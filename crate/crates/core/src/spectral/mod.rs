//! Eigen-system of the Neumann Laplacian on rectangles and discs.
//!
//! Rectangle modes are cosine products `cos(iπx/a₁)cos(jπy/a₂)` with
//! eigenvalue `-π²(i²/a₁² + j²/a₂²)`. Disc modes are
//! `J_i(βr/a)·{1, cos iθ, sin iθ}` with eigenvalue `-(β/a)²`, where `β` is a
//! zero of `J_i'` (Neumann family, default) or of `J_i` ([`RadialFamily::BesselZeros`]).
//! The disc is centered at the origin; the rectangle occupies `[0,a₁]×[0,a₂]`.

pub mod bessel;

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::real::Real;
use crate::tolerance::Tolerances;

pub use bessel::{bessel_j, bessel_j_prime, bessel_zero, ZeroKind};

const CONTAINMENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self {
            x: r * theta.cos(),
            y: r * theta.sin(),
        }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        let t = self.y.atan2(self.x);
        if t < 0.0 {
            t + 2.0 * PI
        } else {
            t
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangle `[0,a₁]×[0,a₂]` or disc of radius `a` centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Domain {
    Rectangle { a1: Real, a2: Real },
    Disc { radius: Real },
}

fn positive(name: &str, v: Real) -> Result<()> {
    if !(v.value().is_finite() && v.value() > 0.0) {
        return invalid(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

impl Domain {
    pub fn rectangle(a1: impl Into<Real>, a2: impl Into<Real>) -> Result<Self> {
        let d = Domain::Rectangle {
            a1: a1.into(),
            a2: a2.into(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn unit_square() -> Self {
        Domain::Rectangle {
            a1: Real::ratio(1, 1),
            a2: Real::ratio(1, 1),
        }
    }

    pub fn disc(radius: impl Into<Real>) -> Result<Self> {
        let d = Domain::Disc {
            radius: radius.into(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Domain::Rectangle { a1, a2 } => {
                positive("rectangle side a1", a1)?;
                positive("rectangle side a2", a2)
            }
            Domain::Disc { radius } => positive("disc radius", radius),
        }
    }

    pub fn is_disc(&self) -> bool {
        matches!(self, Domain::Disc { .. })
    }

    /// Side lengths of a rectangle.
    pub fn sides(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Rectangle { a1, a2 } => Some((a1.value(), a2.value())),
            Domain::Disc { .. } => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Domain::Disc { radius } => Some(radius.value()),
            Domain::Rectangle { .. } => None,
        }
    }

    pub fn perimeter(&self) -> f64 {
        match *self {
            Domain::Rectangle { a1, a2 } => 2.0 * (a1.value() + a2.value()),
            Domain::Disc { radius } => 2.0 * PI * radius.value(),
        }
    }

    fn scale(&self) -> f64 {
        match *self {
            Domain::Rectangle { a1, a2 } => a1.value().max(a2.value()),
            Domain::Disc { radius } => radius.value(),
        }
    }

    /// Whether `p` lies in the closure of the domain.
    pub fn contains(&self, p: Point) -> bool {
        let eps = CONTAINMENT_SLACK * self.scale();
        match *self {
            Domain::Rectangle { a1, a2 } => {
                p.x >= -eps && p.x <= a1.value() + eps && p.y >= -eps && p.y <= a2.value() + eps
            }
            Domain::Disc { radius } => p.radius() <= radius.value() + eps,
        }
    }

    /// Whether `p` lies on the boundary, within a relative slack of `1e-9`.
    pub fn on_boundary(&self, p: Point) -> bool {
        let eps = 1e-9 * self.scale();
        if !self.contains(p) {
            return false;
        }
        match *self {
            Domain::Rectangle { a1, a2 } => {
                p.x.abs() <= eps
                    || (p.x - a1.value()).abs() <= eps
                    || p.y.abs() <= eps
                    || (p.y - a2.value()).abs() <= eps
            }
            Domain::Disc { radius } => (p.radius() - radius.value()).abs() <= eps,
        }
    }
}

/// Angular family of a disc mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscFamily {
    Axial,
    Cosine,
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeIndex {
    /// `(i, j)` with `i, j >= 0`.
    Rect { i: u32, j: u32 },
    /// Angular order `i` and radial order `j >= 1`.
    Disc { family: DiscFamily, i: u32, j: u32 },
}

impl ModeIndex {
    pub fn rect(i: u32, j: u32) -> Self {
        ModeIndex::Rect { i, j }
    }

    pub fn axial(j: u32) -> Self {
        ModeIndex::Disc {
            family: DiscFamily::Axial,
            i: 0,
            j,
        }
    }

    pub fn cosine(i: u32, j: u32) -> Self {
        ModeIndex::Disc {
            family: DiscFamily::Cosine,
            i,
            j,
        }
    }

    pub fn sine(i: u32, j: u32) -> Self {
        ModeIndex::Disc {
            family: DiscFamily::Sine,
            i,
            j,
        }
    }

    fn sort_key(&self) -> (u32, u32, u32) {
        match *self {
            ModeIndex::Rect { i, j } => (i, j, 0),
            ModeIndex::Disc { family, i, j } => (i, j, family as u32),
        }
    }

    /// Angular order for disc modes, first index for rectangle modes.
    pub fn first(&self) -> u32 {
        match *self {
            ModeIndex::Rect { i, .. } | ModeIndex::Disc { i, .. } => i,
        }
    }
}

impl PartialOrd for ModeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ModeIndex::Rect { i, j } => write!(f, "({i},{j})"),
            ModeIndex::Disc { family, i, j } => {
                let tag = match family {
                    DiscFamily::Axial => "axial",
                    DiscFamily::Cosine => "cos",
                    DiscFamily::Sine => "sin",
                };
                write!(f, "{tag}({i},{j})")
            }
        }
    }
}

/// Radial constants used for disc modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialFamily {
    /// Zeros of `J_i'`; satisfies the Neumann condition at `r = a`. Axial
    /// radial order 1 is the constant mode.
    #[default]
    Neumann,
    /// Zeros of `J_i`; these modes vanish on the boundary circle.
    BesselZeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Unit `L²(Ω)` norm.
    #[default]
    L2,
    /// Unit `H¹(Ω)` norm, i.e. the `L²` constant times `(1 - λ)^{-1/2}`.
    H1,
}

/// A domain together with the conventions that pin down its eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub domain: Domain,
    #[serde(default)]
    pub radial: RadialFamily,
    #[serde(default)]
    pub normalization: Normalization,
}

/// A single eigenmode with its cached radial constant and normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub index: ModeIndex,
    pub eigenvalue: f64,
    pub norm_constant: f64,
    /// `β` for disc modes (`λ = -(β/a)²`), zero for rectangle modes.
    pub radial_root: f64,
}

impl Spectrum {
    pub fn new(domain: Domain) -> Self {
        Self {
            domain,
            radial: RadialFamily::default(),
            normalization: Normalization::default(),
        }
    }

    pub fn with_radial(mut self, radial: RadialFamily) -> Self {
        self.radial = radial;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    fn check_index(&self, index: &ModeIndex) -> Result<()> {
        match (self.domain, *index) {
            (Domain::Rectangle { .. }, ModeIndex::Rect { .. }) => Ok(()),
            (Domain::Disc { .. }, ModeIndex::Disc { family, i, j }) => {
                if j == 0 {
                    return invalid(format!("disc radial order must be >= 1 in {index}"));
                }
                match family {
                    DiscFamily::Axial if i != 0 => invalid(format!(
                        "axial disc modes have angular order 0, got {index}"
                    )),
                    DiscFamily::Cosine | DiscFamily::Sine if i == 0 => invalid(format!(
                        "cosine/sine disc modes need angular order >= 1, got {index}"
                    )),
                    _ => Ok(()),
                }
            }
            _ => invalid(format!("mode index {index} does not match the domain kind")),
        }
    }

    /// Radial constant `β` for a disc index.
    fn radial_root(&self, i: u32, j: u32) -> Result<f64> {
        match self.radial {
            RadialFamily::Neumann if i == 0 => {
                if j == 1 {
                    Ok(0.0)
                } else {
                    bessel_zero(0, j - 1, ZeroKind::Derivative)
                }
            }
            RadialFamily::Neumann => bessel_zero(i, j, ZeroKind::Derivative),
            RadialFamily::BesselZeros => bessel_zero(i, j, ZeroKind::Function),
        }
    }

    pub fn eigenvalue(&self, index: &ModeIndex) -> Result<f64> {
        Ok(self.mode(index)?.eigenvalue)
    }

    /// Build the mode for `index`, computing eigenvalue and normalization.
    pub fn mode(&self, index: &ModeIndex) -> Result<Mode> {
        self.check_index(index)?;
        let (eigenvalue, l2_constant, radial_root) = match (self.domain, *index) {
            (Domain::Rectangle { a1, a2 }, ModeIndex::Rect { i, j }) => {
                let (a1, a2) = (a1.value(), a2.value());
                let (fi, fj) = (i as f64, j as f64);
                let lambda = -PI * PI * (fi * fi / (a1 * a1) + fj * fj / (a2 * a2));
                let factor = |k: u32, len: f64| {
                    if k == 0 {
                        1.0 / len.sqrt()
                    } else {
                        (2.0 / len).sqrt()
                    }
                };
                (lambda, factor(i, a1) * factor(j, a2), 0.0)
            }
            (Domain::Disc { radius }, ModeIndex::Disc { family, i, j }) => {
                let a = radius.value();
                let beta = self.radial_root(i, j)?;
                let lambda = -(beta / a) * (beta / a);
                let angular = if family == DiscFamily::Axial {
                    2.0 * PI
                } else {
                    PI
                };
                // ∫₀^a J_i(βr/a)² r dr in closed form.
                let radial = if beta == 0.0 {
                    0.5 * a * a
                } else {
                    let fi = i as f64;
                    let jb = bessel::bessel_j_unchecked(i, beta);
                    let jpb = bessel::bessel_j_prime_unchecked(i, beta);
                    0.5 * a * a * (jpb * jpb + (1.0 - fi * fi / (beta * beta)) * jb * jb)
                };
                (lambda, 1.0 / (angular * radial).sqrt(), beta)
            }
            _ => unreachable!("checked above"),
        };
        let norm_constant = match self.normalization {
            Normalization::L2 => l2_constant,
            Normalization::H1 => l2_constant / (1.0 - eigenvalue).sqrt(),
        };
        Ok(Mode {
            index: *index,
            eigenvalue,
            norm_constant,
            radial_root,
        })
    }

    pub fn eigenfunction_value(&self, index: &ModeIndex, point: Point) -> Result<f64> {
        if !self.domain.contains(point) {
            return invalid(format!(
                "point ({}, {}) lies outside the domain",
                point.x, point.y
            ));
        }
        let mode = self.mode(index)?;
        Ok(mode.value_at(&self.domain, point))
    }
}

impl Mode {
    /// Eigenfunction value at a point assumed to lie in the closed domain.
    pub fn value_at(&self, domain: &Domain, p: Point) -> f64 {
        match (*domain, self.index) {
            (Domain::Rectangle { a1, a2 }, ModeIndex::Rect { i, j }) => {
                self.norm_constant
                    * (i as f64 * PI * p.x / a1.value()).cos()
                    * (j as f64 * PI * p.y / a2.value()).cos()
            }
            (Domain::Disc { .. }, ModeIndex::Disc { .. }) => {
                self.value_polar(domain, p.radius(), p.angle())
            }
            _ => 0.0,
        }
    }

    /// Disc eigenfunction at polar coordinates `(r, θ)`.
    pub fn value_polar(&self, domain: &Domain, r: f64, theta: f64) -> f64 {
        let ModeIndex::Disc { family, i, .. } = self.index else {
            return self.value_at(domain, Point::from_polar(r, theta));
        };
        let a = domain.radius().unwrap_or(1.0);
        let radial = bessel::bessel_j_unchecked(i, self.radial_root * (r / a).min(1.0));
        let angular = match family {
            DiscFamily::Axial => 1.0,
            DiscFamily::Cosine => (i as f64 * theta).cos(),
            DiscFamily::Sine => (i as f64 * theta).sin(),
        };
        self.norm_constant * radial * angular
    }
}

/// Truncation of the eigen-system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Cutoff {
    /// Indices `0..=max_i` by `0..=max_j`.
    Rect { max_i: u32, max_j: u32 },
    /// Angular orders `0..=max_angular`, radial orders `1..=max_radial`.
    Disc { max_angular: u32, max_radial: u32 },
}

impl Cutoff {
    pub fn square(n: u32) -> Self {
        Cutoff::Rect { max_i: n, max_j: n }
    }

    pub fn default_for(domain: &Domain) -> Self {
        match domain {
            Domain::Rectangle { .. } => Cutoff::square(8),
            Domain::Disc { .. } => Cutoff::Disc {
                max_angular: 6,
                max_radial: 6,
            },
        }
    }
}

/// Modes sharing one eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGroup {
    pub eigenvalue: f64,
    /// Positions of the members in [`ModeBasis::modes`], contiguous.
    pub start: usize,
    pub multiplicity: usize,
}

impl ModeGroup {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.multiplicity
    }
}

/// Truncated eigen-system grouped by eigenvalue.
///
/// Groups are sorted by decreasing eigenvalue; members of a group are stored
/// contiguously in index order, so flat position `m` is the column order used
/// by every coefficient matrix in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    pub spectrum: Spectrum,
    pub cutoff: Cutoff,
    pub modes: Vec<Mode>,
    pub groups: Vec<ModeGroup>,
}

/// Enumerate every admissible index under `cutoff` and group equal eigenvalues.
///
/// Two modes share a group when `|λ - λ'| <= group_tol·(1 + |λ|)`.
pub fn enumerate_modes(spectrum: &Spectrum, cutoff: Cutoff, tol: &Tolerances) -> Result<ModeBasis> {
    let mut indices = Vec::new();
    match (spectrum.domain, cutoff) {
        (Domain::Rectangle { .. }, Cutoff::Rect { max_i, max_j }) => {
            for i in 0..=max_i {
                for j in 0..=max_j {
                    indices.push(ModeIndex::rect(i, j));
                }
            }
        }
        (
            Domain::Disc { .. },
            Cutoff::Disc {
                max_angular,
                max_radial,
            },
        ) => {
            for j in 1..=max_radial {
                indices.push(ModeIndex::axial(j));
            }
            for i in 1..=max_angular {
                for j in 1..=max_radial {
                    indices.push(ModeIndex::cosine(i, j));
                    indices.push(ModeIndex::sine(i, j));
                }
            }
        }
        _ => return invalid("cutoff kind does not match the domain kind"),
    }
    let mut modes = indices
        .iter()
        .map(|ix| spectrum.mode(ix))
        .collect::<Result<Vec<_>>>()?;
    modes.sort_by(|a, b| {
        b.eigenvalue
            .total_cmp(&a.eigenvalue)
            .then(a.index.cmp(&b.index))
    });
    Ok(ModeBasis::from_sorted(
        *spectrum,
        cutoff,
        modes,
        tol.group_relative,
    ))
}

impl ModeBasis {
    fn from_sorted(spectrum: Spectrum, cutoff: Cutoff, sorted: Vec<Mode>, group_tol: f64) -> Self {
        let mut modes = Vec::with_capacity(sorted.len());
        let mut groups = Vec::new();
        let mut pos = 0;
        while pos < sorted.len() {
            let lead = sorted[pos].eigenvalue;
            let mut end = pos + 1;
            while end < sorted.len()
                && (sorted[end].eigenvalue - lead).abs() <= group_tol * (1.0 + lead.abs())
            {
                end += 1;
            }
            let mut members = sorted[pos..end].to_vec();
            members.sort_by_key(|a| a.index);
            groups.push(ModeGroup {
                eigenvalue: lead,
                start: modes.len(),
                multiplicity: members.len(),
            });
            modes.extend(members);
            pos = end;
        }
        ModeBasis {
            spectrum,
            cutoff,
            modes,
            groups,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.spectrum.domain
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.groups
            .iter()
            .map(|g| g.multiplicity)
            .max()
            .unwrap_or(0)
    }

    /// Flat position of `index`, if present.
    pub fn position(&self, index: &ModeIndex) -> Option<usize> {
        self.modes.iter().position(|m| m.index == *index)
    }

    /// Group containing flat position `m`.
    pub fn group_of(&self, m: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.range().contains(&m))
    }

    pub fn group_members(&self, group: usize) -> &[Mode] {
        &self.modes[self.groups[group].range()]
    }

    /// Sub-basis keeping the modes accepted by `keep`, regrouped.
    pub fn select(&self, mut keep: impl FnMut(usize, &Mode) -> bool) -> ModeBasis {
        let mut groups = Vec::new();
        let mut modes = Vec::new();
        for g in &self.groups {
            let start = modes.len();
            for m in g.range() {
                if keep(m, &self.modes[m]) {
                    modes.push(self.modes[m]);
                }
            }
            if modes.len() > start {
                groups.push(ModeGroup {
                    eigenvalue: g.eigenvalue,
                    start,
                    multiplicity: modes.len() - start,
                });
            }
        }
        ModeBasis {
            spectrum: self.spectrum,
            cutoff: self.cutoff,
            modes,
            groups,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.eigenvalue).collect()
    }
}

/// Apply the heat semigroup to modal coefficients: `x_m ↦ e^{λ_m t} x_m`.
pub fn semigroup_apply(basis: &ModeBasis, coefficients: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return invalid(format!("semigroup time must be finite and >= 0, got {t}"));
    }
    if coefficients.len() != basis.len() {
        return invalid(format!(
            "expected {} modal coefficients, got {}",
            basis.len(),
            coefficients.len()
        ));
    }
    Ok(basis
        .modes
        .iter()
        .zip(coefficients)
        .map(|(m, c)| c * (m.eigenvalue * t).exp())
        .collect())
}
