//! Strategic-sensor decision procedures.
//!
//! Two verdicts are produced from the modal coefficient matrix `C` (sensors
//! × modes). The Ω verdict is the per-group rank test: every eigenvalue
//! group needs `rank G_n = r_n`. The Γ verdict is a joint kernel test. Because the
//! exponentials `e^{λ_n t}` of distinct groups are independent, an element
//! `x* = Σ_k z_k e_k` on Γ produces zero output for all time iff every row
//! `Σ_{j∈n} c_{i,n_j} ⟨ψ_{n_j}, e_k⟩` annihilates `z`, so the time variable
//! drops out and the test is a column-rank check of that block matrix.

pub mod corollary;
pub mod sweep;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::boundary::{
    trace_matrix, BoundaryRegion, GammaBasis, GammaSpec, NormSurrogate, QuadratureParams,
    QuadratureRule,
};
use crate::error::{invalid, Result};
use crate::sensors::{coefficient_matrix, Sensor};
use crate::spectral::{Cutoff, ModeBasis, ModeIndex};
use crate::tolerance::Tolerances;

pub use corollary::{corollary_check, CorollaryResult, CorollaryRule, CorollarySelection, Witness};
pub use sweep::{placement_sweep, SweepGrid, SweepRow, SweepTable};

/// Singular values in decreasing order; empty for an empty matrix.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `relative·σ_max`.
pub(crate) fn numerical_rank(sv: &[f64], relative: f64) -> usize {
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > relative * top).count(),
        _ => 0,
    }
}

/// The `cols`-th singular value, zero when there are fewer rows than columns.
pub(crate) fn column_sigma_min(sv: &[f64], cols: usize) -> f64 {
    if cols == 0 {
        return 0.0;
    }
    sv.get(cols - 1).copied().unwrap_or(0.0)
}

/// Coefficient matrix allowing an empty sensor list (zero rows).
pub fn observation_matrix(
    sensors: &[Sensor],
    basis: &ModeBasis,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    if sensors.is_empty() {
        Ok(DMatrix::zeros(0, basis.len()))
    } else {
        coefficient_matrix(sensors, basis, rule)
    }
}

/// `G_n`: sensors × members of one eigenvalue group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMatrix {
    pub group: usize,
    pub eigenvalue: f64,
    pub members: Vec<ModeIndex>,
    pub entries: DMatrix<f64>,
    pub rank: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl GroupMatrix {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn full_column_rank(&self) -> bool {
        self.rank == self.multiplicity()
    }
}

pub fn group_matrix(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    group: usize,
    tol: &Tolerances,
) -> Result<GroupMatrix> {
    let Some(g) = basis.groups.get(group) else {
        return invalid(format!(
            "group {group} does not exist (basis has {} groups)",
            basis.groups.len()
        ));
    };
    if coefficients.ncols() != basis.len() {
        return invalid("coefficient matrix does not match the basis");
    }
    let entries = coefficients.columns(g.start, g.multiplicity).into_owned();
    let sv = singular_values(&entries);
    // Rank is judged against the scale of the whole observation map, so a
    // group seen only through rounding noise counts as unseen.
    let scale = singular_values(coefficients)
        .first()
        .copied()
        .unwrap_or(0.0);
    let threshold = tol.rank_relative * scale;
    Ok(GroupMatrix {
        group,
        eigenvalue: g.eigenvalue,
        members: basis.group_members(group).iter().map(|m| m.index).collect(),
        rank: sv.iter().filter(|&&s| s > threshold).count(),
        sigma_min: column_sigma_min(&sv, g.multiplicity),
        sigma_max: sv.first().copied().unwrap_or(0.0),
        entries,
    })
}

pub fn assemble_group_matrix(
    sensors: &[Sensor],
    basis: &ModeBasis,
    group: usize,
    rule: &QuadratureRule,
    tol: &Tolerances,
) -> Result<GroupMatrix> {
    group_matrix(
        &observation_matrix(sensors, basis, rule)?,
        basis,
        group,
        tol,
    )
}

/// Per-group summary as it appears in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub group: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub members: Vec<String>,
    pub rank: usize,
    pub sigma_min: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub effective_gamma_multiplicity: Option<usize>,
}

impl From<&GroupMatrix> for GroupRecord {
    fn from(g: &GroupMatrix) -> Self {
        Self {
            group: g.group,
            eigenvalue: g.eigenvalue,
            multiplicity: g.multiplicity(),
            members: g.members.iter().map(ToString::to_string).collect(),
            rank: g.rank,
            sigma_min: g.sigma_min,
            effective_gamma_multiplicity: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaCondition {
    /// Fewer sensors than the largest multiplicity.
    TooFewSensors,
    /// Some group matrix loses column rank.
    RankDeficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaFailure {
    pub condition: OmegaCondition,
    pub group: usize,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaVerdict {
    pub pass: bool,
    pub sensors: usize,
    pub max_multiplicity: usize,
    /// First violated condition; the sensor-count condition is checked first.
    pub first_failure: Option<OmegaFailure>,
    /// Every group whose matrix lacks full column rank.
    pub failing_groups: Vec<usize>,
    pub groups: Vec<GroupRecord>,
}

impl OmegaVerdict {
    pub fn group(&self, eigenvalue: f64, tol: &Tolerances) -> Option<&GroupRecord> {
        self.groups.iter().find(|g| {
            (g.eigenvalue - eigenvalue).abs() <= tol.group_relative * (1.0 + eigenvalue.abs())
        })
    }
}

pub fn omega_verdict(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    tol: &Tolerances,
) -> Result<OmegaVerdict> {
    if basis.is_empty() {
        return invalid("the mode basis is empty");
    }
    let q = coefficients.nrows();
    let matrices = (0..basis.groups.len())
        .map(|g| group_matrix(coefficients, basis, g, tol))
        .collect::<Result<Vec<_>>>()?;
    let failure = |g: &GroupMatrix, condition| OmegaFailure {
        condition,
        group: g.group,
        eigenvalue: g.eigenvalue,
        multiplicity: g.multiplicity(),
        rank: g.rank,
    };
    let first_failure = matrices
        .iter()
        .find(|g| g.multiplicity() > q)
        .map(|g| failure(g, OmegaCondition::TooFewSensors))
        .or_else(|| {
            matrices
                .iter()
                .find(|g| !g.full_column_rank())
                .map(|g| failure(g, OmegaCondition::RankDeficient))
        });
    Ok(OmegaVerdict {
        pass: first_failure.is_none(),
        sensors: q,
        max_multiplicity: basis.max_multiplicity(),
        first_failure,
        failing_groups: matrices
            .iter()
            .filter(|g| !g.full_column_rank())
            .map(|g| g.group)
            .collect(),
        groups: matrices.iter().map(GroupRecord::from).collect(),
    })
}

pub fn omega_strategic_test(
    sensors: &[Sensor],
    basis: &ModeBasis,
    rule: &QuadratureRule,
    tol: &Tolerances,
) -> Result<OmegaVerdict> {
    omega_verdict(&observation_matrix(sensors, basis, rule)?, basis, tol)
}

/// Block matrix of the kernel test: one row per (group, sensor), group-major,
/// one column per trial function on Γ.
pub fn kernel_matrix(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    gamma: &GammaBasis,
    rule: &QuadratureRule,
) -> Result<DMatrix<f64>> {
    if gamma.region().domain() != basis.domain() {
        return invalid("region and basis live on different domains");
    }
    if coefficients.ncols() != basis.len() {
        return invalid("coefficient matrix does not match the basis");
    }
    let nodes = gamma.region().nodes(rule);
    let traces = trace_matrix(basis, &nodes);
    let trial = gamma.values_at(&nodes);
    let weighted = DMatrix::from_fn(trial.nrows(), trial.ncols(), |k, l| {
        trial[(k, l)] * nodes[l].weight
    });
    // pairings[(m, k)] = ⟨ψ_m, e_k⟩ on Γ.
    let pairings = traces * weighted.transpose();
    let q = coefficients.nrows();
    let mut b = DMatrix::zeros(basis.groups.len() * q, gamma.len());
    for (n, g) in basis.groups.iter().enumerate() {
        let block =
            coefficients.columns(g.start, g.multiplicity) * pairings.rows(g.start, g.multiplicity);
        b.rows_mut(n * q, q).copy_from(&block);
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaVerdict {
    pub pass: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub rows: usize,
    pub columns: usize,
    pub rank: usize,
    pub gamma_basis: GammaSpec,
}

pub fn gamma_verdict(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    gamma: &GammaBasis,
    rule: &QuadratureRule,
    tol: &Tolerances,
) -> Result<GammaVerdict> {
    let b = kernel_matrix(coefficients, basis, gamma, rule)?;
    let sv = singular_values(&b);
    let sigma_min = column_sigma_min(&sv, b.ncols());
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    Ok(GammaVerdict {
        pass: sigma_max > 0.0 && sigma_min > tol.rank_relative * sigma_max,
        sigma_min,
        sigma_max,
        rows: b.nrows(),
        columns: b.ncols(),
        rank: numerical_rank(&sv, tol.rank_relative),
        gamma_basis: gamma.spec(),
    })
}

pub fn gamma_kernel_test(
    sensors: &[Sensor],
    basis: &ModeBasis,
    region: &BoundaryRegion,
    spec: GammaSpec,
    rule: &QuadratureRule,
    tol: &Tolerances,
) -> Result<GammaVerdict> {
    let gamma = GammaBasis::build(basis, region, spec, rule, tol)?;
    gamma_verdict(
        &observation_matrix(sensors, basis, rule)?,
        basis,
        &gamma,
        rule,
        tol,
    )
}

/// Numerical rank of the traces of one group's members on Γ.
pub fn effective_gamma_multiplicity(
    basis: &ModeBasis,
    group: usize,
    region: &BoundaryRegion,
    rule: &QuadratureRule,
    tol: &Tolerances,
) -> Result<usize> {
    let Some(g) = basis.groups.get(group) else {
        return invalid(format!("group {group} does not exist"));
    };
    if region.domain() != basis.domain() {
        return invalid("region and basis live on different domains");
    }
    let nodes = region.nodes(rule);
    let traces = trace_matrix(basis, &nodes);
    let block = DMatrix::from_fn(g.multiplicity, nodes.len(), |r, k| {
        traces[(g.start + r, k)] * nodes[k].weight.sqrt()
    });
    Ok(numerical_rank(&singular_values(&block), tol.rank_relative))
}

/// `ν = 1/σ_min` of the kernel matrix measured in a surrogate norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservabilityConstant {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Absent when `σ_min = 0`.
    pub nu: Option<f64>,
    pub norm: NormSurrogate,
    pub norm_label: String,
}

pub fn constant_from(
    coefficients: &DMatrix<f64>,
    basis: &ModeBasis,
    gamma: &GammaBasis,
    rule: &QuadratureRule,
    norm: NormSurrogate,
) -> Result<ObservabilityConstant> {
    let mut b = kernel_matrix(coefficients, basis, gamma, rule)?;
    for (k, w) in gamma.weights(norm).into_iter().enumerate() {
        b.column_mut(k).scale_mut(1.0 / w);
    }
    let sv = singular_values(&b);
    let sigma_min = column_sigma_min(&sv, b.ncols());
    Ok(ObservabilityConstant {
        sigma_min,
        sigma_max: sv.first().copied().unwrap_or(0.0),
        nu: (sigma_min > 0.0).then(|| 1.0 / sigma_min),
        norm,
        norm_label: norm.label().to_string(),
    })
}

pub fn observability_constant(
    sensors: &[Sensor],
    basis: &ModeBasis,
    region: &BoundaryRegion,
    spec: GammaSpec,
    rule: &QuadratureRule,
    tol: &Tolerances,
    norm: NormSurrogate,
) -> Result<ObservabilityConstant> {
    let gamma = GammaBasis::build(basis, region, spec, rule, tol)?;
    constant_from(
        &observation_matrix(sensors, basis, rule)?,
        basis,
        &gamma,
        rule,
        norm,
    )
}

/// Knobs of a full analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSettings {
    pub gamma: GammaSpec,
    pub norm: NormSurrogate,
    pub rule: QuadratureRule,
    pub tolerances: Tolerances,
    pub corollaries: CorollarySelection,
    /// Mode bound `J` of the corollary conditions.
    pub corollary_bound: u32,
}

impl AnalysisSettings {
    pub fn for_cutoff(cutoff: Cutoff) -> Self {
        Self {
            gamma: GammaSpec::default(),
            norm: NormSurrogate::default(),
            rule: QuadratureRule::default(),
            tolerances: Tolerances::default(),
            corollaries: CorollarySelection::Auto,
            corollary_bound: corollary::default_bound(cutoff),
        }
    }
}

/// Parameters under which every number of a report was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub cutoff: Cutoff,
    pub modes: usize,
    pub groups: usize,
    pub max_multiplicity: usize,
    pub gamma_basis: GammaSpec,
    pub gamma_size: usize,
    pub norm: NormSurrogate,
    pub quadrature: QuadratureParams,
    pub tolerances: Tolerances,
    pub corollary_bound: u32,
}

impl TruncationRecord {
    pub fn new(basis: &ModeBasis, settings: &AnalysisSettings, gamma_size: usize) -> Self {
        Self {
            cutoff: basis.cutoff,
            modes: basis.len(),
            groups: basis.groups.len(),
            max_multiplicity: basis.max_multiplicity(),
            gamma_basis: settings.gamma,
            gamma_size,
            norm: settings.norm,
            quadrature: settings.rule.params(),
            tolerances: settings.tolerances,
            corollary_bound: settings.corollary_bound,
        }
    }
}

/// A corollary whose verdict differs from the kernel test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disagreement {
    pub rule: CorollaryRule,
    pub corollary_pass: bool,
    pub kernel_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategicReport {
    pub sensors: Vec<String>,
    pub verdict_omega: OmegaVerdict,
    pub verdict_gamma: GammaVerdict,
    pub observability: ObservabilityConstant,
    pub truncation: TruncationRecord,
    pub corollaries: Vec<CorollaryResult>,
    pub disagreements: Vec<Disagreement>,
}

pub fn disagreements(corollaries: &[CorollaryResult], kernel_pass: bool) -> Vec<Disagreement> {
    corollaries
        .iter()
        .filter(|c| c.pass != kernel_pass)
        .map(|c| Disagreement {
            rule: c.rule,
            corollary_pass: c.pass,
            kernel_pass,
        })
        .collect()
}

/// Runs both verdicts, the constant, the diagnostics and the corollary checks.
pub fn analyze(
    sensors: &[Sensor],
    basis: &ModeBasis,
    region: &BoundaryRegion,
    settings: &AnalysisSettings,
) -> Result<StrategicReport> {
    if sensors.is_empty() {
        return invalid("at least one sensor is required");
    }
    let (rule, tol) = (&settings.rule, &settings.tolerances);
    let c = coefficient_matrix(sensors, basis, rule)?;
    let gamma = GammaBasis::build(basis, region, settings.gamma, rule, tol)?;
    let mut verdict_omega = omega_verdict(&c, basis, tol)?;
    for record in verdict_omega.groups.iter_mut() {
        record.effective_gamma_multiplicity = Some(effective_gamma_multiplicity(
            basis,
            record.group,
            region,
            rule,
            tol,
        )?);
    }
    let verdict_gamma = gamma_verdict(&c, basis, &gamma, rule, tol)?;
    let observability = constant_from(&c, basis, &gamma, rule, settings.norm)?;
    let corollaries = corollary::evaluate_selection(
        &settings.corollaries,
        sensors,
        basis.domain(),
        settings.corollary_bound,
        rule,
    )?;
    Ok(StrategicReport {
        sensors: sensors.iter().map(|s| s.id.clone()).collect(),
        truncation: TruncationRecord::new(basis, settings, gamma.len()),
        disagreements: disagreements(&corollaries, verdict_gamma.pass),
        corollaries,
        verdict_omega,
        verdict_gamma,
        observability,
    })
}

#[cfg(test)]
mod tests;
