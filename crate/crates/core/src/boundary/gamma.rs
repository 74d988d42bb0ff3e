//! Orthonormal trial functions on Γ.
//!
//! These stand in for the unknown `x* ∈ H^{1/2}(Γ)` in the kernel test. Two
//! families are available: a per-piece cosine family over arc length, and
//! the span of the restricted mode traces `ψ_m = χ_Γ γ₀ φ_m` themselves.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{
    mode_trace, trace_matrix, BoundaryLocation, BoundaryNode, BoundaryRegion, QuadratureRule,
};
use crate::error::{invalid, Error, Result};
use crate::spectral::{Mode, ModeBasis};
use crate::tolerance::Tolerances;

/// How the trial basis on Γ is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaSpec {
    /// First `size` functions of the cosine family, orthonormalized.
    Cosine { size: usize },
    /// Orthonormal basis of the span of the restricted mode traces, with
    /// numerically dependent directions dropped.
    #[default]
    RestrictedModes,
}

/// Norm placed on trial coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSurrogate {
    /// Plain `L²(Γ)`.
    #[default]
    L2,
    /// Coefficient `k` weighted by `(1 + level_k)^{1/2}`.
    SobolevWeighted,
}

impl NormSurrogate {
    pub fn label(&self) -> &'static str {
        match self {
            NormSurrogate::L2 => "L2(Gamma) surrogate",
            NormSurrogate::SobolevWeighted => "Sobolev-weighted surrogate (1+k)^(1/2)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Generator {
    Constant,
    Indicator(usize),
    Cosine { piece: usize, k: u32, length: f64 },
    Trace(Mode),
}

/// Orthonormal functions `e_1..e_K` on a region, as combinations of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaBasis {
    region: BoundaryRegion,
    generators: Vec<Generator>,
    /// Row `k` holds the generator weights of `e_k`.
    coefficients: DMatrix<f64>,
    levels: Vec<usize>,
    spec: GammaSpec,
}

impl GammaBasis {
    pub fn build(
        basis: &ModeBasis,
        region: &BoundaryRegion,
        spec: GammaSpec,
        rule: &QuadratureRule,
        tol: &Tolerances,
    ) -> Result<Self> {
        match spec {
            GammaSpec::Cosine { size } => Self::cosine(region, size, rule),
            GammaSpec::RestrictedModes => Self::restricted_modes(basis, region, rule, tol),
        }
    }

    /// The cosine family: the global constant, indicators of the remaining
    /// pieces, then `cos(kπu/L_p)` for `k = 1, 2, …` on every piece in turn.
    pub fn cosine(region: &BoundaryRegion, size: usize, rule: &QuadratureRule) -> Result<Self> {
        if size == 0 {
            return invalid("gamma basis size must be at least 1");
        }
        let pieces = region.pieces();
        let per_piece_cap = rule.nodes_per_interval() / 2;
        let mut generators = vec![Generator::Constant];
        let mut levels = vec![0];
        generators.extend((1..pieces.len()).map(Generator::Indicator));
        levels.extend(std::iter::repeat_n(0, pieces.len() - 1));
        let mut k = 1u32;
        while generators.len() < size {
            if k as usize >= per_piece_cap {
                return invalid(format!(
                    "gamma basis size {size} exceeds the quadrature resolution ({per_piece_cap} functions per piece)"
                ));
            }
            for (piece, p) in pieces.iter().enumerate() {
                generators.push(Generator::Cosine {
                    piece,
                    k,
                    length: p.length(),
                });
                levels.push(k as usize);
            }
            k += 1;
        }
        generators.truncate(size);
        levels.truncate(size);

        let nodes = region.nodes(rule);
        let values = generator_values(&generators, region, &nodes);
        let gram = weighted_gram(&values, &nodes);
        let chol = gram.cholesky().ok_or_else(|| {
            Error::NumericalFailure("cosine family on the region is numerically dependent".into())
        })?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
        Ok(Self {
            region: region.clone(),
            generators,
            coefficients: l_inv,
            levels,
            spec: GammaSpec::Cosine { size },
        })
    }

    /// Orthonormal basis of `span{ψ_m}` on the region, ordered by decreasing
    /// Gram eigenvalue; eigenvalues at or below `rank_relative·max` are dropped.
    pub fn restricted_modes(
        basis: &ModeBasis,
        region: &BoundaryRegion,
        rule: &QuadratureRule,
        tol: &Tolerances,
    ) -> Result<Self> {
        if basis.domain() != region.domain() {
            return invalid("region and basis live on different domains");
        }
        let nodes = region.nodes(rule);
        let traces = trace_matrix(basis, &nodes);
        let gram = weighted_gram(&traces, &nodes);
        let eig = SymmetricEigen::new(gram);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .total_cmp(&eig.eigenvalues[a])
                .then(a.cmp(&b))
        });
        let top = order.first().map_or(0.0, |&i| eig.eigenvalues[i]);
        let kept: Vec<usize> = order
            .into_iter()
            .filter(|&i| top > 0.0 && eig.eigenvalues[i] > tol.rank_relative * top)
            .collect();
        if kept.is_empty() {
            return invalid("every mode trace vanishes on the region");
        }
        let mut coefficients = DMatrix::zeros(kept.len(), basis.len());
        for (row, &i) in kept.iter().enumerate() {
            let scale = 1.0 / eig.eigenvalues[i].sqrt();
            let v = eig.eigenvectors.column(i);
            // Fix the sign so the largest component is positive.
            let pivot = (0..v.len())
                .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
                .unwrap_or(0);
            let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
            for m in 0..basis.len() {
                coefficients[(row, m)] = sign * scale * v[m];
            }
        }
        let levels = (0..kept.len()).collect();
        Ok(Self {
            region: region.clone(),
            generators: basis.modes.iter().copied().map(Generator::Trace).collect(),
            coefficients,
            levels,
            spec: GammaSpec::RestrictedModes,
        })
    }

    pub fn len(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn region(&self) -> &BoundaryRegion {
        &self.region
    }

    pub fn spec(&self) -> GammaSpec {
        self.spec
    }

    /// Frequency level of each function, used by the Sobolev-weighted norm.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn weights(&self, norm: NormSurrogate) -> Vec<f64> {
        self.levels
            .iter()
            .map(|&k| match norm {
                NormSurrogate::L2 => 1.0,
                NormSurrogate::SobolevWeighted => (1.0 + k as f64).sqrt(),
            })
            .collect()
    }

    pub fn value(&self, k: usize, loc: &BoundaryLocation) -> f64 {
        let domain = self.region.domain();
        self.generators
            .iter()
            .enumerate()
            .map(|(l, g)| self.coefficients[(k, l)] * generator_value(g, domain, loc))
            .sum()
    }

    /// Values of every basis function at the given nodes (`K × N`).
    pub fn values_at(&self, nodes: &[BoundaryNode]) -> DMatrix<f64> {
        let raw = generator_values(&self.generators, &self.region, nodes);
        &self.coefficients * raw
    }

    /// Gram matrix of the basis under the region quadrature.
    pub fn gram(&self, rule: &QuadratureRule) -> DMatrix<f64> {
        let nodes = self.region.nodes(rule);
        weighted_gram(&self.values_at(&nodes), &nodes)
    }
}

/// Convenience wrapper for the cosine family.
pub fn gamma_basis(
    region: &BoundaryRegion,
    size: usize,
    rule: &QuadratureRule,
) -> Result<GammaBasis> {
    GammaBasis::cosine(region, size, rule)
}

fn generator_value(g: &Generator, domain: &crate::spectral::Domain, loc: &BoundaryLocation) -> f64 {
    match *g {
        Generator::Constant => 1.0,
        Generator::Indicator(p) => f64::from(u8::from(loc.piece == p)),
        Generator::Cosine { piece, k, length } => {
            if loc.piece == piece {
                (k as f64 * PI * loc.offset / length).cos()
            } else {
                0.0
            }
        }
        Generator::Trace(ref mode) => mode_trace(mode, domain, loc),
    }
}

fn generator_values(
    generators: &[Generator],
    region: &BoundaryRegion,
    nodes: &[BoundaryNode],
) -> DMatrix<f64> {
    let domain = region.domain();
    DMatrix::from_fn(generators.len(), nodes.len(), |l, k| {
        generator_value(&generators[l], domain, &nodes[k].location)
    })
}

/// `V W Vᵀ` for rows of function values `V` and quadrature weights `W`.
pub(crate) fn weighted_gram(values: &DMatrix<f64>, nodes: &[BoundaryNode]) -> DMatrix<f64> {
    let weighted = DMatrix::from_fn(values.nrows(), values.ncols(), |r, k| {
        values[(r, k)] * nodes[k].weight
    });
    let g = &weighted * values.transpose();
    (&g + g.transpose()) * 0.5
}
