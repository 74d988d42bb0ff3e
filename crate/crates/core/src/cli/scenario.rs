//! Scenario files: a JSON description of domain, region, sensors and run
//! parameters. Every field except `domain` has a default; [`Scenario::resolve`]
//! fills them in so reports can echo a self-describing configuration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::boundary::{
    BoundaryRegion, GammaSpec, NormSurrogate, QuadratureParams, QuadratureRule, RegionSpec,
};
use crate::error::{invalid, Error, Result};
use crate::observability::{
    corollary::default_bound, AnalysisSettings, CorollarySelection, SweepGrid,
};
use crate::reconstruction::DEFAULT_WINDOW;
use crate::sensors::{validate_times, Noise, Sensor, SensorSpec};
use crate::spectral::{
    enumerate_modes, Cutoff, Domain, ModeBasis, ModeIndex, Normalization, RadialFamily, Spectrum,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumOptions {
    #[serde(default)]
    pub radial: RadialFamily,
    #[serde(default)]
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationOptions {
    #[serde(default)]
    pub cutoff: Option<Cutoff>,
    #[serde(default)]
    pub gamma_basis: Option<GammaSpec>,
    #[serde(default)]
    pub norm: Option<NormSurrogate>,
    /// Mode bound `J` of the placement rules.
    #[serde(default)]
    pub corollary_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalValue {
    pub mode: ModeIndex,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// Unit coefficient on one mode.
    Mode(ModeIndex),
    /// Listed coefficients, all others zero.
    Coefficients(Vec<ModalValue>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeSpec {
    /// `count` evenly spaced times over `[start, end]`; `count` defaults to `4M`.
    Window {
        #[serde(default)]
        start: f64,
        #[serde(default = "default_window")]
        end: f64,
        #[serde(default)]
        count: Option<usize>,
    },
    Explicit(Vec<f64>),
}

fn default_window() -> f64 {
    DEFAULT_WINDOW
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseOptions {
    pub sigma: f64,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    /// Id of the sensor moved over the grid; defaults to the last sensor.
    #[serde(default)]
    pub template: Option<String>,
    #[serde(default)]
    pub grid: Option<SweepGrid>,
}

fn full_region() -> RegionSpec {
    RegionSpec::Full
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub domain: Domain,
    #[serde(default)]
    pub spectrum: SpectrumOptions,
    #[serde(default = "full_region")]
    pub region: RegionSpec,
    #[serde(default)]
    pub sensors: Vec<SensorSpec>,
    #[serde(default)]
    pub truncation: TruncationOptions,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub quadrature: QuadratureParams,
    #[serde(default)]
    pub corollaries: CorollarySelection,
    #[serde(default)]
    pub initial_state: Option<InitialState>,
    #[serde(default)]
    pub times: Option<TimeSpec>,
    #[serde(default)]
    pub noise: Option<NoiseOptions>,
    #[serde(default)]
    pub ridge: f64,
    #[serde(default)]
    pub sweep: Option<SweepOptions>,
}

/// Everything a command needs, built from a validated scenario.
#[derive(Debug, Clone)]
pub struct Setup {
    /// The scenario with every default written out.
    pub scenario: Scenario,
    pub basis: ModeBasis,
    pub region: BoundaryRegion,
    pub sensors: Vec<Sensor>,
    pub settings: AnalysisSettings,
    pub times: Vec<f64>,
    pub noise: Option<Noise>,
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Setup> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| {
        Error::InvalidArgument(format!(
            "scenario parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    scenario.resolve()
}

fn positive_tolerance(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return invalid(format!("tolerances.{name} must lie in (0, 1), got {v}"));
    }
    Ok(())
}

impl Scenario {
    pub fn new(domain: Domain) -> Self {
        Self {
            domain,
            spectrum: SpectrumOptions::default(),
            region: RegionSpec::Full,
            sensors: Vec::new(),
            truncation: TruncationOptions::default(),
            tolerances: Tolerances::default(),
            quadrature: QuadratureParams::default(),
            corollaries: CorollarySelection::Auto,
            initial_state: None,
            times: None,
            noise: None,
            ridge: 0.0,
            sweep: None,
        }
    }

    /// Validates every field and resolves defaults.
    pub fn resolve(&self) -> Result<Setup> {
        let field = |name: &'static str| {
            move |e: Error| match e {
                Error::InvalidArgument(m) => Error::InvalidArgument(format!("{name}: {m}")),
                other => other,
            }
        };
        self.domain.validate().map_err(field("domain"))?;
        positive_tolerance("rank_relative", self.tolerances.rank_relative)?;
        positive_tolerance("group_relative", self.tolerances.group_relative)?;
        let rule = QuadratureRule::try_from(self.quadrature).map_err(field("quadrature"))?;
        let spectrum = Spectrum::new(self.domain)
            .with_radial(self.spectrum.radial)
            .with_normalization(self.spectrum.normalization);
        let cutoff = self
            .truncation
            .cutoff
            .unwrap_or_else(|| Cutoff::default_for(&self.domain));
        let basis = enumerate_modes(&spectrum, cutoff, &self.tolerances)
            .map_err(field("truncation.cutoff"))?;
        let region =
            BoundaryRegion::new(self.domain, self.region.clone()).map_err(field("region"))?;

        let mut ids = BTreeSet::new();
        let mut sensors = Vec::with_capacity(self.sensors.len());
        for spec in &self.sensors {
            if spec.id().is_empty() {
                return invalid("sensors: every sensor needs a nonempty id");
            }
            if !ids.insert(spec.id().to_string()) {
                return invalid(format!("sensors: duplicate id {:?}", spec.id()));
            }
            let sensor = spec.resolve(&self.domain).map_err(field("sensors"))?;
            sensor
                .measure(&self.domain, &rule)
                .map_err(field("sensors"))?;
            sensors.push(sensor);
        }

        let gamma = self.truncation.gamma_basis.unwrap_or_default();
        if let GammaSpec::Cosine { size } = gamma {
            crate::boundary::GammaBasis::cosine(&region, size, &rule)
                .map_err(field("truncation.gamma_basis"))?;
        }
        let norm = self.truncation.norm.unwrap_or_default();
        let bound = self
            .truncation
            .corollary_bound
            .unwrap_or_else(|| default_bound(cutoff));
        if bound == 0 {
            return invalid("truncation.corollary_bound must be at least 1");
        }

        let times_spec = self.times.clone().unwrap_or(TimeSpec::Window {
            start: 0.0,
            end: DEFAULT_WINDOW,
            count: None,
        });
        let times_spec = match times_spec {
            TimeSpec::Window { start, end, count } => TimeSpec::Window {
                start,
                end,
                count: Some(count.unwrap_or(4 * basis.len())),
            },
            explicit => explicit,
        };
        let times = match &times_spec {
            TimeSpec::Window { start, end, count } => {
                let count = count.unwrap_or_default();
                if count == 0 || (count > 1 && end <= start) {
                    return invalid("times: window needs count >= 1 and end > start");
                }
                crate::sensors::uniform_times(*start, *end, count)
            }
            TimeSpec::Explicit(t) => t.clone(),
        };
        validate_times(&times).map_err(field("times"))?;

        let noise = match self.noise {
            None => None,
            Some(NoiseOptions { sigma, seed }) => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return invalid("noise.sigma must be finite and >= 0");
                }
                match seed {
                    Some(seed) => Some(Noise { sigma, seed }),
                    None if sigma == 0.0 => None,
                    None => return invalid("noise.seed is required when noise.sigma > 0"),
                }
            }
        };
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return invalid("ridge must be finite and >= 0");
        }
        if let Some(state) = &self.initial_state {
            initial_coefficients(state, &basis).map_err(field("initial_state"))?;
        }
        if let Some(SweepOptions {
            template: Some(id), ..
        }) = &self.sweep
        {
            if !ids.contains(id) {
                return invalid(format!("sweep.template: no sensor with id {id:?}"));
            }
        }

        let mut scenario = self.clone();
        scenario.truncation = TruncationOptions {
            cutoff: Some(cutoff),
            gamma_basis: Some(gamma),
            norm: Some(norm),
            corollary_bound: Some(bound),
        };
        scenario.times = Some(times_spec);
        scenario.region = region.spec().clone();
        Ok(Setup {
            scenario,
            basis,
            region,
            sensors,
            settings: AnalysisSettings {
                gamma,
                norm,
                rule,
                tolerances: self.tolerances,
                corollaries: self.corollaries.clone(),
                corollary_bound: bound,
            },
            times,
            noise,
        })
    }
}

/// Dense modal coefficients for an initial state.
pub fn initial_coefficients(state: &InitialState, basis: &ModeBasis) -> Result<Vec<f64>> {
    let mut x = vec![0.0; basis.len()];
    let mut set = |index: &ModeIndex, value: f64| -> Result<()> {
        let m = basis.position(index).ok_or_else(|| {
            Error::InvalidArgument(format!("mode {index} is not in the truncated basis"))
        })?;
        if !value.is_finite() {
            return invalid(format!("coefficient of mode {index} must be finite"));
        }
        x[m] += value;
        Ok(())
    };
    match state {
        InitialState::Mode(index) => set(index, 1.0)?,
        InitialState::Coefficients(values) => {
            for v in values {
                set(&v.mode, v.value)?;
            }
        }
    }
    Ok(x)
}
