//! JSON scenario documents.
//!
//! Reading happens in three stages, each with its own error class: syntax
//! (`line:column`), schema (key path, unknown keys rejected), and semantic
//! (key path of the offending value). The canonical form is pretty-printed
//! JSON with a trailing newline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseStage, Result};
use crate::fuzzy::{FuzzyNumber, WeightingFunction};
use crate::quadrature::Quadrature;
use crate::saving::{ModelKind, Risk, SavingScenario, ScenarioConfig, SolverSettings};
use crate::stochastic::RandomVariable;
use crate::utility::{BiUtility, DomainBox, UtilityFamily};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelTag {
    #[serde(rename = "probabilistic")]
    Probabilistic,
    #[serde(rename = "mixed-I")]
    MixedI,
    #[serde(rename = "mixed-II")]
    MixedII,
}

impl From<ModelTag> for ModelKind {
    fn from(t: ModelTag) -> Self {
        match t {
            ModelTag::Probabilistic => ModelKind::Probabilistic,
            ModelTag::MixedI => ModelKind::MixedI,
            ModelTag::MixedII => ModelKind::MixedII,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightingSpec {
    #[serde(default = "default_exponent")]
    pub exponent: f64,
}

impl Default for WeightingSpec {
    fn default() -> Self {
        Self { exponent: default_exponent() }
    }
}

fn default_exponent() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endowment {
    pub y0: f64,
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    CaraCrraProduct,
    LogAdditive,
    CaraAdditive,
    Quadratic,
}

impl FamilyTag {
    fn parameter_names(self) -> &'static [&'static str] {
        match self {
            FamilyTag::CaraCrraProduct => &["alpha", "gamma"],
            FamilyTag::LogAdditive => &[],
            FamilyTag::CaraAdditive => &["alpha", "beta"],
            FamilyTag::Quadratic => &["q_y", "q_x"],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub y_min: f64,
    pub y_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitySpec {
    pub family: FamilyTag,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    pub domain: DomainSpec,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub monotonicity_override: bool,
}

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RiskSpec {
    Rectangular { c: f64, d: f64 },
    Triangular { center: f64, left: f64, right: f64 },
    Trapezoidal { core_lo: f64, core_hi: f64, left: f64, right: f64 },
    Constant { value: f64 },
    Sampled { gammas: Vec<f64>, lower: Vec<f64>, upper: Vec<f64> },
    Uniform { c: f64, d: f64 },
    Discrete { points: Vec<f64>, probs: Vec<f64> },
    Degenerate { value: f64 },
}

impl RiskSpec {
    pub fn is_fuzzy(&self) -> bool {
        matches!(
            self,
            RiskSpec::Rectangular { .. }
                | RiskSpec::Triangular { .. }
                | RiskSpec::Trapezoidal { .. }
                | RiskSpec::Constant { .. }
                | RiskSpec::Sampled { .. }
        )
    }

    fn kind_name(&self) -> &'static str {
        match self {
            RiskSpec::Rectangular { .. } => "rectangular",
            RiskSpec::Triangular { .. } => "triangular",
            RiskSpec::Trapezoidal { .. } => "trapezoidal",
            RiskSpec::Constant { .. } => "constant",
            RiskSpec::Sampled { .. } => "sampled",
            RiskSpec::Uniform { .. } => "uniform",
            RiskSpec::Discrete { .. } => "discrete",
            RiskSpec::Degenerate { .. } => "degenerate",
        }
    }

    fn build(&self) -> Result<Risk> {
        Ok(match self.clone() {
            RiskSpec::Rectangular { c, d } => Risk::Fuzzy(FuzzyNumber::rectangular(c, d)?),
            RiskSpec::Triangular { center, left, right } => {
                Risk::Fuzzy(FuzzyNumber::triangular(center, left, right)?)
            }
            RiskSpec::Trapezoidal { core_lo, core_hi, left, right } => {
                Risk::Fuzzy(FuzzyNumber::trapezoidal(core_lo, core_hi, left, right)?)
            }
            RiskSpec::Constant { value } => Risk::Fuzzy(FuzzyNumber::constant(value)?),
            RiskSpec::Sampled { gammas, lower, upper } => Risk::Fuzzy(FuzzyNumber::sampled(gammas, lower, upper)?),
            RiskSpec::Uniform { c, d } => Risk::Random(RandomVariable::uniform(c, d)?),
            RiskSpec::Discrete { points, probs } => Risk::Random(RandomVariable::discrete(points, probs)?),
            RiskSpec::Degenerate { value } => Risk::Random(RandomVariable::degenerate(value)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<[f64; 2]>,
    /// Absent means the process-wide default node count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_nodes: Option<usize>,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            tolerance: default_tolerance(),
            bounds: None,
            quadrature_nodes: None,
        }
    }
}

fn default_tolerance() -> f64 {
    SolverSettings::DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Table,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_reports")]
    pub reports: Vec<ReportKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            reports: default_reports(),
            csv_path: None,
        }
    }
}

fn default_reports() -> Vec<ReportKind> {
    vec![ReportKind::Table]
}

/// A scenario document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: u32,
    pub model: ModelTag,
    #[serde(default)]
    pub weighting: WeightingSpec,
    pub endowment: Endowment,
    pub utility_u: UtilitySpec,
    pub utility_v: UtilitySpec,
    pub income_risk: RiskSpec,
    pub background_risk: RiskSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

fn semantic(path: &str, err: impl std::fmt::Display) -> Error {
    Error::Parse {
        stage: ParseStage::Semantic,
        path: path.to_string(),
        message: err.to_string(),
    }
}

fn config_message(err: Error) -> String {
    match err {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

impl ScenarioFile {
    /// Syntax and schema stages only.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            classify(inner, path)
        })?;
        de.end().map_err(|e| classify(e, String::new()))?;
        Ok(file)
    }

    /// Canonical text: pretty JSON plus a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario documents always serialize");
        s.push('\n');
        s
    }

    fn build_utility(spec: &UtilitySpec, path: &str) -> Result<BiUtility> {
        let names = spec.family.parameter_names();
        for key in spec.parameters.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::Parse {
                    stage: ParseStage::Schema,
                    path: format!("{path}.parameters.{key}"),
                    message: format!("unknown parameter, expected one of {names:?}"),
                });
            }
        }
        let get = |name: &str| {
            spec.parameters.get(name).copied().ok_or_else(|| Error::Parse {
                stage: ParseStage::Schema,
                path: format!("{path}.parameters"),
                message: format!("missing parameter `{name}`"),
            })
        };
        let family = match spec.family {
            FamilyTag::CaraCrraProduct => UtilityFamily::CaraCrraProduct {
                alpha: get("alpha")?,
                gamma: get("gamma")?,
            },
            FamilyTag::LogAdditive => UtilityFamily::LogAdditive,
            FamilyTag::CaraAdditive => UtilityFamily::CaraAdditive {
                alpha: get("alpha")?,
                beta: get("beta")?,
            },
            FamilyTag::Quadratic => UtilityFamily::Quadratic {
                q_y: get("q_y")?,
                q_x: get("q_x")?,
            },
        };
        let d = &spec.domain;
        let domain = DomainBox::new(d.y_min, d.y_max, d.x_min, d.x_max)
            .map_err(|e| semantic(&format!("{path}.domain"), config_message(e)))?;
        let u = BiUtility::new(family, domain).map_err(|e| semantic(path, config_message(e)))?;
        Ok(u.scaled(spec.scale)
            .map_err(|e| semantic(&format!("{path}.scale"), config_message(e)))?
            .with_override(spec.monotonicity_override))
    }

    /// Semantic stage: a library configuration with every value checked.
    /// `default_nodes` applies when the document leaves the node count out.
    pub fn to_config(&self, default_nodes: usize) -> Result<ScenarioConfig> {
        if self.format_version != FORMAT_VERSION {
            return Err(semantic(
                "format_version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", self.format_version),
            ));
        }
        let kind = ModelKind::from(self.model);
        let weighting = WeightingFunction::power(self.weighting.exponent)
            .map_err(|e| semantic("weighting.exponent", config_message(e)))?;
        for (name, spec, fuzzy) in [
            ("income_risk", &self.income_risk, kind.income_is_fuzzy()),
            ("background_risk", &self.background_risk, kind.background_is_fuzzy()),
        ] {
            if spec.is_fuzzy() != fuzzy {
                return Err(semantic(
                    name,
                    format!(
                        "model {kind} needs a {} {}, got kind `{}`",
                        if fuzzy { "fuzzy number" } else { "random variable" },
                        name.replace('_', " "),
                        spec.kind_name()
                    ),
                ));
            }
        }
        let income = self
            .income_risk
            .build()
            .map_err(|e| semantic("income_risk", config_message(e)))?;
        let background = self
            .background_risk
            .build()
            .map_err(|e| semantic("background_risk", config_message(e)))?;
        let u = Self::build_utility(&self.utility_u, "utility_u")?;
        let v = Self::build_utility(&self.utility_v, "utility_v")?;

        let nodes = self.solver.quadrature_nodes.unwrap_or(default_nodes);
        Quadrature::new(nodes).map_err(|e| semantic("solver.quadrature_nodes", config_message(e)))?;
        let tol = self.solver.tolerance;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(semantic("solver.tolerance", format!("must be positive, got {tol}")));
        }
        if let Some([lo, hi]) = self.solver.bounds {
            if !(lo < hi) {
                return Err(semantic("solver.bounds", format!("need s_lo < s_hi, got [{lo}, {hi}]")));
            }
        }
        let e = &self.endowment;
        if !(e.y0.is_finite() && e.x0.is_finite()) {
            return Err(semantic("endowment", "endowments must be finite"));
        }
        Ok(ScenarioConfig {
            kind,
            y0: e.y0,
            x0: e.x0,
            u,
            v,
            income,
            background,
            weighting,
            solver: SolverSettings {
                tolerance: tol,
                bounds: self.solver.bounds.map(|[a, b]| (a, b)),
                quadrature_nodes: nodes,
                max_iterations: SolverSettings::DEFAULT_MAX_ITERATIONS,
            },
        })
    }

    /// Full validation: builds the scenario, including the utility checks.
    ///
    /// Utilities that fail their grid checks surface as model-assumption
    /// errors; everything else is a parse error.
    pub fn to_scenario(&self, default_nodes: usize) -> Result<SavingScenario> {
        self.to_config(default_nodes)?
            .build().map_err(|e| match e {
            Error::Config(m) => {
                let path = if m.contains("saving bounds") { "solver.bounds" } else { "endowment" };
                semantic(path, m)
            }
            other => other,
        })
    }
}

fn classify(err: serde_json::Error, path: String) -> Error {
    use serde_json::error::Category;
    match err.classify() {
        Category::Syntax | Category::Eof => Error::Parse {
            stage: ParseStage::Syntax,
            path: format!("{}:{}", err.line(), err.column()),
            message: strip_position(&err),
        },
        Category::Data => Error::Parse {
            stage: ParseStage::Schema,
            path: if path.is_empty() || path == "." { "(root)".to_string() } else { path },
            message: strip_position(&err),
        },
        Category::Io => Error::Parse {
            stage: ParseStage::Syntax,
            path: String::new(),
            message: err.to_string(),
        },
    }
}

/// serde_json appends " at line L column C"; the path already carries it.
fn strip_position(err: &serde_json::Error) -> String {
    let s = err.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

/// Parses and fully validates a document.
pub fn parse_scenario_file(text: &str, default_nodes: usize) -> Result<(ScenarioFile, SavingScenario)> {
    let file = ScenarioFile::from_json(text)?;
    let scenario = file.to_scenario(default_nodes)?;
    Ok((file, scenario))
}
