//! Experiment configuration: strict JSON with every violation reported.

use heatcorr_grid::{GridSpec, Stencil};
use heatcorr_interaction::InteractionSpec;
use heatcorr_kernel::ExtractionOptions;
use heatcorr_lattice::{LatticeBox, Site};
use heatcorr_thermo::{GibbsMethod, SiteFunction};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fmt;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Experiment {
    Kernel,
    Decompose,
    Mayer,
    Correlate,
    Thermo,
    Verify,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Kernel => "kernel",
            Experiment::Decompose => "decompose",
            Experiment::Mayer => "mayer",
            Experiment::Correlate => "correlate",
            Experiment::Thermo => "thermo",
            Experiment::Verify => "verify",
        }
    }

    /// Whether the experiment needs the full heat operator.
    fn always_dense(self) -> bool {
        matches!(self, Experiment::Kernel | Experiment::Decompose | Experiment::Mayer)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum LatticeConfig {
    #[serde(rename_all = "camelCase")]
    Chain { chain_length: usize },
    Box { lo: Vec<i64>, hi: Vec<i64> },
}

impl LatticeConfig {
    pub fn to_box(&self) -> Result<LatticeBox, String> {
        match self {
            LatticeConfig::Chain { chain_length } => LatticeBox::chain(*chain_length).map_err(|e| e.to_string()),
            LatticeConfig::Box { lo, hi } => LatticeBox::new(lo.clone(), hi.clone()).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Schedule {
    pub t: Vec<f64>,
    pub hbar: f64,
    #[serde(default)]
    pub theta: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default = "default_dense")]
    pub dense: usize,
    #[serde(default = "default_sparse")]
    pub sparse: usize,
}

fn default_dense() -> usize {
    5000
}
fn default_sparse() -> usize {
    1_000_000
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig { dense: default_dense(), sparse: default_sparse() }
    }
}

impl BudgetConfig {
    pub fn to_budget(self) -> heatcorr_grid::Budget {
        heatcorr_grid::Budget { dense: self.dense, sparse: self.sparse }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Observables {
    #[serde(default = "tanh")]
    pub first: SiteFunction,
    #[serde(default = "tanh")]
    pub second: SiteFunction,
}

fn tanh() -> SiteFunction {
    SiteFunction::Tanh
}

impl Default for Observables {
    fn default() -> Self {
        Observables { first: SiteFunction::Tanh, second: SiteFunction::Tanh }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Supports {
    pub e1: Vec<Vec<i64>>,
    pub e2: Vec<Vec<i64>>,
}

impl Supports {
    pub fn sites(&self) -> (Vec<Site>, Vec<Site>) {
        let conv = |v: &Vec<Vec<i64>>| v.iter().map(|c| Site(c.clone())).collect();
        (conv(&self.e1), conv(&self.e2))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MayerOptions {
    /// Largest box diameter carrying a factor; the lattice diameter if absent.
    #[serde(default)]
    pub max_diam: Option<i64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Stride through the diagonal points used for the cancellation check.
    #[serde(default = "default_stride")]
    pub diagonal_stride: usize,
}

fn default_samples() -> usize {
    2000
}
fn default_stride() -> usize {
    7
}

impl Default for MayerOptions {
    fn default() -> Self {
        MayerOptions { max_diam: None, samples: default_samples(), diagonal_stride: default_stride() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PolymerOptions {
    pub delta: f64,
    pub temperature: f64,
    #[serde(default = "default_boxes")]
    pub max_boxes: usize,
    #[serde(default = "default_boxes_diam")]
    pub max_diam: i64,
    #[serde(default = "default_true")]
    pub report_only: bool,
}

fn default_boxes() -> usize {
    4
}
fn default_boxes_diam() -> i64 {
    4
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ThermoOptions {
    #[serde(default = "default_n_range")]
    pub n_range: Vec<usize>,
    /// Left-part size for the interpolation across a cut.
    #[serde(default)]
    pub split: Option<usize>,
    /// Grid for the interpolation kernels; the main grid if absent.
    #[serde(default)]
    pub theta_grid: Option<GridSpec>,
}

fn default_n_range() -> Vec<usize> {
    vec![0, 1, 2]
}

impl Default for ThermoOptions {
    fn default() -> Self {
        ThermoOptions { n_range: default_n_range(), split: None, theta_grid: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { directory: None, formats: default_formats() }
    }
}

/// A validated experiment description.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub interaction: InteractionSpec,
    pub lattice: LatticeConfig,
    pub grid: GridSpec,
    pub schedule: Schedule,
    pub method: GibbsMethod,
    pub budget: BudgetConfig,
    pub extraction: ExtractionOptions,
    pub observables: Observables,
    pub supports: Option<Supports>,
    pub mayer: MayerOptions,
    pub polymer: Option<PolymerOptions>,
    pub thermo: ThermoOptions,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn lattice_box(&self) -> LatticeBox {
        self.lattice.to_box().expect("validated lattice")
    }
}

/// Every problem found in a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} configuration error(s):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

const TOP_KEYS: &[&str] = &[
    "experiment",
    "interaction",
    "lattice",
    "grid",
    "schedule",
    "method",
    "budget",
    "extraction",
    "observables",
    "supports",
    "mayer",
    "polymer",
    "thermo",
    "output",
];
const REQUIRED: &[&str] = &["interaction", "lattice", "schedule"];

fn section<T: DeserializeOwned>(obj: &Map<String, Value>, key: &str, errors: &mut Vec<String>) -> Option<T> {
    let v = obj.get(key)?;
    match serde_json::from_value(v.clone()) {
        Ok(x) => Some(x),
        Err(e) => {
            errors.push(format!("`{key}`: {e}"));
            None
        }
    }
}

fn section_or_default<T: DeserializeOwned + Default>(obj: &Map<String, Value>, key: &str, errors: &mut Vec<String>) -> T {
    section(obj, key, errors).unwrap_or_default()
}

/// Command-line settings that take precedence over the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub dense_budget: Option<usize>,
}

/// Read and validate a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigErrors> {
    parse_config_with(path, &Overrides::default())
}

pub fn parse_config_with(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, ConfigErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigErrors(vec![format!("cannot read {}: {e}", path.display())]))?;
    parse_str_with(&text, overrides)
}

/// Validate a configuration given as JSON text.
pub fn parse_str(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    parse_str_with(text, &Overrides::default())
}

pub fn parse_str_with(text: &str, overrides: &Overrides) -> Result<ExperimentConfig, ConfigErrors> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("malformed JSON: {e}")]))?;
    let Value::Object(obj) = value else {
        return Err(ConfigErrors(vec!["top level must be a JSON object".into()]));
    };
    let mut errors = Vec::new();
    for key in obj.keys() {
        if !TOP_KEYS.contains(&key.as_str()) {
            errors.push(format!("unknown key `{key}`"));
        }
    }
    for key in REQUIRED {
        if !obj.contains_key(*key) {
            errors.push(format!("missing required key `{key}`"));
        }
    }
    let mut experiment: Option<Experiment> = section(&obj, "experiment", &mut errors);
    if let Some(cli) = overrides.experiment {
        match experiment {
            Some(file) if file != cli => {
                errors.push(format!("`experiment`: file asks for {} but the command is {}", file.name(), cli.name()))
            }
            _ => experiment = Some(cli),
        }
    }
    let interaction: Option<InteractionSpec> = section(&obj, "interaction", &mut errors);
    let lattice: Option<LatticeConfig> = section(&obj, "lattice", &mut errors);
    let schedule: Option<Schedule> = section(&obj, "schedule", &mut errors);
    let grid: GridSpec = section_or_default(&obj, "grid", &mut errors);
    let method: GibbsMethod = section(&obj, "method", &mut errors).unwrap_or(GibbsMethod::Dense);
    let mut budget: BudgetConfig = section_or_default(&obj, "budget", &mut errors);
    if let Some(dense) = overrides.dense_budget {
        budget.dense = dense;
    }
    let extraction: ExtractionOptions = section_or_default(&obj, "extraction", &mut errors);
    let observables: Observables = section_or_default(&obj, "observables", &mut errors);
    let supports: Option<Supports> = section(&obj, "supports", &mut errors);
    let mayer: MayerOptions = section_or_default(&obj, "mayer", &mut errors);
    let polymer: Option<PolymerOptions> = section(&obj, "polymer", &mut errors);
    let thermo: ThermoOptions = section_or_default(&obj, "thermo", &mut errors);
    let output: OutputConfig = section_or_default(&obj, "output", &mut errors);

    let explicit_hbar = obj.get("interaction").and_then(|v| v.get("hbar")).is_some();
    if let Some(spec) = &interaction {
        if let Err(e) = spec.validate() {
            errors.push(format!("`interaction`: {e}"));
        }
    }
    if let Err(e) = grid.validate() {
        errors.push(format!("`grid`: {e}"));
    }
    if let Some(Err(e)) = thermo.theta_grid.map(|g| g.validate()) {
        errors.push(format!("`thermo.thetaGrid`: {e}"));
    }
    if let Some(s) = &schedule {
        if s.t.is_empty() {
            errors.push("`schedule.t`: at least one time is required".into());
        }
        if s.t.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            errors.push("`schedule.t`: times must be positive".into());
        }
        if !(s.hbar.is_finite() && s.hbar > 0.0) {
            errors.push("`schedule.hbar`: must be positive".into());
        }
        if s.theta.iter().any(|th| !(0.0..=1.0).contains(th)) {
            errors.push("`schedule.theta`: values must lie in [0,1]".into());
        }
        if let Some(spec) = &interaction {
            if explicit_hbar && spec.hbar != s.hbar {
                errors.push("`interaction.hbar` disagrees with `schedule.hbar`".into());
            }
        }
    }
    let lattice_box = lattice.as_ref().and_then(|l| match l.to_box() {
        Ok(b) => Some(b),
        Err(e) => {
            errors.push(format!("`lattice`: {e}"));
            None
        }
    });
    if let (Some(b), Some(spec)) = (&lattice_box, &interaction) {
        if b.dim() != spec.dim {
            errors.push(format!("`lattice`: dimension {} differs from interaction dimension {}", b.dim(), spec.dim));
        }
    }
    if let Some(b) = &lattice_box {
        let sites = b.len();
        let dim = (grid.points as u128).checked_pow(sites as u32).unwrap_or(u128::MAX);
        let dense_needed = experiment.map(Experiment::always_dense).unwrap_or(false) || method == GibbsMethod::Dense;
        if dense_needed && dim > budget.dense as u128 {
            errors.push(format!(
                "dense budget exceeded: dimension {}^{} = {} exceeds {}",
                grid.points, sites, dim, budget.dense
            ));
        } else if dim > budget.sparse as u128 {
            errors.push(format!("sparse budget exceeded: dimension {}^{} = {} exceeds {}", grid.points, sites, dim, budget.sparse));
        }
        if let Some(s) = &supports {
            let (e1, e2) = s.sites();
            if e1.is_empty() || e2.is_empty() {
                errors.push("`supports`: both supports must be non-empty".into());
            }
            for site in e1.iter().chain(&e2) {
                if !b.contains(site) {
                    errors.push(format!("`supports`: site {:?} lies outside the lattice", site.0));
                }
            }
            if e1.iter().any(|s| e2.contains(s)) {
                errors.push("`supports`: supports overlap".into());
            }
        }
        if let Some(exp) = experiment {
            if matches!(exp, Experiment::Decompose | Experiment::Mayer) && grid.points % 2 == 0 {
                errors.push("`grid.points`: grid must contain origin (odd point count)".into());
            }
            if matches!(exp, Experiment::Correlate | Experiment::Thermo) && b.dim() != 1 {
                errors.push(format!("`lattice`: {} sweeps need a one-dimensional chain", exp.name()));
            }
            if exp == Experiment::Mayer {
                let boxes = heatcorr_lattice::enumerate_boxes(b, mayer.max_diam.unwrap_or(b.diam())).iter().filter(|q| q.diam() >= 1).count();
                if boxes > 12 {
                    errors.push(format!("`mayer`: {boxes} factor boxes exceed the subset budget of 12"));
                }
            }
        }
        if let Some(split) = thermo.split {
            if split == 0 || split >= sites {
                errors.push("`thermo.split`: the cut must separate two non-empty parts".into());
            }
        }
    }
    if let GibbsMethod::LocalQuadrature { steps } = method {
        if grid.stencil != Stencil::ThreePoint {
            errors.push("`method`: local quadrature needs the threePoint stencil".into());
        }
        if steps == 0 {
            errors.push("`method.steps`: must be positive".into());
        }
    }
    if mayer.samples == 0 {
        errors.push("`mayer.samples`: must be positive".into());
    }
    if let Some(p) = &polymer {
        if !(0.0 < p.delta && p.delta < 1.0) {
            errors.push("`polymer.delta`: must lie in (0,1)".into());
        }
        if let Some(spec) = &interaction {
            if !(spec.eps < p.delta) {
                errors.push("`polymer.delta`: must exceed the decay parameter".into());
            }
        }
        if !(p.temperature > 0.0) {
            errors.push("`polymer.temperature`: must be positive".into());
        }
    }
    if output.formats.is_empty() {
        errors.push("`output.formats`: at least one format is required".into());
    }
    if !errors.is_empty() {
        return Err(ConfigErrors(errors));
    }
    let schedule = schedule.expect("checked");
    let mut interaction = interaction.expect("checked");
    interaction.hbar = schedule.hbar;
    Ok(ExperimentConfig {
        experiment,
        interaction,
        lattice: lattice.expect("checked"),
        grid,
        schedule,
        method,
        budget,
        extraction,
        observables,
        supports,
        mayer,
        polymer,
        thermo,
        output,
    })
}
