//! Command-line front end: config-driven runs that write CSV tables, a run
//! manifest and a gnuplot script into an output directory.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical non-convergence,
//! 3 I/O error. Errors are also printed to stderr as one JSON line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dispersion::{
    self, DispersionError, FrequencyGrid, KkOptions, MollifiedDelta, MollifierFamily, Quantity, Relation,
    ReportOptions, TailPolicy,
};
use crate::lifshitz::{self, LifshitzError, LifshitzOptions, MirrorPair, NamedModel};
use crate::models::{Dielectric, DrudeParams, MaterialModel, ModelError, Oscillator, OscillatorSet, PermeabilityModel, PlasmaParams};
use crate::optics::{self, Extrapolation, FitOptions, FitStatus, OpticsError, TableFormat};
use crate::thermo::{self, NernstOptions, NernstVerdict, ThermoError};

pub const WORKERS_ENV: &str = "CASIMIR_KERNEL_WORKERS";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Validation(String),
    NonConvergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::NonConvergence(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::NonConvergence(_) => "non_convergence",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::NonConvergence(m) | CliError::Io(m) => m,
        }
    }

    /// Single-line machine-readable record.
    pub fn record(&self) -> String {
        json!({"status": "error", "kind": self.kind(), "exit_code": self.exit_code(), "message": self.message()}).to_string()
    }

    fn at(self, pointer: &str) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{pointer}: {m}")),
            other => other,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<LifshitzError> for CliError {
    fn from(e: LifshitzError) -> Self {
        match e {
            LifshitzError::TruncationFailure { .. } | LifshitzError::Quadrature { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<DispersionError> for CliError {
    fn from(e: DispersionError) -> Self {
        match e {
            DispersionError::NonConvergence(_) | DispersionError::WeakLimit { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<ThermoError> for CliError {
    fn from(e: ThermoError) -> Self {
        match e {
            ThermoError::Lifshitz(l) => l.into(),
            ThermoError::Ambiguous { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<OpticsError> for CliError {
    fn from(e: OpticsError) -> Self {
        match e {
            OpticsError::Io(_) => CliError::Io(e.to_string()),
            OpticsError::Dispersion(d) => d.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// A list of values: a number, a list of numbers, or a range string
/// `start:stop:count` (linear) / `start:stop:countL` (log-spaced). Comma
/// lists such as `"1e-3,1e-4"` are also accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    One(f64),
    List(Vec<f64>),
    Text(String),
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Sweep::One(v) => Ok(vec![*v]),
            Sweep::List(v) => Ok(v.clone()),
            Sweep::Text(s) => parse_range(s),
        }
    }
}

pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Validation(format!("invalid range '{s}': {m}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("'{t}' is not a number")));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(num).collect(),
        3 => {
            let (start, stop) = (num(parts[0])?, num(parts[1])?);
            let c = parts[2].trim();
            let (count, log) = match c.strip_suffix(['L', 'l']) {
                Some(n) => (n, true),
                None => (c, false),
            };
            let count: usize = count.parse().map_err(|_| bad("count must be a positive integer"))?;
            if count == 0 {
                return Err(bad("count must be positive"));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            if log && !(start > 0.0 && stop > 0.0) {
                return Err(bad("log-spaced ranges need positive endpoints"));
            }
            let n = (count - 1) as f64;
            Ok((0..count)
                .map(|i| {
                    let t = i as f64 / n;
                    if log {
                        start * (stop / start).powf(t)
                    } else {
                        start + (stop - start) * t
                    }
                })
                .collect())
        }
        _ => Err(bad("expected start:stop:count or start:stop:countL")),
    }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// A material given inline or as a path to a JSON file with the same shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialSpec {
    Inline(MaterialModel),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub quad_rel_tol: f64,
    pub truncation_tol: f64,
    pub l_max_cap: u64,
    pub kk_tol: f64,
    pub kk_residual_floor: f64,
    pub weak_limit_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let l = LifshitzOptions::default();
        Self {
            quad_rel_tol: l.quad_rel_tol,
            truncation_tol: l.truncation_tol,
            l_max_cap: l.l_max_cap,
            kk_tol: KkOptions::default().tol,
            kk_residual_floor: ReportOptions::default().floor,
            weak_limit_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn lifshitz(&self) -> LifshitzOptions {
        LifshitzOptions {
            quad_rel_tol: self.quad_rel_tol,
            truncation_tol: self.truncation_tol,
            l_max_cap: self.l_max_cap,
        }
    }

    pub fn report(&self) -> ReportOptions {
        ReportOptions {
            kk: KkOptions::with_tol(self.kk_tol),
            floor: self.kk_residual_floor,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("truncation_tol", self.truncation_tol),
            ("kk_tol", self.kk_tol),
            ("kk_residual_floor", self.kk_residual_floor),
            ("weak_limit_tol", self.weak_limit_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::Validation(format!("/tolerances/{name}: must lie in (0, 1), got {v}")));
            }
        }
        if self.l_max_cap == 0 {
            return Err(CliError::Validation("/tolerances/l_max_cap: must be positive".into()));
        }
        Ok(())
    }
}

fn s(v: &str) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PressureBlock {
    pub models: Vec<String>,
    /// nm
    pub separations: Sweep,
    /// K
    pub temperatures: Sweep,
}

impl Default for PressureBlock {
    fn default() -> Self {
        Self {
            models: vec![s("drude"), s("plasma")],
            separations: Sweep::One(1000.0),
            temperatures: Sweep::One(300.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareBlock {
    pub models: Vec<String>,
    pub separations: Sweep,
    pub temperature: f64,
    pub gamma_ladder: Sweep,
}

impl Default for CompareBlock {
    fn default() -> Self {
        Self {
            models: vec![s("drude"), s("plasma")],
            separations: Sweep::Text(s("200:2000:10")),
            temperature: 300.0,
            gamma_ladder: Sweep::List(vec![1e-3, 1e-4, 1e-5, 1e-6]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KkCheckBlock {
    pub model: String,
    pub relation: Relation,
    pub quantity: Quantity,
    /// eV
    pub grid: Sweep,
}

impl Default for KkCheckBlock {
    fn default() -> Self {
        Self {
            model: s("generalized"),
            relation: Relation::Generalized,
            quantity: Quantity::ImagAxis,
            grid: Sweep::Text(s("0.01:100:64L")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeakLimitBlock {
    /// Test function of `omega`.
    pub phi: String,
    pub plasma_freq: f64,
    pub gammas: Sweep,
    pub mollifier: MollifierFamily,
    pub etas: Sweep,
    /// Also pair the mollified identity with the built-in test-function suite.
    pub suite: bool,
}

impl Default for WeakLimitBlock {
    fn default() -> Self {
        Self {
            phi: s("omega*exp(-omega^2)"),
            plasma_freq: 1.0,
            gammas: Sweep::List(vec![1e-2, 1e-3, 1e-4, 1e-5]),
            mollifier: MollifierFamily::Gaussian,
            etas: Sweep::List(vec![1e-1, 3e-2, 1e-2]),
            suite: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntropyBlock {
    pub models: Vec<String>,
    pub separation: f64,
    pub temperatures: Sweep,
    pub rel_step: f64,
}

impl Default for EntropyBlock {
    fn default() -> Self {
        Self {
            models: vec![s("drude"), s("plasma")],
            separation: 1000.0,
            temperatures: Sweep::Text(s("2:300:12L")),
            rel_step: NernstOptions::default().rel_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NernstBlock {
    pub models: Vec<String>,
    pub separation: f64,
    pub ladder: Sweep,
    pub tol: f64,
    pub rel_step: f64,
}

impl Default for NernstBlock {
    fn default() -> Self {
        let n = NernstOptions::default();
        Self {
            models: vec![s("plasma"), s("drude"), s("magnetic_drude")],
            separation: 1000.0,
            ladder: Sweep::List(thermo::DEFAULT_LADDER.to_vec()),
            tol: n.tol,
            rel_step: n.rel_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitBlock {
    /// Table to fit; without it a synthetic three-oscillator table is used.
    pub data: Option<PathBuf>,
    pub format: TableFormat,
    pub oscillators: usize,
    pub plasma_freq: f64,
    pub window_lo: f64,
    pub window_hi: Option<f64>,
    pub max_iter: usize,
}

impl Default for FitBlock {
    fn default() -> Self {
        let f = FitOptions::default();
        Self {
            data: None,
            format: TableFormat::ThreeColumn,
            oscillators: f.oscillators,
            plasma_freq: f.plasma_freq,
            window_lo: f.window_lo,
            window_hi: f.window_hi,
            max_iter: f.max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EpsFromDataBlock {
    /// Table to transform; without it a synthetic Drude table is used.
    pub data: Option<PathBuf>,
    pub format: TableFormat,
    pub xi: Sweep,
    pub extrapolation: ExtrapolationSpec,
}

/// Below-table model: `{"model": "drude", "plasma_freq": 9, "gamma": 0.035}`
/// or `{"model": "plasma", "plasma_freq": 9}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExtrapolationSpec {
    Drude { plasma_freq: f64, gamma: f64 },
    Plasma { plasma_freq: f64 },
}

impl ExtrapolationSpec {
    fn build(&self) -> Result<Extrapolation, CliError> {
        Ok(match *self {
            ExtrapolationSpec::Drude { plasma_freq, gamma } => {
                Extrapolation::DrudeBelowCutoff(DrudeParams::new(plasma_freq, gamma)?)
            }
            ExtrapolationSpec::Plasma { plasma_freq } => Extrapolation::PlasmaBelowCutoff(PlasmaParams::new(plasma_freq)?),
        })
    }
}

impl Default for EpsFromDataBlock {
    fn default() -> Self {
        Self {
            data: None,
            format: TableFormat::ThreeColumn,
            xi: Sweep::Text(s("0.01:100:32L")),
            extrapolation: ExtrapolationSpec::Drude {
                plasma_freq: 9.0,
                gamma: 0.035,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Named materials, added to (and shadowing) the built-in ones.
    pub materials: BTreeMap<String, MaterialSpec>,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub pressure: PressureBlock,
    pub compare: CompareBlock,
    pub kk_check: KkCheckBlock,
    pub weak_limit: WeakLimitBlock,
    pub entropy: EntropyBlock,
    pub nernst: NernstBlock,
    pub fit: FitBlock,
    pub eps_from_data: EpsFromDataBlock,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            materials: BTreeMap::new(),
            output_dir: PathBuf::from("casimir-out"),
            tolerances: Tolerances::default(),
            seed: 0,
            pressure: PressureBlock::default(),
            compare: CompareBlock::default(),
            kk_check: KkCheckBlock::default(),
            weak_limit: WeakLimitBlock::default(),
            entropy: EntropyBlock::default(),
            nernst: NernstBlock::default(),
            fit: FitBlock::default(),
            eps_from_data: EpsFromDataBlock::default(),
        }
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        use serde_path_to_error::Segment;
        match seg {
            Segment::Seq { index } => {
                let _ = write!(out, "/{index}");
            }
            Segment::Map { key } | Segment::Enum { variant: key } => {
                let _ = write!(out, "/{}", key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn from_json<T: serde::de::DeserializeOwned>(source: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(source);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        CliError::Validation(format!("{pointer}: {}", e.into_inner()))
    })
}

/// Parse a JSON run configuration. Unknown keys are rejected and the first
/// error is reported with its JSON pointer.
pub fn parse_config(source: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig = from_json(source)?;
    cfg.tolerances.validate()?;
    for (name, spec) in &cfg.materials {
        if let MaterialSpec::Inline(m) = spec {
            m.validate()
                .map_err(CliError::from)
                .map_err(|e| e.at(&format!("/materials/{name}/inline")))?;
        }
    }
    Ok(cfg)
}

/// Built-in materials: gold-like Drude/plasma parameters, a magnetic Drude
/// metal, a three-oscillator generalized model and a near-ideal plasma.
pub fn builtin_material(name: &str) -> Option<MaterialModel> {
    let m = match name {
        "drude" | "drude_gold" => MaterialModel::drude(9.0, 0.035),
        "plasma" | "plasma_gold" => MaterialModel::plasma(9.0),
        "magnetic_drude" => MaterialModel::drude(9.0, 0.035).and_then(|m| m.with_permeability(PermeabilityModel::static_only(110.0))),
        "generalized" => MaterialModel::generalized(builtin_oscillators()),
        "ideal" => MaterialModel::plasma(1e3),
        _ => return None,
    };
    m.ok()
}

pub const BUILTIN_MATERIALS: [&str; 7] = ["drude", "drude_gold", "plasma", "plasma_gold", "magnetic_drude", "generalized", "ideal"];

/// Plasma term plus three Lorentz oscillators, parameters in eV / eV².
pub fn builtin_oscillators() -> OscillatorSet {
    OscillatorSet {
        plasma_freq: 9.0,
        oscillators: vec![
            Oscillator::new(3.0, 0.8, 5.0),
            Oscillator::new(8.0, 2.0, 40.0),
            Oscillator::new(20.0, 5.0, 150.0),
        ],
    }
}

fn resolve_material(cfg: &RunConfig, name: &str) -> Result<MaterialModel, CliError> {
    match cfg.materials.get(name) {
        Some(MaterialSpec::Inline(m)) => Ok(m.clone()),
        Some(MaterialSpec::File(path)) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let m: MaterialModel = from_json(&text).map_err(|e| e.at(&format!("{} (material '{name}')", path.display())))?;
            m.validate().map_err(|e| CliError::from(e).at(&format!("{} (material '{name}')", path.display())))?;
            Ok(m)
        }
        None => builtin_material(name).ok_or_else(|| {
            let mut known: Vec<&str> = cfg.materials.keys().map(String::as_str).collect();
            known.extend(BUILTIN_MATERIALS);
            CliError::Validation(format!("unknown material '{name}'; known: {}", known.join(", ")))
        }),
    }
}

// ---------------------------------------------------------------------------
// Arguments
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir pressure, dispersion relations and Nernst checks for metallic plates")]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (falls back to CASIMIR_KERNEL_WORKERS).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lifshitz pressure over separations and temperatures.
    Pressure(PressureArgs),
    /// Model comparison table with a Drude γ-ladder.
    Compare(CompareArgs),
    /// Dispersion-relation residuals against closed forms.
    KkCheck(KkCheckArgs),
    /// Weak limit of the Drude response as γ → 0.
    WeakLimit(WeakLimitArgs),
    /// Casimir entropy over temperature.
    Entropy(EntropyArgs),
    /// Low-temperature Nernst classification.
    Nernst(NernstArgs),
    /// Fit Lorentz oscillators to an n/k table.
    Fit(FitArgs),
    /// ε(iξ) from an n/k table.
    EpsFromData(EpsArgs),
}

#[derive(Debug, Args)]
pub struct PressureArgs {
    #[arg(long = "model")]
    pub models: Vec<String>,
    /// Separations in nm.
    #[arg(long = "a")]
    pub separations: Option<String>,
    /// Temperatures in K.
    #[arg(long = "T")]
    pub temperatures: Option<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long = "model")]
    pub models: Vec<String>,
    #[arg(long = "a")]
    pub separations: Option<String>,
    #[arg(long = "T")]
    pub temperature: Option<f64>,
    /// Relaxation values in eV, e.g. `1e-3,1e-4,1e-5,1e-6`.
    #[arg(long)]
    pub gamma_ladder: Option<String>,
}

#[derive(Debug, Args)]
pub struct KkCheckArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// standard | generalized
    #[arg(long)]
    pub relation: Option<String>,
    /// imag_axis | real_part | imag_part
    #[arg(long)]
    pub quantity: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeakLimitArgs {
    /// Test function of `omega`, e.g. `omega*exp(-omega^2)`.
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long)]
    pub wp: Option<f64>,
    #[arg(long)]
    pub gammas: Option<String>,
    /// gaussian | lorentzian
    #[arg(long)]
    pub mollifier: Option<String>,
    #[arg(long)]
    pub etas: Option<String>,
    #[arg(long)]
    pub no_suite: bool,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long = "model")]
    pub models: Vec<String>,
    #[arg(long = "a")]
    pub separation: Option<f64>,
    #[arg(long = "T")]
    pub temperatures: Option<String>,
    #[arg(long)]
    pub rel_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NernstArgs {
    #[arg(long = "model")]
    pub models: Vec<String>,
    #[arg(long = "a")]
    pub separation: Option<f64>,
    #[arg(long)]
    pub ladder: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// three_column | two_column_nk
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long = "k")]
    pub oscillators: Option<usize>,
    #[arg(long)]
    pub wp: Option<f64>,
    #[arg(long)]
    pub window_lo: Option<f64>,
    #[arg(long)]
    pub window_hi: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EpsArgs {
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub xi: Option<String>,
    /// drude | plasma
    #[arg(long)]
    pub extrapolation: Option<String>,
    #[arg(long)]
    pub wp: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

fn enum_flag<T: serde::de::DeserializeOwned>(flag: &str, value: &str) -> Result<T, CliError> {
    serde_json::from_value(Value::String(value.replace('-', "_")))
        .map_err(|_| CliError::Validation(format!("--{flag}: unrecognized value '{value}'")))
}

fn table_format(value: &str) -> Result<TableFormat, CliError> {
    enum_flag("format", value)
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pressure(_) => "pressure",
            Command::Compare(_) => "compare",
            Command::KkCheck(_) => "kk-check",
            Command::WeakLimit(_) => "weak-limit",
            Command::Entropy(_) => "entropy",
            Command::Nernst(_) => "nernst",
            Command::Fit(_) => "fit",
            Command::EpsFromData(_) => "eps-from-data",
        }
    }

    /// Overlay flags onto the configuration.
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), CliError> {
        match self {
            Command::Pressure(a) => {
                let b = &mut cfg.pressure;
                if !a.models.is_empty() {
                    b.models = a.models.clone();
                }
                if let Some(v) = &a.separations {
                    b.separations = Sweep::Text(v.clone());
                }
                if let Some(v) = &a.temperatures {
                    b.temperatures = Sweep::Text(v.clone());
                }
            }
            Command::Compare(a) => {
                let b = &mut cfg.compare;
                if !a.models.is_empty() {
                    b.models = a.models.clone();
                }
                if let Some(v) = &a.separations {
                    b.separations = Sweep::Text(v.clone());
                }
                if let Some(v) = a.temperature {
                    b.temperature = v;
                }
                if let Some(v) = &a.gamma_ladder {
                    b.gamma_ladder = Sweep::Text(v.clone());
                }
            }
            Command::KkCheck(a) => {
                let b = &mut cfg.kk_check;
                if let Some(v) = &a.model {
                    b.model = v.clone();
                }
                if let Some(v) = &a.relation {
                    b.relation = enum_flag("relation", v)?;
                }
                if let Some(v) = &a.quantity {
                    b.quantity = enum_flag("quantity", v)?;
                }
                if let Some(v) = &a.grid {
                    b.grid = Sweep::Text(v.clone());
                }
            }
            Command::WeakLimit(a) => {
                let b = &mut cfg.weak_limit;
                if let Some(v) = &a.phi {
                    b.phi = v.clone();
                }
                if let Some(v) = a.wp {
                    b.plasma_freq = v;
                }
                if let Some(v) = &a.gammas {
                    b.gammas = Sweep::Text(v.clone());
                }
                if let Some(v) = &a.mollifier {
                    b.mollifier = enum_flag("mollifier", v)?;
                }
                if let Some(v) = &a.etas {
                    b.etas = Sweep::Text(v.clone());
                }
                if a.no_suite {
                    b.suite = false;
                }
            }
            Command::Entropy(a) => {
                let b = &mut cfg.entropy;
                if !a.models.is_empty() {
                    b.models = a.models.clone();
                }
                if let Some(v) = a.separation {
                    b.separation = v;
                }
                if let Some(v) = &a.temperatures {
                    b.temperatures = Sweep::Text(v.clone());
                }
                if let Some(v) = a.rel_step {
                    b.rel_step = v;
                }
            }
            Command::Nernst(a) => {
                let b = &mut cfg.nernst;
                if !a.models.is_empty() {
                    b.models = a.models.clone();
                }
                if let Some(v) = a.separation {
                    b.separation = v;
                }
                if let Some(v) = &a.ladder {
                    b.ladder = Sweep::Text(v.clone());
                }
                if let Some(v) = a.tol {
                    b.tol = v;
                }
            }
            Command::Fit(a) => {
                let b = &mut cfg.fit;
                if let Some(v) = &a.data {
                    b.data = Some(v.clone());
                }
                if let Some(v) = &a.format {
                    b.format = table_format(v)?;
                }
                if let Some(v) = a.oscillators {
                    b.oscillators = v;
                }
                if let Some(v) = a.wp {
                    b.plasma_freq = v;
                }
                if let Some(v) = a.window_lo {
                    b.window_lo = v;
                }
                if let Some(v) = a.window_hi {
                    b.window_hi = Some(v);
                }
                if let Some(v) = a.max_iter {
                    b.max_iter = v;
                }
            }
            Command::EpsFromData(a) => {
                let b = &mut cfg.eps_from_data;
                if let Some(v) = &a.data {
                    b.data = Some(v.clone());
                }
                if let Some(v) = &a.format {
                    b.format = table_format(v)?;
                }
                if let Some(v) = &a.xi {
                    b.xi = Sweep::Text(v.clone());
                }
                let (mut wp, mut gamma, mut kind) = match b.extrapolation {
                    ExtrapolationSpec::Drude { plasma_freq, gamma } => (plasma_freq, gamma, "drude"),
                    ExtrapolationSpec::Plasma { plasma_freq } => (plasma_freq, 0.0, "plasma"),
                };
                if let Some(v) = &a.extrapolation {
                    kind = match v.as_str() {
                        "drude" => "drude",
                        "plasma" => "plasma",
                        other => return Err(CliError::Validation(format!("--extrapolation: unrecognized value '{other}'"))),
                    };
                }
                if let Some(v) = a.wp {
                    wp = v;
                }
                if let Some(v) = a.gamma {
                    gamma = v;
                }
                b.extrapolation = if kind == "drude" {
                    ExtrapolationSpec::Drude { plasma_freq: wp, gamma }
                } else {
                    ExtrapolationSpec::Plasma { plasma_freq: wp }
                };
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

/// Files produced by one run plus a command-specific summary.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub summary: Value,
    /// Set when the run finished but some result did not converge.
    pub non_convergence: Option<String>,
}

impl RunOutput {
    fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn cell(c: &Result<f64, String>) -> String {
    match c {
        Ok(v) => fmt(*v),
        Err(_) => "ERR".into(),
    }
}

fn gnuplot(csv: &str, xlabel: &str, ylabel: &str, x: usize, ys: &[(usize, &str)], logx: bool) -> String {
    let mut g = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    let _ = writeln!(g, "set xlabel '{xlabel}'\nset ylabel '{ylabel}'");
    if logx {
        g.push_str("set logscale x\n");
    }
    let plots: Vec<String> = ys
        .iter()
        .map(|(col, title)| format!("'{csv}' using {x}:{col} with linespoints title '{title}'"))
        .collect();
    let _ = writeln!(g, "plot {}", plots.join(", \\\n     "));
    g
}

fn positive(values: &[f64], pointer: &str) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Validation(format!("{pointer}: empty")));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(CliError::Validation(format!("{pointer}: values must be positive, got {v}")));
    }
    Ok(())
}

fn sweep(sw: &Sweep, pointer: &str) -> Result<Vec<f64>, CliError> {
    let v = sw.values().map_err(|e| e.at(pointer))?;
    positive(&v, pointer)?;
    Ok(v)
}

fn models(cfg: &RunConfig, names: &[String], pointer: &str) -> Result<Vec<(String, MaterialModel)>, CliError> {
    if names.is_empty() {
        return Err(CliError::Validation(format!("{pointer}: at least one model is required")));
    }
    names
        .iter()
        .enumerate()
        .map(|(i, n)| Ok((n.clone(), resolve_material(cfg, n).map_err(|e| e.at(&format!("{pointer}/{i}")))?)))
        .collect()
}

fn compile_phi(expr: &str) -> Result<impl Fn(f64) -> f64, CliError> {
    let parsed: meval::Expr = expr
        .parse()
        .map_err(|e| CliError::Validation(format!("/weak_limit/phi: cannot parse '{expr}': {e}")))?;
    parsed
        .bind("omega")
        .map_err(|e| CliError::Validation(format!("/weak_limit/phi: {e}; the variable is `omega`")))
}

/// Everything a command needs, validated before any computation starts.
enum Plan {
    Pressure {
        models: Vec<(String, MaterialModel)>,
        separations: Vec<f64>,
        temperatures: Vec<f64>,
    },
    Compare {
        models: Vec<(String, MaterialModel)>,
        separations: Vec<f64>,
        temperature: f64,
        ladder: Vec<f64>,
    },
    KkCheck {
        name: String,
        model: MaterialModel,
        grid: FrequencyGrid,
    },
    WeakLimit {
        gammas: Vec<f64>,
        etas: Vec<f64>,
    },
    Entropy {
        models: Vec<(String, MaterialModel)>,
        temperatures: Vec<f64>,
    },
    Nernst {
        models: Vec<(String, MaterialModel)>,
        ladder: Vec<f64>,
    },
    Fit {
        table: optics::OpticalDataTable,
    },
    EpsFromData {
        table: optics::OpticalDataTable,
        xi: Vec<f64>,
        extrapolation: Extrapolation,
    },
}

fn load_table(path: &Option<PathBuf>, format: TableFormat, fallback: impl FnOnce() -> Result<optics::OpticalDataTable, OpticsError>) -> Result<optics::OpticalDataTable, CliError> {
    match path {
        Some(p) => {
            let file = fs::File::open(p).map_err(|e| io_err(p, e))?;
            optics::load_nk_table(file, format, p.display().to_string()).map_err(|e| match e {
                OpticsError::Io(io) => io_err(p, io),
                other => CliError::from(other).at(&p.display().to_string()),
            })
        }
        None => fallback().map_err(CliError::from),
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn plan(cmd: &Command, cfg: &RunConfig) -> Result<Plan, CliError> {
    Ok(match cmd {
        Command::Pressure(_) => {
            let b = &cfg.pressure;
            Plan::Pressure {
                models: models(cfg, &b.models, "/pressure/models")?,
                separations: sweep(&b.separations, "/pressure/separations")?,
                temperatures: sweep(&b.temperatures, "/pressure/temperatures")?,
            }
        }
        Command::Compare(_) => {
            let b = &cfg.compare;
            positive(&[b.temperature], "/compare/temperature")?;
            Plan::Compare {
                models: models(cfg, &b.models, "/compare/models")?,
                separations: sweep(&b.separations, "/compare/separations")?,
                temperature: b.temperature,
                ladder: sweep(&b.gamma_ladder, "/compare/gamma_ladder")?,
            }
        }
        Command::KkCheck(_) => {
            let b = &cfg.kk_check;
            let model = resolve_material(cfg, &b.model).map_err(|e| e.at("/kk_check/model"))?;
            let nodes = sweep(&b.grid, "/kk_check/grid")?;
            let grid = FrequencyGrid::new(nodes, TailPolicy::default()).map_err(|e| CliError::from(e).at("/kk_check/grid"))?;
            let admissible = match (b.relation, &model.dielectric) {
                (Relation::Standard, Dielectric::Plasma(_)) => false,
                (Relation::Standard, Dielectric::Generalized(s)) => s.plasma_freq == 0.0,
                (Relation::Generalized, Dielectric::Drude(_)) => false,
                _ => true,
            };
            if !admissible || (b.quantity != Quantity::ImagAxis && !matches!(model.dielectric, Dielectric::Plasma(_) | Dielectric::Generalized(_))) {
                let why = if b.relation == Relation::Standard {
                    "the standard Kramers-Kronig relation is not applicable to a susceptibility with a second-order pole at ω = 0 (plasma-like); use --relation generalized"
                } else {
                    "the generalized relation applies to plasma-like susceptibilities; use --relation standard for Drude"
                };
                return Err(CliError::Validation(format!("INADMISSIBLE: model '{}': {why}", b.model)));
            }
            if b.quantity != Quantity::ImagAxis && b.relation == Relation::Standard {
                return Err(CliError::Validation(
                    "/kk_check/quantity: real-axis round trips are provided for the generalized relation".into(),
                ));
            }
            Plan::KkCheck {
                name: b.model.clone(),
                model,
                grid,
            }
        }
        Command::WeakLimit(_) => {
            let b = &cfg.weak_limit;
            let _ = compile_phi(&b.phi)?;
            positive(&[b.plasma_freq], "/weak_limit/plasma_freq")?;
            Plan::WeakLimit {
                gammas: sweep(&b.gammas, "/weak_limit/gammas")?,
                etas: sweep(&b.etas, "/weak_limit/etas")?,
            }
        }
        Command::Entropy(_) => {
            let b = &cfg.entropy;
            positive(&[b.separation], "/entropy/separation")?;
            if !(b.rel_step > 0.0 && b.rel_step < 0.5) {
                return Err(CliError::Validation(format!("/entropy/rel_step: must lie in (0, 0.5), got {}", b.rel_step)));
            }
            Plan::Entropy {
                models: models(cfg, &b.models, "/entropy/models")?,
                temperatures: sweep(&b.temperatures, "/entropy/temperatures")?,
            }
        }
        Command::Nernst(_) => {
            let b = &cfg.nernst;
            positive(&[b.separation, b.tol], "/nernst")?;
            let ladder = sweep(&b.ladder, "/nernst/ladder")?;
            let n = NernstOptions::default();
            if !ladder.windows(2).all(|w| w[1] < w[0]) || ladder.len() < n.min_points || *ladder.last().unwrap_or(&f64::INFINITY) > n.floor {
                return Err(CliError::Validation(format!(
                    "/nernst/ladder: must be strictly decreasing, hold >= {} points and reach <= {} K",
                    n.min_points, n.floor
                )));
            }
            Plan::Nernst {
                models: models(cfg, &b.models, "/nernst/models")?,
                ladder,
            }
        }
        Command::Fit(_) => {
            let b = &cfg.fit;
            if b.oscillators == 0 {
                return Err(CliError::Validation(
                    "/fit/oscillators: must be >= 1; the plasma term is fixed, so K = 0 leaves nothing to fit".into(),
                ));
            }
            let table = load_table(&b.data, b.format, || {
                optics::synthetic_table(
                    &Dielectric::Generalized(builtin_oscillators()),
                    &log_grid(0.5, 60.0, 300),
                    "synthetic: generalized model with three oscillators",
                )
            })?;
            Plan::Fit { table }
        }
        Command::EpsFromData(_) => {
            let b = &cfg.eps_from_data;
            let extrapolation = b.extrapolation.build().map_err(|e| e.at("/eps_from_data/extrapolation"))?;
            let table = load_table(&b.data, b.format, || {
                optics::synthetic_table(
                    &Dielectric::Drude(DrudeParams { plasma_freq: 9.0, gamma: 0.035 }),
                    &log_grid(0.05, 500.0, 800),
                    "synthetic: Drude(9.0 eV, 0.035 eV)",
                )
            })?;
            Plan::EpsFromData {
                table,
                xi: sweep(&b.xi, "/eps_from_data/xi")?,
                extrapolation,
            }
        }
    })
}

fn execute(plan: Plan, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let mut out = RunOutput::default();
    let lopts = cfg.tolerances.lifshitz();
    match plan {
        Plan::Pressure {
            models,
            separations,
            temperatures,
        } => {
            let mut csv = String::from("model,a_nm,T_K,pressure_Pa,ratio_to_ideal,l0_te_Pa,l0_tm_Pa,l_max,quad_err_est\n");
            for (name, m) in &models {
                for &t in &temperatures {
                    for &a in &separations {
                        let r = lifshitz::pressure(&MirrorPair::symmetric(m.clone(), a), t, &lopts)?;
                        let _ = writeln!(
                            csv,
                            "{name},{},{},{},{},{},{},{},{}",
                            fmt(a),
                            fmt(t),
                            fmt(r.pressure),
                            fmt(r.pressure / lifshitz::pressure_ideal_metal(a)),
                            fmt(r.l0_te),
                            fmt(r.l0_tm),
                            r.l_max_used,
                            fmt(r.quad_err_est)
                        );
                    }
                }
            }
            out.add("pressure.csv", csv);
            out.add("pressure.gp", gnuplot("pressure.csv", "a (nm)", "P (Pa)", 2, &[(4, "pressure")], true));
        }
        Plan::Compare {
            models,
            separations,
            temperature,
            ladder,
        } => {
            let named: Vec<NamedModel> = models.iter().map(|(n, m)| NamedModel::symmetric(n.clone(), m.clone())).collect();
            let table = lifshitz::compare_models(&separations, temperature, &named, &ladder, &lopts);
            let mut csv = String::from("a_nm,model,pressure_Pa,ratio_to_ideal,l0_te_share");
            for g in &ladder {
                let _ = write!(csv, ",drude_gamma_{}", fmt(*g));
            }
            csv.push('\n');
            let mut errors = Vec::new();
            for r in &table.rows {
                let _ = write!(
                    csv,
                    "{},{},{},{},{}",
                    fmt(r.separation),
                    r.model_id,
                    cell(&r.pressure),
                    cell(&r.ratio_to_ideal),
                    cell(&r.l0_te_share)
                );
                for c in &r.gamma_ladder {
                    csv.push(',');
                    csv.push_str(&c.as_ref().map_or_else(|| "NA".into(), cell));
                }
                csv.push('\n');
                for c in std::iter::once(&r.pressure).chain(r.gamma_ladder.iter().flatten()) {
                    if let Err(e) = c {
                        errors.push(json!({"a_nm": r.separation, "model": r.model_id, "error": e}));
                    }
                }
            }
            out.add("compare.csv", csv);
            out.add("compare.gp", gnuplot("compare.csv", "a (nm)", "P / P_ideal", 1, &[(4, "ratio to ideal")], true));
            if !errors.is_empty() {
                out.non_convergence = Some(format!("{} table cell(s) failed; see manifest", errors.len()));
            }
            out.summary = json!({"temperature_K": temperature, "cell_errors": errors});
        }
        Plan::KkCheck { name, model, grid } => {
            let b = &cfg.kk_check;
            let ropts = cfg.tolerances.report();
            let report = match (b.quantity, &model.dielectric) {
                (Quantity::ImagAxis, d) => dispersion::kk_residual_report(d, &grid, b.relation, &ropts)?,
                (q, Dielectric::Generalized(s)) => dispersion::kk_real_axis_report(s, &grid, q, &ropts),
                (q, Dielectric::Plasma(p)) => dispersion::kk_real_axis_report(&OscillatorSet::from(*p), &grid, q, &ropts),
                (_, Dielectric::Drude(_)) => unreachable!("rejected during planning"),
            };
            out.add("kk_check.csv", report.to_csv());
            out.add(
                "kk_check.gp",
                gnuplot("kk_check.csv", "frequency (eV)", "relative residual", 1, &[(5, "relative residual")], true),
            );
            out.summary = json!({
                "model": name,
                "relation": report.relation,
                "quantity": report.quantity,
                "max_abs_residual": report.max_abs_residual,
                "max_rel_residual": report.max_rel_residual,
                "failed_nodes": report.failed_nodes,
            });
            if report.failed_nodes > 0 {
                out.non_convergence = Some(format!("{} node(s) failed to converge", report.failed_nodes));
            }
        }
        Plan::WeakLimit { gammas, etas } => {
            let b = &cfg.weak_limit;
            let phi = compile_phi(&b.phi)?;
            let h = 1e-4;
            let slope = (phi(h) - phi(-h)) / (2.0 * h);
            let predicted = dispersion::predicted_weak_limit(b.plasma_freq, slope);
            let pts = dispersion::weak_limit_drude(b.plasma_freq, &phi, &gammas, cfg.tolerances.weak_limit_tol)?;
            let mut csv = String::from("gamma_eV,quad_err_est,abs_diff_from_limit,I_gamma\n");
            for p in &pts {
                let _ = writeln!(csv, "{},{},{},{}", fmt(p.gamma), fmt(p.err_est), fmt((p.value - predicted).abs()), fmt(p.value));
            }
            out.add("weak_limit.csv", csv);
            out.add("weak_limit.gp", gnuplot("weak_limit.csv", "gamma (eV)", "I(gamma)", 1, &[(4, "I(gamma)")], true));

            let deltas: Vec<MollifiedDelta> = etas.iter().map(|&e| MollifiedDelta::new(e, b.mollifier)).collect();
            let mut mcsv = String::from("function,eta,identity_pairing\n");
            let own = dispersion::mollified_delta_identity(&phi, &deltas, cfg.tolerances.weak_limit_tol)?;
            for (d, v) in deltas.iter().zip(&own) {
                let _ = writeln!(mcsv, "phi,{},{}", fmt(d.width), fmt(*v));
            }
            let mut worst_at_smallest = own.last().copied().unwrap_or(0.0).abs();
            if b.suite {
                for (i, f) in dispersion::test_suite().iter().enumerate() {
                    let vals = dispersion::mollified_delta_identity(|w| f.eval(w), &deltas, cfg.tolerances.weak_limit_tol)?;
                    for (d, v) in deltas.iter().zip(&vals) {
                        let _ = writeln!(mcsv, "suite_{i:02},{},{}", fmt(d.width), fmt(*v));
                    }
                    worst_at_smallest = worst_at_smallest.max(vals.last().copied().unwrap_or(0.0).abs());
                }
            }
            out.add("mollified_identity.csv", mcsv);
            out.summary = json!({
                "phi": b.phi,
                "phi_prime_at_zero": slope,
                "predicted_limit": predicted,
                "final_value": pts.last().map(|p| p.value),
                "test_suite": if b.suite { Some(dispersion::TEST_SUITE_VERSION) } else { None },
                "max_abs_identity_at_smallest_eta": worst_at_smallest,
            });
        }
        Plan::Entropy { models, temperatures } => {
            let b = &cfg.entropy;
            let mut csv = String::from("model,T_K,entropy_J_per_m2K,err_est,rel_step\n");
            for (name, m) in &models {
                let pair = MirrorPair::symmetric(m.clone(), b.separation);
                for &t in &temperatures {
                    let e = thermo::entropy(&pair, t, b.rel_step, &lopts)?;
                    let _ = writeln!(csv, "{name},{},{},{},{}", fmt(t), fmt(e.entropy), fmt(e.err_est), fmt(e.rel_step));
                }
            }
            out.add("entropy.csv", csv);
            out.add("entropy.gp", gnuplot("entropy.csv", "T (K)", "S (J/m^2 K)", 2, &[(3, "entropy")], true));
        }
        Plan::Nernst { models, ladder } => {
            let b = &cfg.nernst;
            let nopts = NernstOptions {
                tol: b.tol,
                rel_step: b.rel_step,
                ..NernstOptions::default()
            };
            let mut csv = String::from("model,T_K,entropy_J_per_m2K,err_est\n");
            let mut verdicts = serde_json::Map::new();
            for (name, m) in &models {
                let pair = MirrorPair::symmetric(m.clone(), b.separation);
                let r = thermo::nernst_probe(&pair, &ladder, &nopts, &lopts)?;
                for (i, t) in r.curve.temperatures.iter().enumerate() {
                    let _ = writeln!(csv, "{name},{},{},{}", fmt(*t), fmt(r.curve.entropy[i]), fmt(r.curve.err_est[i]));
                }
                let plateau = match r.verdict {
                    NernstVerdict::ViolatesNernst { plateau } => Some(plateau),
                    NernstVerdict::SatisfiesNernst => None,
                };
                verdicts.insert(
                    name.clone(),
                    json!({
                        "verdict": r.verdict,
                        "plateau": plateau,
                        "reference_entropy": r.reference_entropy,
                        "extrapolated_zero": r.curve.extrapolated_zero,
                        "extrapolated_uncertainty": r.curve.extrapolated_uncertainty,
                    }),
                );
            }
            out.add("nernst.csv", csv);
            out.add("nernst.gp", gnuplot("nernst.csv", "T (K)", "S (J/m^2 K)", 2, &[(3, "entropy")], true));
            out.summary = Value::Object(verdicts);
        }
        Plan::Fit { table } => {
            let b = &cfg.fit;
            let fopts = FitOptions {
                oscillators: b.oscillators,
                plasma_freq: b.plasma_freq,
                window_lo: b.window_lo,
                window_hi: b.window_hi,
                max_iter: b.max_iter,
                ..FitOptions::default()
            };
            let fit = optics::fit_oscillators(&table, &fopts)?;
            out.add("fit.json", serde_json::to_string_pretty(&fit).unwrap_or_default() + "\n");
            out.add("fit_residuals.csv", fit.residual_csv());
            out.add(
                "fit_residuals.gp",
                gnuplot("fit_residuals.csv", "omega (eV)", "epsilon", 1, &[(2, "Re data"), (4, "Re model"), (3, "Im data"), (5, "Im model")], true),
            );
            if fit.status == FitStatus::NotConverged {
                out.non_convergence = Some(format!("NOT_CONVERGED after {} iterations; best parameters written", fit.iterations));
            }
            out.summary = json!({
                "table": table.provenance,
                "status": fit.status,
                "residual_norm": fit.residual_norm,
                "warnings": fit.warnings,
            });
        }
        Plan::EpsFromData { table, xi, extrapolation } => {
            let kk = KkOptions::with_tol(cfg.tolerances.kk_tol);
            let mut csv = String::from("xi_eV,eps_imag_axis\n");
            for &x in &xi {
                let e = optics::eps_imag_axis_from_data(&table, x, &extrapolation, &kk)?;
                let _ = writeln!(csv, "{},{}", fmt(x), fmt(e));
            }
            out.add("eps_from_data.csv", csv);
            out.add("eps_from_data.gp", gnuplot("eps_from_data.csv", "xi (eV)", "epsilon(i xi)", 1, &[(2, "from data")], true));
            out.summary = json!({"table": table.provenance, "rows": table.rows().len()});
        }
    }
    Ok(out)
}

fn workers_from(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("{WORKERS_ENV}: expected a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

/// Resolve the configuration for a parsed command line.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            parse_config(&text).map_err(|e| e.at(&path.display().to_string()))?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    cli.command.apply(&mut cfg)?;
    Ok(cfg)
}

/// Run one command and write its artifacts. Returns the written paths.
pub fn run_cli(cli: &Cli, argv: &[String]) -> Result<Vec<PathBuf>, CliError> {
    let start = Instant::now();
    let cfg = resolve(cli)?;
    let workers = workers_from(cli.workers)?;
    if workers == Some(0) {
        return Err(CliError::Validation("--workers: must be >= 1".into()));
    }
    let plan = plan(&cli.command, &cfg)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?
    };
    let output = pool.install(|| execute(plan, &cfg))?;

    fs::create_dir_all(&cfg.output_dir).map_err(|e| io_err(&cfg.output_dir, e))?;
    let mut written = Vec::new();
    for (name, content) in &output.files {
        let path = cfg.output_dir.join(name);
        fs::write(&path, content).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    let manifest = json!({
        "tool": "casimir",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "argv": argv,
        "config": cfg,
        "workers": workers.unwrap_or_else(rayon::current_num_threads),
        "outputs": output.files.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "summary": output.summary,
        "status": if output.non_convergence.is_some() { "non_convergence" } else { "ok" },
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    let path = cfg.output_dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap_or_default() + "\n").map_err(|e| io_err(&path, e))?;
    written.push(path);
    if let Some(msg) = output.non_convergence {
        return Err(CliError::NonConvergence(msg));
    }
    Ok(written)
}

/// Entry point: parse `argv`, run, report, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Validation(e.to_string().lines().next().unwrap_or("invalid arguments").to_string());
            eprintln!("{}", err.record());
            return err.exit_code();
        }
    };
    let args: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run_cli(&cli, &args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
