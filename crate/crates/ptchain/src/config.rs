//! Serde forms of the run configuration and of the per-command parameter
//! blocks. Every struct rejects unknown keys.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use ptchain_core::chain::{ChainSpec, Parity};
use ptchain_core::region::{GammaProfile, ProfileKind};
use ptchain_core::spectral::DEFAULT_IMAG_TOL;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Spectrum,
    Scan,
    GammaCrit,
    Planar,
    Simulate,
    Impurity,
    Poly,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Spectrum => "spectrum",
            CommandName::Scan => "scan",
            CommandName::GammaCrit => "gamma-crit",
            CommandName::Planar => "planar",
            CommandName::Simulate => "simulate",
            CommandName::Impurity => "impurity",
            CommandName::Poly => "poly",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn default_imag() -> f64 {
    DEFAULT_IMAG_TOL
}
fn default_refine() -> f64 {
    1e-10
}
fn default_search() -> f64 {
    1e-6
}

/// Defaults: `imag = 1e-9` (relative reality test), `refine = 1e-10`
/// (boundary bisection), `search = 1e-6` (critical-γ bisection).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_imag")]
    pub imag: f64,
    #[serde(default = "default_refine")]
    pub refine: f64,
    #[serde(default = "default_search")]
    pub search: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { imag: default_imag(), refine: default_refine(), search: default_search() }
    }
}

/// A complete, reproducible description of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    /// Command-specific block, checked against the command's schema at run time.
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Used only by commands with randomized inputs.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(command: CommandName) -> Self {
        Self {
            command,
            params: Map::new(),
            output: None,
            format: Format::Csv,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// The parameter block decoded as `T`.
    pub fn params<T: for<'de> Deserialize<'de>>(&self) -> CliResult<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| CliError::Usage(format!("{} parameters: {e}", self.command.as_str())))
    }

    /// Overwrites parameters with the non-null entries of `overrides`.
    pub fn merge_params(&mut self, overrides: Value) {
        if let Value::Object(m) = overrides {
            for (k, v) in m {
                if !v.is_null() {
                    self.params.insert(k, v);
                }
            }
        }
    }
}

/// A scalar applied to every entry, or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn expand(&self, len: usize, what: &str) -> CliResult<Vec<f64>> {
        match self {
            OneOrMany::One(x) => Ok(vec![*x; len]),
            OneOrMany::Many(v) if v.len() == 1 => Ok(vec![v[0]; len]),
            OneOrMany::Many(v) if v.len() == len => Ok(v.clone()),
            OneOrMany::Many(v) => Err(CliError::Usage(format!(
                "{what} has {} entries, expected 1 or {len}",
                v.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ParityName {
    #[default]
    Even,
    Odd,
}

impl From<ParityName> for Parity {
    fn from(p: ParityName) -> Self {
        match p {
            ParityName::Even => Parity::Even,
            ParityName::Odd => Parity::Odd,
        }
    }
}

/// JSON form of a chain. `omega` has `n` entries for even chains and `n + 1`
/// for odd ones (center last); any field may be a single number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n: usize,
    #[serde(default)]
    pub parity: ParityName,
    pub omega: OneOrMany,
    pub gamma: OneOrMany,
    pub epsilon: OneOrMany,
}

impl ChainConfig {
    pub fn to_spec(&self) -> CliResult<ChainSpec> {
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        let n_omega = match self.parity {
            ParityName::Even => self.n,
            ParityName::Odd => self.n + 1,
        };
        Ok(ChainSpec::new(
            self.n,
            self.parity.into(),
            self.omega.expand(n_omega, "omega")?,
            self.gamma.expand(self.n, "gamma")?,
            self.epsilon.expand(self.n, "epsilon")?,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    #[default]
    Uniform,
    Inverse,
    InverseSquare,
    Custom,
}

/// `{"profile": "uniform" | "inverse" | "inverse_square", "gamma": 0.1}`;
/// `"custom"` additionally takes per-pair `weights`, outermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    #[serde(default)]
    pub profile: ProfileName,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl ProfileConfig {
    pub fn to_profile(&self) -> CliResult<GammaProfile> {
        Ok(GammaProfile::new(profile_kind(self.profile, self.weights.as_deref())?, self.gamma))
    }
}

pub fn profile_kind(name: ProfileName, weights: Option<&[f64]>) -> CliResult<ProfileKind> {
    match (name, weights) {
        (ProfileName::Custom, Some(w)) => Ok(ProfileKind::Custom(w.to_vec())),
        (ProfileName::Custom, None) => Err(CliError::Usage("custom profile needs weights".into())),
        (_, Some(_)) => Err(CliError::Usage("weights are only accepted with the custom profile".into())),
        (ProfileName::Uniform, None) => Ok(ProfileKind::Uniform),
        (ProfileName::Inverse, None) => Ok(ProfileKind::Inverse),
        (ProfileName::InverseSquare, None) => Ok(ProfileKind::InverseSquare),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMethod {
    /// Closed form for uniform even chains, companion matrix otherwise.
    #[default]
    Auto,
    Analytic,
    Qep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    pub n: usize,
    #[serde(default)]
    pub parity: ParityName,
    pub omega: OneOrMany,
    pub gamma: OneOrMany,
    pub epsilon: OneOrMany,
    #[serde(default)]
    pub method: SpectrumMethod,
}

impl SpectrumParams {
    pub fn chain(&self) -> ChainConfig {
        ChainConfig {
            n: self.n,
            parity: self.parity,
            omega: self.omega.clone(),
            gamma: self.gamma.clone(),
            epsilon: self.epsilon.clone(),
        }
    }
}

fn default_grid() -> usize {
    400
}
fn default_omega() -> f64 {
    1.0
}

/// Coupling sweep. `eps_max` defaults to `1.5 ω²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    pub n: usize,
    #[serde(default)]
    pub parity: ParityName,
    pub omega: f64,
    pub gamma: f64,
    #[serde(default)]
    pub profile: ProfileName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub eps_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_max: Option<f64>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub method: SpectrumMethod,
}

/// Critical amplitude for one size `n` or for every size up to `n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaCritParams {
    #[serde(default)]
    pub profile: ProfileName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PlanarMode {
    /// Phase intervals along `ε₂` at fixed `ε₁`.
    #[default]
    Scan,
    /// Unbroken flags over `[0, eps1_max] × [eps2_min, eps2_max]`.
    Diagram,
    /// Imaginary parts of the six frequencies along `ε₂`.
    Trace,
}

fn default_diagram_resolution() -> usize {
    64
}
fn default_trace_points() -> usize {
    256
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarParams {
    pub omega: f64,
    pub gamma: f64,
    #[serde(default)]
    pub mode: PlanarMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps1_max: Option<f64>,
    #[serde(default)]
    pub eps2_min: f64,
    pub eps2_max: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_diagram_resolution")]
    pub resolution: usize,
    #[serde(default = "default_trace_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SystemName {
    #[default]
    Chain,
    Trio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RepName {
    #[default]
    Sum,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// `x₁ = 1`, everything else at rest.
    #[default]
    Kick,
    /// Coordinates and velocities uniform in `[−1, 1]` from the run seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitInitial {
    pub coords: Vec<f64>,
    pub velocities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Initial {
    Named(InitialKind),
    Explicit(ExplicitInitial),
}

impl Default for Initial {
    fn default() -> Self {
        Initial::Named(InitialKind::Kick)
    }
}

fn default_stride() -> usize {
    1
}

/// Trajectory of a chain (`n`, `epsilon` required) or of the planar trio
/// (`eps1`, `eps2` required, scalar `omega` and `gamma`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateParams {
    #[serde(default)]
    pub system: SystemName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub parity: ParityName,
    pub omega: OneOrMany,
    pub gamma: OneOrMany,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps2: Option<f64>,
    #[serde(default)]
    pub rep: RepName,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub initial: Initial,
    /// Also report spectral peaks of this coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peaks: Option<usize>,
}

fn default_c() -> f64 {
    1.0
}
fn default_half_width() -> f64 {
    20.0
}
fn default_mode_points() -> usize {
    2001
}
fn default_fd_half_width() -> f64 {
    40.0
}
fn default_fd_points() -> usize {
    801
}
fn default_fd_dt() -> f64 {
    0.02
}
fn default_record_every() -> usize {
    50
}

/// Pseudo-bound mode profile, or with `evolve` its finite-difference
/// evolution up to that time under a Gaussian-regularised impurity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpurityParams {
    #[serde(default = "default_c")]
    pub c: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub big_omega: f64,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default = "default_mode_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<f64>,
    #[serde(default = "default_fd_half_width")]
    pub fd_half_width: f64,
    #[serde(default = "default_fd_points")]
    pub fd_points: usize,
    #[serde(default = "default_fd_dt")]
    pub dt: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyParams {
    pub n: usize,
}
