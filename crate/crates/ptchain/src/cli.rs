//! Argument parsing and the command implementations.
//!
//! Each subcommand flag is the `params` key of the same name with dashes in
//! place of underscores, so a run can be given entirely by flags, entirely by
//! `--config run.json`, or by a config file with flags overriding it.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use ptchain_core::chain::HamiltonianRep;
use ptchain_core::continuum::{fd_wave_solver, gaussian_impurity, impurity_mode, Boundary, ContinuumParams, FdGrid};
use ptchain_core::dynamics::{conservation_report, integrate_strided, HamiltonianSystem};
use ptchain_core::planar::{trio_eps2_scan, trio_im_lambda_trace, trio_phase_diagram, TrioParams};
use ptchain_core::region::{
    gamma_crit, scan_with, unbroken_condition_closed_form, ChainTemplate, GammaProfile, RegionReport,
    GAMMA_CRIT_EPS_SPAN,
};
use ptchain_core::spectral::{analytic_spectrum, charpoly_recursive, classify, qep_spectrum, Spectrum};

use crate::config::*;
use crate::error::{CliError, CliResult};
use crate::frequency::{frequency_extract_coordinate, FrequencyEstimate};
use crate::output::{self, write_atomic};
use crate::parallel::Rayon;

const AFTER_HELP: &str = "\
Every subcommand flag maps to the `params` key of the same name with `-`
replaced by `_`. A config file has the form
  {\"command\": \"scan\", \"params\": {...}, \"output\": \"out.csv\",
   \"format\": \"csv\", \"seed\": 0,
   \"tolerances\": {\"imag\": 1e-9, \"refine\": 1e-10, \"search\": 1e-6}}
and unknown keys are rejected. Flags override the file.

Exit codes: 0 success, 2 usage or configuration, 3 numerical failure, 4 I/O.
Thread count for grid sweeps: PTCHAIN_THREADS.";

#[derive(Parser, Debug)]
#[command(name = "ptchain", version, about = "Spectra, phase scans and dynamics of loss/gain oscillator chains")]
#[command(after_help = AFTER_HELP)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Default)]
pub struct GlobalArgs {
    /// Run configuration file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Data file to write; without it only the summary is printed.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the resolved configuration to this path.
    #[arg(long, global = true)]
    pub emit_config: Option<PathBuf>,
    /// Relative tolerance on Im λ for the reality test.
    #[arg(long, global = true)]
    pub imag_tol: Option<f64>,
    /// Bisection tolerance for phase boundaries.
    #[arg(long, global = true)]
    pub refine_tol: Option<f64>,
    /// Bisection tolerance for critical amplitudes.
    #[arg(long, global = true)]
    pub search_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frequencies of a chain and their classification.
    Spectrum(SpectrumArgs),
    /// Phase intervals along the coupling.
    Scan(ScanArgs),
    /// Largest loss/gain amplitude with an unbroken coupling interval.
    GammaCrit(GammaCritArgs),
    /// Three-oscillator planar configuration.
    Planar(PlanarArgs),
    /// Fixed-step trajectory with conservation diagnostics.
    Simulate(SimulateArgs),
    /// Pseudo-bound state of the continuum impurity.
    Impurity(ImpurityArgs),
    /// Characteristic polynomial coefficient table.
    Poly(PolyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    /// Number of loss/gain pairs.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityName>,
    /// Natural frequency, or a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    pub omega: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub epsilon: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub method: Option<SpectrumMethod>,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityName>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Loss/gain amplitude of the profile.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub profile: Option<ProfileName>,
    /// Per-pair weights for the custom profile, outermost first.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_min: Option<f64>,
    /// Defaults to 1.5 ω².
    #[arg(long, allow_negative_numbers = true)]
    pub eps_max: Option<f64>,
    /// Grid points before refinement (default 400).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<SpectrumMethod>,
}

#[derive(Args, Debug, Serialize)]
pub struct GammaCritArgs {
    #[arg(long, value_enum)]
    pub profile: Option<ProfileName>,
    /// A single chain size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Tabulate sizes from `n` (default 1) up to this one.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Default 1.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct PlanarArgs {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<PlanarMode>,
    /// Coupling to the middle oscillator (scan and trace).
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    /// Upper end of the ε₁ axis (diagram).
    #[arg(long)]
    pub eps1_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2_max: Option<f64>,
    /// Scan grid points (default 400).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Diagram points per axis (default 64).
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Trace points (default 256).
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: Option<SystemName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub parity: Option<ParityName>,
    #[arg(long, value_delimiter = ',')]
    pub omega: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub epsilon: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps2: Option<f64>,
    #[arg(long, value_enum)]
    pub rep: Option<RepName>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Record every this many steps (default 1).
    #[arg(long)]
    pub stride: Option<usize>,
    /// Initial data; explicit coordinates and velocities only via config.
    #[arg(long, value_enum)]
    pub initial: Option<InitialKind>,
    /// Report spectral peaks of this coordinate (0-based).
    #[arg(long)]
    pub peaks: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct ImpurityArgs {
    /// Wave speed (default 1).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Mode frequency Ω.
    #[arg(long, allow_negative_numbers = true)]
    pub big_omega: Option<f64>,
    /// Mode profile half-width (default 20).
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Mode profile samples (default 2001).
    #[arg(long)]
    pub points: Option<usize>,
    /// Evolve the mode with the finite-difference solver up to this time.
    #[arg(long)]
    pub evolve: Option<f64>,
    /// Default 40.
    #[arg(long)]
    pub fd_half_width: Option<f64>,
    /// Default 801.
    #[arg(long)]
    pub fd_points: Option<usize>,
    /// Default 0.02.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Default 50.
    #[arg(long)]
    pub record_every: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct PolyArgs {
    #[arg(long)]
    pub n: Option<usize>,
}

impl Command {
    pub fn name(&self) -> CommandName {
        match self {
            Command::Spectrum(_) => CommandName::Spectrum,
            Command::Scan(_) => CommandName::Scan,
            Command::GammaCrit(_) => CommandName::GammaCrit,
            Command::Planar(_) => CommandName::Planar,
            Command::Simulate(_) => CommandName::Simulate,
            Command::Impurity(_) => CommandName::Impurity,
            Command::Poly(_) => CommandName::Poly,
        }
    }

    /// Flags given on the command line as a params block; single-element
    /// lists collapse to scalars.
    pub fn overrides(&self) -> Value {
        let v = match self {
            Command::Spectrum(a) => serde_json::to_value(a),
            Command::Scan(a) => serde_json::to_value(a),
            Command::GammaCrit(a) => serde_json::to_value(a),
            Command::Planar(a) => serde_json::to_value(a),
            Command::Simulate(a) => serde_json::to_value(a),
            Command::Impurity(a) => serde_json::to_value(a),
            Command::Poly(a) => serde_json::to_value(a),
        };
        let mut v = v.expect("arguments serialize");
        if let Value::Object(m) = &mut v {
            for x in m.values_mut() {
                if let Value::Array(a) = x {
                    if a.len() == 1 {
                        *x = a[0].clone();
                    }
                }
            }
        }
        v
    }
}

/// Combines the config file, the subcommand flags and the global overrides.
pub fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let g = &cli.global;
    let mut cfg = match (&g.config, &cli.command) {
        (Some(path), cmd) => {
            let c = RunConfig::load(path)?;
            if let Some(cmd) = cmd {
                if cmd.name() != c.command {
                    return Err(CliError::Usage(format!(
                        "config is for `{}` but `{}` was requested",
                        c.command.as_str(),
                        cmd.name().as_str()
                    )));
                }
            }
            c
        }
        (None, Some(cmd)) => RunConfig::new(cmd.name()),
        (None, None) => return Err(CliError::Usage("no command given (see --help)".into())),
    };
    if let Some(cmd) = &cli.command {
        cfg.merge_params(cmd.overrides());
    }
    if let Some(o) = &g.output {
        cfg.output = Some(o.clone());
    }
    if let Some(f) = g.format {
        cfg.format = f;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(t) = g.imag_tol {
        cfg.tolerances.imag = t;
    }
    if let Some(t) = g.refine_tol {
        cfg.tolerances.refine = t;
    }
    if let Some(t) = g.search_tol {
        cfg.tolerances.search = t;
    }
    Ok(cfg)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code as u8;
        }
    };
    let result = resolve(&cli).and_then(|cfg| {
        if let Some(p) = &cli.global.emit_config {
            write_atomic(p, &cfg.to_json())?;
        }
        execute(&cfg, out)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "ptchain: {e}");
            e.code()
        }
    }
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    match cfg.command {
        CommandName::Spectrum => cmd_spectrum(cfg, out),
        CommandName::Scan => cmd_scan(cfg, out),
        CommandName::GammaCrit => cmd_gamma_crit(cfg, out),
        CommandName::Planar => cmd_planar(cfg, out),
        CommandName::Simulate => cmd_simulate(cfg, out),
        CommandName::Impurity => cmd_impurity(cfg, out),
        CommandName::Poly => cmd_poly(cfg, out),
    }
}

fn emit(cfg: &RunConfig, csv: impl FnOnce() -> String, json: impl FnOnce() -> String) -> CliResult<()> {
    match &cfg.output {
        Some(path) => write_atomic(path, &match cfg.format {
            Format::Csv => csv(),
            Format::Json => json(),
        }),
        None => Ok(()),
    }
}

fn executor() -> CliResult<Rayon> {
    Rayon::from_env().map_err(CliError::Usage)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn print_intervals(out: &mut dyn Write, report: &RegionReport) -> CliResult<()> {
    for i in &report.intervals {
        let mark = if i.lo_refined && i.hi_refined { "" } else { "  (unrefined)" };
        writeln!(out, "{:<9} {:.10} .. {:.10}{mark}", i.phase.as_str(), i.lo, i.hi).map_err(io)?;
    }
    Ok(())
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: SpectrumParams = cfg.params()?;
    let spec = p.chain().to_spec()?;
    let uniform = spec.uniform_parameters();
    let raw = match (p.method, uniform) {
        (SpectrumMethod::Qep, _) | (SpectrumMethod::Auto, None) => qep_spectrum(&spec)?,
        (_, Some((w, g, e))) => analytic_spectrum(spec.n_pairs(), w, g, e)?,
        (SpectrumMethod::Analytic, None) => {
            return Err(CliError::Usage("the analytic method needs a uniform even chain".into()))
        }
    };
    let s = Spectrum::new(raw.frequencies, cfg.tolerances.imag, raw.method);
    let tol = s.imag_tolerance;
    let sorted = s.sorted();
    let real = sorted.iter().filter(|l| l.im.abs() <= tol * l.norm().max(1.0)).count();
    writeln!(out, "method: {}", s.method.as_str()).map_err(io)?;
    writeln!(out, "frequencies: {} (real: {real})", sorted.len()).map_err(io)?;
    for l in &sorted {
        writeln!(out, "  {:+.12} {:+.12}i", l.re, l.im).map_err(io)?;
    }
    writeln!(out, "phase: {}", s.phase.as_str()).map_err(io)?;
    if let Some((w, g, _)) = uniform {
        match unbroken_condition_closed_form(spec.n_pairs(), w, g)? {
            Some((lo, hi)) => writeln!(out, "unbroken interval: {lo:.8} < epsilon < {hi:.8}"),
            None => writeln!(out, "unbroken interval: empty"),
        }
        .map_err(io)?;
    }
    emit(cfg, || output::spectrum_csv(&s), || output::spectrum_json(&s))
}

pub fn cmd_scan(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: ScanParams = cfg.params()?;
    let kind = profile_kind(p.profile, p.weights.as_deref())?;
    let template = ChainTemplate {
        n_pairs: p.n,
        parity: p.parity.into(),
        omega: p.omega,
        profile: GammaProfile::new(kind, p.gamma),
        force_qep: p.method == SpectrumMethod::Qep,
    };
    // surfaces parameter errors before the sweep
    let probe = template.spec(0.0)?;
    if p.method == SpectrumMethod::Analytic && !probe.is_uniform() {
        return Err(CliError::Usage("the analytic method needs a uniform even chain".into()));
    }
    let eps_max = p.eps_max.unwrap_or(GAMMA_CRIT_EPS_SPAN * p.omega * p.omega);
    let tol = cfg.tolerances.imag;
    let exec = executor()?;
    let report = scan_with("epsilon", (p.eps_min, eps_max), p.grid, cfg.tolerances.refine, &exec, |e| {
        let s = template.spectrum(e)?;
        Ok((classify(&s, tol), s.max_imag()))
    })?;
    print_intervals(out, &report)?;
    writeln!(out, "intervals: {}", report.intervals.len()).map_err(io)?;
    writeln!(out, "unbroken width: {:.10}", report.total_unbroken_width()).map_err(io)?;
    if probe.is_uniform() {
        match unbroken_condition_closed_form(p.n, p.omega, p.gamma)? {
            Some((lo, hi)) => writeln!(out, "closed form: {lo:.10} < epsilon < {hi:.10}"),
            None => writeln!(out, "closed form: empty"),
        }
        .map_err(io)?;
    }
    emit(cfg, || output::phase_table_csv(&report), || output::phase_table_json(&report))
}

pub fn cmd_gamma_crit(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: GammaCritParams = cfg.params()?;
    let kind = profile_kind(p.profile, None)?;
    let sizes: Vec<usize> = match (p.n, p.n_max) {
        (Some(n), None) => vec![n],
        (n, Some(m)) => (n.unwrap_or(1)..=m).collect(),
        (None, None) => return Err(CliError::Usage("gamma-crit needs n or n_max".into())),
    };
    if sizes.is_empty() || sizes[0] == 0 {
        return Err(CliError::Usage("chain sizes must start at 1 or more".into()));
    }
    let exec = executor()?;
    writeln!(out, "{:>4}  gamma_crit", "n").map_err(io)?;
    let mut rows = Vec::with_capacity(sizes.len());
    for n in sizes {
        let g = gamma_crit(n, p.omega, &kind, cfg.tolerances.search, &exec)?;
        writeln!(out, "{n:>4}  {g:.6}").map_err(io)?;
        rows.push((n, g));
    }
    emit(cfg, || output::gamma_crit_csv(&rows), || output::gamma_crit_json(kind.name(), p.omega, &rows))
}

pub fn cmd_planar(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: PlanarParams = cfg.params()?;
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| CliError::Usage(format!("planar {:?} mode needs {key}", p.mode)));
    let range = (p.eps2_min, p.eps2_max);
    match p.mode {
        PlanarMode::Scan => {
            let base = TrioParams::new(p.omega, p.gamma, need(p.eps1, "eps1")?, p.eps2_min)?;
            let report = trio_eps2_scan(&base, range, p.grid, cfg.tolerances.refine, &executor()?)?;
            print_intervals(out, &report)?;
            writeln!(out, "regions: {}", report.intervals.len()).map_err(io)?;
            emit(cfg, || output::phase_table_csv(&report), || output::phase_table_json(&report))
        }
        PlanarMode::Diagram => {
            let e1 = need(p.eps1_max, "eps1_max")?;
            let d = trio_phase_diagram(p.omega, p.gamma, (0.0, e1), range, p.resolution, &executor()?)?;
            writeln!(out, "unbroken cells: {} of {}", d.unbroken_count(), d.unbroken.len()).map_err(io)?;
            emit(cfg, || output::diagram_csv(&d), || output::diagram_json(&d))
        }
        PlanarMode::Trace => {
            let t = trio_im_lambda_trace(p.omega, p.gamma, need(p.eps1, "eps1")?, range, p.points)?;
            let peak = t.branches.iter().flatten().fold(0.0, |m: f64, x| m.max(x.abs()));
            writeln!(out, "points: {}", t.eps2.len()).map_err(io)?;
            writeln!(out, "max |Im lambda|: {peak:.10}").map_err(io)?;
            emit(cfg, || output::trace_csv(&t), || output::trace_json(&t))
        }
    }
}

fn scalar(v: &OneOrMany, key: &str) -> CliResult<f64> {
    Ok(v.expand(1, key)?[0])
}

pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: SimulateParams = cfg.params()?;
    let sys = match p.system {
        SystemName::Chain => {
            let missing = |k: &str| CliError::Usage(format!("chain simulation needs {k}"));
            let chain = ChainConfig {
                n: p.n.ok_or_else(|| missing("n"))?,
                parity: p.parity,
                omega: p.omega.clone(),
                gamma: p.gamma.clone(),
                epsilon: p.epsilon.clone().ok_or_else(|| missing("epsilon"))?,
            };
            let rep = match p.rep {
                RepName::Sum => HamiltonianRep::Sum,
                RepName::Product => HamiltonianRep::Product,
            };
            HamiltonianSystem::chain(&chain.to_spec()?, &rep)?
        }
        SystemName::Trio => {
            let missing = |k: &str| CliError::Usage(format!("trio simulation needs {k}"));
            let t = TrioParams::new(
                scalar(&p.omega, "omega")?,
                scalar(&p.gamma, "gamma")?,
                p.eps1.ok_or_else(|| missing("eps1"))?,
                p.eps2.ok_or_else(|| missing("eps2"))?,
            )?;
            HamiltonianSystem::trio(&t)?
        }
    };
    let n = sys.oscillators();
    let (coords, vel) = match &p.initial {
        Initial::Named(InitialKind::Kick) => {
            let mut x = vec![0.0; n];
            x[0] = 1.0;
            (x, vec![0.0; n])
        }
        Initial::Named(InitialKind::Random) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let x = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let v = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            (x, v)
        }
        Initial::Explicit(e) => (e.coords.clone(), e.velocities.clone()),
    };
    if let Some(i) = p.peaks.filter(|i| *i >= n) {
        return Err(CliError::Usage(format!("peaks: coordinate {i} out of range for {n} oscillators")));
    }
    let state = sys.state_from_velocities(&coords, &vel, 0.0)?;
    let traj = integrate_strided(&sys, &state, p.t_end, p.dt, p.stride)?;
    let drift = conservation_report(&traj);
    writeln!(out, "oscillators: {n}").map_err(io)?;
    writeln!(out, "samples: {}", traj.len()).map_err(io)?;
    writeln!(out, "hamiltonian drift: {:.3e}", drift.hamiltonian).map_err(io)?;
    if let Some(e) = drift.energy {
        writeln!(out, "energy drift: {e:.3e}").map_err(io)?;
    }
    if let Some(i) = p.peaks {
        match frequency_extract_coordinate(&traj, i)? {
            FrequencyEstimate::Peaks { frequencies, amplitudes, bin_width } => {
                writeln!(out, "bin width: {bin_width:.6}").map_err(io)?;
                for (f, a) in frequencies.iter().zip(&amplitudes) {
                    writeln!(out, "peak: {f:.6} (relative amplitude {a:.3})").map_err(io)?;
                }
            }
            FrequencyEstimate::Growth { rate } => writeln!(out, "growth: rate {rate:.6}").map_err(io)?,
        }
    }
    emit(cfg, || output::trajectory_csv(&traj), || output::trajectory_json(&traj))
}

pub fn cmd_impurity(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: ImpurityParams = cfg.params()?;
    let params = ContinuumParams::new(p.c, p.omega, p.epsilon, p.gamma)?;
    let m = impurity_mode(&params, p.big_omega, p.half_width, p.points)?;
    let (lo, hi) = params.window();
    let (j1, j2) = m.jump_residuals();
    writeln!(out, "window: {lo:.10} < Omega^2 < {hi:.10}").map_err(io)?;
    writeln!(out, "a: {:.12}", m.a).map_err(io)?;
    writeln!(out, "b: {:.12}", m.b).map_err(io)?;
    writeln!(out, "bulk residual: {:.3e}", m.bulk_residual()).map_err(io)?;
    writeln!(out, "jump residuals: {j1:.3e} {j2:.3e}").map_err(io)?;
    match p.evolve {
        None => emit(cfg, || output::mode_csv(&m), || output::mode_json(&m)),
        Some(t_end) => {
            let w = p.fd_half_width;
            let grid = FdGrid { x_min: -w, x_max: w, points: p.fd_points, boundary: Boundary::Sponge };
            let xs = grid.xs();
            let gam = gaussian_impurity(&grid, params.gamma);
            let h = fd_wave_solver(&params, &gam, &grid, &m.initial_fields(&xs), t_end, p.dt, p.record_every)?;
            writeln!(out, "frames: {}", h.times.len()).map_err(io)?;
            emit(cfg, || output::history_csv(&h), || output::history_json(&h))
        }
    }
}

pub fn cmd_poly(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let p: PolyParams = cfg.params()?;
    let poly = charpoly_recursive(p.n)?;
    writeln!(out, "{poly}").map_err(io)?;
    emit(cfg, || output::poly_csv(&poly), || output::poly_json(&poly))
}
