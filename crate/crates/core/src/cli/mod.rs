//! Command-line front end of the `husimi` binary.
//!
//! Exit codes: 0 on success, 1 when `validate` finds a violated identity,
//! 2 on usage, input or runtime errors.

pub mod format;
pub mod manifest;
pub mod state;
pub mod validate;

use std::ffi::OsString;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::entanglement::{
    all_measures, concurrence_two_spin_pair, concurrence_vector_length_sq, multipartite_concurrence,
    one_vs_rest_concurrence_sq, three_tangle, ConcurrenceKind,
};
use crate::hilbert::PureState;
use crate::ising::{default_theta_list, linear_grid, sweep, Boundary, IsingParams, SweepConfig};
use crate::phase_space::{
    husimi, second_moment_monte_carlo, second_moment_projector, second_moment_purity, verify_quadrature_exactness,
    PhasePoint,
};
use format::{fmt_g, write_atomic};
use manifest::RunManifest;
use state::{parse_state_spec, StateFile, STATE_SPEC_HELP};
use validate::{run_validation, VALIDATION_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Scanned variables per Husimi grid.
pub const MAX_SCAN_VARIABLES: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "husimi", version, about = "Husimi-function localization and entanglement of spin-1/2 systems")]
pub struct Cli {
    /// Worker threads for sweeps and sampling (default: all cores).
    #[arg(long, global = true, env = "HUSIMI_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Second moment P of the Husimi function.
    SecondMoment(SecondMomentArgs),
    /// Concurrence-family measures and their relation to P.
    Entanglement(StateArgs),
    /// Husimi function on a grid of up to three angles, as CSV.
    HusimiGrid(GridArgs),
    /// Ground-state P and c_N of the Ising chain over a (Θ, g) grid, as CSV.
    IsingSweep(SweepArgs),
    /// Check the moment and concurrence identities on random states.
    Validate(ValidateArgs),
    /// Write a named state to a JSON state file.
    ExportState(ExportArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateArgs {
    /// Named state: ghz:N | w:N | bell | bell-pairs:K | product:θ,φ/θ,φ/... | random:N:SEED
    #[arg(long)]
    pub state: Option<String>,
    /// JSON state file with `n_spins` and `amplitudes` as [re, im] pairs.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
}

impl StateArgs {
    fn load(&self) -> anyhow::Result<PureState> {
        match (&self.state, &self.state_file) {
            (Some(spec), None) => parse_state_spec(spec),
            (None, Some(path)) => StateFile::load(path),
            _ => bail!("give exactly one of --state ({STATE_SPEC_HELP}) or --state-file"),
        }
    }

    fn describe(&self) -> (String, String) {
        match (&self.state, &self.state_file) {
            (Some(spec), _) => ("state".into(), spec.clone()),
            (_, Some(path)) => ("state-file".into(), path.display().to_string()),
            _ => ("state".into(), String::new()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Purity,
    Projector,
    Quadrature,
    Montecarlo,
}

#[derive(Debug, Args)]
pub struct SecondMomentArgs {
    #[command(flatten)]
    pub source: StateArgs,
    #[arg(long, value_enum, default_value = "purity")]
    pub method: MethodArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gauss-Legendre nodes in cos ϑ per spin.
    #[arg(long, default_value_t = 3)]
    pub nodes_theta: usize,
    /// Equispaced nodes in φ per spin.
    #[arg(long, default_value_t = 5)]
    pub nodes_phi: usize,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub source: StateArgs,
    /// Comma-separated angles to scan, e.g. `theta1,theta2` (1-based spins).
    #[arg(long, value_delimiter = ',', required = true)]
    pub scan: Vec<String>,
    /// Fixed angles, e.g. `phi1=0,phi2=0`; unlisted angles are zero.
    #[arg(long, value_delimiter = ',')]
    pub fix: Vec<String>,
    /// Points per scanned angle.
    #[arg(long, default_value_t = 41)]
    pub resolution: usize,
    /// Output CSV path (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Open,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Coupling J (positive is ferromagnetic).
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    /// Field angles as multiples of π (default: 0, 0.42, 0.46, 0.48, 0.49, 0.495, 0.4975, 0.4995, 0.5).
    #[arg(long, value_delimiter = ',')]
    pub theta_over_pi: Vec<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 60)]
    pub g_steps: usize,
    #[arg(long, value_enum, default_value = "periodic")]
    pub boundary: BoundaryArg,
    /// Grid points between checks of P against the projector route; 0 disables.
    #[arg(long, default_value_t = 16)]
    pub spot_check_every: usize,
    /// Output CSV path; a plotting script `<stem>_plot.py` is written beside it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Named state: ghz:N | w:N | bell | bell-pairs:K | product:θ,φ/θ,φ/... | random:N:SEED
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // a pool may already exist when running in-process more than once
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::SecondMoment(a) => cmd_second_moment(a, out),
        Command::Entanglement(a) => cmd_entanglement(a, out),
        Command::HusimiGrid(a) => cmd_husimi_grid(a, out),
        Command::IsingSweep(a) => cmd_ising_sweep(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::ExportState(a) => cmd_export_state(a, out),
    }
}

fn cmd_second_moment(a: &SecondMomentArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let psi = a.source.load()?;
    let report = match a.method {
        MethodArg::Purity => second_moment_purity(&psi)?,
        MethodArg::Projector => second_moment_projector(&psi)?,
        MethodArg::Quadrature => verify_quadrature_exactness(&psi, a.nodes_theta, a.nodes_phi)?,
        MethodArg::Montecarlo => second_moment_monte_carlo(&psi, a.samples, a.seed)?,
    };
    writeln!(out, "n_spins: {}", psi.n_spins())?;
    writeln!(out, "method: {}", report.method.name())?;
    writeln!(out, "P: {}", fmt_g(report.value))?;
    if let Some(se) = report.stderr {
        writeln!(out, "stderr: {}", fmt_g(se))?;
        writeln!(out, "seed: {}", a.seed)?;
    }
    writeln!(out, "samples_or_nodes: {}", report.samples_or_nodes)?;
    Ok(EXIT_OK)
}

fn cmd_entanglement(a: &StateArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let psi = a.load()?;
    let n = psi.n_spins();
    if n < 2 {
        bail!("entanglement measures need at least two spins, got {n}");
    }
    writeln!(out, "n_spins: {n}")?;
    for r in all_measures(&psi)? {
        let label = match (r.kind, r.partition) {
            (ConcurrenceKind::TwoSpin, _) => "C".to_string(),
            (ConcurrenceKind::OneVsRest, Some(m)) => format!("C^2 spin {} vs rest", m.sites(n)[0] + 1),
            (ConcurrenceKind::OneVsRest, None) => "C^2 one vs rest".to_string(),
            (ConcurrenceKind::Multipartite, _) => format!("c_{n}"),
            (ConcurrenceKind::VectorLengthSq, _) => "concurrence vector length^2".to_string(),
        };
        writeln!(out, "{label}: {}", fmt_g(r.value))?;
    }
    let c_n = multipartite_concurrence(&psi)?;
    writeln!(out, "P from c_{n}: {}", fmt_g(1.0 - 0.25 * c_n * c_n))?;
    writeln!(
        out,
        "P from vector length: {}",
        fmt_g(1.0 - concurrence_vector_length_sq(&psi)? * 0.5f64.powi(n as i32))
    )?;
    if n == 3 {
        let mut pair_sum = 0.0;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = concurrence_two_spin_pair(&psi, i, j)?;
            pair_sum += c * c;
            writeln!(out, "C spins {}{}: {}", i + 1, j + 1, fmt_g(c))?;
        }
        let tau = three_tangle(&psi)?;
        let one_vs_rest: f64 = (0..3).map(|s| one_vs_rest_concurrence_sq(&psi, s)).sum::<crate::Result<f64>>()?;
        writeln!(out, "tau: {}", fmt_g(tau))?;
        writeln!(out, "P from pairwise C and tau: {}", fmt_g(1.0 - 0.25 * pair_sum - 0.375 * tau))?;
        writeln!(out, "P from one-vs-rest C: {}", fmt_g(1.0 - 0.125 * one_vs_rest))?;
    }
    writeln!(out, "P (projector): {}", fmt_g(second_moment_projector(&psi)?.value))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Angle {
    Theta(usize),
    Phi(usize),
}

impl Angle {
    fn parse(name: &str, n_spins: usize) -> anyhow::Result<Angle> {
        let name = name.trim();
        let (kind, rest): (fn(usize) -> Angle, &str) = if let Some(r) = name.strip_prefix("theta") {
            (Angle::Theta, r)
        } else if let Some(r) = name.strip_prefix("phi") {
            (Angle::Phi, r)
        } else {
            bail!("unknown angle {name:?}; expected thetaK or phiK");
        };
        let spin: usize = rest.parse().with_context(|| format!("missing spin number in {name:?}"))?;
        if spin == 0 || spin > n_spins {
            bail!("angle {name:?} refers to spin {spin}, state has {n_spins} spins");
        }
        Ok(kind(spin - 1))
    }

    fn name(self) -> String {
        match self {
            Angle::Theta(s) => format!("theta{}", s + 1),
            Angle::Phi(s) => format!("phi{}", s + 1),
        }
    }

    /// Grid values: `ϑ` over `[0, π]` inclusive, `φ` over `[0, 2π)`.
    fn grid(self, resolution: usize) -> Vec<f64> {
        match self {
            Angle::Theta(_) => (0..resolution).map(|k| PI * k as f64 / (resolution - 1) as f64).collect(),
            Angle::Phi(_) => (0..resolution).map(|k| TAU * k as f64 / resolution as f64).collect(),
        }
    }
}

fn cmd_husimi_grid(a: &GridArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let psi = a.source.load()?;
    let n = psi.n_spins();
    if a.scan.is_empty() || a.scan.len() > MAX_SCAN_VARIABLES {
        bail!("scan between 1 and {MAX_SCAN_VARIABLES} angles, got {}", a.scan.len());
    }
    if a.resolution < 2 {
        bail!("resolution must be at least 2, got {}", a.resolution);
    }
    let scan: Vec<Angle> = a.scan.iter().map(|s| Angle::parse(s, n)).collect::<anyhow::Result<_>>()?;
    for (k, v) in scan.iter().enumerate() {
        if scan[..k].contains(v) {
            bail!("angle {} scanned twice", v.name());
        }
    }
    let mut base = vec![(0.0f64, 0.0f64); n];
    for fix in &a.fix {
        let (name, value) = fix.split_once('=').with_context(|| format!("expected NAME=VALUE, got {fix:?}"))?;
        let angle = Angle::parse(name, n)?;
        if scan.contains(&angle) {
            bail!("angle {} is both scanned and fixed", angle.name());
        }
        let value: f64 = value.trim().parse().with_context(|| format!("invalid value in {fix:?}"))?;
        match angle {
            Angle::Theta(s) => base[s].0 = value,
            Angle::Phi(s) => base[s].1 = value,
        }
    }

    let axes: Vec<Vec<f64>> = scan.iter().map(|v| v.grid(a.resolution)).collect();
    let total = a.resolution.pow(scan.len() as u32);
    let mut csv = String::new();
    let mut params = vec![a.source.describe()];
    params.push(("scan".into(), a.scan.join(",")));
    params.push(("fix".into(), a.fix.join(",")));
    params.push(("resolution".into(), a.resolution.to_string()));
    csv.push_str(&RunManifest::new("husimi-grid", params, None).comment_block());
    let header: Vec<String> = scan.iter().map(|v| v.name()).chain(["H".to_string()]).collect();
    csv.push_str(&header.join(","));
    csv.push('\n');

    let mut best = (f64::NEG_INFINITY, vec![]);
    for idx in 0..total {
        let mut angles = base.clone();
        let mut coords = Vec::with_capacity(scan.len());
        let mut rem = idx;
        for (axis, var) in axes.iter().zip(&scan).rev() {
            let x = axis[rem % a.resolution];
            rem /= a.resolution;
            coords.push(x);
            match *var {
                Angle::Theta(s) => angles[s].0 = x,
                Angle::Phi(s) => angles[s].1 = x,
            }
        }
        coords.reverse();
        let h = husimi(&psi, &PhasePoint::new(angles)?)?;
        // first point wins among values equal up to round-off
        if h > best.0 + 1e-12 {
            best = (h, coords.clone());
        }
        let row: Vec<String> = coords.iter().map(|&x| fmt_g(x)).chain([fmt_g(h)]).collect();
        writeln!(csv, "{}", row.join(","))?;
    }

    match &a.out {
        Some(path) => write_atomic(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    if a.out.is_some() {
        let at: Vec<String> = scan.iter().zip(&best.1).map(|(v, x)| format!("{}={}", v.name(), fmt_g(*x))).collect();
        writeln!(out, "points: {total}")?;
        writeln!(out, "max H: {} at {}", fmt_g(best.0), at.join(" "))?;
    }
    Ok(EXIT_OK)
}

const PLOT_TEMPLATE: &str = r##"# Plot P(g) per field angle from the sweep CSV.
import numpy as np
import matplotlib.pyplot as plt

data = np.genfromtxt("{csv}", delimiter=",", names=True, comments="#")
fig, ax = plt.subplots()
for theta in np.unique(data["theta"]):
    rows = data[data["theta"] == theta]
    ax.plot(rows["g"], rows["P"], label=f"Θ/π = {theta / np.pi:.4g}")
ax.set_xlabel("g")
ax.set_ylabel("P")
ax.legend()
fig.savefig("{stem}.png", dpi=150)
"##;

fn cmd_ising_sweep(a: &SweepArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let theta_list = if a.theta_over_pi.is_empty() {
        default_theta_list()
    } else {
        a.theta_over_pi.iter().map(|t| t * PI).collect()
    };
    let boundary = match a.boundary {
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::Open => Boundary::Open,
    };
    let config = SweepConfig {
        template: IsingParams {
            n_spins: a.n,
            j_coupling: a.j,
            g: 0.0,
            theta: 0.0,
            boundary,
        },
        g_grid: linear_grid(a.g_min, a.g_max, a.g_steps)?,
        theta_list,
        spot_check_every: a.spot_check_every,
    };
    let records = sweep(&config)?;

    let theta_text: Vec<String> = config.theta_list.iter().map(|t| fmt_g(t / PI)).collect();
    let params = vec![
        ("n".into(), a.n.to_string()),
        ("j".into(), fmt_g(a.j)),
        ("theta-over-pi".into(), theta_text.join(",")),
        ("g-min".into(), fmt_g(a.g_min)),
        ("g-max".into(), fmt_g(a.g_max)),
        ("g-steps".into(), a.g_steps.to_string()),
        ("boundary".into(), format!("{:?}", boundary).to_lowercase()),
    ];
    let mut csv = RunManifest::new("ising-sweep", params, None).comment_block();
    csv.push_str("theta,g,energy,gap,P,cN\n");
    for r in &records {
        writeln!(csv, "{},{},{},{},{},{}", fmt_g(r.theta), fmt_g(r.g), fmt_g(r.energy), fmt_g(r.gap), fmt_g(r.p), fmt_g(r.c_n))?;
    }
    write_atomic(&a.out, &csv)?;

    let plot_path = plot_script_path(&a.out);
    let csv_name = a.out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = a.out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    write_atomic(&plot_path, &PLOT_TEMPLATE.replace("{csv}", &csv_name).replace("{stem}", &stem))?;

    let degenerate = records.iter().filter(|r| r.degenerate).count();
    writeln!(out, "rows: {}", records.len())?;
    writeln!(out, "degenerate ground levels: {degenerate}")?;
    writeln!(out, "csv: {}", a.out.display())?;
    writeln!(out, "plot script: {}", plot_path.display())?;
    Ok(EXIT_OK)
}

fn plot_script_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    csv.with_file_name(format!("{stem}_plot.py"))
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    if a.trials == 0 {
        bail!("--trials must be positive");
    }
    let checks = run_validation(a.n_max, a.trials, a.seed)?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(8);
    writeln!(out, "{:<width$}  {:>7}  {:>6}  {:>13}  status", "identity", "spins", "trials", "max deviation")?;
    for c in &checks {
        let spins = match (c.sizes.first(), c.sizes.last()) {
            (Some(lo), Some(hi)) if lo == hi => lo.to_string(),
            (Some(lo), Some(hi)) => format!("{lo}-{hi}"),
            _ => "-".into(),
        };
        let status = if c.passed() { "pass" } else { "FAIL" };
        writeln!(out, "{:<width$}  {:>7}  {:>6}  {:>13.3e}  {status}", c.name, spins, c.trials, c.max_deviation)?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "tolerance: {VALIDATION_TOL:e}")?;
    if failed > 0 {
        writeln!(out, "{failed} identities violated")?;
        return Ok(EXIT_VALIDATION_FAILED);
    }
    writeln!(out, "all identities hold")?;
    Ok(EXIT_OK)
}

fn cmd_export_state(a: &ExportArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let psi = parse_state_spec(&a.state)?;
    let manifest = RunManifest::new("export-state", vec![("state".into(), a.state.clone())], None);
    write_atomic(&a.out, &StateFile::from_state(&psi, Some(manifest)).to_json()?)?;
    writeln!(out, "wrote {} amplitudes to {}", psi.dim(), a.out.display())?;
    Ok(EXIT_OK)
}
