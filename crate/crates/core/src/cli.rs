//! Batch command-line front end. Tables go to stdout, JSON and CSV to files.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::compiler::surface::{build_surface_code, SurfaceLayout};
use crate::compiler::{compile_code, verify_schedule, CompiledCode, Schedule};
use crate::device::{quarter_time, DeviceSpec, TimingBudget};
use crate::encoder::{default_plan, encode_state, EncodingPlan};
use crate::error::{Error, Result};
use crate::sim::{
    self, dense, monte_carlo_fidelity, sweep_csv, FidelityReport, NoiseDistribution, NoiseModel, StateVector,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "stabpulse", version, about = "Compile, verify and simulate stabilizer-generation pulse schedules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile every generator of a code and write the schedules with their budget.
    Compile(CompileArgs),
    /// Print the operator each schedule generates, with a dense cross-check for n <= 7.
    Verify(VerifyArgs),
    /// Print the per-generator timing table of a code.
    Timing(TimingArgs),
    /// Encode a product input state and check the stabilizer eigenvalues.
    Encode(EncodeArgs),
    /// Monte Carlo fidelity sweep over pulse-angle noise.
    Robustness(RobustnessArgs),
    /// Emit the code spec (and optionally a device) for an r x c surface-code lattice.
    Surface(SurfaceArgs),
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[arg(long)]
    pub device: PathBuf,
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub tau_ini: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A single schedule or the output of `compile`.
    #[arg(long)]
    pub schedule: PathBuf,
    /// Enables the dense cross-check.
    #[arg(long)]
    pub device: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    #[arg(long)]
    pub device: PathBuf,
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub tau_ini: f64,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Explicit plan; the default plan is searched otherwise.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Input qubits for the default plan.
    #[arg(long = "input", value_delimiter = ',')]
    pub input: Vec<usize>,
    /// Input qubits start in cos(alpha)|0> + sin(alpha)|1>.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistributionArg {
    Gaussian,
    Uniform,
}

#[derive(Debug, Args)]
pub struct RobustnessArgs {
    /// Defaults to the bundled five-qubit chain.
    #[arg(long)]
    pub device: Option<PathBuf>,
    /// Defaults to the bundled five-qubit code.
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.01")]
    pub sigma: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stabilizer-generation cycles per sample.
    #[arg(long, alias = "cycles", default_value_t = 1)]
    pub reps: usize,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub distribution: DistributionArg,
    #[arg(long, default_value_t = 1e-8)]
    pub tau_ini: f64,
    /// JSON list of reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the lattice device.
    #[arg(long)]
    pub device_out: Option<PathBuf>,
    /// Drive amplitude of the written device, angular frequency.
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 10e6)]
    pub omega: f64,
    /// Coupling of the written device, angular frequency.
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI * 20e6)]
    pub j: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tau_rot: f64,
}

/// Document written by `compile`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileReport {
    pub code: String,
    pub tau_ini: f64,
    #[serde(flatten)]
    pub compiled: CompiledCode,
    pub duration_seconds: f64,
}

/// Document written by `encode`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeReport {
    pub plan: EncodingPlan,
    pub state: StateVector,
    /// `⟨G_j⟩` per generator.
    pub eigenvalues: Vec<f64>,
}

enum Outcome {
    Ok,
    Mismatch(String),
}

/// Runs with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::Mismatch(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_MISMATCH
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::VerifyMismatch { .. } => EXIT_MISMATCH,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Compile(a) => compile(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Timing(a) => timing(a, out),
        Command::Encode(a) => encode(a, out),
        Command::Robustness(a) => robustness(a, out),
        Command::Surface(a) => surface(a, out),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::argument(path.display().to_string(), e.to_string()))
}

fn load_device(path: &Path) -> Result<DeviceSpec> {
    DeviceSpec::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_code(path: &Path) -> Result<CodeSpec> {
    CodeSpec::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    Error::argument(path.display().to_string(), e.to_string())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::argument(path.display().to_string(), e.to_string()))
}

fn check_tau(tau_ini: f64) -> Result<()> {
    if !(tau_ini >= 0.0 && tau_ini.is_finite()) {
        return Err(Error::argument("tau-ini", format!("must be nonnegative, got {tau_ini}")));
    }
    Ok(())
}

fn budget_row(out: &mut dyn Write, label: &str, b: &TimingBudget, seconds: f64) -> Result<()> {
    writeln!(out, "{label:<10} {:>9} {:>9} {:>9} {:>12.1}", b.count_ini, b.count_rot, b.count_op, seconds * 1e9)?;
    Ok(())
}

/// Quarter time used for the budget columns: the slowest edge of the device.
fn device_tau_op(d: &DeviceSpec) -> Result<f64> {
    d.edges().iter().map(|e| quarter_time(e.j_coupling)).try_fold(0.0f64, |m, t| Ok(m.max(t?)))
}

fn timing_table(
    out: &mut dyn Write,
    c: &CodeSpec,
    d: &DeviceSpec,
    compiled: &CompiledCode,
    tau_ini: f64,
) -> Result<()> {
    let tau_op = device_tau_op(d)?;
    writeln!(
        out,
        "code {} on {} qubits, tau_op = {:.3} ns, tau_rot = {:.3} ns",
        c.name,
        d.num_qubits(),
        tau_op * 1e9,
        d.tau_rot() * 1e9
    )?;
    writeln!(out, "{:<10} {:>9} {:>9} {:>9} {:>12}", "generator", "count_ini", "count_rot", "count_op", "ns (no ini)")?;
    for (k, s) in compiled.schedules.iter().enumerate() {
        let b = s.budget();
        budget_row(out, &format!("G{}", k + 1), &b, b.total_seconds(0.0, d.tau_rot(), tau_op))?;
    }
    let b = compiled.budget;
    budget_row(out, "total", &b, b.total_seconds(0.0, d.tau_rot(), tau_op))?;
    if let Some(r) = compiled.reference_budget {
        budget_row(out, "reference", &r, r.total_seconds(0.0, d.tau_rot(), tau_op))?;
    }
    writeln!(out, "cycle duration with tau_ini = {:.3e} s: {:.3e} s", tau_ini, compiled.duration())?;
    Ok(())
}

fn compile(a: &CompileArgs, out: &mut dyn Write) -> Result<Outcome> {
    check_tau(a.tau_ini)?;
    let d = load_device(&a.device)?;
    let c = load_code(&a.code)?;
    let compiled = compile_code(&c, &d, a.tau_ini)?;
    writeln!(out, "compiled {} schedules, budget {}", compiled.schedules.len(), compiled.budget)?;
    timing_table(out, &c, &d, &compiled, a.tau_ini)?;
    let report =
        CompileReport { code: c.name.clone(), tau_ini: a.tau_ini, duration_seconds: compiled.duration(), compiled };
    if let Some(p) = &a.out {
        write_file(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(Outcome::Ok)
}

fn load_schedules(path: &Path) -> Result<Vec<Schedule>> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| in_file(path, e.into()))?;
    let schedules = if value.get("schedules").is_some() {
        serde_json::from_value::<CompileReport>(value).map_err(|e| in_file(path, e.into()))?.compiled.schedules
    } else {
        vec![Schedule::from_json(&text).map_err(|e| in_file(path, e))?]
    };
    for (k, s) in schedules.iter().enumerate() {
        s.check_nesting().map_err(|e| Error::argument(format!("{} schedule {k}", path.display()), e.to_string()))?;
    }
    Ok(schedules)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let schedules = load_schedules(&a.schedule)?;
    let device = a.device.as_deref().map(load_device).transpose()?;
    let mut failures = Vec::new();
    for (k, s) in schedules.iter().enumerate() {
        let v = verify_schedule(s)?;
        let shown = match v.string {
            Some(p) => p.to_string(),
            None => v.generated.to_string(),
        };
        writeln!(out, "schedule {k}: {shown}")?;
        if !v.is_exact() {
            failures.push(format!("schedule {k} generates {shown}, target {}", s.target));
        }
        let Some(d) = &device else { continue };
        if d.num_qubits() > dense::DENSE_MATRIX_LIMIT {
            writeln!(out, "  dense check skipped: {} qubits", d.num_qubits())?;
            continue;
        }
        let u = sim::schedule_unitary(s, d)?;
        let t = s.steps[s.seed_index()?].duration();
        let want = dense::evolution_matrix(&v.generated, t)?;
        let diff = dense::max_abs_diff(&u, &want);
        writeln!(out, "  dense check: max |U - exp(-i t H)| = {diff:.2e}")?;
        if diff > NUMERIC_TOLERANCE {
            failures.push(format!("schedule {k} dense check differs by {diff:.2e}"));
        }
    }
    if failures.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Mismatch(failures.join("; ")))
    }
}

fn timing(a: &TimingArgs, out: &mut dyn Write) -> Result<Outcome> {
    check_tau(a.tau_ini)?;
    let d = load_device(&a.device)?;
    let c = load_code(&a.code)?;
    let compiled = compile_code(&c, &d, a.tau_ini)?;
    timing_table(out, &c, &d, &compiled, a.tau_ini)?;
    Ok(Outcome::Ok)
}

fn encode(a: &EncodeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let c = load_code(&a.code)?;
    let plan = match &a.plan {
        Some(p) => EncodingPlan::from_json(&read(p)?).map_err(|e| in_file(p, e))?,
        None => default_plan(&c, &a.input)?,
    };
    if plan.code != c {
        return Err(Error::argument("plan", "plan was built for a different code"));
    }
    let mut angles = vec![0.0; c.n];
    for &q in &plan.input_qubits {
        angles[q] = a.alpha;
    }
    let psi = encode_state(&StateVector::product_real(&angles)?, &plan)?;
    let eigenvalues = c.generators.iter().map(|g| psi.expectation(g)).collect::<Result<Vec<_>>>()?;
    writeln!(out, "encoded {} with {} entries, inputs {:?}", c.name, plan.entries.len(), plan.input_qubits)?;
    for e in &plan.entries {
        writeln!(out, "  G{} pivot {} -> {}", e.j + 1, e.a, e.modified)?;
    }
    let mut bad = Vec::new();
    for (j, (g, ev)) in c.generators.iter().zip(&eigenvalues).enumerate() {
        writeln!(out, "<G{}> = {ev:+.12}  {g}", j + 1)?;
        if (ev - 1.0).abs() > NUMERIC_TOLERANCE {
            bad.push(format!("<G{}> = {ev}", j + 1));
        }
    }
    if let Some(p) = &a.out {
        let report = EncodeReport { plan, state: psi, eigenvalues };
        write_file(p, &serde_json::to_string_pretty(&report)?)?;
    }
    if bad.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::Mismatch(format!("encoded state is not stabilized: {}", bad.join(", "))))
    }
}

fn robustness(a: &RobustnessArgs, out: &mut dyn Write) -> Result<Outcome> {
    check_tau(a.tau_ini)?;
    let d = match &a.device {
        Some(p) => load_device(p)?,
        None => DeviceSpec::from_json(include_str!("../data/chain5.json"))?,
    };
    let c = match &a.code {
        Some(p) => load_code(p)?,
        None => CodeSpec::five_qubit(),
    };
    let compiled = compile_code(&c, &d, a.tau_ini)?;
    let dist = match a.distribution {
        DistributionArg::Gaussian => NoiseDistribution::Gaussian,
        DistributionArg::Uniform => NoiseDistribution::Uniform,
    };
    let mut reports: Vec<FidelityReport> = Vec::with_capacity(a.sigma.len());
    writeln!(out, "{:>10} {:>14} {:>12} {:>14}", "sigma", "mean", "stderr", "predicted")?;
    for &sigma in &a.sigma {
        let noise = NoiseModel::new(sigma, dist, a.seed)?;
        let r = monte_carlo_fidelity(&compiled.schedules, &d, &c, &noise, a.samples, a.reps)?;
        writeln!(out, "{:>10.4} {:>14.10} {:>12.2e} {:>14.10}", r.sigma_theta, r.mean_fidelity, r.stderr, r.predicted)?;
        reports.push(r);
    }
    if let Some(p) = &a.out {
        write_file(p, &serde_json::to_string_pretty(&reports)?)?;
    }
    if let Some(p) = &a.csv {
        write_file(p, &sweep_csv(&reports))?;
    }
    Ok(Outcome::Ok)
}

fn surface(a: &SurfaceArgs, out: &mut dyn Write) -> Result<Outcome> {
    let c = build_surface_code(a.rows, a.cols)?;
    writeln!(out, "{}: n = {}, {} generators in {} groups", c.name, c.n, c.num_generators(), c.groups.len())?;
    for (gi, group) in c.groups.iter().enumerate() {
        let names: Vec<_> = group.iter().map(|&j| c.generators[j].letter_string()).collect();
        writeln!(out, "  group {gi}: {}", names.join(" "))?;
    }
    if let Some(p) = &a.out {
        write_file(p, &c.to_json()?)?;
    }
    if let Some(p) = &a.device_out {
        let d = SurfaceLayout::new(a.rows, a.cols)?.device(a.omega, a.j, a.tau_rot)?;
        write_file(p, &d.to_json()?)?;
    }
    Ok(Outcome::Ok)
}
