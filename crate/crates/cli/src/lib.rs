//! Configuration, parsing and execution of the `ramabound` commands.
//!
//! Every command is described by a [`RunConfig`] that is embedded as a
//! single JSON line in the header of its output, so any output file can be
//! re-executed to reproduce itself byte for byte.

pub mod parse;
pub mod selftest;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use serde::{Deserialize, Serialize};

use ramabound::criterion::{lambda_log_integral, omega_curve_criterion, ramachandra_sum};
use ramabound::solver::{minimize, sweep_n};
use ramabound::table::{fmt17, read_two_column};
use ramabound::window::{build_window, verify_decay};
use ramabound::zeta::{log_spaced, scan, short_interval_constant};
use ramabound::{
    BoundProfile, CoeffSystem, ConstraintMode, DecayTarget, FrequencyKind, GramSystem,
    Normalization, OmegaCurve, SolveOptions,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Runtime failure, or failed self-test checks.
    Failed = 1,
    /// Invalid flags, configuration or input data.
    Usage = 2,
    /// Results were written but some solve or quadrature did not converge.
    Unconverged = 3,
}

/// Marks an error as caused by the caller's input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Map an error to its exit status.
pub fn classify(err: &anyhow::Error) -> Status {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return Status::Usage;
        }
        if let Some(e) = cause.downcast_ref::<ramabound::Error>() {
            return match e {
                ramabound::Error::InvalidParameter(_)
                | ramabound::Error::Parse { .. }
                | ramabound::Error::NonPositiveBound { .. }
                | ramabound::Error::NotMonotone { .. }
                | ramabound::Error::FrequencyOrder(_)
                | ramabound::Error::OutOfRange { .. }
                | ramabound::Error::SupportViolation { .. } => Status::Usage,
                _ => Status::Failed,
            };
        }
    }
    Status::Failed
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Classify a bound profile or an ω-curve by its convergence criterion.
    Criterion(CriterionArgs),
    /// Solve one disc-constrained minimization.
    Minimize(MinimizeArgs),
    /// Solve along a schedule of truncation points N.
    Sweep(SweepArgs),
    /// Build a window for a decay target and report the decay check.
    Window(WindowArgs),
    /// Short-interval integrals of |ζ| along a schedule of T.
    ZetaScan(ZetaScanArgs),
    /// Run the invariant suite and report pass/fail counts.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Criterion(_) => "criterion",
            Command::Minimize(_) => "minimize",
            Command::Sweep(_) => "sweep",
            Command::Window(_) => "window",
            Command::ZetaScan(_) => "zeta-scan",
            Command::Selftest(_) => "selftest",
        }
    }
}

/// Frequency system and bound profile.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SystemArgs {
    /// classical, primes, divisor or shifted:α
    #[arg(long, default_value = "classical")]
    pub freq: String,
    /// unit, power:δ, logpower:C, loglog:θ
    #[arg(long, default_value = "unit")]
    pub phi: String,
    /// Two-column table `n Φ(n)` replacing --phi.
    #[arg(long)]
    pub phi_table: Option<PathBuf>,
}

impl SystemArgs {
    pub fn kind(&self) -> Result<FrequencyKind> {
        Ok(self.freq.parse()?)
    }

    pub fn profile(&self) -> Result<BoundProfile> {
        match &self.phi_table {
            Some(path) => {
                let rows = read_two_column(path)?;
                let p = BoundProfile::Table(rows);
                p.validate()?;
                Ok(p)
            }
            None => Ok(self.phi.parse()?),
        }
    }

    pub fn system(&self, n: usize) -> Result<CoeffSystem> {
        Ok(CoeffSystem::build(self.kind()?, &self.profile()?, n)?)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CriterionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Last point of the doubling grid of partial sums.
    #[arg(long, default_value_t = 1 << 20)]
    pub n_max: u64,
    /// Also evaluate the counting-function integral up to this X.
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Number of terms of the system used by the integral.
    #[arg(long, default_value_t = 4096)]
    pub terms: usize,
    /// Classify this ω-curve instead (one, invloglog, loglogpower:ε).
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long, default_value_t = 1e12)]
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Interval length H.
    #[arg(long = "H", default_value_t = 1.0)]
    pub h: f64,
    /// one, const:re[:im], exp:μ[:amplitude], hurwitz (uses α of shifted:α)
    #[arg(long, default_value = "one")]
    pub target: String,
    /// KKT residual tolerance (default 1e-9 · max(1, max C_n)).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 20_000)]
    pub max_sweeps: usize,
}

impl SolveArgs {
    fn options(&self, seed: u64) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_sweeps: self.max_sweeps,
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MinimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solve: SolveArgs,
    #[arg(long = "N")]
    pub n: usize,
    /// disc (|a_n| ≤ C_n) or circle (|a_n| = C_n)
    #[arg(long, default_value = "disc")]
    pub mode: String,
    /// Random starts in circle mode.
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub solve: SolveArgs,
    /// start:stop:xfactor, start:stop:+step or a comma list.
    #[arg(long = "N")]
    pub schedule: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WindowArgs {
    /// Support length L.
    #[arg(long, default_value_t = 0.5)]
    pub length: f64,
    /// unit, poly:p, exp:rate, or counting2 (Λ² of the system below)
    #[arg(long, default_value = "unit")]
    pub decay: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Terms of the system for counting2.
    #[arg(long = "N", default_value_t = 100)]
    pub n: usize,
    /// unimodular or arithmetic amplitudes in Λ.
    #[arg(long, default_value = "unimodular")]
    pub norm: String,
    /// Number of boxes K (default chosen from the decay target).
    #[arg(long)]
    pub boxes: Option<usize>,
    #[arg(long, default_value_t = 200.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub xi_step: f64,
    /// Rescale by c₀ ≤ 1 so the bound holds on the whole grid.
    #[arg(long)]
    pub rescale: bool,
    /// Also write the samples (t, f(t)) to this file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ZetaScanArgs {
    /// Constant σ, or an ω-curve (one, invloglog, loglogpower:ε).
    #[arg(long, default_value = "1")]
    pub sigma: String,
    /// Hurwitz parameter α (1 for the Riemann zeta function).
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub t_max: f64,
    /// Number of log-spaced points.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SelftestArgs {
    /// Fewer random cases per check.
    #[arg(long)]
    pub quick: bool,
}

/// Files produced by a run, with their contents.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Main output (header included).
    pub body: String,
    /// Extra files `(path, contents)`.
    pub extra: Vec<(PathBuf, String)>,
    pub status: Option<Status>,
}

impl Outcome {
    pub fn status(&self) -> Status {
        self.status.unwrap_or(Status::Ok)
    }
}

/// `# ramabound <version> <command>` and `# config <json>`.
pub fn header(config: &RunConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    format!(
        "# ramabound {VERSION} {}\n# config {json}\n",
        config.command.name()
    )
}

/// Recover the configuration from an emitted file (or a bare JSON config).
pub fn config_from_text(text: &str) -> Result<RunConfig> {
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix("# config "))
        .unwrap_or(text.trim());
    serde_json::from_str(line)
        .map_err(|e| anyhow::Error::new(UsageError(format!("cannot read configuration: {e}"))))
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let mut out = match &config.command {
        Command::Criterion(a) => run_criterion(a)?,
        Command::Minimize(a) => run_minimize(a, config.seed)?,
        Command::Sweep(a) => run_sweep(a, config.seed)?,
        Command::Window(a) => run_window(a)?,
        Command::ZetaScan(a) => run_zeta_scan(a)?,
        Command::Selftest(a) => run_selftest(a, config.seed)?,
    };
    let head = header(config);
    out.body = head.clone() + &out.body;
    for (_, text) in out.extra.iter_mut() {
        *text = head.clone() + text;
    }
    Ok(out)
}

fn run_criterion(a: &CriterionArgs) -> Result<Outcome> {
    let mut body = String::new();
    if let Some(curve) = &a.omega {
        let curve: OmegaCurve = curve.parse()?;
        body.push_str(&omega_curve_criterion(&curve, a.t_max)?.to_record());
        body.push('\n');
        return Ok(Outcome {
            body,
            ..Default::default()
        });
    }
    let kind = a.system.kind()?;
    let profile = a.system.profile()?;
    body.push_str(&ramachandra_sum(&profile, kind, a.n_max)?.to_record());
    body.push('\n');
    if let Some(x_max) = a.x_max {
        let sys = CoeffSystem::build(kind, &profile, a.terms)?;
        body.push_str(&lambda_log_integral(&sys, x_max)?.to_record());
        body.push('\n');
    }
    Ok(Outcome {
        body,
        ..Default::default()
    })
}

fn solve_setup(a: &SolveArgs, n: usize) -> Result<(CoeffSystem, ramabound::Target)> {
    let sys = a.system.system(n)?;
    let target = parse::target(&a.target, sys.kind())?;
    if !(a.h > 0.0) || !a.h.is_finite() {
        bail!(UsageError(format!("H = {} must be positive", a.h)));
    }
    Ok((sys, target))
}

fn run_minimize(a: &MinimizeArgs, seed: u64) -> Result<Outcome> {
    let (sys, target) = solve_setup(&a.solve, a.n)?;
    let mode = match a.mode.as_str() {
        "disc" => ConstraintMode::Disc,
        "circle" => ConstraintMode::Circle,
        m => bail!(UsageError(format!("unknown mode {m:?} (disc or circle)"))),
    };
    let opts = SolveOptions {
        mode,
        starts: a.starts,
        ..a.solve.options(seed)
    };
    let gs = GramSystem::assemble(&sys, &target, a.solve.h)?;
    let bounds = sys.amplitudes();
    let r = minimize(&gs, bounds, &opts)?;
    let mut body = format!(
        "# summary {{\"N\":{},\"objective\":{},\"kkt_residual\":{},\"iterations\":{},\"newton_steps\":{},\"active\":{},\"converged\":{},\"stationary_only\":{}}}\n",
        a.n,
        fmt17(r.objective),
        fmt17(r.kkt_residual),
        r.iterations,
        r.newton_steps,
        r.active_set.len(),
        r.converged,
        r.stationary_only
    );
    body.push_str("# n lambda re im modulus bound\n");
    for (i, (z, c)) in r.coefficients.iter().zip(bounds).enumerate() {
        body.push_str(&format!(
            "{} {} {} {} {} {}\n",
            i + 1,
            fmt17(sys.lambdas()[i]),
            fmt17(z.re),
            fmt17(z.im),
            fmt17(z.norm()),
            fmt17(*c)
        ));
    }
    let status = if r.converged {
        Status::Ok
    } else {
        Status::Unconverged
    };
    Ok(Outcome {
        body,
        extra: Vec::new(),
        status: Some(status),
    })
}

fn run_sweep(a: &SweepArgs, seed: u64) -> Result<Outcome> {
    let schedule = parse::schedule(&a.schedule)?;
    let top = *schedule
        .last()
        .ok_or_else(|| UsageError("empty schedule".into()))?;
    let (sys, target) = solve_setup(&a.solve, top)?;
    let curve = sweep_n(&sys, &target, a.solve.h, &schedule, &a.solve.options(seed))?;
    let mut body = curve.to_table();
    let flagged: Vec<String> = curve
        .points
        .iter()
        .filter(|p| p.resolved_cold || p.kept_previous)
        .map(|p| p.n.to_string())
        .collect();
    body.push_str(&format!(
        "# summary {{\"points\":{},\"nonincreasing\":{},\"all_converged\":{},\"resolved\":[{}]}}\n",
        curve.points.len(),
        curve.is_nonincreasing(),
        curve.all_converged(),
        flagged.join(",")
    ));
    let status = if curve.all_converged() {
        Status::Ok
    } else {
        Status::Unconverged
    };
    Ok(Outcome {
        body,
        extra: Vec::new(),
        status: Some(status),
    })
}

fn run_window(a: &WindowArgs) -> Result<Outcome> {
    let norm = match a.norm.as_str() {
        "unimodular" => Normalization::Unimodular,
        "arithmetic" => Normalization::Arithmetic,
        n => bail!(UsageError(format!("unknown normalization {n:?}"))),
    };
    let target = parse::decay(&a.decay, || a.system.system(a.n), norm)?;
    if !(a.xi_step > 0.0) || !(a.xi_max > 0.0) {
        bail!(UsageError("xi grid needs positive step and end".into()));
    }
    let count = (a.xi_max / a.xi_step).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| i as f64 * a.xi_step).collect();
    if let DecayTarget::CountingSquared { system, .. } = &target {
        grid.extend(system.lambdas().iter().filter(|&&l| l <= a.xi_max));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    let (mut window, mut report) = build_window(a.length, &target, a.boxes, &grid)?;
    if a.rescale && report.required_scale < 1.0 {
        window = window.with_scale(report.required_scale)?;
        report = verify_decay(&window, &target, &grid);
    }
    let (v, _) = target.log_integral_verdict(a.xi_max.max(4.0))?;
    let crossover = report.crossover.map_or("null".to_string(), fmt17);
    let mut body = format!(
        "{{\"window\":{{\"length\":{},\"boxes\":{},\"scale\":{}}},\"decay\":\"{}\",\"log_integral\":\"{}\",\"crossover\":{},\"min_margin\":{},\"worst_ratio\":{},\"worst_ratio_overall\":{},\"required_scale\":{},\"pass\":{},\"holds_everywhere\":{}}}\n",
        fmt17(window.length()),
        window.boxes(),
        fmt17(window.scale()),
        target,
        v,
        crossover,
        fmt17(report.min_margin),
        fmt17(report.worst_ratio),
        fmt17(report.worst_ratio_overall),
        fmt17(report.required_scale),
        report.pass(),
        report.holds_everywhere()
    );
    for r in &report.records {
        body.push_str(&r.to_record());
        body.push('\n');
    }
    let mut extra = Vec::new();
    if let Some(path) = &a.samples {
        extra.push((path.clone(), window.to_table()));
    }
    Ok(Outcome {
        body,
        extra,
        status: None,
    })
}

fn run_zeta_scan(a: &ZetaScanArgs) -> Result<Outcome> {
    let sigma = parse::sigma(&a.sigma)?;
    if !(a.t_min >= 2.0) || !(a.t_max >= a.t_min) {
        bail!(UsageError(format!(
            "need 2 ≤ T_min ≤ T_max, got {} and {}",
            a.t_min, a.t_max
        )));
    }
    let schedule = log_spaced(a.t_min, a.t_max, a.points);
    let result = scan(&sigma, &schedule, a.delta, a.alpha)?;
    let mut body = format!(
        "# reference pi^2 e^-gamma delta^2 / 24 = {}\n",
        fmt17(short_interval_constant(a.delta))
    );
    body.push_str(&result.to_table());
    let status = if result.failed_points() > 0 {
        Status::Unconverged
    } else {
        Status::Ok
    };
    Ok(Outcome {
        body,
        extra: Vec::new(),
        status: Some(status),
    })
}

fn run_selftest(a: &SelftestArgs, seed: u64) -> Result<Outcome> {
    let results = selftest::run_all(seed, a.quick);
    let mut body = String::new();
    let mut failed = 0;
    for r in &results {
        body.push_str(&r.to_record());
        body.push('\n');
        if !r.passed {
            failed += 1;
        }
    }
    body.push_str(&format!(
        "# summary {{\"checks\":{},\"passed\":{},\"failed\":{}}}\n",
        results.len(),
        results.len() - failed,
        failed
    ));
    let status = if failed == 0 {
        Status::Ok
    } else {
        Status::Failed
    };
    Ok(Outcome {
        body,
        extra: Vec::new(),
        status: Some(status),
    })
}

/// Write the outcome's files; the main body goes to `out` or stdout.
pub fn write_outputs(outcome: &Outcome, out: Option<&std::path::Path>) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match out {
        Some(path) => {
            std::fs::write(path, &outcome.body)
                .with_context(|| format!("writing {}", path.display()))?;
            written.push(path.to_path_buf());
        }
        None => print!("{}", outcome.body),
    }
    for (path, text) in &outcome.extra {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        written.push(path.clone());
    }
    Ok(written)
}

/// Single-line manifest record.
pub fn manifest_line(config: &RunConfig, outputs: &[PathBuf], status: Status, wall: f64) -> String {
    let files: Vec<String> = outputs
        .iter()
        .map(|p| serde_json::to_string(&p.display().to_string()).expect("string serializes"))
        .collect();
    format!(
        "{{\"command\":\"{}\",\"version\":\"{VERSION}\",\"config\":{},\"seed\":{},\"outputs\":[{}],\"exit\":{},\"wall_time_s\":{}}}",
        config.command.name(),
        serde_json::to_string(config).expect("config serializes"),
        config.seed,
        files.join(","),
        status as i32,
        fmt17(wall)
    )
}
