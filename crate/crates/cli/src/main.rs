use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use metro_maxplus::analytics::{exact_headway, headway, optimal_dm, sweep, write_sweep_csv, Headway, PhaseReport};
use metro_maxplus::line::{build_parity_matrices, ConfigError, DelayConvention, LineDescription, LineError};
use metro_maxplus::sim::{measure_headways, simulate_departures, MeasureOptions, SimError};

#[derive(Parser)]
#[command(
    name = "metro-maxplus",
    version,
    about = "Headways of a metro line with one junction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a line description and print its train counts and time sums
    Validate(ConfigArg),
    /// Closed-form headways and frequencies for one (m, dm) point
    Analyze(AnalyzeArgs),
    /// Simulate departures, write them as CSV and print measured headways
    Simulate(SimulateArgs),
    /// Headways over a grid of (m, dm)
    Sweep(SweepArgs),
    /// Export a precedence graph as DOT
    Graph(GraphArgs),
}

#[derive(Args)]
struct ConfigArg {
    /// Line description, JSON or TOML
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct Placement {
    /// Total number of trains (default: the config's placement)
    #[arg(long)]
    m: Option<usize>,
    /// Trains on branch 2 minus trains on branch 1
    #[arg(long, allow_hyphen_values = true)]
    dm: Option<i64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    line: ConfigArg,
    #[command(flatten)]
    placement: Placement,
    /// Write the CSV row here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    line: ConfigArg,
    #[command(flatten)]
    placement: Placement,
    /// Number of central departures to compute
    #[arg(long, default_value_t = 2000)]
    k: usize,
    /// Leading events ignored when measuring (default: a quarter of k, at least 500)
    #[arg(long)]
    transient: Option<usize>,
    /// Trajectory CSV destination; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    line: ConfigArg,
    /// Inclusive range of train counts, `a:b` (default: 0 to capacity)
    #[arg(long)]
    m_range: Option<Span<usize>>,
    /// Inclusive range of dm, `a:b` (default: -n1 to n2)
    #[arg(long, allow_hyphen_values = true)]
    dm_range: Option<Span<i64>>,
    /// Append the frequency-maximising dm for each m
    #[arg(long)]
    with_optimal_dm: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    line: ConfigArg,
    #[command(flatten)]
    placement: Placement,
    #[arg(long, value_enum, default_value_t = Target::B)]
    target: Target,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Odd events
    #[value(name = "A1")]
    A1,
    /// Even events
    #[value(name = "A2")]
    A2,
    /// Two consecutive events
    #[value(name = "B")]
    B,
}

#[derive(Clone, Copy)]
struct Span<T> {
    lo: T,
    hi: T,
}

impl<T: FromStr> FromStr for Span<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `a:b`, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<T>().map_err(|_| format!("`{v}` is not a valid bound"));
        Ok(Span {
            lo: parse(lo)?,
            hi: parse(hi)?,
        })
    }
}

/// Problem with the user's input, reported with exit code 2.
#[derive(Debug)]
struct UserError(String);

impl fmt::Display for UserError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UserError {}

fn is_user_error(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<UserError>()
            || e.is::<ConfigError>()
            || e.is::<LineError>()
            || matches!(
                e.downcast_ref::<SimError>(),
                Some(SimError::Line(_) | SimError::Deadlock { .. } | SimError::InsufficientHorizon { .. })
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_user_error(&err) { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate(args) => validate(&args),
        Command::Analyze(args) => analyze(&args),
        Command::Simulate(args) => simulate(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::Graph(args) => graph(&args),
    }
}

fn load(args: &ConfigArg) -> Result<LineDescription<f64>> {
    Ok(LineDescription::load(&args.config)?)
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// `(m, dm)` requested on the command line, defaulting to the config's.
fn target_point(line: &LineDescription<f64>, p: &Placement) -> Result<(usize, i64)> {
    let c = line.validate()?;
    Ok((p.m.unwrap_or(c.m), p.dm.unwrap_or(c.dm)))
}

/// The config's placement, or the spread placement for overridden counts.
fn placed(line: LineDescription<f64>, p: &Placement) -> Result<LineDescription<f64>> {
    if p.m.is_none() && p.dm.is_none() {
        return Ok(line);
    }
    let (m, dm) = target_point(&line, p)?;
    Ok(line.with_totals(m, dm)?)
}

fn seconds(h: Headway<f64>) -> String {
    match h.value() {
        Some(v) => format!("{v:.6} s"),
        None => "inf".into(),
    }
}

fn validate(args: &ConfigArg) -> Result<()> {
    let line = load(args)?;
    let c = line.validate()?;
    let [n0, n1, n2] = c.n;
    println!("segments: n0 = {n0}, n1 = {n1}, n2 = {n2}");
    println!("nodes: N = {}", c.node_count());
    println!("capacity: {}", c.capacity());
    println!(
        "trains: m = {} ({} / {} / {}), dm = {}",
        c.m, c.parts[0], c.parts[1], c.parts[2], c.dm
    );
    println!("free segments: m_bar = {}, dm_bar = {}", c.m_bar, c.dm_bar);
    println!("T_u: {} / {} / {} s", c.t_sums[0], c.t_sums[1], c.t_sums[2]);
    println!("S_u: {} / {} / {} s", c.s_sums[0], c.s_sums[1], c.s_sums[2]);
    if c.is_stalled() {
        println!("note: a loop through the junction has no train or no free segment, so service stops");
    }
    Ok(())
}

fn infeasible(line: &LineDescription<f64>, r: &PhaseReport<f64>) -> UserError {
    let [n0, n1, n2] = line.segment_counts();
    UserError(format!(
        "m = {}, dm = {} is infeasible: no split m0 + m1 + m2 = m with m2 - m1 = dm fits segments {n0}/{n1}/{n2}",
        r.m, r.dm
    ))
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let line = load(&args.line)?;
    let (m, dm) = target_point(&line, &args.placement)?;
    let r = headway(&line, m, dm)?;
    if !r.feasible {
        return Err(infeasible(&line, &r).into());
    }
    let parts = r.parts.unwrap_or_default();
    // the terms depend on (m, dm) only; any split that fits gives the same report
    println!(
        "m = {m}, dm = {dm}, example split {} / {} / {}",
        parts[0], parts[1], parts[2]
    );
    println!("h_fw   {}", seconds(r.h_fw));
    println!("h_min  {}", seconds(r.h_min));
    println!("h_bw   {}", seconds(r.h_bw));
    println!("h_br   {}", seconds(r.h_br));
    println!("h0     {}", seconds(r.h0));
    println!("f0     {:.3} /h", r.f0 * 3600.0);
    println!("f1, f2 {:.3} /h", r.f1 * 3600.0);
    if r.binding.is_empty() {
        println!("binding: none (no service)");
    } else {
        println!("binding: {} ({})", r.binding_label(), r.binding_terms().join(", "));
    }
    let exact = exact_headway(&placed(line, &args.placement)?)?;
    println!("two-phase cycle time: {}", seconds(exact));
    let mut out = sink(args.out.as_deref())?;
    if args.out.is_none() {
        writeln!(out)?;
    }
    write_sweep_csv(&mut out, &[r], None)?;
    out.flush()?;
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    if args.k == 0 {
        return Err(UserError("--k must be at least 1".into()).into());
    }
    let line = placed(load(&args.line)?, &args.placement)?;
    let traj = simulate_departures(&line, args.k)?;
    let m = measure_headways(
        &traj,
        MeasureOptions {
            transient: args.transient,
        },
    )?;
    let mut out = sink(args.out.as_deref())?;
    traj.write_csv(&mut out)?;
    out.flush()?;
    let report = format!(
        "events {}, transient {} discarded\nh0 {:.6} s ({:.3} /h)\nh1 {:.6} s\nh2 {:.6} s\ngrowth rate {:.6} s/event{}",
        args.k,
        m.transient_discarded,
        m.h0,
        3600.0 / m.h0,
        m.h1,
        m.h2,
        m.growth_rate,
        m.period.map(|p| format!("\nperiod: {p}")).unwrap_or_default()
    );
    // keep standard output clean when it carries the trajectory
    if args.out.is_some() {
        println!("{report}");
    } else {
        eprintln!("{report}");
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let line = load(&args.line)?;
    let c = line.validate()?;
    let m_range = args.m_range.unwrap_or(Span {
        lo: 0,
        hi: c.capacity(),
    });
    let dm_range = args.dm_range.unwrap_or(Span {
        lo: -(c.n[1] as i64),
        hi: c.n[2] as i64,
    });
    let reports = sweep(&line, m_range.lo..=m_range.hi, dm_range.lo..=dm_range.hi)?;
    let optimal = if args.with_optimal_dm {
        let mut v = Vec::new();
        for m in (m_range.lo..=m_range.hi).filter(|&m| m <= c.capacity()) {
            v.push((m, optimal_dm(&line, m)?.0));
        }
        Some(v)
    } else {
        None
    };
    let mut out = sink(args.out.as_deref())?;
    write_sweep_csv(&mut out, &reports, optimal.as_deref())?;
    out.flush()?;
    Ok(())
}

fn graph(args: &GraphArgs) -> Result<()> {
    let line = placed(load(&args.line)?, &args.placement)?;
    let (odd, even) = build_parity_matrices(&line, DelayConvention::Causal)?;
    let a = match args.target {
        Target::A1 => odd,
        Target::A2 => even,
        Target::B => even.otimes(&odd)?,
    };
    let names = line.node_names();
    let mut out = sink(args.out.as_deref())?;
    out.write_all(a.to_graph().to_dot(Some(&names)).as_bytes())?;
    out.flush()?;
    Ok(())
}
