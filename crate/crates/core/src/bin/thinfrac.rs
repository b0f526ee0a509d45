use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use thinfrac::asymptotics::{ladder_between, run_sweep, ConvergenceReport, SSchedule};
use thinfrac::config::{format_float, RunConfig};
use thinfrac::constants::{constants_table, ConstantReport};
use thinfrac::geometry::{BaseDomain, FractionalParams, ThinFilm};
use thinfrac::kernelquad::{self, Engine};
use thinfrac::plot::sweep_svg;
use thinfrac::testfns::TestFunction;
use thinfrac::verify::{run_suite, Budget, Suite};
use thinfrac::{Error, Result};

/// Constant tolerance gating `thinfrac constants`.
const CONSTANT_GAP_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "thinfrac", version, about = "Fractional Gagliardo energies on thin films")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form vs quadrature table of the limit constants.
    Constants(ConstantsArgs),
    /// One energy evaluation on a thin film.
    Energy(EnergyArgs),
    /// An ε-ladder sweep with scaling fit and limit comparison.
    Sweep(SweepArgs),
    /// Run an acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path, `-` for standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Comma-separated s values.
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<f64>>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<u32>>,
    /// Comma-separated integrability exponents.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Budgeted {
    /// Test function tag, e.g. planar-linear:a=1 or vertical-sine.
    #[arg(long = "fn")]
    function: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    engine: Option<Engine>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    panels: Option<usize>,
    /// Default: $THINFRAC_SEED, else 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    run: Budgeted,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Interior margin; the energy is taken over ω_τ × (0, ε).
    #[arg(long)]
    tau: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: Budgeted,
    #[arg(long, conflicts_with = "s_schedule")]
    s: Option<f64>,
    /// const:<s>, bbm-log2 or bbm-log.
    #[arg(long)]
    s_schedule: Option<String>,
    #[arg(long)]
    eps_from: Option<f64>,
    #[arg(long)]
    eps_to: Option<f64>,
    /// Also write the CSV table here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write an SVG log-log plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// constants, scaling, limits, critical, bbm or all.
    suite: Option<Suite>,
    /// quick or full.
    budget: Option<Budget>,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Error(Error),
    /// Ran to completion but a check failed.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Constants(a) => cmd_constants(a),
        Command::Energy(a) => cmd_energy(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("thinfrac: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("thinfrac: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("cannot configure worker threads: {e}")))?;
    }
    match &common.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn budgeted_flags(run: &Budgeted, out: &Option<PathBuf>) -> RunConfig {
    RunConfig {
        function: run.function.clone(),
        d: run.d,
        p: run.p,
        engine: run.engine,
        samples: run.samples,
        panels: run.panels,
        seed: run.seed,
        out: out.clone(),
        ..Default::default()
    }
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, content)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display()))),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::Usage(format!("cannot write to standard output: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_else(|| "n/a".into())
}

fn cmd_constants(a: ConstantsArgs) -> Outcome {
    let cfg = load_config(&a.common)?.overlay(RunConfig {
        s_grid: a.s,
        d_set: a.d,
        p_set: a.p,
        out: a.common.out.clone(),
        ..Default::default()
    });
    let s_grid = cfg
        .s_grid
        .clone()
        .unwrap_or_else(|| (1..=19).map(|i| (i as f64 * 0.05 * 1e6).round() / 1e6).collect());
    let d_set = cfg.d_set.clone().unwrap_or_else(|| vec![2, 3]);
    let p_set = cfg.p_set.clone().unwrap_or_else(|| vec![2.0]);
    let rows = constants_table(&s_grid, &d_set, &p_set)?;
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => csv_string(
            &["name", "s", "d", "p", "closed", "quad", "rel_gap"],
            rows.iter().map(|r: &ConstantReport| {
                vec![
                    r.name.clone(),
                    format_float(r.s),
                    r.d.to_string(),
                    format_float(r.p),
                    format_float(r.closed_form),
                    opt(r.quadrature),
                    opt(r.relative_gap),
                ]
            }),
        ),
    };
    emit(cfg.out.as_deref(), &text)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.within(CONSTANT_GAP_TOL))
        .map(|r| format!("{}(s={}, d={}, p={})", r.name, r.s, r.d, r.p))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Rejected(format!("relative gap above {CONSTANT_GAP_TOL:e} for {}", bad.join(", "))))
    }
}

#[derive(Serialize)]
struct EnergyOutput {
    value: f64,
    error: f64,
    engine: Engine,
    low_confidence: bool,
    evaluations: u64,
    config: RunConfig,
}

fn cmd_energy(a: EnergyArgs) -> Outcome {
    let mut flags = budgeted_flags(&a.run, &a.common.out);
    flags.s = a.s;
    flags.eps = a.eps;
    flags.tau = a.tau;
    let mut cfg = load_config(&a.common)?.overlay(flags);
    let f: TestFunction = RunConfig::require(&cfg.function, "fn")?.parse()?;
    let d = cfg.d.unwrap_or(2);
    let params = FractionalParams::new(d, RunConfig::require(&cfg.s, "s")?, cfg.p.unwrap_or(2.0))?;
    let mut film = ThinFilm::new(BaseDomain::unit_for_dimension(d)?, RunConfig::require(&cfg.eps, "eps")?)?;
    if let Some(tau) = cfg.tau {
        film = film.with_margin(tau)?.interior();
    }
    let spec = cfg.quadrature_spec()?;
    cfg.seed = Some(spec.seed);
    let e = kernelquad::seminorm(&f, &film, &params, &spec)?;
    let out = cfg.out.clone();
    cfg.d = Some(d);
    cfg.p = Some(params.p);
    cfg.engine = Some(spec.engine);
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&EnergyOutput {
            value: e.value,
            error: e.error,
            engine: e.engine,
            low_confidence: e.low_confidence,
            evaluations: e.evaluations,
            config: cfg,
        }),
        Format::Csv => csv_string(
            &["value", "error", "engine", "low_confidence"],
            [vec![
                format_float(e.value),
                format_float(e.error),
                e.engine.to_string(),
                e.low_confidence.to_string(),
            ]],
        ),
    };
    emit(out.as_deref(), &text)?;
    Ok(())
}

fn write_sweep_outputs(report: &ConvergenceReport, cfg: &RunConfig, format: Format) -> Result<()> {
    let main = match format {
        Format::Json => to_json(report),
        Format::Csv => report.to_csv(),
    };
    emit(cfg.out.as_deref(), &main)?;
    if let Some(path) = &cfg.csv {
        emit(Some(path), &report.to_csv())?;
    }
    if let Some(path) = &cfg.plot {
        emit(Some(path), &sweep_svg(report))?;
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    let mut flags = budgeted_flags(&a.run, &a.common.out);
    flags.s = a.s;
    flags.s_schedule = a.s_schedule;
    flags.eps_from = a.eps_from;
    flags.eps_to = a.eps_to;
    flags.csv = a.csv;
    flags.plot = a.plot;
    let cfg = load_config(&a.common)?.overlay(flags);
    let format = a.common.format.unwrap_or(Format::Json);
    let f: TestFunction = RunConfig::require(&cfg.function, "fn")?.parse()?;
    let d = cfg.d.unwrap_or(2);
    let p = cfg.p.unwrap_or(2.0);
    let schedule: SSchedule = match (&cfg.s_schedule, cfg.s) {
        (Some(name), _) => name.parse()?,
        (None, Some(s)) => SSchedule::Const(s),
        (None, None) => return Err(Error::Usage("one of --s or --s-schedule is required".into()).into()),
    };
    let ladder = ladder_between(cfg.eps_from.unwrap_or(0.125), cfg.eps_to.unwrap_or(2f64.powi(-10)))?;
    let params = FractionalParams::new(d, schedule.s_at(ladder[0]), p)?;
    let spec = cfg.quadrature_spec()?;
    match run_sweep(&f, &params, &ladder, &spec, Some(&schedule)) {
        Ok(report) => {
            write_sweep_outputs(&report, &cfg, format)?;
            Ok(())
        }
        Err(e) => {
            let _ = write_sweep_outputs(&e.partial, &cfg, format);
            Err(Failure::Error(e.error))
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let mut cfg = load_config(&a.common)?;
    if let Some(out) = &a.common.out {
        cfg.out = Some(out.clone());
    }
    let suite = match a.suite {
        Some(s) => s,
        None => cfg.suite.as_deref().unwrap_or("all").parse()?,
    };
    let budget = match a.budget {
        Some(b) => b,
        None => cfg.budget.as_deref().unwrap_or("quick").parse()?,
    };
    let report = run_suite(suite, budget, |r| eprintln!("{}", r.summary_line()))?;
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => csv_string(
            &["id", "name", "passed", "detail"],
            report
                .results
                .iter()
                .map(|r| vec![r.id.to_string(), r.name.clone(), r.passed.to_string(), r.detail.clone()]),
        ),
    };
    emit(cfg.out.as_deref(), &text)?;
    if report.passed {
        Ok(())
    } else {
        let names: Vec<String> = report
            .results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{} ({})", r.id, r.name))
            .collect();
        Err(Failure::Rejected(format!("failing criteria: {}", names.join(", "))))
    }
}
