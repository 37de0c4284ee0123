//! `monolab`: command-line front end for the monopole laboratory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use monopole_lab::audit::Verdict;

use config::{
    build, read_config, Command, ConfigError, Format, RawConfig, RunConfig, Tolerances, DEFAULT_SEED, SCHEMA_VERSION,
};
use output::{ArtifactWriter, Manifest, Report};

const OUT_DIR_ENV: &str = "MONOLAB_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "monolab-out";

#[derive(Debug, Parser)]
#[command(name = "monolab", version, about = "Numerical experiments on SU(2) monopoles in the large-mass limit")]
struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides MONOLAB_OUT_DIR and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args, Default)]
struct Common {
    #[arg(long, allow_negative_numbers = true)]
    mass: Option<f64>,
    /// Comma-separated mass sequence.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    masses: Option<Vec<f64>>,
    /// Parameter override, `key=value` with a JSON value; repeatable.
    #[arg(long = "set", value_parser = parse_set)]
    set: Vec<(String, Value)>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Tabulate the closed-form BPS profile.
    Bps(Common),
    /// Solve the radial ODE by shooting and compare with the closed form.
    SolveOde(Common),
    /// Check the energy identity for one configuration.
    Energy(Common),
    /// Weak convergence of m⁻¹e against the point mass at the zero.
    MeasureConvergence(Common),
    /// Radius where |Φ| first reaches (1 − δ)m.
    Radius(Common),
    /// ε-regularity sweep over seeded probes.
    Epsreg(Common),
    /// Interior lower bound on seeded balls.
    Lowerbound(Common),
    /// Fit the Bochner-type inequality constants.
    Bochner(Common),
    /// Fit the far-field coefficient of |Φ|.
    Tailfit(Common),
    /// Locate zeros of the Higgs field in a box.
    Zeroset(Common),
    /// Degree of Φ/|Φ| on a sphere.
    Degree(Common),
    /// Estimate the blow-up set of a scenario sequence.
    Blowup(Common),
    /// Compare rescaled configurations with the unit monopole.
    Bubble(Common),
    /// Generate a scenario sequence and audit its energies.
    Scenario(Common),
    /// Run the full acceptance suite.
    Audit(Common),
    /// Run whatever command a config file names.
    Run {
        /// Config file (same as --config).
        file: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Numeric(#[from] monopole_lab::Error),
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad tolerance value: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_set(s: &str) -> Result<(String, Value), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = serde_json::from_str(v.trim()).map_err(|e| format!("value is not JSON: {e}"))?;
    Ok((k.trim().to_string(), v))
}

impl Sub {
    fn split(&self) -> (Option<Command>, Option<&Common>) {
        let c = match self {
            Sub::Run { .. } => return (None, None),
            Sub::Bps(c) => (Command::Bps, c),
            Sub::SolveOde(c) => (Command::SolveOde, c),
            Sub::Energy(c) => (Command::Energy, c),
            Sub::MeasureConvergence(c) => (Command::MeasureConvergence, c),
            Sub::Radius(c) => (Command::Radius, c),
            Sub::Epsreg(c) => (Command::Epsreg, c),
            Sub::Lowerbound(c) => (Command::Lowerbound, c),
            Sub::Bochner(c) => (Command::Bochner, c),
            Sub::Tailfit(c) => (Command::Tailfit, c),
            Sub::Zeroset(c) => (Command::Zeroset, c),
            Sub::Degree(c) => (Command::Degree, c),
            Sub::Blowup(c) => (Command::Blowup, c),
            Sub::Bubble(c) => (Command::Bubble, c),
            Sub::Scenario(c) => (Command::Scenario, c),
            Sub::Audit(c) => (Command::Audit, c),
        };
        (Some(c.0), Some(c.1))
    }
}

/// What the manifest needs, known even when validation fails.
struct Context {
    command: String,
    parameters: Value,
    seed: u64,
    tolerances: BTreeMap<String, f64>,
    dir: PathBuf,
    format: Format,
}

fn load(cli: &Cli, ctx: &mut Context) -> Result<RunConfig, AppError> {
    let env_dir = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let fixed_dir = cli.out.clone().or(env_dir);
    if let Some(d) = &fixed_dir {
        ctx.dir = d.clone();
    }
    let path = match &cli.command {
        Sub::Run { file } => {
            if cli.config.as_ref().is_some_and(|c| c != file) {
                return Err(AppError::Usage("`run` takes the config path once".into()));
            }
            Some(file)
        }
        _ => cli.config.as_ref(),
    };
    let raw = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| AppError::Usage(format!("cannot read {}: {e}", p.display())))?;
            read_config(&text)?
        }
        None => RawConfig::default(),
    };
    let (sub_cmd, common) = cli.command.split();
    let command = match (sub_cmd, raw.command) {
        (Some(a), Some(b)) if a != b => {
            return Err(AppError::Usage(format!(
                "subcommand `{}` does not match config command `{}`",
                a.name(),
                b.name()
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(AppError::Usage("config names no command".into())),
    };
    ctx.command = command.name().to_string();

    let mut params = raw.parameters;
    if let Some(c) = common {
        if let Some(m) = c.mass {
            params.insert("mass".into(), m.into());
        }
        if let Some(ms) = &c.masses {
            params.insert("masses".into(), ms.clone().into());
        }
        for (k, v) in &c.set {
            params.insert(k.clone(), v.clone());
        }
    }
    ctx.parameters = Value::Object(params.clone());

    ctx.dir = fixed_dir
        .or_else(|| raw.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    ctx.format = cli.format.or(raw.output.format).unwrap_or_default();
    ctx.seed = cli.seed.or(raw.seed).unwrap_or(DEFAULT_SEED);

    let mut tols: Vec<(String, f64)> = raw.tolerances.into_iter().collect();
    tols.extend(cli.tol.iter().cloned());
    let cfg = build(command, params, raw.output, Some(ctx.seed), tols)?;
    ctx.parameters = cfg.echoed.clone();
    ctx.tolerances = cfg.tolerances.as_map();
    Ok(cfg)
}

fn execute(cfg: &RunConfig, ctx: &Context, w: &mut ArtifactWriter) -> Result<Option<Verdict>, AppError> {
    let out = commands::run(cfg)?;
    for (stem, table) in &out.tables {
        w.table(stem, table, ctx.format)?;
    }
    let mut tolerances = ctx.tolerances.clone();
    tolerances.extend(out.tolerances.iter().map(|(k, v)| (k.to_string(), *v)));
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: ctx.command.clone(),
        tag: out.tag.to_string(),
        verdict: out.verdict,
        inputs: serde_json::json!({ "parameters": ctx.parameters, "seed": ctx.seed }),
        measured: out.measured,
        tolerances,
        counterexamples: out.counterexamples,
    };
    w.json(&format!("{}.report.json", ctx.command), &report)?;
    if let Some(rep) = report.measured.get("criteria").and_then(Value::as_array) {
        for c in rep {
            println!(
                "[{}] {:>2} {} {}",
                if c["verdict"] == "pass" { "PASS" } else { "FAIL" },
                c["criterion"],
                c["tag"].as_str().unwrap_or(""),
                c["title"].as_str().unwrap_or("")
            );
        }
    }
    Ok(report.verdict)
}

fn exit_code(v: Option<Verdict>) -> i32 {
    match v {
        Some(Verdict::Fail) => 2,
        _ => 0,
    }
}

fn write_manifest(w: &mut ArtifactWriter, ctx: &Context, start: Instant, code: i32, error: Option<String>) {
    let mut outputs = w.written().to_vec();
    let name = format!("{}.manifest.json", ctx.command);
    outputs.push(name.clone());
    let m = Manifest {
        schema_version: SCHEMA_VERSION,
        command: ctx.command.clone(),
        parameters: ctx.parameters.clone(),
        seed: ctx.seed,
        tolerances: ctx.tolerances.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs,
        exit_code: code,
        error,
    };
    if let Err(e) = w.json(&name, &m) {
        eprintln!("error: cannot write manifest: {e}");
    }
}

fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let mut ctx = Context {
        command: "unknown".into(),
        parameters: Value::Null,
        seed: DEFAULT_SEED,
        tolerances: Tolerances::default().as_map(),
        dir: PathBuf::from(DEFAULT_OUT_DIR),
        format: Format::default(),
    };
    let loaded = load(&cli, &mut ctx);
    let mut writer = match ArtifactWriter::new(&ctx.dir) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", ctx.dir.display());
            return 1;
        }
    };
    let result = loaded.and_then(|cfg| execute(&cfg, &ctx, &mut writer));
    let (code, error) = match result {
        Ok(v) => {
            let label = v.map_or(Value::from("none"), |v| serde_json::to_value(v).unwrap_or_default());
            println!("{}: verdict {}, artifacts in {}", ctx.command, label.as_str().unwrap_or("?"), writer.dir().display());
            (exit_code(v), None)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (1, Some(e.to_string()))
        }
    };
    write_manifest(&mut writer, &ctx, start, code, error);
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    ExitCode::from(run(cli) as u8)
}
