use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use btchar_cli::{render, run_corpus, run_scenario, scenario_outputs, write_atomic, CliError, Format, Overrides};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "btchar", version, about = "Characters of discrete series of GL(N, Q_p) through the building")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a ball in the building.
    BuildingBall(Common),
    /// Invariants, minimality and fixed sets of elliptic elements.
    EllipticAnalyze(Common),
    /// Character table of GL(n, q).
    FglTable(Common),
    /// Orbit data of the coefficient system on a patch.
    CoeffsysBuild(Common),
    /// Character values by every route, cross-checked.
    CharEval(Common),
    /// Euler-Poincaré function, chain complex, apartment check and orbital profiles.
    EpCheck(Common),
    /// Run a scenario by its own `run.command`, or every scenario of a directory.
    Run(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Scenario file (or, for `run`, a directory of scenarios).
    #[arg(long)]
    scenario: PathBuf,
    /// Patch radius, overriding `run.radius`
    #[arg(long)]
    radius: Option<usize>,
    /// Starting p-adic precision in digits, overriding `field.precision`
    #[arg(long)]
    precision: Option<u32>,
    /// Bound on |GL(n, q)| for character tables.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, env = "BTCHAR_FGL_CACHE")]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output file (a directory when running a corpus); stdout when absent and the
    /// scenario names no outputs.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, c) = match &cli.command {
        Command::BuildingBall(c) => (Some("building-ball"), c),
        Command::EllipticAnalyze(c) => (Some("elliptic-analyze"), c),
        Command::FglTable(c) => (Some("fgl-table"), c),
        Command::CoeffsysBuild(c) => (Some("coeffsys-build"), c),
        Command::CharEval(c) => (Some("char-eval"), c),
        Command::EpCheck(c) => (Some("ep-check"), c),
        Command::Run(c) => (None, c),
    };
    match run(name, c) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("btchar: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(name: Option<&str>, c: &Common) -> Result<(), CliError> {
    let ov = Overrides { radius: c.radius, precision: c.precision, budget: c.budget, cache_dir: c.cache_dir.clone() };
    let format = match c.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    if name.is_none() && c.scenario.is_dir() {
        let out = c.output.as_ref().ok_or_else(|| CliError::Schema("running a directory needs --output <dir>".into()))?;
        for p in run_corpus(&c.scenario, out, &ov)? {
            println!("{}", p.display());
        }
        return Ok(());
    }
    let (r, rep) = run_scenario(&c.scenario, name, &ov)?;
    if let Some(path) = &c.output {
        return write_atomic(path, &render(&rep, format)?);
    }
    let named = scenario_outputs(&r);
    if named.is_empty() {
        std::io::stdout().write_all(render(&rep, format)?.as_bytes())?;
        return Ok(());
    }
    let rendered: Vec<(PathBuf, String)> =
        named.into_iter().map(|(f, p)| render(&rep, f).map(|s| (p, s))).collect::<Result<_, _>>()?;
    for (p, s) in rendered {
        write_atomic(&p, &s)?;
    }
    Ok(())
}
