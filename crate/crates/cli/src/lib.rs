//! Scenario-driven front end: parse a scenario, run one subcommand, and emit a JSON
//! report and a CSV table.

pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use error::{CliError, Result};
pub use report::{write_atomic, CycloJson, Report, Table, SCHEMA_VERSION};
pub use scenario::{load, resolve, Overrides, Resolved, Scenario, COMMANDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn execute(r: &Resolved) -> Result<Report> {
    match r.command.as_str() {
        "building-ball" => commands::building_ball(r),
        "elliptic-analyze" => commands::elliptic_analyze(r),
        "fgl-table" => commands::fgl_table(r),
        "coeffsys-build" => commands::coeffsys_build(r),
        "char-eval" => commands::char_eval(r),
        "ep-check" => commands::ep_check(r),
        other => Err(CliError::Schema(format!("unknown command `{other}`"))),
    }
}

/// Loads, validates and runs one scenario file.
pub fn run_scenario(path: &Path, command: Option<&str>, ov: &Overrides) -> Result<(Resolved, Report)> {
    let sc = load(path)?;
    let r = resolve(&sc, command, ov, path)?;
    let rep = execute(&r)?;
    Ok((r, rep))
}

/// Output files named by the scenario's run block, relative to the scenario directory.
pub fn scenario_outputs(r: &Resolved) -> Vec<(Format, PathBuf)> {
    let Some(o) = &r.run.output else { return Vec::new() };
    let at = |p: &PathBuf| if p.is_absolute() { p.clone() } else { r.dir.join(p) };
    let mut out = Vec::new();
    if let Some(p) = &o.json {
        out.push((Format::Json, at(p)));
    }
    if let Some(p) = &o.csv {
        out.push((Format::Csv, at(p)));
    }
    out
}

pub fn render(rep: &Report, f: Format) -> Result<String> {
    match f {
        Format::Json => rep.to_json(),
        Format::Csv => rep.to_csv(),
    }
}

/// Every `*.json` scenario in `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Runs every scenario of a directory in parallel and writes `<stem>.json` and
/// `<stem>.csv` into `out`. All reports are computed before any file is written.
pub fn run_corpus(dir: &Path, out: &Path, ov: &Overrides) -> Result<Vec<PathBuf>> {
    let files = corpus_files(dir)?;
    let results: Vec<Result<(String, Report)>> = files
        .par_iter()
        .map(|f| {
            let (_, rep) = run_scenario(f, None, ov).map_err(|e| annotate(f, e))?;
            Ok((f.file_stem().unwrap_or_default().to_string_lossy().into_owned(), rep))
        })
        .collect();
    let reports: Vec<(String, Report)> = results.into_iter().collect::<Result<_>>()?;
    let mut written = Vec::new();
    for (stem, rep) in &reports {
        for (f, ext) in [(Format::Json, "json"), (Format::Csv, "csv")] {
            let path = out.join(format!("{stem}.{ext}"));
            write_atomic(&path, &render(rep, f)?)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn annotate(f: &Path, e: CliError) -> CliError {
    let name = f.display();
    match e {
        CliError::Schema(m) if m.starts_with(&name.to_string()) => CliError::Schema(m),
        CliError::Schema(m) => CliError::Schema(format!("{name}: {m}")),
        CliError::Budget(m) => CliError::Budget(format!("{name}: {m}")),
        CliError::Indeterminate(m) => CliError::Indeterminate(format!("{name}: {m}")),
        CliError::Truncation(m) => CliError::Truncation(format!("{name}: {m}")),
        CliError::Disagreement(m) => CliError::Disagreement(format!("{name}: {m}")),
        CliError::Io(m) => CliError::Io(format!("{name}: {m}")),
        CliError::Compute(m) => CliError::Compute(format!("{name}: {m}")),
    }
}
