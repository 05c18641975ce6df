//! Command-line front end: experiment manifests, execution and report emission.

pub mod cli;
pub mod emit;
pub mod failure;
pub mod manifest;
pub mod run;
pub mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

pub use emit::{emit, Format, Table};
pub use failure::{Failure, FailureKind};
pub use manifest::{Command, DatumRef, ExperimentManifest, Grid, Provenance, ResultRecord};
pub use run::run_experiment;

use cli::{Cli, Cmd};

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let f = Failure::validation(e.to_string().trim_end());
            eprintln!("{}", f.to_json());
            return f.exit_code();
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("HOROCONE_LOG", "warn")).try_init();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.to_json());
            f.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let manifest = match &cli.command {
        Cmd::Validate { input } => return validate_file(input, cli.out.as_deref()),
        Cmd::Run { manifest } => {
            let text = std::fs::read_to_string(manifest)
                .map_err(|e| Failure::validation(format!("cannot read {}: {e}", manifest.display())))?;
            let mut m: ExperimentManifest = serde_json::from_str(&text)?;
            m.stamp();
            m
        }
        cmd => ExperimentManifest::new(cmd.to_command()?.expect("direct commands build a manifest"), cli.seed),
    };
    emit::check_format(&manifest.command, cli.format)?;
    let raw_path = cli.command.raw_path();
    let exec = horocone::parallel::with_jobs(cli.jobs, || run::execute(&manifest, raw_path.is_some()))?;
    let text = emit(&exec.record, cli.format)?;
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    if let (Some(path), Some(raw)) = (raw_path, &exec.raw) {
        files.push((path.clone(), raw.to_csv()?));
    }
    match &cli.out {
        Some(path) => files.push((path.clone(), text)),
        None => {
            write_all(&files)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::runtime(format!("writing stdout: {e}")))?;
            return Ok(());
        }
    }
    write_all(&files)
}

fn validate_file(input: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", input.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let errors = schema::validate(&schema::result_record_schema(), &value);
    if !errors.is_empty() {
        return Err(Failure::validation(format!("record does not match the schema: {}", errors.join("; "))));
    }
    let report = "{\"valid\":true}\n".to_string();
    match out {
        Some(p) => write_all(&[(p.to_path_buf(), report)]),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

/// Writes every file to a sibling temporary and renames them into place only
/// once all temporaries exist.
fn write_all(files: &[(PathBuf, String)]) -> Result<(), Failure> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, text) in files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
        if let Err(e) = std::fs::write(&tmp, text) {
            for (t, _) in &staged {
                let _ = std::fs::remove_file(t);
            }
            return Err(Failure::runtime(format!("writing {}: {e}", path.display())));
        }
        staged.push((tmp, path));
    }
    for (tmp, path) in &staged {
        std::fs::rename(tmp, path).map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}
