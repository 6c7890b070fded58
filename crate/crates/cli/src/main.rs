//! `ergm-cluster`: batch front end for the exact ensemble and the cluster
//! expansion. Artifacts go to `--output` (written atomically) or stdout;
//! failures print a JSON object on stderr.

mod commands;
mod failure;
mod options;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use tempfile::NamedTempFile;

use failure::{Failure, EXIT_INVALID};
use options::Cli;

fn write_atomically(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)
        .map_err(|e| Failure::io(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(text.as_bytes()).map_err(|e| Failure::io(e.to_string()))?;
    tmp.persist(path).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let opts = cli.options.merged()?;
    if let Some(threads) = opts.threads {
        if threads == 0 {
            return Err(Failure::invalid("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::io(format!("thread pool: {e}")))?;
    }
    let artifact = commands::run(cli.command, &opts)?;
    match &opts.output {
        Some(path) => write_atomically(path, &artifact.text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(artifact.text.as_bytes()).map_err(|e| Failure::io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", Failure::invalid(e.to_string().trim_end()).to_json());
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code as u8)
        }
    }
}
