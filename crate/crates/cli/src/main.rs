use clap::{ArgAction, Parser, Subcommand};
use dhlab_cli::{run, CliError, Command, Options};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exact certificates for Duistermaat-Heckman log-concavity.
#[derive(Debug, Parser)]
#[command(name = "dhlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Input document; repeat for batch mode. Reads stdin when absent.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,

    /// Output file, or a directory in batch mode. Writes stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Sample points per piece for `plot`.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    resolution: u32,

    /// Worker threads for batch mode.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,

    /// Enforce the six-manifold stratum taxonomy in `walls`.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    strict_taxonomy: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Sub {
    /// Inertia (b+, b-, b0, signature) of an intersection form.
    Sig,
    /// Non-log-concave density from a form with b+ > 1.
    Counterexample,
    /// Log-concavity verdict of a piecewise density.
    Dh,
    /// Wall-crossing propagation and b+ constancy.
    Walls,
    /// Hard Lefschetz checks for the sphere-bundle six-manifold.
    Hl,
    /// Tab-separated samples of f, ln f and h from a report or input.
    Plot,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Sig => Command::Sig,
            Sub::Counterexample => Command::Counterexample,
            Sub::Dh => Command::Dh,
            Sub::Walls => Command::Walls,
            Sub::Hl => Command::Hl,
            Sub::Plot => Command::Plot,
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn batch_target(dir: &Path, input: &Path, command: Command) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
    let ext = if command == Command::Plot { "tsv" } else { "report.json" };
    dir.join(format!("{stem}.{ext}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = Command::from(cli.command);
    let options = Options {
        resolution: cli.resolution as usize,
        strict_taxonomy: cli.strict_taxonomy,
    };

    if cli.input.len() <= 1 {
        let text = match cli.input.first() {
            Some(path) => read_input(path),
            None => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map(|_| s)
                    .map_err(|source| CliError::Io { path: "<stdin>".into(), source })
            }
        };
        let result = text.and_then(|t| run(command, &t, &options)).and_then(|out| match &cli.output {
            Some(path) => write_output(path, &out),
            None => std::io::stdout()
                .write_all(out.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
        });
        return match result {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("dhlab: {e}");
                ExitCode::from(e.exit_code())
            }
        };
    }

    if let Some(dir) = &cli.output {
        if let Err(source) = std::fs::create_dir_all(dir) {
            eprintln!("dhlab: {}: {source}", dir.display());
            return ExitCode::from(2);
        }
    }
    let jobs = (cli.jobs as usize).min(cli.input.len());
    let inputs = &cli.input;
    let mut results: Vec<Option<Result<String, CliError>>> = (0..inputs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = inputs.len().div_ceil(jobs);
        for (paths, slots) in inputs.chunks(chunk).zip(results.chunks_mut(chunk)) {
            let options = &options;
            scope.spawn(move || {
                for (path, slot) in paths.iter().zip(slots) {
                    *slot = Some(read_input(path).and_then(|t| run(command, &t, options)));
                }
            });
        }
    });

    let mut code = 0u8;
    let stdout = std::io::stdout();
    let mut stdout = stdout.lock();
    for (path, result) in inputs.iter().zip(results) {
        let result = result.expect("every input processed").and_then(|out| match &cli.output {
            Some(dir) => write_output(&batch_target(dir, path, command), &out),
            None => stdout
                .write_all(out.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
        });
        if let Err(e) = result {
            eprintln!("dhlab: {}: {e}", path.display());
            code = code.max(e.exit_code());
        }
    }
    ExitCode::from(code)
}
