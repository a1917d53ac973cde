use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use wblowup::job::{Format, Job, EXIT_INPUT_ERROR};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

/// Run weighted blowup checks described by a JSON job file.
#[derive(Parser, Debug)]
#[command(name = "wblowup", version)]
struct Args {
    /// Job description (JSON). Use `-` for stdin.
    #[arg(long)]
    job: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the job's `format` field.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads for independent cells (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn read_job(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global() {
        eprintln!("warning: could not configure thread pool: {e}");
    }
    let text = match read_job(&args.job) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.job.display());
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let job = match Job::parse(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("{}:{}:{}: {}", args.job.display(), e.line, e.column, e.message);
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let report = match wblowup::job::run(&job) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let format = match args.format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Table) => Format::Table,
        None => job.spec.format,
    };
    let rendered = report.render(format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT_ERROR as u8);
            }
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
