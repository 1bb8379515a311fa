//! Command-line front end: configuration, parallel sweeps and table output.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde_json::json;

pub use commands::{execute, RunOutput};
pub use config::{Command, Format, RunConfig, Threads};
pub use error::{CliError, CliResult};
pub use table::{Cell, Table};

#[derive(Debug, Parser)]
#[command(name = "delta-ineff", version, about = "Contact-interaction spectra, regularizations and variational bounds")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// `key = value` file or a run manifest from an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Parameter override; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json()).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

/// `<dir>/<stem>_<suffix>.<ext>` next to the main output.
pub fn sibling_path(out: &Path, suffix: &str, format: Format) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| format.extension().into());
    out.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn thread_pool(cfg: &RunConfig) -> CliResult<rayon::ThreadPool> {
    let builder = rayon::ThreadPoolBuilder::new();
    let builder = match cfg.threads()? {
        Threads::Count(n) => builder.num_threads(n),
        Threads::Auto => builder,
    };
    builder.build().map_err(|e| CliError::config(format!("cannot start worker threads: {e}")))
}

/// Runs one command; tables go to `--out` (plus a manifest) or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let started = Instant::now();
    let text = cli.config.as_deref().map(read).transpose()?;
    let cfg = RunConfig::build(cli.command, text.as_deref(), &cli.params)?;
    let format = cli.format.unwrap_or_else(|| match cli.out.as_ref().and_then(|p| p.extension()) {
        Some(e) if e == "json" => Format::Json,
        _ => Format::Csv,
    });
    let output = thread_pool(&cfg)?.install(|| commands::execute(&cfg))?;

    let Some(out) = cli.out.as_deref() else {
        let mut text = render(&output.main, format);
        for (suffix, t) in &output.extra {
            text.push_str(&format!("\n# {suffix}\n"));
            text.push_str(&render(t, format));
        }
        return stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source });
    };
    write(out, &render(&output.main, format))?;
    let mut files = vec![out.display().to_string()];
    for (suffix, t) in &output.extra {
        let path = sibling_path(out, suffix, format);
        write(&path, &render(t, format))?;
        files.push(path.display().to_string());
    }
    let manifest = json!({
        "command": cfg.command.name(),
        "parameters": cfg.params,
        "format": format.extension(),
        "outputs": files,
        "seed": output.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_seconds": started.elapsed().as_secs_f64(),
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write(&manifest_path(out), &text)
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "delta-ineff {}: {e}", cli.command);
            e.exit_code()
        }
    }
}
