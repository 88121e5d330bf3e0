use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcli::{eval, max_terms_from_env, table, verify, Args, CliError, Result, Suite, SuiteConfig, Sweep, TableFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qlab", version, about = "Evaluate and verify generalized discrete q-Hermite machinery")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// q value(s), comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    q: Vec<f64>,
    /// alpha value(s), comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Vec<f64>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Tolerance for identity residuals
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Tolerance for quadrature-based checks
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    suite: Option<Suite>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one registered function: `qlab eval hermite_h n=2 x=0 q=0.5 alpha=0.25`
    Eval {
        function: Option<String>,
        args: Vec<String>,
        /// List the registered functions and their arguments
        #[arg(long)]
        list: bool,
    },
    /// Run a verification suite over the (q, alpha) grid
    Verify,
    /// Evaluate a function over a range: `qlab table weight --sweep x=0:3:4 q=0.5 alpha=0.25`
    Table {
        function: String,
        args: Vec<String>,
        /// param=lo:hi:count
        #[arg(long, allow_hyphen_values = true)]
        sweep: String,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Key=value arguments, with a single `--q`/`--alpha` as fallback.
fn eval_args(cli: &Cli, raw: &[String]) -> Result<Args> {
    let mut a = Args::parse(raw)?;
    for (key, vals) in [("q", &cli.q), ("alpha", &cli.alpha)] {
        match vals.as_slice() {
            [] => {}
            [v] => a.default_value(key, v),
            _ => return Err(CliError::arg(key, "eval and table take a single value")),
        }
    }
    Ok(a)
}

fn config(cli: &Cli, max_terms: usize) -> SuiteConfig {
    let d = SuiteConfig::default();
    SuiteConfig {
        suite: cli.suite.unwrap_or(d.suite),
        q_values: if cli.q.is_empty() { d.q_values } else { cli.q.clone() },
        alpha_values: if cli.alpha.is_empty() { d.alpha_values } else { cli.alpha.clone() },
        n_max: cli.n_max.unwrap_or(d.n_max),
        tol: cli.tol.unwrap_or(d.tol),
        quad_tol: cli.quad_tol.unwrap_or(d.quad_tol),
        dim: cli.dim.unwrap_or(d.dim),
        seed: cli.seed.unwrap_or(d.seed),
        max_terms,
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let max_terms = max_terms_from_env(SuiteConfig::default().max_terms)?;
    match &cli.command {
        Command::Eval { list: true, .. } => {
            let mut out = output(&cli.out)?;
            for f in qcli::REGISTRY {
                writeln!(out, "{:<36} {}", f.name, f.args)?;
            }
            out.flush()?;
            Ok(0)
        }
        Command::Eval { function: None, .. } => Err(CliError::arg("function", "missing (try --list)")),
        Command::Eval { function: Some(name), args, .. } => {
            let r = eval(name, &eval_args(cli, args)?, max_terms)?;
            let mut out = output(&cli.out)?;
            match cli.format {
                Some(Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&r.to_json())?)?,
                Some(Format::Csv) => {
                    write!(out, "value\n{}\n", qcli::report::format_float(r.value))?;
                }
                None => write!(out, "{}", r.to_text())?,
            }
            out.flush()?;
            Ok(0)
        }
        Command::Table { function, args, sweep } => {
            let sweep = Sweep::parse(sweep)?;
            let fmt = match cli.format {
                Some(Format::Json) => TableFormat::Json,
                _ => TableFormat::Csv,
            };
            let a = eval_args(cli, args)?;
            // render fully before touching the output file
            let mut buf = Vec::new();
            table(function, &a, &sweep, fmt, max_terms, &mut buf)?;
            let mut out = output(&cli.out)?;
            out.write_all(&buf)?;
            out.flush()?;
            Ok(0)
        }
        Command::Verify => {
            let report = verify(&config(cli, max_terms))?;
            let mut out = output(&cli.out)?;
            match cli.format {
                Some(Format::Csv) => report.write_csv(&mut out)?,
                _ => out.write_all(report.to_json()?.as_bytes())?,
            }
            out.flush()?;
            drop(out);
            let s = &report.summary;
            eprintln!("{} checks: {} passed, {} failed", s.total, s.passed, s.failed);
            Ok(if report.all_pass() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
