use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use svcert_cli::run::{self, RunOutput, SampleOpts, EXIT_MISMATCH, EXIT_USAGE};
use svcert_cli::verify;

/// Exact-arithmetic defectiveness certificates for Segre-Veronese
/// varieties.
#[derive(Parser)]
#[command(name = "svcert", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Secant dimension check through stacked tangent ranks.
    Secant(SecantArgs),
    /// Contact-locus kernel tests.
    #[command(subcommand)]
    Contact(ContactCommand),
    /// Closed-form bounds and classifications for a format.
    Bounds(BoundsArgs),
    /// Run the whole reproduction suite and report one row per check.
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct FormatArgs {
    /// Factor dimensions, comma separated (e.g. 1,2).
    #[arg(long)]
    n: String,
    /// Factor degrees, comma separated (e.g. 2,1).
    #[arg(long)]
    d: String,
}

#[derive(Args)]
struct CommonArgs {
    /// Seed for all sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent sampling attempts before giving up.
    #[arg(long, default_value_t = 3)]
    retries: usize,
    /// Half-width of the integer sampling box.
    #[arg(long = "box", default_value_t = 50)]
    box_halfwidth: i64,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn opts(&self) -> SampleOpts {
        SampleOpts {
            seed: self.seed,
            retries: self.retries,
            box_halfwidth: self.box_halfwidth,
        }
    }
}

#[derive(Args)]
struct SecantArgs {
    #[command(flatten)]
    format: FormatArgs,
    /// Number of points.
    #[arg(long)]
    h: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum ContactCommand {
    /// Weak defectiveness: a random tangent hyperplane.
    Wd(ContactArgs),
    /// Tangential weak defectiveness: the tangent span itself.
    Twd(ContactArgs),
    /// (h, s)-tangential weak defectiveness at a chosen dimension.
    Hstwd(HstwdArgs),
    /// Osculating-span hypothesis with one order per point.
    Osc(OscArgs),
}

#[derive(Args)]
struct ContactArgs {
    #[command(flatten)]
    format: FormatArgs,
    /// Number of points.
    #[arg(long)]
    h: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HstwdArgs {
    #[command(flatten)]
    format: FormatArgs,
    /// Number of points.
    #[arg(long)]
    h: usize,
    /// Dimension of the containing space, or `max` for N - 1.
    #[arg(long)]
    s: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OscArgs {
    #[command(flatten)]
    format: FormatArgs,
    /// Osculating orders, comma separated, one per point (e.g. 2,2,2).
    #[arg(long)]
    orders: String,
    /// Dimension of the containing space, or `max` for N - 1.
    #[arg(long)]
    s: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    format: FormatArgs,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only run rows whose id contains this substring.
    #[arg(long)]
    only: Option<String>,
    /// Seed forwarded to every row.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the certificates of the rows that emit them.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not usage errors
            let code = if e.use_stderr() { EXIT_USAGE as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Secant(args) => {
            let fmt = run::parse_format(&args.format.n, &args.format.d)?;
            let out = run::run_secant(&fmt, args.h, args.common.opts())?;
            emit(&out, args.common.out.as_deref())
        }
        Command::Contact(contact) => match contact {
            ContactCommand::Wd(args) => {
                let fmt = run::parse_format(&args.format.n, &args.format.d)?;
                let out = run::run_contact_wd(&fmt, args.h, args.common.opts())?;
                emit(&out, args.common.out.as_deref())
            }
            ContactCommand::Twd(args) => {
                let fmt = run::parse_format(&args.format.n, &args.format.d)?;
                let out = run::run_contact_twd(&fmt, args.h, args.common.opts())?;
                emit(&out, args.common.out.as_deref())
            }
            ContactCommand::Hstwd(args) => {
                let fmt = run::parse_format(&args.format.n, &args.format.d)?;
                let s = run::parse_s(&args.s, &fmt)?;
                let out = run::run_contact_hstwd(&fmt, args.h, s, args.common.opts())?;
                emit(&out, args.common.out.as_deref())
            }
            ContactCommand::Osc(args) => {
                let fmt = run::parse_format(&args.format.n, &args.format.d)?;
                let orders = run::parse_orders(&args.orders)?;
                let s = run::parse_s(&args.s, &fmt)?;
                let out = run::run_contact_osc(&fmt, &orders, s, args.common.opts())?;
                emit(&out, args.common.out.as_deref())
            }
        },
        Command::Bounds(args) => {
            let fmt = run::parse_format(&args.format.n, &args.format.d)?;
            let out = run::run_bounds(&fmt)?;
            emit(&out, args.out.as_deref())
        }
        Command::VerifyPaper(args) => run_verify(args),
    }
}

fn emit(out: &RunOutput, path: Option<&std::path::Path>) -> anyhow::Result<i32> {
    let json = out.certificate.to_json();
    match path {
        Some(p) => fs::write(p, json)?,
        None => print!("{json}"),
    }
    Ok(out.exit)
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    let rows = verify::run_rows(args.seed, args.only.as_deref())?;
    if rows.is_empty() {
        anyhow::bail!("no verification row matches the filter");
    }
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
    }
    let mut failures = 0;
    for row in &rows {
        let status = if row.pass { "PASS" } else { "FAIL" };
        println!(
            "{status}  [criterion {}] {:<34} expected: {}; observed: {}",
            row.criterion, row.id, row.expected, row.observed
        );
        if !row.pass {
            failures += 1;
        }
        if let Some(dir) = &args.out {
            for (name, cert) in &row.certificates {
                fs::write(dir.join(name), cert.to_json())?;
            }
        }
    }
    println!(
        "{} rows, {} passed, {failures} failed",
        rows.len(),
        rows.len() - failures
    );
    Ok(if failures == 0 { 0 } else { EXIT_MISMATCH })
}
