use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use slce_core::report::{self, AnalysisReport};
use slce_core::DEFAULT_MAX_Q;

/// Linear complexity and divisibility criteria for SLCE sequences.
#[derive(Parser)]
#[command(name = "slce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one odd prime power q.
    Analyze {
        #[arg(long)]
        q: u64,
        /// Encoding of the primitive element to use instead of the canonical one.
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Analyze every odd prime power in [min, max]; one JSON report per line.
    Scan {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write reports here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check the known counterexamples (q = 49, 193, 769, 12289) and multiplicity bounds.
    VerifyClaims {
        /// Count known errata as mismatches.
        #[arg(long)]
        strict: bool,
    },
    /// Dump I_d(a) for every unit a as CSV.
    Jacobsthal {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        /// Only print I_d(a) mod 4.
        #[arg(long)]
        mod4_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn max_q() -> anyhow::Result<u64> {
    match std::env::var("SLCE_MAX_Q") {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("SLCE_MAX_Q must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_Q),
    }
}

fn write_scan(reports: &[AnalysisReport], out: &mut dyn Write) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json())?;
    }
    out.flush()
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let bound = max_q()?;
    match cli.command {
        Command::Analyze { q, alpha, format } => {
            let report = report::analyze(q, alpha, bound)?;
            match format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(0)
        }
        Command::Scan {
            min,
            max,
            jobs,
            out,
        } => {
            if min > max {
                bail!("empty range: min {min} > max {max}");
            }
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                if j == 0 {
                    bail!("--jobs must be at least 1");
                }
                pool = pool.num_threads(j);
            }
            let pool = pool.build()?;
            let reports = pool.install(|| report::divergence_scan(min, max, bound))?;
            match &out {
                Some(path) => {
                    let file = File::create(path)
                        .with_context(|| format!("cannot create {}", path.display()))?;
                    write_scan(&reports, &mut BufWriter::new(file))?;
                }
                None => write_scan(&reports, &mut io::stdout().lock())?,
            }
            let divergent: Vec<u64> = reports
                .iter()
                .filter(|r| r.divergence)
                .map(|r| r.q)
                .collect();
            let applicable = reports.iter().filter(|r| r.applicable).count();
            eprintln!(
                "scanned {} prime powers in [{min}, {max}], {applicable} applicable, {} divergent: {divergent:?}",
                reports.len(),
                divergent.len()
            );
            Ok(0)
        }
        Command::VerifyClaims { strict } => {
            let claims = report::verify_claims(bound)?;
            print!("{}", claims.render_text());
            let failures = claims.failures(strict);
            if failures == 0 {
                println!("all claims reproduced");
                Ok(0)
            } else {
                println!("{failures} mismatch(es)");
                Ok(EXIT_MISMATCH)
            }
        }
        Command::Jacobsthal { q, d, mod4_only } => {
            let rows = report::jacobsthal_rows(q, d, bound)?;
            io::stdout()
                .lock()
                .write_all(report::jacobsthal_csv(&rows, mod4_only).as_bytes())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("slce").chain(args.iter().copied()))
    }

    #[test]
    fn parses_every_subcommand() {
        for args in [
            &["analyze", "--q", "49"][..],
            &["analyze", "--q", "49", "--alpha", "9", "--format", "json"],
            &[
                "scan", "--min", "5", "--max", "100", "--jobs", "2", "--out", "x.jsonl",
            ],
            &["verify-claims"],
            &["verify-claims", "--strict"],
            &["jacobsthal", "--q", "49", "--d", "3", "--mod4-only"],
        ] {
            assert!(parse(args).is_ok(), "{args:?}");
        }
    }

    #[test]
    fn bad_arguments_are_usage_errors() {
        for args in [
            &["analyze"][..],
            &["analyze", "--q", "x"],
            &["analyze", "--q", "49", "--format", "xml"],
            &["scan", "--min", "5"],
            &["jacobsthal", "--q", "49"],
        ] {
            assert_eq!(
                parse(args).err().map(|e| e.exit_code()),
                Some(2),
                "{args:?}"
            );
        }
    }

    #[test]
    fn run_exit_codes() {
        assert_eq!(run(parse(&["analyze", "--q", "13"]).unwrap()).unwrap(), 0);
        assert_eq!(
            run(parse(&["jacobsthal", "--q", "13", "--d", "3"]).unwrap()).unwrap(),
            0
        );
        assert!(run(parse(&["analyze", "--q", "15"]).unwrap()).is_err());
        assert!(run(parse(&["scan", "--min", "9", "--max", "8"]).unwrap()).is_err());
        assert!(run(parse(&["jacobsthal", "--q", "13", "--d", "5"]).unwrap()).is_err());
    }
}
