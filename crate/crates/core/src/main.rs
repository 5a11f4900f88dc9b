use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use chowcert::certify::{self, CertifyOptions, DEFAULT_PRIME, DEFAULT_RETRIES};
use chowcert::sweep::{self, SweepOptions, CSV_HEADER};
use chowcert::{bench, ranks, sff, PrimeModulus};

#[derive(Parser)]
#[command(
    name = "chowcert",
    version,
    about = "Finite-field identifiability certificates for cubic Chow decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a configuration and write a certificate.
    Certify {
        #[arg(long)]
        n: usize,
        /// Defaults to r_gen - 1.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        /// Test the Hessian at every point, not just the first.
        #[arg(long)]
        all_points: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the ranks recorded in a certificate.
    Verify { file: PathBuf },
    /// Print generic ranks and perfect cases.
    RankTable {
        #[arg(long, default_value_t = 1)]
        min: usize,
        #[arg(long)]
        max: usize,
    },
    /// Certify r_gen - 1 for each n in a range and write a CSV report.
    Sweep {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        /// Permit n beyond the desk-scale cap.
        #[arg(long)]
        allow_large: bool,
    },
    /// Time elimination and multiplication strategies.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "128,256,512")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the second fundamental form at the monomial point.
    ValidateSff {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Certify {
            n,
            r,
            prime,
            seed,
            retries,
            all_points,
            out,
        } => {
            let mut opts = CertifyOptions::new(n);
            opts.r = r;
            opts.prime = prime;
            opts.seed = seed;
            opts.retries = retries;
            opts.all_points = all_points;
            let cert = certify::certify(&opts)?;
            cert.write_to(&out)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "tangent rank {} / {}, hessian rank {} / {}, not-{}-TWD {} (attempt {}, {:.3}s)",
                cert.tangent_rank.observed,
                cert.tangent_rank.expected,
                cert.hessian_rank.observed,
                cert.hessian_rank.expected,
                cert.r,
                if cert.verdict { "TRUE" } else { "FALSE" },
                cert.attempt,
                cert.timings.total
            );
            println!("wrote {}", out.display());
            Ok(cert.verdict)
        }
        Command::Verify { file } => {
            let report = certify::verify_file(&file)
                .with_context(|| format!("verifying {}", file.display()))?;
            println!("{}", report.summary());
            Ok(report.proves())
        }
        Command::RankTable { min, max } => {
            if min < 1 || min > max {
                bail!("need 1 <= min <= max");
            }
            println!(
                "{:>5} {:>10} {:>6} {:>7} {:>7} {:>8} {:>8}",
                "n", "dim", "3n+1", "r_gen", "bound", "perfect", "2c<floor"
            );
            for row in ranks::rank_table(min, max) {
                println!(
                    "{:>5} {:>10} {:>6} {:>7} {:>7} {:>8} {:>8}",
                    row.n,
                    row.dim_ambient,
                    row.cone_dim,
                    row.r_gen,
                    row.r_identifiable_bound,
                    if row.perfect { "yes" } else { "" },
                    if row.beyond_computer_range { "yes" } else { "" }
                );
            }
            Ok(true)
        }
        Command::Sweep {
            min,
            max,
            prime,
            seed,
            csv,
            allow_large,
        } => {
            let opts = SweepOptions {
                n_min: min,
                n_max: max,
                prime,
                seed,
                retries: DEFAULT_RETRIES,
                allow_large,
            };
            let mut out = BufWriter::new(
                File::create(&csv).with_context(|| format!("creating {}", csv.display()))?,
            );
            writeln!(out, "{CSV_HEADER}")?;
            println!("{CSV_HEADER}");
            let mut io_err = None;
            let rows = sweep::sweep(&opts, |row| {
                let line = row.to_csv();
                println!("{line}");
                if let Some(e) = &row.error {
                    eprintln!("n = {}: {e}", row.n);
                }
                if let Err(e) = writeln!(out, "{line}").and_then(|_| out.flush()) {
                    io_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = io_err {
                return Err(e).with_context(|| format!("writing {}", csv.display()));
            }
            Ok(rows.iter().all(|r| r.verdict))
        }
        Command::Bench { sizes, prime, seed } => {
            let report = bench::bench(&sizes, PrimeModulus::new(prime)?, seed)?;
            println!("{}", report.render());
            Ok(report.all_agree())
        }
        Command::ValidateSff { d, n, prime } => {
            let report = sff::validate(d, n, PrimeModulus::new(prime)?)?;
            println!("{}", report.render());
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
