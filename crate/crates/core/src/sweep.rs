//! Certification across a range of `n` at `r = r_gen - 1`.

use std::io::Write;
use std::time::Instant;

use crate::certify::{certify, CertifyOptions, RankCheck, DEFAULT_PRIME, DEFAULT_RETRIES};
use crate::error::{Error, Result};
use crate::field::derive_seed;
use crate::ranks::RankTableRow;

/// Largest `n` swept unless explicitly allowed.
pub const DEFAULT_CAP: usize = 40;

pub const CSV_HEADER: &str =
    "n,r,dim_ambient,tangent_rank,hessian_rank,verdict,seconds,cumulative_seconds";

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub prime: u64,
    /// Case `n` runs with `derive_seed(seed, n)`.
    pub seed: u64,
    pub retries: usize,
    pub allow_large: bool,
}

impl SweepOptions {
    pub fn new(n_min: usize, n_max: usize) -> Self {
        Self {
            n_min,
            n_max,
            prime: DEFAULT_PRIME,
            seed: 0,
            retries: DEFAULT_RETRIES,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub n: usize,
    pub r: usize,
    pub dim_ambient: usize,
    pub tangent_rank: Option<RankCheck>,
    pub hessian_rank: Option<RankCheck>,
    pub verdict: bool,
    /// Set when certification errored out, e.g. every attempt was degenerate.
    pub error: Option<String>,
    pub seconds: f64,
    pub cumulative_seconds: f64,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let rank = |c: &Option<RankCheck>| c.map_or(String::new(), |c| c.observed.to_string());
        let verdict = match (&self.error, self.verdict) {
            (Some(_), _) => "ERROR",
            (None, true) => "TRUE",
            (None, false) => "FALSE",
        };
        format!(
            "{},{},{},{},{},{},{:.3},{:.3}",
            self.n,
            self.r,
            self.dim_ambient,
            rank(&self.tangent_rank),
            rank(&self.hessian_rank),
            verdict,
            self.seconds,
            self.cumulative_seconds
        )
    }
}

/// Runs the sweep in increasing `n`, calling `on_row` as each case finishes.
/// Per-case failures are recorded in the row and do not stop the sweep.
pub fn sweep(opts: &SweepOptions, mut on_row: impl FnMut(&SweepRow)) -> Result<Vec<SweepRow>> {
    if opts.n_min > opts.n_max {
        return Err(Error::Precondition(format!(
            "empty range {}..={}",
            opts.n_min, opts.n_max
        )));
    }
    if opts.n_max > DEFAULT_CAP && !opts.allow_large {
        return Err(Error::Precondition(format!(
            "n_max = {} exceeds the desk-scale cap {DEFAULT_CAP}; pass allow_large to override",
            opts.n_max
        )));
    }
    let mut rows = Vec::new();
    let mut cumulative = 0.0;
    for n in opts.n_min.max(1)..=opts.n_max {
        let table = RankTableRow::new(n);
        let r = table.certification_rank();
        if r == 0 {
            continue;
        }
        let mut copts = CertifyOptions::new(n);
        copts.r = Some(r);
        copts.prime = opts.prime;
        copts.seed = derive_seed(opts.seed, n as u64);
        copts.retries = opts.retries;
        let start = Instant::now();
        let outcome = certify(&copts);
        let seconds = start.elapsed().as_secs_f64();
        cumulative += seconds;
        let row = match outcome {
            Ok(cert) => SweepRow {
                n,
                r,
                dim_ambient: table.dim_ambient,
                tangent_rank: Some(cert.tangent_rank),
                hessian_rank: Some(cert.hessian_rank),
                verdict: cert.verdict,
                error: None,
                seconds,
                cumulative_seconds: cumulative,
            },
            Err(e) => SweepRow {
                n,
                r,
                dim_ambient: table.dim_ambient,
                tangent_rank: None,
                hessian_rank: None,
                verdict: false,
                error: Some(e.to_string()),
                seconds,
                cumulative_seconds: cumulative,
            },
        };
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv())?;
    }
    Ok(())
}
