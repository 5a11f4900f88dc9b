//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use chowcert::certify::{certify, verify, CertifyOptions};
use chowcert::field::derive_seed;
use chowcert::ranks::rank_table;
use chowcert::sff::{gh_build, gh_check, validate, SffCase};
use chowcert::sweep::{sweep, SweepOptions};
use chowcert::{PrimeModulus, SeededRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reference_replay() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/reference_n5_r3.cert");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report = verify(&text).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let h = report.hessian_rank.ok_or("hessian rank not computed")?;
    let got = (
        report.tangent_rank.observed,
        report.tangent_rank.expected,
        h.observed,
        h.expected,
    );
    ensure(got == (48, 48, 15, 15), || format!("ranks {got:?}"))?;
    ensure(report.proves(), || report.summary())?;
    ensure(secs < 1.0, || format!("took {secs:.3}s"))?;
    Ok(format!("tangent 48/48, hessian 15/15, TRUE in {secs:.3}s"))
}

fn sweep_2_to_30() -> Outcome {
    let mut opts = SweepOptions::new(2, 30);
    opts.seed = 2024;
    let start = Instant::now();
    let rows = sweep(&opts, |_| {}).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(rows.len() == 29, || format!("{} rows", rows.len()))?;
    for row in &rows {
        let t = row
            .tangent_rank
            .ok_or_else(|| format!("n = {}: {:?}", row.n, row.error))?;
        let h = row
            .hessian_rank
            .ok_or_else(|| format!("n = {}: no hessian", row.n))?;
        ensure(row.verdict, || format!("n = {} verdict FALSE", row.n))?;
        ensure(t.observed == (3 * row.n + 1) * row.r, || {
            format!("n = {}: tangent rank {}", row.n, t.observed)
        })?;
        ensure(h.observed == 3 * row.n, || {
            format!("n = {}: hessian rank {}", row.n, h.observed)
        })?;
    }
    ensure(secs < 600.0, || format!("took {secs:.1}s"))?;
    Ok(format!("29 cases all TRUE in {secs:.1}s"))
}

fn rank_table_1_to_103() -> Outcome {
    let rows = rank_table(1, 103);
    let mut perfect = Vec::new();
    let mut first_threshold = None;
    for row in &rows {
        let n = row.n as u128;
        let dim = (n + 3) * (n + 2) * (n + 1) / 6;
        let cone = 3 * n + 1;
        ensure(row.r_gen as u128 == dim.div_ceil(cone), || {
            format!("n = {}: r_gen {}", row.n, row.r_gen)
        })?;
        if row.perfect {
            perfect.push(row.n);
        }
        if 2 * cone < dim / cone {
            first_threshold.get_or_insert(row.n);
        }
        ensure(row.beyond_computer_range == (2 * cone < dim / cone), || {
            format!("n = {}: threshold flag", row.n)
        })?;
    }
    ensure(perfect == [1, 3, 13], || format!("perfect at {perfect:?}"))?;
    ensure(first_threshold == Some(103), || {
        format!("threshold first at {first_threshold:?}")
    })?;
    Ok("perfect at n = 1, 3, 13; threshold first holds at n = 103".into())
}

fn sff_analysis() -> Outcome {
    let f = PrimeModulus::new(20201).unwrap();
    let mut tuples = 0;
    let mut nonempty = std::collections::BTreeSet::new();
    for (d, n) in [(3, 3), (3, 4), (3, 5), (3, 6), (4, 4), (4, 5), (4, 6)] {
        let report = validate(d, n, f).map_err(|e| e.to_string())?;
        ensure(report.passed(), || report.render())?;
        for (case, t) in &report.branches {
            tuples += t.tuples;
            if t.tuples > 0 {
                nonempty.insert(*case);
            }
        }
    }
    ensure(nonempty.len() == SffCase::ALL.len(), || {
        format!("branches exercised: {nonempty:?}")
    })?;
    let mut pairs = 0;
    for d in 3..=6 {
        for n in d - 1..=d + 4 {
            let report = gh_check(&gh_build(d, n, f).map_err(|e| e.to_string())?, f)
                .map_err(|e| e.to_string())?;
            ensure(report.passed(), || {
                format!("(d, n) = ({d}, {n}): {report:?}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{tuples} index tuples match, G/H checks pass for {pairs} (d, n) pairs"
    ))
}

fn property_suites() -> Outcome {
    for p in common::FIELD_PRIMES {
        common::field_axioms(p, 10_000)?;
    }
    common::rref_properties(100)?;
    common::multiplication_properties(40)?;
    common::expand_properties(1000)?;
    common::hessian_properties(100)?;
    Ok("field, rref, multiplication, expand_product and hessian suites pass".into())
}

/// Positions of every integer token on non-comment, non-digest lines.
fn integer_tokens(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') && !line.starts_with("digest") {
            let value_start = line.find('=').map_or(0, |i| i + 1);
            let bytes = line.as_bytes();
            let mut i = value_start;
            while i < bytes.len() {
                if bytes[i].is_ascii_digit() {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push((offset + start, offset + i));
                } else {
                    i += 1;
                }
            }
        }
        offset += line.len();
    }
    out
}

fn tamper_detection() -> Outcome {
    let mut opts = CertifyOptions::new(6);
    opts.seed = 31337;
    let cert = certify(&opts).map_err(|e| e.to_string())?;
    let text = cert.to_text();
    let clean = verify(&text).map_err(|e| e.to_string())?;
    ensure(clean.proves(), || clean.summary())?;

    let m = cert.modulus.value();
    let tokens = integer_tokens(&text);
    let mut rng = SeededRng::new(derive_seed(31337, 6));
    let (mut parse_failures, mut verify_failures) = (0, 0);
    for trial in 0..50 {
        let (a, b) = tokens[(rng.next_u64() % tokens.len() as u64) as usize];
        let old: u64 = text[a..b].parse().unwrap();
        // a different value of the same kind: small header counts move by
        // one, residues move to another residue
        let new = if old < 64 {
            if old == 0 || rng.next_u64().is_multiple_of(2) {
                old + 1
            } else {
                old - 1
            }
        } else {
            (old + 1 + rng.next_u64() % (m - 1)) % m
        };
        let corrupted = format!("{}{}{}", &text[..a], new, &text[b..]);
        match verify(&corrupted) {
            Err(_) => parse_failures += 1,
            Ok(report) if !report.proves() => verify_failures += 1,
            Ok(_) => {
                return Err(format!(
                    "trial {trial}: {old} -> {new} at byte {a} still verifies"
                ))
            }
        }
    }
    Ok(format!(
        "50/50 corruptions rejected ({parse_failures} parse, {verify_failures} rank/digest)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 reference certificate replay", reference_replay),
        ("2 sweep n = 2..30", sweep_2_to_30),
        ("3 rank table n = 1..103", rank_table_1_to_103),
        ("4 second fundamental form", sff_analysis),
        ("5 property suites", property_suites),
        ("6 tamper detection", tamper_detection),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
