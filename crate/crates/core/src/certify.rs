//! The certification pipeline and its text certificates.
//!
//! 1. sample `r` random points `k_j l_j m_j`;
//! 2. stack their tangent spaces into the Terracini matrix `T` and check
//!    it has rank `(3n+1) r`;
//! 3. reduce `T` to `[I | X] P` and take `eta = P^-1 (-X f0, f0)` for a
//!    random `f0`;
//! 4. contract the second fundamental form at the first point with `eta`
//!    and check the resulting Hessian has rank `3n`.
//!
//! Both checks passing certifies that the cubic Chow variety is not
//! `r`-tangentially weakly defective, hence generically `r`-identifiable.
//! A failed check proves nothing: the test is one-sided.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::chow::{expected_hessian_rank, expected_tangent_rank, ChowPoint, ChowSpace};
use crate::error::{Error, Result};
use crate::field::{derive_seed, FieldElement, PrimeModulus, SeededRng};
use crate::matrix::Elimination;
use crate::poly::{LinearForm, Poly};
use crate::ranks::RankTableRow;

pub const DEFAULT_PRIME: u64 = 20201;
pub const DEFAULT_RETRIES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub observed: usize,
    pub expected: usize,
}

impl RankCheck {
    pub fn passed(&self) -> bool {
        self.observed == self.expected
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub terracini: f64,
    pub elimination: f64,
    pub hessian: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub seed: u64,
    pub modulus: PrimeModulus,
    pub n: usize,
    pub r: usize,
    pub points: Vec<ChowPoint>,
    pub f0: Vec<FieldElement>,
    pub tangent_rank: RankCheck,
    /// Hessian at the first point.
    pub hessian_rank: RankCheck,
    /// Hessian ranks at the remaining points, when all were tested.
    pub other_hessian_ranks: Vec<usize>,
    pub verdict: bool,
    /// Zero-based attempt that produced this certificate.
    pub attempt: usize,
    /// Linear forms redrawn because they came out zero.
    pub zero_form_redraws: usize,
    pub timings: Timings,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub n: usize,
    /// Defaults to `r_gen - 1`.
    pub r: Option<usize>,
    pub prime: u64,
    pub seed: u64,
    /// Additional attempts after the first.
    pub retries: usize,
    pub all_points: bool,
    pub elimination: Elimination,
}

impl CertifyOptions {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            r: None,
            prime: DEFAULT_PRIME,
            seed: 0,
            retries: DEFAULT_RETRIES,
            all_points: false,
            elimination: Elimination::default(),
        }
    }
}

/// Number of free variables `c = binom(n+3, 3) - (3n+1) r`.
pub fn codimension(n: usize, r: usize) -> i64 {
    RankTableRow::new(n).dim_ambient as i64 - expected_tangent_rank(n, r) as i64
}

fn check_parameters(n: usize, r: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    if r < 1 {
        return Err(Error::Precondition("need r >= 1".into()));
    }
    let c = codimension(n, r);
    if c < 1 {
        return Err(Error::Precondition(format!(
            "(3n+1)r = {} must be below binom(n+3,3) = {}; the normal space would be trivial",
            expected_tangent_rank(n, r),
            RankTableRow::new(n).dim_ambient
        )));
    }
    Ok(())
}

/// Result of running steps 2-4 on fixed data.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub tangent_rank: RankCheck,
    /// `None` when the tangent check failed or `f0` does not fit the kernel.
    pub hessian_ranks: Option<Vec<usize>>,
    pub timings: Timings,
}

/// Runs the deterministic part of the pipeline on recorded data. `f0` is
/// either given, or drawn from `rng` once the kernel dimension is known.
fn evaluate(
    space: &ChowSpace,
    r: usize,
    points: &[ChowPoint],
    f0: F0Source<'_>,
    all_points: bool,
    elimination: Elimination,
) -> Result<(Evaluation, Option<Vec<FieldElement>>)> {
    let n = space.n();
    let start = Instant::now();
    let t = space.terracini_matrix(points)?;
    let terracini = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let rref = t.rref_with(elimination);
    let elimination_time = start.elapsed().as_secs_f64();
    drop(t);

    let tangent = RankCheck {
        observed: rref.rank(),
        expected: expected_tangent_rank(n, r),
    };
    let mut timings = Timings {
        terracini,
        elimination: elimination_time,
        ..Timings::default()
    };
    if !tangent.passed() {
        return Ok((
            Evaluation {
                tangent_rank: tangent,
                hessian_ranks: None,
                timings,
            },
            None,
        ));
    }
    let f0 = match f0 {
        F0Source::Recorded(v) => v.to_vec(),
        F0Source::Sample(rng) => rng.sample_vec(space.modulus(), rref.nullity()),
    };
    if f0.len() != rref.nullity() {
        return Ok((
            Evaluation {
                tangent_rank: tangent,
                hessian_ranks: None,
                timings,
            },
            Some(f0),
        ));
    }
    let start = Instant::now();
    let eta = Poly::from_coeffs(space.cubic_basis(), &rref.null_vector(&f0)?)?;
    drop(rref);
    let tested = if all_points { points.len() } else { 1 };
    let mut ranks = Vec::with_capacity(tested);
    for p in &points[..tested] {
        ranks.push(space.hessian_at(p, &eta)?.rank());
    }
    timings.hessian = start.elapsed().as_secs_f64();
    Ok((
        Evaluation {
            tangent_rank: tangent,
            hessian_ranks: Some(ranks),
            timings,
        },
        Some(f0),
    ))
}

enum F0Source<'a> {
    Recorded(&'a [FieldElement]),
    Sample(&'a mut SeededRng),
}

/// Runs the randomized pipeline, retrying with derived seeds when a sampled
/// configuration turns out not to be generic enough.
pub fn certify(opts: &CertifyOptions) -> Result<Certificate> {
    let n = opts.n;
    let r = opts
        .r
        .unwrap_or_else(|| RankTableRow::new(n).certification_rank());
    check_parameters(n, r)?;
    let modulus = PrimeModulus::new(opts.prime)?;
    let space = ChowSpace::new(n, modulus)?;
    let hessian_expected = expected_hessian_rank(n);
    let mut log = Vec::new();
    for attempt in 0..=opts.retries {
        let total = Instant::now();
        let seed = if attempt == 0 {
            opts.seed
        } else {
            derive_seed(opts.seed, attempt as u64)
        };
        let mut rng = SeededRng::new(seed);
        let mut points = Vec::with_capacity(r);
        let mut redraws = 0;
        for _ in 0..r {
            let (p, z) = space.sample_point(&mut rng);
            redraws += z;
            points.push(p);
        }
        let (eval, f0) = evaluate(
            &space,
            r,
            &points,
            F0Source::Sample(&mut rng),
            opts.all_points,
            opts.elimination,
        )?;
        let Some(ranks) = eval.hessian_ranks else {
            log.push(format!(
                "attempt {attempt} (seed {seed}): tangent rank {} / {}",
                eval.tangent_rank.observed, eval.tangent_rank.expected
            ));
            continue;
        };
        if let Some(bad) = ranks.iter().position(|&h| h != hessian_expected) {
            log.push(format!(
                "attempt {attempt} (seed {seed}): Hessian rank {} / {hessian_expected} at point {bad}",
                ranks[bad]
            ));
            continue;
        }
        let mut timings = eval.timings;
        timings.total = total.elapsed().as_secs_f64();
        return Ok(Certificate {
            seed,
            modulus,
            n,
            r,
            points,
            f0: f0.expect("sampled after a full-rank tangent check"),
            tangent_rank: eval.tangent_rank,
            hessian_rank: RankCheck {
                observed: ranks[0],
                expected: hessian_expected,
            },
            other_hessian_ranks: ranks[1..].to_vec(),
            verdict: true,
            attempt,
            zero_form_redraws: redraws,
            timings,
        });
    }
    Err(Error::GenericConfigurationNotFound(log))
}

const POINT_LABELS: [char; 3] = ['k', 'l', 'm'];

impl Certificate {
    /// Canonical content hashed into the `digest` line.
    fn canonical(&self) -> String {
        let mut s = format!(
            "seed={};prime={};n={};r={};",
            self.seed, self.modulus, self.n, self.r
        );
        for (j, p) in self.points.iter().enumerate() {
            for (label, form) in POINT_LABELS.iter().zip(p.forms()) {
                let vals: Vec<String> = form.values().iter().map(u64::to_string).collect();
                let _ = write!(s, "{label}_{j}={};", vals.join(","));
            }
        }
        let f0: Vec<String> = self.f0.iter().map(|x| x.value().to_string()).collect();
        let _ = write!(
            s,
            "f_0={};tangent_rank={}/{};hessian_rank={}/{};verdict={}",
            f0.join(","),
            self.tangent_rank.observed,
            self.tangent_rank.expected,
            self.hessian_rank.observed,
            self.hessian_rank.expected,
            self.verdict
        );
        s
    }

    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn verdict_label(&self) -> String {
        format!(
            "not-{}-TWD {}",
            self.r,
            if self.verdict { "TRUE" } else { "FALSE" }
        )
    }

    /// Renders the certificate; vectors are right-aligned to the width of
    /// the largest residue.
    pub fn to_text(&self) -> String {
        let width = (self.modulus.value() - 1).to_string().len();
        let vector = |vals: &mut dyn Iterator<Item = u64>| {
            let parts: Vec<String> = vals.map(|v| format!("{v:>width$}")).collect();
            format!("[{}]", parts.join(" "))
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# cubic Chow variety C(3,{}): certificate of not {}-tangentially weakly defective over F_{}",
            self.n, self.r, self.modulus
        );
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "prime = {}", self.modulus);
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "r = {}", self.r);
        for (j, p) in self.points.iter().enumerate() {
            for (label, form) in POINT_LABELS.iter().zip(p.forms()) {
                let _ = writeln!(
                    s,
                    "{label}_{j} = {}",
                    vector(&mut form.values().into_iter())
                );
            }
        }
        let _ = writeln!(
            s,
            "f_0 = {}",
            vector(&mut self.f0.iter().map(|x| x.value()))
        );
        let _ = writeln!(
            s,
            "tangent_rank = {} / {}",
            self.tangent_rank.observed, self.tangent_rank.expected
        );
        let _ = writeln!(
            s,
            "hessian_rank = {} / {}",
            self.hessian_rank.observed, self.hessian_rank.expected
        );
        let _ = writeln!(s, "verdict = {}", self.verdict_label());
        let _ = writeln!(s, "digest = {}", self.digest());
        let _ = writeln!(s, "# attempt = {}", self.attempt);
        if self.zero_form_redraws > 0 {
            let _ = writeln!(
                s,
                "# zero linear forms redrawn = {}",
                self.zero_form_redraws
            );
        }
        if !self.other_hessian_ranks.is_empty() {
            let ranks: Vec<String> = self
                .other_hessian_ranks
                .iter()
                .map(usize::to_string)
                .collect();
            let _ = writeln!(s, "# hessian ranks at points 1..: {}", ranks.join(" "));
        }
        let _ = writeln!(
            s,
            "# seconds: terracini {:.3}, elimination {:.3}, hessian {:.3}, total {:.3}",
            self.timings.terracini,
            self.timings.elimination,
            self.timings.hessian,
            self.timings.total
        );
        if self.verdict {
            let _ = writeln!(
                s,
                "# not {r}-TWD implies not k-TWD, hence generic k-identifiability, for every k <= {r}",
                r = self.r
            );
        }
        s
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// A parsed certificate plus its optional `digest` line.
#[derive(Clone, Debug)]
pub struct ParsedCertificate {
    pub certificate: Certificate,
    pub digest: Option<String>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_int<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| {
        parse_err(
            line,
            format!("`{key}` must be an integer, got `{}`", v.trim()),
        )
    })
}

fn parse_vector(line: usize, key: &str, v: &str) -> Result<Vec<u64>> {
    let inner = v
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("`{key}` must be a bracketed vector")))?;
    inner
        .split_whitespace()
        .map(|tok| parse_int(line, key, tok))
        .collect()
}

fn parse_ratio(line: usize, key: &str, v: &str) -> Result<RankCheck> {
    let (a, b) = v
        .split_once('/')
        .ok_or_else(|| parse_err(line, format!("`{key}` must read `<observed> / <expected>`")))?;
    Ok(RankCheck {
        observed: parse_int(line, key, a)?,
        expected: parse_int(line, key, b)?,
    })
}

/// Parses the certificate grammar. Blank lines and `#` comments are
/// ignored; every other line is `key = value`.
pub fn parse_certificate(text: &str) -> Result<ParsedCertificate> {
    let mut seed = None;
    let mut prime = None;
    let mut n = None;
    let mut r = None;
    let mut forms: Vec<(usize, usize, usize, Vec<u64>)> = Vec::new();
    let mut f0 = None;
    let mut tangent = None;
    let mut hessian = None;
    let mut verdict = None;
    let mut digest = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let dup = |slot_filled: bool| {
            if slot_filled {
                Err(parse_err(line, format!("duplicate `{key}`")))
            } else {
                Ok(())
            }
        };
        match key {
            "seed" => {
                dup(seed.is_some())?;
                seed = Some(parse_int::<u64>(line, key, value)?);
            }
            "prime" => {
                dup(prime.is_some())?;
                prime = Some(parse_int::<u64>(line, key, value)?);
            }
            "n" => {
                dup(n.is_some())?;
                n = Some(parse_int::<usize>(line, key, value)?);
            }
            "r" => {
                dup(r.is_some())?;
                r = Some(parse_int::<usize>(line, key, value)?);
            }
            "f_0" => {
                dup(f0.is_some())?;
                f0 = Some((line, parse_vector(line, key, value)?));
            }
            "tangent_rank" => {
                dup(tangent.is_some())?;
                tangent = Some(parse_ratio(line, key, value)?);
            }
            "hessian_rank" => {
                dup(hessian.is_some())?;
                hessian = Some(parse_ratio(line, key, value)?);
            }
            "verdict" => {
                dup(verdict.is_some())?;
                verdict = Some((line, value.to_string()));
            }
            "digest" => {
                dup(digest.is_some())?;
                digest = Some(value.to_string());
            }
            _ => {
                let (label, j) = key
                    .split_once('_')
                    .ok_or_else(|| parse_err(line, format!("unknown key `{key}`")))?;
                let slot = match label {
                    "k" => 0,
                    "l" => 1,
                    "m" => 2,
                    _ => return Err(parse_err(line, format!("unknown key `{key}`"))),
                };
                let j: usize = parse_int(line, key, j)?;
                if forms.iter().any(|&(jj, s, _, _)| jj == j && s == slot) {
                    return Err(parse_err(line, format!("duplicate `{key}`")));
                }
                forms.push((j, slot, line, parse_vector(line, key, value)?));
            }
        }
    }

    let missing = |k: &str| parse_err(0, format!("missing `{k}`"));
    let seed = seed.ok_or_else(|| missing("seed"))?;
    let prime = prime.ok_or_else(|| missing("prime"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let r = r.ok_or_else(|| missing("r"))?;
    let (f0_line, f0) = f0.ok_or_else(|| missing("f_0"))?;
    let tangent = tangent.ok_or_else(|| missing("tangent_rank"))?;
    let hessian = hessian.ok_or_else(|| missing("hessian_rank"))?;
    let (verdict_line, verdict_text) = verdict.ok_or_else(|| missing("verdict"))?;

    let modulus = PrimeModulus::new(prime).map_err(|e| parse_err(0, format!("prime: {e}")))?;
    check_parameters(n, r).map_err(|e| parse_err(0, e.to_string()))?;

    let mut slots: Vec<[Option<LinearForm>; 3]> = vec![[None, None, None]; r];
    for (j, slot, line, vals) in forms {
        if j >= r {
            return Err(parse_err(line, format!("point index {j} but r = {r}")));
        }
        if vals.len() != n + 1 {
            return Err(parse_err(
                line,
                format!("expected {} coordinates, found {}", n + 1, vals.len()),
            ));
        }
        let form =
            LinearForm::from_values(modulus, &vals).map_err(|e| parse_err(line, e.to_string()))?;
        slots[j][slot] = Some(form);
    }
    let mut points = Vec::with_capacity(r);
    for (j, [k, l, m]) in slots.into_iter().enumerate() {
        let (Some(k), Some(l), Some(m)) = (k, l, m) else {
            return Err(missing(&format!("k_{j}, l_{j} or m_{j}")));
        };
        points
            .push(ChowPoint::new([k, l, m]).map_err(|e| parse_err(0, format!("point {j}: {e}")))?);
    }

    let c = codimension(n, r) as usize;
    if f0.len() != c {
        return Err(parse_err(
            f0_line,
            format!("f_0 must have c = {c} entries, found {}", f0.len()),
        ));
    }
    if let Some(&v) = f0.iter().find(|&&v| v >= prime) {
        return Err(parse_err(
            f0_line,
            format!("f_0 entry {v} is not reduced modulo {prime}"),
        ));
    }
    let f0 = f0.into_iter().map(|v| modulus.element(v)).collect();

    let verdict = {
        let mut parts = verdict_text.split_whitespace();
        let label = parts.next().unwrap_or_default();
        let value = parts.next().unwrap_or_default();
        if parts.next().is_some() || label != format!("not-{r}-TWD") {
            return Err(parse_err(
                verdict_line,
                format!("verdict must read `not-{r}-TWD TRUE|FALSE`"),
            ));
        }
        match value {
            "TRUE" => true,
            "FALSE" => false,
            _ => return Err(parse_err(verdict_line, "verdict must be TRUE or FALSE")),
        }
    };

    Ok(ParsedCertificate {
        certificate: Certificate {
            seed,
            modulus,
            n,
            r,
            points,
            f0,
            tangent_rank: tangent,
            hessian_rank: hessian,
            other_hessian_ranks: Vec::new(),
            verdict,
            attempt: 0,
            zero_form_redraws: 0,
            timings: Timings::default(),
        },
        digest,
    })
}

/// Outcome of re-running a certificate.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub n: usize,
    pub r: usize,
    pub modulus: PrimeModulus,
    pub tangent_rank: RankCheck,
    pub hessian_rank: Option<RankCheck>,
    pub verdict: bool,
    /// `None` when the certificate carries no digest line.
    pub digest_ok: Option<bool>,
    pub mismatches: Vec<String>,
    pub seconds: f64,
}

impl VerifyReport {
    /// The certificate is internally consistent: every recorded value
    /// matches its recomputation.
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Consistent, and the recomputed ranks prove not `r`-TWD.
    pub fn proves(&self) -> bool {
        self.consistent() && self.verdict
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, r = {}, over F_{}", self.n, self.r, self.modulus);
        let _ = writeln!(
            s,
            "tangent rank {} / {} expected",
            self.tangent_rank.observed, self.tangent_rank.expected
        );
        match self.hessian_rank {
            Some(h) => {
                let _ = writeln!(s, "hessian rank {} / {} expected", h.observed, h.expected);
            }
            None => {
                let _ = writeln!(s, "hessian rank not computed");
            }
        }
        match self.digest_ok {
            Some(true) => s.push_str("digest ok\n"),
            Some(false) => s.push_str("digest MISMATCH\n"),
            None => s.push_str("no digest recorded\n"),
        }
        for m in &self.mismatches {
            let _ = writeln!(s, "mismatch: {m}");
        }
        let _ = writeln!(
            s,
            "not-{}-TWD {}",
            self.r,
            if self.verdict { "TRUE" } else { "FALSE" }
        );
        let _ = write!(
            s,
            "verification {} in {:.3}s",
            if self.proves() { "PASSED" } else { "FAILED" },
            self.seconds
        );
        s
    }
}

/// Recomputes both ranks from the recorded vectors; the seed is ignored.
pub fn verify(text: &str) -> Result<VerifyReport> {
    let start = Instant::now();
    let parsed = parse_certificate(text)?;
    let cert = &parsed.certificate;
    let mut mismatches = Vec::new();

    let digest_ok = parsed.digest.as_ref().map(|d| *d == cert.digest());
    if digest_ok == Some(false) {
        mismatches.push("digest does not match the recorded content".to_string());
    }

    let space = ChowSpace::new(cert.n, cert.modulus)?;
    let (eval, _) = evaluate(
        &space,
        cert.r,
        &cert.points,
        F0Source::Recorded(&cert.f0),
        false,
        Elimination::default(),
    )?;

    let tangent = eval.tangent_rank;
    if cert.tangent_rank != tangent {
        mismatches.push(format!(
            "tangent rank: recorded {} / {}, recomputed {} / {}",
            cert.tangent_rank.observed,
            cert.tangent_rank.expected,
            tangent.observed,
            tangent.expected
        ));
    }
    let expected_h = expected_hessian_rank(cert.n);
    let hessian = eval.hessian_ranks.as_ref().map(|ranks| RankCheck {
        observed: ranks[0],
        expected: expected_h,
    });
    match hessian {
        Some(h) if h != cert.hessian_rank => mismatches.push(format!(
            "hessian rank: recorded {} / {}, recomputed {} / {}",
            cert.hessian_rank.observed, cert.hessian_rank.expected, h.observed, h.expected
        )),
        Some(_) => {}
        None => mismatches.push(format!(
            "hessian rank: recorded {} / {}, not computable because the tangent check failed",
            cert.hessian_rank.observed, cert.hessian_rank.expected
        )),
    }
    let verdict = tangent.passed() && hessian.is_some_and(|h| h.passed());
    if verdict != cert.verdict {
        mismatches.push(format!(
            "verdict: recorded {}, recomputed {}",
            cert.verdict, verdict
        ));
    }
    Ok(VerifyReport {
        n: cert.n,
        r: cert.r,
        modulus: cert.modulus,
        tangent_rank: tangent,
        hessian_rank: hessian,
        verdict,
        digest_ok,
        mismatches,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn verify_file(path: &Path) -> Result<VerifyReport> {
    verify(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instance_certifies() {
        let mut opts = CertifyOptions::new(2);
        opts.r = Some(1);
        opts.seed = 12345;
        let cert = certify(&opts).unwrap();
        assert_eq!(
            cert.tangent_rank,
            RankCheck {
                observed: 7,
                expected: 7
            }
        );
        assert_eq!(
            cert.hessian_rank,
            RankCheck {
                observed: 6,
                expected: 6
            }
        );
        assert!(cert.verdict);
        assert_eq!(cert.f0.len(), 3);
    }

    #[test]
    fn default_rank_is_r_gen_minus_one() {
        let mut opts = CertifyOptions::new(5);
        opts.seed = 1;
        let cert = certify(&opts).unwrap();
        assert_eq!(cert.r, 3);
        assert_eq!(cert.tangent_rank.observed, 48);
        assert_eq!(cert.hessian_rank.observed, 15);
    }

    #[test]
    fn trivial_normal_space_rejected() {
        let mut opts = CertifyOptions::new(5);
        opts.r = Some(4); // 64 > 56
        assert!(matches!(certify(&opts), Err(Error::Precondition(_))));
        let mut opts = CertifyOptions::new(3);
        opts.r = Some(2); // 20 = 20, c = 0
        assert!(matches!(certify(&opts), Err(Error::Precondition(_))));
        assert!(matches!(
            certify(&CertifyOptions::new(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn round_trip_and_digest() {
        let mut opts = CertifyOptions::new(4);
        opts.seed = 77;
        opts.all_points = true;
        let cert = certify(&opts).unwrap();
        assert_eq!(cert.other_hessian_ranks.len(), cert.r - 1);
        let text = cert.to_text();
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed.digest.as_deref(), Some(cert.digest().as_str()));
        assert_eq!(parsed.certificate.points, cert.points);
        assert_eq!(parsed.certificate.f0, cert.f0);
        let report = verify(&text).unwrap();
        assert!(report.proves(), "{}", report.summary());
        assert_eq!(report.digest_ok, Some(true));
    }

    #[test]
    fn recorded_rank_tampering_detected_without_digest() {
        let mut opts = CertifyOptions::new(3);
        opts.seed = 5;
        let text = certify(&opts).unwrap().to_text();
        let stripped: String = text
            .lines()
            .filter(|l| !l.starts_with("digest"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(verify(&stripped).unwrap().proves());
        let bad = stripped.replace("hessian_rank = 9 / 9", "hessian_rank = 8 / 9");
        let report = verify(&bad).unwrap();
        assert!(!report.consistent());
        assert!(report.mismatches[0].contains("hessian rank"));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_certificate("seed = 1\nprime = x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_certificate("seed = 1\nbogus line\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_certificate("q_0 = [1]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
