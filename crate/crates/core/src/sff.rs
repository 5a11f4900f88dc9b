//! The second fundamental form of the Chow variety `C(d, n)` at the
//! monomial point `p = x_0 x_1 ... x_{d-1}`, for `3 <= d <= n + 1`.
//!
//! At this point the cone tangent space has a monomial basis
//!
//! ```text
//! [p] = < x_0 ... x_{d-1} >
//! A   = < x_i^2 prod_{a != i, k} x_a >    0 <= k != i < d
//! A'  = < x_i prod_{a != k} x_a >         0 <= k < d <= i <= n
//! ```
//!
//! so projecting a monomial onto the normal space is a membership test.
//! Components of the form are compared against the closed-form case table,
//! and the form contracted with a special normal vector `eta` is assembled
//! into the block matrix `diag(G, H)` with
//! `G = 1_{d-1} (x) I_d - I` and `H = I_{n+1-d} (x) 1_d - I`.

use std::fmt::{self, Write as _};

use crate::chow::ChowPoint;
use crate::error::{Error, Result};
use crate::field::{PrimeModulus, SeededRng};
use crate::matrix::FfMatrix;
use crate::poly::{expand_product, LinearForm, MonomialBasis, Poly};

/// Which branch of the component table a tuple `(k, i, l, j)` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SffCase {
    /// `i < j < d`, `k, l, i, j` pairwise distinct: `x_i^2 x_j^2 prod x_a`.
    DistinctFour,
    /// `i = j < d`, `k, l, i` distinct: `x_i^3 prod x_a`.
    EqualBelowD,
    /// `i < d <= j`, `k, l, i` distinct: `x_i^2 x_j prod x_a`.
    Mixed,
    /// `d <= i <= j`, `k != l`: `x_i x_j prod x_a`.
    BothAboveD,
    Zero,
}

impl SffCase {
    pub const ALL: [SffCase; 5] = [
        SffCase::DistinctFour,
        SffCase::EqualBelowD,
        SffCase::Mixed,
        SffCase::BothAboveD,
        SffCase::Zero,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SffCase::DistinctFour => "distinct-4",
            SffCase::EqualBelowD => "equal-below-d",
            SffCase::Mixed => "mixed",
            SffCase::BothAboveD => "both-above-d",
            SffCase::Zero => "zero",
        }
    }
}

impl fmt::Display for SffCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SffComponentCase {
    pub k: usize,
    pub i: usize,
    pub l: usize,
    pub j: usize,
    pub case: SffCase,
    pub predicted: Poly,
}

/// The monomial point `x_0 ... x_{d-1}` in `S^d` of `n + 1` variables.
#[derive(Clone, Debug)]
pub struct MonomialPoint {
    d: usize,
    n: usize,
    modulus: PrimeModulus,
    basis: MonomialBasis,
    in_tangent: Vec<bool>,
}

impl MonomialPoint {
    pub fn new(d: usize, n: usize, modulus: PrimeModulus) -> Result<Self> {
        if d < 3 || d > n + 1 {
            return Err(Error::Precondition(format!(
                "need 3 <= d <= n + 1, got d = {d}, n = {n}"
            )));
        }
        let basis = MonomialBasis::new(n, d);
        let mut point = Self {
            d,
            n,
            modulus,
            basis,
            in_tangent: vec![false; basis.dim()],
        };
        for exps in point.tangent_monomials() {
            let idx = basis.index_of(&exps)?;
            point.in_tangent[idx] = true;
        }
        Ok(point)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> MonomialBasis {
        self.basis
    }

    /// `x_i x_j prod_{a < d, a != k, l} x_a` (with the product dropping only
    /// one factor when `k == l`).
    fn q_exponents(&self, k: usize, i: usize, l: usize, j: usize) -> Vec<usize> {
        let mut e = vec![0; self.n + 1];
        for a in (0..self.d).filter(|&a| a != k && a != l) {
            e[a] += 1;
        }
        e[i] += 1;
        e[j] += 1;
        e
    }

    /// `E_{k,i}` at `p`: `x_i prod_{a != k} x_a`.
    pub fn frame_vector(&self, k: usize, i: usize) -> Vec<usize> {
        let mut e = vec![0; self.n + 1];
        for a in (0..self.d).filter(|&a| a != k) {
            e[a] += 1;
        }
        e[i] += 1;
        e
    }

    /// `[p]`, `A` and `A'` as exponent vectors, in that order.
    pub fn tangent_monomials(&self) -> Vec<Vec<usize>> {
        let mut out = vec![self.frame_vector(0, 0)];
        out.extend(self.a_monomials());
        out.extend(self.a_prime_monomials());
        out
    }

    pub fn a_monomials(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.d {
            for i in (0..self.d).filter(|&i| i != k) {
                out.push(self.frame_vector(k, i));
            }
        }
        out
    }

    pub fn a_prime_monomials(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.d {
            for i in self.d..=self.n {
                out.push(self.frame_vector(k, i));
            }
        }
        out
    }

    fn check_indices(&self, k: usize, i: usize, l: usize, j: usize) -> Result<()> {
        if k >= self.d || l >= self.d || i > self.n || j > self.n {
            return Err(Error::InvalidIndex(format!(
                "(k, i, l, j) = ({k}, {i}, {l}, {j}) with d = {}, n = {}",
                self.d, self.n
            )));
        }
        Ok(())
    }

    fn monomial(&self, exps: &[usize]) -> Poly {
        Poly::monomial(self.basis, self.modulus, exps).expect("degree-d exponent vector")
    }

    /// `II_p(E_{k,i}, E_{l,j})`, computed as the normal projection of
    /// `q_{i,j,k,l}`: zero when `k == l` or when the monomial lies in the
    /// tangent basis, the monomial itself otherwise.
    pub fn sff_component(&self, k: usize, i: usize, l: usize, j: usize) -> Result<Poly> {
        self.check_indices(k, i, l, j)?;
        if k == l {
            return Ok(Poly::zero(self.basis, self.modulus));
        }
        let q = self.q_exponents(k, i, l, j);
        if self.in_tangent[self.basis.index_of(&q)?] {
            Ok(Poly::zero(self.basis, self.modulus))
        } else {
            Ok(self.monomial(&q))
        }
    }

    /// The closed-form table entry for `(k, i, l, j)`, using the symmetry in
    /// `(i, j)` and `(k, l)` to reduce to `i <= j`, `k < l`.
    pub fn table_case(&self, k: usize, i: usize, l: usize, j: usize) -> Result<SffComponentCase> {
        self.check_indices(k, i, l, j)?;
        let d = self.d;
        let (a, b) = (i.min(j), i.max(j));
        let distinct = |set: &[usize]| {
            let mut v = set.to_vec();
            v.sort_unstable();
            v.dedup();
            v.len() == set.len()
        };
        let others =
            |skip: &[usize]| -> Vec<usize> { (0..d).filter(|x| !skip.contains(x)).collect() };
        let mut e = vec![0; self.n + 1];
        let case = if k == l {
            SffCase::Zero
        } else if a < b && b < d && distinct(&[k, l, a, b]) {
            others(&[k, l, a, b]).into_iter().for_each(|x| e[x] += 1);
            e[a] += 2;
            e[b] += 2;
            SffCase::DistinctFour
        } else if a == b && a < d && distinct(&[k, l, a]) {
            others(&[k, l, a]).into_iter().for_each(|x| e[x] += 1);
            e[a] += 3;
            SffCase::EqualBelowD
        } else if a < d && d <= b && distinct(&[k, l, a]) {
            others(&[k, l, a]).into_iter().for_each(|x| e[x] += 1);
            e[a] += 2;
            e[b] += 1;
            SffCase::Mixed
        } else if d <= a {
            others(&[k, l]).into_iter().for_each(|x| e[x] += 1);
            e[a] += 1;
            e[b] += 1;
            SffCase::BothAboveD
        } else {
            SffCase::Zero
        };
        let predicted = if case == SffCase::Zero {
            Poly::zero(self.basis, self.modulus)
        } else {
            self.monomial(&e)
        };
        Ok(SffComponentCase {
            k,
            i,
            l,
            j,
            case,
            predicted,
        })
    }

    /// The special normal vector, each monomial with coefficient one:
    ///
    /// ```text
    /// sum_i sum_{k<l} x_i^3 prod_{a != k,l,i} x_a + sum_{j >= d} x_j^2 sum_{k<l} prod_{a != k,l} x_a
    /// ```
    pub fn eta_special(&self) -> Poly {
        let d = self.d;
        let mut eta = Poly::zero(self.basis, self.modulus);
        let mut add = |e: Vec<usize>| {
            let m = self.monomial(&e);
            eta = eta.add(&m).expect("same basis");
        };
        for i in 0..d {
            for k in (0..d).filter(|&k| k != i) {
                for l in (k + 1..d).filter(|&l| l != i) {
                    let mut e = vec![0; self.n + 1];
                    (0..d)
                        .filter(|&a| a != k && a != l && a != i)
                        .for_each(|a| e[a] += 1);
                    e[i] += 3;
                    add(e);
                }
            }
        }
        for j in d..=self.n {
            for k in 0..d {
                for l in k + 1..d {
                    let mut e = vec![0; self.n + 1];
                    (0..d).filter(|&a| a != k && a != l).for_each(|a| e[a] += 1);
                    e[j] += 2;
                    add(e);
                }
            }
        }
        eta
    }

    /// `eta` is orthogonal to every tangent monomial.
    pub fn is_normal(&self, eta: &Poly) -> bool {
        self.tangent_monomials()
            .iter()
            .all(|t| self.monomial(t).contract(eta).is_ok_and(|c| c.is_zero()))
    }

    /// The closed-form value of `<II_p(E_{k,i}, E_{l,j}), eta>`.
    pub fn expected_contraction(&self, k: usize, i: usize, l: usize, j: usize) -> u64 {
        let d = self.d;
        let distinct3 = k != l && k != i && l != i;
        u64::from((i == j && i < d && distinct3) || (i == j && d <= i && k != l))
    }

    /// Frame `E_{k,i}`, `i != k`, ordered so that the contraction matrix is
    /// literally `diag(1_{d-1} (x) I_d - I, I_{n+1-d} (x) 1_d - I)`.
    ///
    /// The `A` part runs over `(a, i)` with `i < d` inner and `a` the rank of
    /// `k` within `{0..d} \ {i}` outer; the `A'` part over `(i, k)` with `k`
    /// inner.
    pub fn kronecker_frame(&self) -> Vec<(usize, usize)> {
        let d = self.d;
        let mut frame = Vec::new();
        for a in 0..d - 1 {
            for i in 0..d {
                let k = if a < i { a } else { a + 1 };
                frame.push((k, i));
            }
        }
        for i in d..=self.n {
            for k in 0..d {
                frame.push((k, i));
            }
        }
        frame
    }

    /// The same frame in the block layout of the displayed matrices: `A`
    /// grouped by `i` (then `k`), `A'` grouped by `k` (then `i`).
    pub fn display_frame(&self) -> Vec<(usize, usize)> {
        let d = self.d;
        let mut frame = Vec::new();
        for i in 0..d {
            for k in (0..d).filter(|&k| k != i) {
                frame.push((k, i));
            }
        }
        for k in 0..d {
            for i in d..=self.n {
                frame.push((k, i));
            }
        }
        frame
    }

    /// `|II*_p|(eta)` on the given frame.
    pub fn contraction_matrix(&self, eta: &Poly, frame: &[(usize, usize)]) -> Result<FfMatrix> {
        let len = frame.len();
        let mut out = FfMatrix::zeros(self.modulus, len, len);
        for (r, &(k, i)) in frame.iter().enumerate() {
            for (c, &(l, j)) in frame.iter().enumerate() {
                let v = self.sff_component(k, i, l, j)?.contract(eta)?;
                out.set(r, c, v);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct GhPair {
    pub d: usize,
    pub n: usize,
    /// Order `d(d-1)`.
    pub g: FfMatrix,
    /// Order `d(n+1-d)`.
    pub h: FfMatrix,
}

/// Builds `G = 1_{d-1} (x) I_d - I` and `H = I_{n+1-d} (x) 1_d - I`.
pub fn gh_build(d: usize, n: usize, modulus: PrimeModulus) -> Result<GhPair> {
    if d < 3 || d > n + 1 {
        return Err(Error::Precondition(format!(
            "need 3 <= d <= n + 1, got d = {d}, n = {n}"
        )));
    }
    let id = |k| FfMatrix::identity(modulus, k);
    let ones = |k| FfMatrix::ones(modulus, k);
    let g = ones(d - 1).kronecker(&id(d))?.sub(&id(d * (d - 1)))?;
    let h = id(n + 1 - d)
        .kronecker(&ones(d))?
        .sub(&id(d * (n + 1 - d)))?;
    Ok(GhPair { d, n, g, h })
}

fn block_diag(a: &FfMatrix, b: &FfMatrix) -> FfMatrix {
    let f = a.modulus();
    let (p, q) = (a.rows(), b.rows());
    FfMatrix::from_fn(f, p + q, p + q, |r, c| match (r < p, c < p) {
        (true, true) => a.value(r, c),
        (false, false) => b.value(r - p, c - p),
        _ => 0,
    })
}

/// `(M - lambda I)(M + I)`, which vanishes exactly when `M` is
/// diagonalizable with spectrum inside `{lambda, -1}`.
fn annihilator(m: &FfMatrix, lambda: i64) -> Result<FfMatrix> {
    let f = m.modulus();
    let left = m.add_scalar_identity(f.from_i64(-lambda));
    let right = m.add_scalar_identity(f.one());
    left.mul_mat(&right)
}

#[derive(Clone, Debug)]
pub struct GhReport {
    pub d: usize,
    pub n: usize,
    pub g_order: usize,
    pub h_order: usize,
    /// Contraction matrix on the Kronecker-ordered frame equals `diag(G, H)`.
    pub assembly_matches: bool,
    /// On the displayed block layout: `A` blocks are `I_d (x) (1_{d-1} - I)`
    /// and `A'` blocks `(1_d - I_d) (x) I_{n+1-d}`.
    pub display_matches: bool,
    /// `(G - (d-2) I)(G + I) = 0`
    pub g_annihilated: bool,
    /// `(H - (d-1) I)(H + I) = 0`
    pub h_annihilated: bool,
    pub g_rank: usize,
    pub h_rank: usize,
    pub mismatches: Vec<String>,
}

impl GhReport {
    pub fn passed(&self) -> bool {
        self.assembly_matches
            && self.display_matches
            && self.g_annihilated
            && self.h_annihilated
            && self.g_rank == self.g_order
            && self.h_rank == self.h_order
    }
}

fn diff_entries(label: &str, got: &FfMatrix, want: &FfMatrix, out: &mut Vec<String>) {
    for r in 0..got.rows() {
        for c in 0..got.cols() {
            if got.value(r, c) != want.value(r, c) && out.len() < 20 {
                out.push(format!(
                    "{label}[{r},{c}]: assembled {}, expected {}",
                    got.value(r, c),
                    want.value(r, c)
                ));
            }
        }
    }
}

pub fn gh_check(pair: &GhPair, modulus: PrimeModulus) -> Result<GhReport> {
    let (d, n) = (pair.d, pair.n);
    let point = MonomialPoint::new(d, n, modulus)?;
    let eta = point.eta_special();
    let mut mismatches = Vec::new();

    let assembled = point.contraction_matrix(&eta, &point.kronecker_frame())?;
    let expected = block_diag(&pair.g, &pair.h);
    diff_entries("kronecker frame", &assembled, &expected, &mut mismatches);
    let assembly_matches = assembled == expected;

    let displayed = point.contraction_matrix(&eta, &point.display_frame())?;
    let id = |k| FfMatrix::identity(modulus, k);
    let ones = |k| FfMatrix::ones(modulus, k);
    let g_display = id(d).kronecker(&ones(d - 1).sub(&id(d - 1))?)?;
    let h_display = ones(d).sub(&id(d))?.kronecker(&id(n + 1 - d))?;
    let display_expected = block_diag(&g_display, &h_display);
    diff_entries(
        "display frame",
        &displayed,
        &display_expected,
        &mut mismatches,
    );
    let display_matches = displayed == display_expected;

    let g_annihilated = annihilator(&pair.g, d as i64 - 2)?.is_zero();
    let h_annihilated = annihilator(&pair.h, d as i64 - 1)?.is_zero();
    Ok(GhReport {
        d,
        n,
        g_order: pair.g.rows(),
        h_order: pair.h.rows(),
        assembly_matches,
        display_matches,
        g_annihilated,
        h_annihilated,
        g_rank: pair.g.rank(),
        h_rank: pair.h.rank(),
        mismatches,
    })
}

/// Checks that the parameterization `(L_0, L_1, L_2) -> L_0 L_1 L_2` has no
/// second derivative within a single factor: for random directions `u` and
/// every slot, `f(t) = expand(.., L_s + t u, ..)` satisfies
/// `f(2) - 2 f(1) + f(0) = 0` exactly.
pub fn minimality_check(point: &ChowPoint, trials: usize, rng: &mut SeededRng) -> Result<bool> {
    let f = point.modulus();
    let n = point.n();
    for _ in 0..trials {
        for slot in 0..point.forms().len() {
            let u = LinearForm::new(&rng.sample_vec(f, n + 1))?;
            let at = |t: u64| {
                let mut forms = point.forms().to_vec();
                forms[slot] = forms[slot].add(&u.scale(f.element(t)));
                expand_product(&forms)
            };
            let second = at(2)?.sub(&at(1)?.scale(f.element(2)))?.add(&at(0)?)?;
            if !second.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Mixed second difference in slots `s1 != s2` along `u` and `v`; by
/// multilinearity it equals the product with `u`, `v` substituted.
pub fn mixed_second_difference(
    point: &ChowPoint,
    s1: usize,
    s2: usize,
    u: &LinearForm,
    v: &LinearForm,
) -> Result<Poly> {
    if s1 == s2 || s1 >= 3 || s2 >= 3 {
        return Err(Error::InvalidIndex(format!("slots ({s1}, {s2})")));
    }
    let at = |a: bool, b: bool| {
        let mut forms = point.forms().to_vec();
        if a {
            forms[s1] = forms[s1].add(u);
        }
        if b {
            forms[s2] = forms[s2].add(v);
        }
        expand_product(&forms)
    };
    at(true, true)?
        .sub(&at(true, false)?)?
        .sub(&at(false, true)?)?
        .add(&at(false, false)?)
}

/// Per-branch tallies from an exhaustive enumeration.
#[derive(Clone, Debug, Default)]
pub struct BranchTally {
    pub tuples: usize,
    pub matched: usize,
}

#[derive(Clone, Debug)]
pub struct SffReport {
    pub d: usize,
    pub n: usize,
    pub branches: Vec<(SffCase, BranchTally)>,
    pub eta_normal: bool,
    pub contraction_tuples: usize,
    pub contraction_matched: usize,
    pub dims: (usize, usize, usize),
    pub tangent_rank: usize,
    pub gh: GhReport,
}

impl SffReport {
    pub fn branches_passed(&self) -> bool {
        self.branches.iter().all(|(_, t)| t.matched == t.tuples)
    }

    /// `dim [p] = 1`, `dim A = d(d-1)`, `dim A' = d(n+1-d)`, summing to the
    /// rank of the tangent frame.
    pub fn dims_passed(&self) -> bool {
        let (p, a, ap) = self.dims;
        p == 1
            && a == self.d * (self.d - 1)
            && ap == self.d * (self.n + 1 - self.d)
            && p + a + ap == self.tangent_rank
    }

    pub fn passed(&self) -> bool {
        self.branches_passed()
            && self.eta_normal
            && self.contraction_matched == self.contraction_tuples
            && self.dims_passed()
            && self.gh.passed()
    }

    pub fn render(&self) -> String {
        let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "second fundamental form at x_0...x_{} (d = {}, n = {})",
            self.d - 1,
            self.d,
            self.n
        );
        let _ = writeln!(
            s,
            "{:<16} {:>8} {:>8}  result",
            "branch", "tuples", "matched"
        );
        for (case, t) in &self.branches {
            let _ = writeln!(
                s,
                "{:<16} {:>8} {:>8}  {}",
                case.label(),
                t.tuples,
                t.matched,
                mark(t.matched == t.tuples)
            );
        }
        let _ = writeln!(s, "eta normal to tangent space: {}", mark(self.eta_normal));
        let _ = writeln!(
            s,
            "contraction table: {}/{} {}",
            self.contraction_matched,
            self.contraction_tuples,
            mark(self.contraction_matched == self.contraction_tuples)
        );
        let (p, a, ap) = self.dims;
        let _ = writeln!(
            s,
            "dims: [p] = {p}, A = {a}, A' = {ap}, tangent rank = {} {}",
            self.tangent_rank,
            mark(self.dims_passed())
        );
        let gh = &self.gh;
        let _ = writeln!(
            s,
            "G: order {}, rank {}, (G-(d-2)I)(G+I) = 0: {}",
            gh.g_order,
            gh.g_rank,
            mark(gh.g_annihilated && gh.g_rank == gh.g_order)
        );
        let _ = writeln!(
            s,
            "H: order {}, rank {}, (H-(d-1)I)(H+I) = 0: {}",
            gh.h_order,
            gh.h_rank,
            mark(gh.h_annihilated && gh.h_rank == gh.h_order)
        );
        let _ = writeln!(s, "assembly diag(G, H): {}", mark(gh.assembly_matches));
        let _ = writeln!(s, "displayed block layout: {}", mark(gh.display_matches));
        for m in &gh.mismatches {
            let _ = writeln!(s, "  {m}");
        }
        let _ = write!(s, "overall: {}", mark(self.passed()));
        s
    }
}

/// Runs every check for one `(d, n)`.
pub fn validate(d: usize, n: usize, modulus: PrimeModulus) -> Result<SffReport> {
    let point = MonomialPoint::new(d, n, modulus)?;
    let eta = point.eta_special();
    let mut tallies: Vec<(SffCase, BranchTally)> = SffCase::ALL
        .iter()
        .map(|&c| (c, BranchTally::default()))
        .collect();
    let mut contraction_tuples = 0;
    let mut contraction_matched = 0;
    for k in 0..d {
        for l in 0..d {
            for i in 0..=n {
                for j in 0..=n {
                    let computed = point.sff_component(k, i, l, j)?;
                    let table = point.table_case(k, i, l, j)?;
                    let slot = SffCase::ALL
                        .iter()
                        .position(|&c| c == table.case)
                        .expect("known case");
                    tallies[slot].1.tuples += 1;
                    if computed == table.predicted {
                        tallies[slot].1.matched += 1;
                    }
                    contraction_tuples += 1;
                    if computed.contract(&eta)?.value() == point.expected_contraction(k, i, l, j) {
                        contraction_matched += 1;
                    }
                }
            }
        }
    }
    let frame: Vec<Vec<usize>> = (0..d)
        .flat_map(|k| (0..=n).map(move |i| (k, i)))
        .map(|(k, i)| point.frame_vector(k, i))
        .collect();
    let rows: Vec<Vec<_>> = frame.iter().map(|e| point.monomial(e).coeffs()).collect();
    let tangent_rank = FfMatrix::from_element_rows(modulus, point.basis.dim(), &rows)?.rank();
    let pair = gh_build(d, n, modulus)?;
    Ok(SffReport {
        d,
        n,
        branches: tallies,
        eta_normal: point.is_normal(&eta),
        contraction_tuples,
        contraction_matched,
        dims: (
            1,
            point.a_monomials().len(),
            point.a_prime_monomials().len(),
        ),
        tangent_rank,
        gh: gh_check(&pair, modulus)?,
    })
}
