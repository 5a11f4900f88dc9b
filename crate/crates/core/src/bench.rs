//! Timing of elimination and multiplication strategies on random square
//! matrices, with observed scaling exponents between consecutive sizes.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Result;
use crate::field::{PrimeModulus, SeededRng};
use crate::matrix::{Elimination, FfMatrix, MulStrategy};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub size: usize,
    pub rref_naive: f64,
    pub rref_blocked: f64,
    pub mul_naive: f64,
    pub mul_blocked: f64,
    pub mul_strassen: f64,
    pub rank: usize,
    /// Both eliminations give the same echelon form.
    pub rref_agree: bool,
    /// All three products are equal.
    pub mul_agree: bool,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub modulus: PrimeModulus,
    pub rows: Vec<BenchRow>,
}

/// `log(t1 / t0) / log(s1 / s0)`.
pub fn scaling_exponent(s0: usize, t0: f64, s1: usize, t1: f64) -> f64 {
    (t1 / t0).ln() / (s1 as f64 / s0 as f64).ln()
}

fn time<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Random square matrix whose last eighth of rows are combinations of two
/// earlier rows, so elimination also exercises dependent rows.
fn test_matrix(f: PrimeModulus, size: usize, rng: &mut SeededRng) -> FfMatrix {
    let free = size - size / 8;
    let mut a = FfMatrix::from_fn(f, size, size, |_, _| rng.sample_uniform(f).value());
    for i in free..size {
        let (c0, c1) = (rng.sample_uniform(f), rng.sample_uniform(f));
        let (r0, r1) = (
            (rng.next_u64() as usize) % free,
            (rng.next_u64() as usize) % free,
        );
        for j in 0..size {
            let v = a.get(r0, j) * c0 + a.get(r1, j) * c1;
            a.set(i, j, v);
        }
    }
    a
}

pub fn bench(sizes: &[usize], modulus: PrimeModulus, seed: u64) -> Result<BenchReport> {
    let mut rng = SeededRng::new(seed);
    let mut rows = Vec::new();
    for &size in sizes {
        let a = test_matrix(modulus, size, &mut rng);
        let b = FfMatrix::from_fn(modulus, size, size, |_, _| {
            rng.sample_uniform(modulus).value()
        });
        let (naive, rref_naive) = time(|| a.rref_with(Elimination::Naive));
        let (blocked, rref_blocked) = time(|| a.rref_with(Elimination::default()));
        let (p0, mul_naive) = time(|| a.mul_with(&b, MulStrategy::Naive));
        let (p1, mul_blocked) = time(|| a.mul_with(&b, MulStrategy::Blocked));
        let (p2, mul_strassen) = time(|| a.mul_with(&b, MulStrategy::Strassen));
        let (p0, p1, p2) = (p0?, p1?, p2?);
        rows.push(BenchRow {
            size,
            rref_naive,
            rref_blocked,
            mul_naive,
            mul_blocked,
            mul_strassen,
            rank: blocked.rank(),
            rref_agree: naive.echelon() == blocked.echelon() && naive.rank() == blocked.rank(),
            mul_agree: p0 == p1 && p1 == p2,
        });
    }
    Ok(BenchReport { modulus, rows })
}

impl BenchReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.rref_agree && r.mul_agree)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "modulus {}", self.modulus);
        let _ = writeln!(
            s,
            "{:>6} {:>6} {:>11} {:>12} {:>10} {:>11} {:>12}  exact",
            "size",
            "rank",
            "rref naive",
            "rref blocked",
            "mul naive",
            "mul blocked",
            "mul strassen"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>6} {:>6} {:>10.4}s {:>11.4}s {:>9.4}s {:>10.4}s {:>11.4}s  {}",
                r.size,
                r.rank,
                r.rref_naive,
                r.rref_blocked,
                r.mul_naive,
                r.mul_blocked,
                r.mul_strassen,
                if r.rref_agree && r.mul_agree {
                    "yes"
                } else {
                    "NO"
                }
            );
        }
        if self.rows.len() > 1 {
            let _ = writeln!(s, "observed scaling exponents");
            for w in self.rows.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let e = |t0: f64, t1: f64| scaling_exponent(a.size, t0, b.size, t1);
                let _ = writeln!(
                    s,
                    "{:>5} -> {:<5} rref naive {:.2}, rref blocked {:.2}, mul naive {:.2}, mul blocked {:.2}, mul strassen {:.2}",
                    a.size,
                    b.size,
                    e(a.rref_naive, b.rref_naive),
                    e(a.rref_blocked, b.rref_blocked),
                    e(a.mul_naive, b.mul_naive),
                    e(a.mul_blocked, b.mul_blocked),
                    e(a.mul_strassen, b.mul_strassen)
                );
            }
        }
        s.pop();
        s
    }
}
