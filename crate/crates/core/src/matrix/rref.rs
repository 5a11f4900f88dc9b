//! Reduced row echelon form, rank and kernel parameterization.
//!
//! Pivots are the first nonzero entry in each column scan. Because the RREF
//! of a matrix is unique, the blocked and naive eliminations return
//! identical echelon forms and pivot lists; only their cost differs.

use super::kernel::{gemm, Accumulate, View};
use super::FfMatrix;
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

pub const DEFAULT_BLOCK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// Textbook Gauss-Jordan, one row operation at a time.
    Naive,
    /// Column panels of the given width; the trailing update is a
    /// delayed-reduction matrix product.
    Blocked { block: usize },
}

impl Default for Elimination {
    fn default() -> Self {
        Elimination::Blocked {
            block: DEFAULT_BLOCK,
        }
    }
}

/// Output of [`FfMatrix::rref`].
///
/// With `permutation = pivot_cols ++ free_cols`, the first `rank` rows of
/// `echelon` restricted to the permuted columns read `[I_rank | X]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    echelon: FfMatrix,
    pivot_cols: Vec<usize>,
    permutation: Vec<usize>,
}

impl RrefResult {
    fn new(echelon: FfMatrix, pivot_cols: Vec<usize>) -> Self {
        let mut is_pivot = vec![false; echelon.cols()];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut permutation = pivot_cols.clone();
        permutation.extend((0..echelon.cols()).filter(|&c| !is_pivot[c]));
        Self {
            echelon,
            pivot_cols,
            permutation,
        }
    }

    pub fn echelon(&self) -> &FfMatrix {
        &self.echelon
    }

    pub fn into_echelon(self) -> FfMatrix {
        self.echelon
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Column order that brings the echelon form to `[I | X]`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn free_cols(&self) -> &[usize] {
        &self.permutation[self.rank()..]
    }

    /// Number of free variables `c = cols - rank`.
    pub fn nullity(&self) -> usize {
        self.echelon.cols() - self.rank()
    }

    /// The `rank x c` block `X` of `[I | X]`.
    pub fn x_matrix(&self) -> FfMatrix {
        let rows: Vec<usize> = (0..self.rank()).collect();
        self.echelon.select(&rows, self.free_cols())
    }

    /// Kernel vector `eta = P^-1 (-X f0, f0)`: `f0` fills the free
    /// positions and `-X f0` the pivot positions.
    pub fn null_vector(&self, f0: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let c = self.nullity();
        if c == 0 {
            return Err(Error::FullColumnRank);
        }
        if f0.len() != c {
            return Err(Error::DimensionMismatch(format!(
                "f0 has {} entries, nullity is {c}",
                f0.len()
            )));
        }
        let f = self.echelon.modulus();
        if let Some(x) = f0.iter().find(|x| x.modulus() != f) {
            return Err(Error::ModulusMismatch(x.modulus().value(), f.value()));
        }
        let m = f.value();
        let free = self.free_cols();
        let mut eta = vec![f.zero(); self.echelon.cols()];
        for (&col, &x) in free.iter().zip(f0) {
            eta[col] = x;
        }
        for (t, &col) in self.pivot_cols.iter().enumerate() {
            let row = self.echelon.row(t);
            let s = free.iter().zip(f0).fold(0u64, |acc, (&fc, x)| {
                (acc + u64::from(row[fc]) * x.value()) % m
            });
            eta[col] = -f.element(s);
        }
        Ok(eta)
    }
}

impl FfMatrix {
    pub fn rref(&self) -> RrefResult {
        self.rref_with(Elimination::default())
    }

    pub fn rref_with(&self, strategy: Elimination) -> RrefResult {
        let mut echelon = self.clone();
        let pivots = match strategy {
            Elimination::Naive => eliminate_naive(&mut echelon),
            Elimination::Blocked { block } => eliminate_blocked(&mut echelon, block.max(1)),
        };
        RrefResult::new(echelon, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    pub fn rank_with(&self, strategy: Elimination) -> usize {
        self.rref_with(strategy).rank()
    }
}

fn swap_rows(a: &mut FfMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = a.cols;
    let (lo, hi) = (i.min(j), i.max(j));
    let (head, tail) = a.data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

fn eliminate_naive(a: &mut FfMatrix) -> Vec<usize> {
    let f = a.modulus;
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut pivot_row = vec![0u32; cols];
    for c in 0..cols {
        let rank = pivots.len();
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a.data[r * cols + c] != 0) else {
            continue;
        };
        swap_rows(a, p, rank);
        let inv = f
            .inv_raw(a.data[rank * cols + c])
            .expect("pivot is nonzero");
        for (dst, &src) in pivot_row[c..]
            .iter_mut()
            .zip(&a.data[rank * cols + c..(rank + 1) * cols])
        {
            *dst = f.mul_raw(src, inv);
        }
        a.row_mut(rank)[c..].copy_from_slice(&pivot_row[c..]);
        for r in (0..rows).filter(|&r| r != rank) {
            let x = a.data[r * cols + c];
            if x == 0 {
                continue;
            }
            let row = &mut a.data[r * cols..(r + 1) * cols];
            for j in c..cols {
                row[j] = f.sub_raw(row[j], f.mul_raw(x, pivot_row[j]));
            }
        }
        pivots.push(c);
    }
    pivots
}

/// Inverse of a `k x k` matrix known to be invertible.
fn invert_small(f: PrimeModulus, mat: &[u32], k: usize) -> Vec<u32> {
    let w = 2 * k;
    let mut aug = vec![0u32; k * w];
    for i in 0..k {
        aug[i * w..i * w + k].copy_from_slice(&mat[i * k..(i + 1) * k]);
        aug[i * w + k + i] = 1;
    }
    for c in 0..k {
        let p = (c..k)
            .find(|&r| aug[r * w + c] != 0)
            .expect("pivot block is invertible");
        if p != c {
            for j in 0..w {
                aug.swap(p * w + j, c * w + j);
            }
        }
        let inv = f.inv_raw(aug[c * w + c]).expect("nonzero pivot");
        for j in 0..w {
            aug[c * w + j] = f.mul_raw(aug[c * w + j], inv);
        }
        let pivot: Vec<u32> = aug[c * w..(c + 1) * w].to_vec();
        for r in (0..k).filter(|&r| r != c) {
            let x = aug[r * w + c];
            if x != 0 {
                for j in 0..w {
                    aug[r * w + j] = f.sub_raw(aug[r * w + j], f.mul_raw(x, pivot[j]));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(k * k);
    for i in 0..k {
        out.extend_from_slice(&aug[i * w + k..(i + 1) * w]);
    }
    out
}

/// Right-looking blocked Gauss-Jordan.
///
/// For each column panel, a scalar elimination on a copy of the panel picks
/// the pivot rows `B1` and pivot columns `S`. The whole matrix is then
/// updated with three products:
///
/// ```text
/// B1 <- B1[:, S]^-1 * B1
/// R  <- R - R[:, S] * B1      for every other row R
/// ```
///
/// Rows below the current rank are zero in every earlier column, so the
/// updates only touch columns from the panel start onwards.
fn eliminate_blocked(a: &mut FfMatrix, block: usize) -> Vec<usize> {
    let f = a.modulus;
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots: Vec<usize> = Vec::new();
    let mut c = 0;
    while c < cols && pivots.len() < rows {
        let rank = pivots.len();
        let w = block.min(cols - c);
        let h = rows - rank;

        let mut panel = vec![0u32; h * w];
        for i in 0..h {
            let start = (rank + i) * cols + c;
            panel[i * w..(i + 1) * w].copy_from_slice(&a.data[start..start + w]);
        }
        let mut order: Vec<usize> = (0..h).collect();
        let mut swaps = Vec::new();
        let mut local = Vec::new();
        let mut pivot_vals = vec![0u32; w];
        for j in 0..w {
            let k = local.len();
            if k == h {
                break;
            }
            let Some(s) = (k..h).find(|&s| panel[order[s] * w + j] != 0) else {
                continue;
            };
            order.swap(k, s);
            swaps.push((k, s));
            let prow = order[k] * w;
            let inv = f.inv_raw(panel[prow + j]).expect("pivot is nonzero");
            for t in j..w {
                pivot_vals[t] = f.mul_raw(panel[prow + t], inv);
            }
            for &r in &order[k + 1..] {
                let x = panel[r * w + j];
                if x != 0 {
                    for t in j..w {
                        panel[r * w + t] = f.sub_raw(panel[r * w + t], f.mul_raw(x, pivot_vals[t]));
                    }
                }
            }
            local.push(j);
        }
        let k = local.len();
        if k == 0 {
            c += w;
            continue;
        }
        for &(x, y) in &swaps {
            swap_rows(a, rank + x, rank + y);
        }
        let s_cols: Vec<usize> = local.iter().map(|&j| c + j).collect();

        let mut b1p = Vec::with_capacity(k * k);
        for i in 0..k {
            let row = a.row(rank + i);
            b1p.extend(s_cols.iter().map(|&sc| row[sc]));
        }
        let inv = invert_small(f, &b1p, k);

        let ncols = cols - c;
        let mut new_b1 = vec![0u32; k * ncols];
        gemm(
            f,
            k,
            k,
            ncols,
            View {
                data: &inv,
                stride: k,
            },
            View {
                data: &a.data[rank * cols + c..],
                stride: cols,
            },
            &mut new_b1,
            ncols,
            Accumulate::Store,
        );
        for i in 0..k {
            a.row_mut(rank + i)[c..].copy_from_slice(&new_b1[i * ncols..(i + 1) * ncols]);
        }

        for (lo, hi) in [(0, rank), (rank + k, rows)] {
            if lo >= hi {
                continue;
            }
            let mut coef = Vec::with_capacity((hi - lo) * k);
            for r in lo..hi {
                let row = a.row(r);
                coef.extend(s_cols.iter().map(|&sc| row[sc]));
            }
            gemm(
                f,
                hi - lo,
                k,
                ncols,
                View {
                    data: &coef,
                    stride: k,
                },
                View {
                    data: &new_b1,
                    stride: ncols,
                },
                &mut a.data[lo * cols + c..],
                cols,
                Accumulate::Subtract,
            );
        }
        pivots.extend(s_cols);
        c += w;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SeededRng;

    fn fp(m: u64) -> PrimeModulus {
        PrimeModulus::new(m).unwrap()
    }

    #[test]
    fn identity_rref() {
        let f = fp(7);
        let r = FfMatrix::identity(f, 5).rref();
        assert_eq!(r.rank(), 5);
        assert_eq!(r.pivot_cols(), &[0, 1, 2, 3, 4]);
        assert_eq!(r.x_matrix().cols(), 0);
        assert!(matches!(r.null_vector(&[]), Err(Error::FullColumnRank)));
    }

    #[test]
    fn hand_eliminated_example() {
        // [[1,2,3],[2,4,6]] over Z/7: second row is twice the first.
        let f = fp(7);
        let a = FfMatrix::from_rows(f, &[[1, 2, 3], [2, 4, 6]]).unwrap();
        for strategy in [Elimination::Naive, Elimination::Blocked { block: 2 }] {
            let r = a.rref_with(strategy);
            assert_eq!(r.rank(), 1);
            assert_eq!(r.pivot_cols(), &[0]);
            assert_eq!(r.x_matrix().row(0), &[2, 3]);
            assert_eq!(r.permutation(), &[0, 1, 2]);
            assert!(r.echelon().row(1).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn zero_matrix() {
        let f = fp(11);
        let r = FfMatrix::zeros(f, 4, 6).rref();
        assert_eq!(r.rank(), 0);
        assert!(r.pivot_cols().is_empty());
        assert_eq!(FfMatrix::zeros(f, 3, 3).rank(), 0);
    }

    #[test]
    fn null_vector_of_identity_block() {
        // T = [I | X] with P = id: eta = (-X e1, e1).
        let f = fp(101);
        let t = FfMatrix::from_rows(f, &[[1, 0, 5, 7], [0, 1, 3, 9]]).unwrap();
        let r = t.rref();
        assert_eq!(r.permutation(), &[0, 1, 2, 3]);
        let eta = r.null_vector(&[f.one(), f.zero()]).unwrap();
        let vals: Vec<u64> = eta.iter().map(|x| x.value()).collect();
        assert_eq!(vals, vec![101 - 5, 101 - 3, 1, 0]);
        assert!(t.mul_vec(&eta).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn permutation_tracks_late_pivots() {
        let f = fp(7);
        // pivots at columns 1 and 3
        let a = FfMatrix::from_rows(f, &[[0, 1, 2, 0], [0, 2, 4, 3]]).unwrap();
        let r = a.rref();
        assert_eq!(r.pivot_cols(), &[1, 3]);
        assert_eq!(r.permutation(), &[1, 3, 0, 2]);
        let eta = r.null_vector(&[f.element(3), f.element(5)]).unwrap();
        assert!(a.mul_vec(&eta).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn blocked_matches_naive_on_low_rank_inputs() {
        let f = fp(20201);
        let mut rng = SeededRng::new(99);
        for (rows, cols, inner) in [(40, 37, 11), (33, 70, 33), (70, 20, 25), (1, 5, 1)] {
            let l = FfMatrix::from_fn(f, rows, inner, |_, _| rng.sample_uniform(f).value());
            let r = FfMatrix::from_fn(f, inner, cols, |_, _| rng.sample_uniform(f).value());
            let a = l.mul_mat(&r).unwrap();
            let naive = a.rref_with(Elimination::Naive);
            for block in [1, 3, 7, 64] {
                assert_eq!(a.rref_with(Elimination::Blocked { block }), naive);
            }
            assert_eq!(naive.rank(), inner.min(rows).min(cols));
        }
    }

    #[test]
    fn sparse_columns_with_block_boundaries() {
        let f = fp(7);
        let a = FfMatrix::from_fn(f, 12, 30, |i, j| {
            if j % 5 == 0 || (i + j) % 11 == 0 {
                (i * j + 1) as u64
            } else {
                0
            }
        });
        let naive = a.rref_with(Elimination::Naive);
        for block in [2, 4, 5, 6, 13] {
            assert_eq!(a.rref_with(Elimination::Blocked { block }), naive);
        }
    }

    #[test]
    fn invert_small_round_trip() {
        let f = fp(20201);
        let m = [2u32, 3, 1, 5, 0, 4, 1, 1, 1];
        let inv = invert_small(f, &m, 3);
        let a = FfMatrix::from_raw(f, 3, 3, m.to_vec());
        let b = FfMatrix::from_raw(f, 3, 3, inv);
        assert_eq!(a.mul_mat(&b).unwrap(), FfMatrix::identity(f, 3));
    }
}
