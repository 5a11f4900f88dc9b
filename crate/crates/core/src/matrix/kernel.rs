//! Dense multiply-accumulate over `Z/mZ` with delayed reduction.
//!
//! Entries are `u32` residues. Products are accumulated in `u64` lanes and
//! only reduced once per `chunk` terms, so the hot loop is a plain widening
//! multiply-add that the compiler vectorizes.

use crate::field::PrimeModulus;

const TILE: usize = 1024;

/// How the product is written to the output rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Accumulate {
    /// `out = a * b`
    Store,
    /// `out = out - a * b`
    Subtract,
}

/// Row-major view: `data[row * stride + col]`.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub data: &'a [u32],
    pub stride: usize,
}

/// Largest number of products of two residues that can be added to a
/// reduced accumulator without overflowing `u64`.
pub(crate) fn chunk_len(m: u64) -> usize {
    let sq = (m - 1) * (m - 1);
    (((u64::MAX - (m - 1)) / sq) as usize).max(1)
}

/// Reduces `acc[i] mod m` for every lane.
///
/// When all accumulators are below `2^52` the quotient is recovered in
/// double precision (exact up to a single correction step), which is much
/// cheaper than integer division and vectorizes.
#[inline]
fn reduce_lanes(acc: &mut [u64], m: u64, bound: u64) {
    if bound < (1u64 << 52) {
        let mf = m as f64;
        let inv = 1.0 / mf;
        for s in acc.iter_mut() {
            let x = *s;
            let q = ((x as f64) * inv) as u64;
            let r = x.wrapping_sub(q.wrapping_mul(m)) as i64;
            let r = if r < 0 { r + m as i64 } else { r };
            let r = if r >= m as i64 { r - m as i64 } else { r };
            *s = r as u64;
        }
    } else {
        for s in acc.iter_mut() {
            *s %= m;
        }
    }
}

/// Computes `out[i, ..ncols] (op)= sum_t a[i, t] * b[t, ..ncols]` for
/// `i < rows`, `t < k`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn gemm(
    modulus: PrimeModulus,
    rows: usize,
    k: usize,
    ncols: usize,
    a: View<'_>,
    b: View<'_>,
    out: &mut [u32],
    out_stride: usize,
    mode: Accumulate,
) {
    if rows == 0 || ncols == 0 {
        return;
    }
    let m = modulus.value();
    let chunk = chunk_len(m);
    let max_terms = k.min(chunk) as u64;
    let bound = (m - 1).saturating_mul(m - 1).saturating_mul(max_terms) + m;
    let mut acc = vec![0u64; TILE.min(ncols)];
    for j0 in (0..ncols).step_by(TILE) {
        let w = TILE.min(ncols - j0);
        for i in 0..rows {
            let acc = &mut acc[..w];
            acc.fill(0);
            let arow = &a.data[i * a.stride..i * a.stride + k];
            let mut pending = 0usize;
            for (t, &x) in arow.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = u64::from(x);
                let start = t * b.stride + j0;
                let brow = &b.data[start..start + w];
                for (s, &y) in acc.iter_mut().zip(brow) {
                    *s += x * u64::from(y);
                }
                pending += 1;
                if pending == chunk {
                    reduce_lanes(acc, m, bound);
                    pending = 0;
                }
            }
            reduce_lanes(acc, m, bound);
            let start = i * out_stride + j0;
            let orow = &mut out[start..start + w];
            match mode {
                Accumulate::Store => {
                    for (o, &s) in orow.iter_mut().zip(acc.iter()) {
                        *o = s as u32;
                    }
                }
                Accumulate::Subtract => {
                    for (o, &s) in orow.iter_mut().zip(acc.iter()) {
                        let v = u64::from(*o) + m - s;
                        *o = (if v >= m { v - m } else { v }) as u32;
                    }
                }
            }
        }
    }
}
