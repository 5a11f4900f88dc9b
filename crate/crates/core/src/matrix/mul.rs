use super::kernel::{gemm, Accumulate, View};
use super::FfMatrix;
use crate::error::{Error, Result};

/// Strassen's seven-product split is applied (once) only above this size.
const STRASSEN_THRESHOLD: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MulStrategy {
    /// Triple loop, reducing after every product. Reference oracle.
    Naive,
    /// Cache-tiled multiply-accumulate with delayed reduction.
    Blocked,
    /// One level of Strassen recursion over blocked products.
    Strassen,
    /// Strassen for large even shapes, blocked otherwise.
    #[default]
    Auto,
}

impl FfMatrix {
    /// Exact product `self * other`.
    pub fn mul_mat(&self, other: &FfMatrix) -> Result<FfMatrix> {
        self.mul_with(other, MulStrategy::Auto)
    }

    pub fn mul_with(&self, other: &FfMatrix, strategy: MulStrategy) -> Result<FfMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(match strategy {
            MulStrategy::Naive => self.mul_naive(other),
            MulStrategy::Blocked => self.mul_blocked(other),
            MulStrategy::Strassen => self.mul_strassen(other),
            MulStrategy::Auto => {
                let even = self.rows.is_multiple_of(2)
                    && self.cols.is_multiple_of(2)
                    && other.cols.is_multiple_of(2);
                let large = self.rows.min(self.cols).min(other.cols) >= STRASSEN_THRESHOLD;
                if even && large {
                    self.mul_strassen(other)
                } else {
                    self.mul_blocked(other)
                }
            }
        })
    }

    fn mul_naive(&self, other: &FfMatrix) -> FfMatrix {
        let m = self.modulus.value();
        FfMatrix::from_fn(self.modulus, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(0u64, |acc, t| {
                (acc + self.value(i, t) * other.value(t, j)) % m
            })
        })
    }

    fn mul_blocked(&self, other: &FfMatrix) -> FfMatrix {
        let mut out = vec![0u32; self.rows * other.cols];
        gemm(
            self.modulus,
            self.rows,
            self.cols,
            other.cols,
            View {
                data: &self.data,
                stride: self.cols,
            },
            View {
                data: &other.data,
                stride: other.cols,
            },
            &mut out,
            other.cols,
            Accumulate::Store,
        );
        FfMatrix::from_raw(self.modulus, self.rows, other.cols, out)
    }

    fn mul_strassen(&self, other: &FfMatrix) -> FfMatrix {
        let (n, k, p) = (self.rows, self.cols, other.cols);
        if n % 2 != 0 || k % 2 != 0 || p % 2 != 0 || n == 0 || k == 0 || p == 0 {
            return self.mul_blocked(other);
        }
        let (n2, k2, p2) = (n / 2, k / 2, p / 2);
        let a11 = self.submatrix(0, 0, n2, k2);
        let a12 = self.submatrix(0, k2, n2, k2);
        let a21 = self.submatrix(n2, 0, n2, k2);
        let a22 = self.submatrix(n2, k2, n2, k2);
        let b11 = other.submatrix(0, 0, k2, p2);
        let b12 = other.submatrix(0, p2, k2, p2);
        let b21 = other.submatrix(k2, 0, k2, p2);
        let b22 = other.submatrix(k2, p2, k2, p2);

        // Shapes agree by construction, so the elementwise ops cannot fail.
        let add = |x: &FfMatrix, y: &FfMatrix| x.add(y).expect("quadrant shapes agree");
        let sub = |x: &FfMatrix, y: &FfMatrix| x.sub(y).expect("quadrant shapes agree");

        let m1 = add(&a11, &a22).mul_blocked(&add(&b11, &b22));
        let m2 = add(&a21, &a22).mul_blocked(&b11);
        let m3 = a11.mul_blocked(&sub(&b12, &b22));
        let m4 = a22.mul_blocked(&sub(&b21, &b11));
        let m5 = add(&a11, &a12).mul_blocked(&b22);
        let m6 = sub(&a21, &a11).mul_blocked(&add(&b11, &b12));
        let m7 = sub(&a12, &a22).mul_blocked(&add(&b21, &b22));

        let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
        let c12 = add(&m3, &m5);
        let c21 = add(&m2, &m4);
        let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);

        let mut out = FfMatrix::zeros(self.modulus, n, p);
        for (block, r0, c0) in [(&c11, 0, 0), (&c12, 0, p2), (&c21, n2, 0), (&c22, n2, p2)] {
            for i in 0..n2 {
                out.row_mut(r0 + i)[c0..c0 + p2].copy_from_slice(block.row(i));
            }
        }
        out
    }

    /// Kronecker product: entry `(i*rows_b + k, j*cols_b + l)` is
    /// `a[i,j] * b[k,l]`.
    pub fn kronecker(&self, other: &FfMatrix) -> Result<FfMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        let f = self.modulus;
        let (rb, cb) = (other.rows, other.cols);
        Ok(FfMatrix::from_fn(
            f,
            self.rows * rb,
            self.cols * cb,
            |r, c| {
                let (i, k) = (r / rb, r % rb);
                let (j, l) = (c / cb, c % cb);
                f.mul_raw(self.data[i * self.cols + j], other.data[k * cb + l]) as u64
            },
        ))
    }
}
