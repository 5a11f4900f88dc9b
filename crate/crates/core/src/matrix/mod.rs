//! Dense matrices over a prime field.
//!
//! [`FfMatrix`] stores canonical residues row-major. Rank, reduced row
//! echelon form and kernel vectors live in [`rref`]; products and Kronecker
//! products in [`mul`].

mod kernel;
pub mod mul;
pub mod rref;

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

pub use mul::MulStrategy;
pub use rref::{Elimination, RrefResult};

#[derive(Clone, PartialEq, Eq)]
pub struct FfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    modulus: PrimeModulus,
}

impl FfMatrix {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
            modulus,
        }
    }

    pub fn identity(modulus: PrimeModulus, n: usize) -> Self {
        let mut id = Self::zeros(modulus, n, n);
        for i in 0..n {
            id.data[i * n + i] = 1;
        }
        id
    }

    /// The all-ones square matrix, written `1_n`.
    pub fn ones(modulus: PrimeModulus, n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: vec![1; n * n],
            modulus,
        }
    }

    pub fn from_fn(
        modulus: PrimeModulus,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let m = modulus.value();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push((f(i, j) % m) as u32);
            }
        }
        Self {
            rows,
            cols,
            data,
            modulus,
        }
    }

    /// Builds a matrix from integer rows, reducing each entry mod `m`.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: PrimeModulus, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| modulus.from_i64(x).value() as u32));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
            modulus,
        })
    }

    /// Builds a matrix whose rows are the given field vectors.
    pub fn from_element_rows(
        modulus: PrimeModulus,
        cols: usize,
        rows: &[Vec<FieldElement>],
    ) -> Result<Self> {
        let mut out = Self::zeros(modulus, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, x) in row.iter().enumerate() {
                if x.modulus() != modulus {
                    return Err(Error::ModulusMismatch(x.modulus().value(), modulus.value()));
                }
                out.data[i * cols + j] = x.value() as u32;
            }
        }
        Ok(out)
    }

    pub(crate) fn from_raw(
        modulus: PrimeModulus,
        rows: usize,
        cols: usize,
        data: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| u64::from(x) < modulus.value()));
        Self {
            rows,
            cols,
            data,
            modulus,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.modulus
            .element(u64::from(self.data[i * self.cols + j]))
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> u64 {
        u64::from(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        assert_eq!(
            x.modulus(),
            self.modulus,
            "field elements from different moduli"
        );
        self.data[i * self.cols + j] = x.value() as u32;
    }

    /// Raw residues of row `i`.
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// All residues, row-major.
    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn row_elements(&self, i: usize) -> Vec<FieldElement> {
        self.row(i)
            .iter()
            .map(|&x| self.modulus.element(u64::from(x)))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.value(i, j) == self.value(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.modulus, self.cols, self.rows, |i, j| self.value(j, i))
    }

    /// Copy of the rectangular block `[r0, r0+h) x [c0, c0+w)`.
    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(self.modulus, h, w, |i, j| self.value(r0 + i, c0 + j))
    }

    /// Selects rows and columns by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.modulus, rows.len(), cols.len(), |i, j| {
            self.value(rows[i], cols[j])
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let f = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let f = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub_raw(a, b))
            .collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = self.modulus;
        let c = c.value() as u32;
        let data = self.data.iter().map(|&a| f.mul_raw(a, c)).collect();
        Self::from_raw(f, self.rows, self.cols, data)
    }

    /// `A + c I` for a square matrix.
    pub fn add_scalar_identity(&self, c: FieldElement) -> Self {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = self
                .modulus
                .add_raw(out.data[i * self.cols + i], c.value() as u32);
            out.data[i * self.cols + i] = v;
        }
        out
    }

    /// Matrix-vector product `A v`.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let m = self.modulus.value();
        Ok((0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, x)| (acc + u64::from(a) * x.value()) % m);
                self.modulus.element(s)
            })
            .collect())
    }

    /// Writes the debugging dump: a `rows cols modulus` header, then one
    /// line of space-separated residues per row.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.rows, self.cols, self.modulus)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line: line + 1,
            msg: msg.to_string(),
        };
        let (_, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))?;
        let header: Vec<u64> = header?
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(0, "header must be three integers"))?;
        let [rows, cols, m] = header[..] else {
            return Err(parse_err(0, "header must be `rows cols modulus`"));
        };
        let modulus = PrimeModulus::new(m)?;
        let (rows, cols) = (rows as usize, cols as usize);
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(rows, "missing row"))?;
            let row: Vec<u64> = line?
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(ln, "non-integer entry"))?;
            if row.len() != cols {
                return Err(parse_err(ln, "wrong number of entries"));
            }
            if row.iter().any(|&x| x >= m) {
                return Err(parse_err(ln, "entry not reduced modulo the prime"));
            }
            data.extend(row.into_iter().map(|x| x as u32));
        }
        Ok(Self::from_raw(modulus, rows, cols, data))
    }
}

impl fmt::Debug for FfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FfMatrix {}x{} over Z/{}",
            self.rows, self.cols, self.modulus
        )?;
        for i in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let f = PrimeModulus::new(20201).unwrap();
        let a = FfMatrix::from_rows(f, &[[1, 2, 3], [20200, 0, -1]]).unwrap();
        assert_eq!(a.value(1, 2), 20200);
        let mut buf = Vec::new();
        a.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 3 20201\n1 2 3\n"));
        let back = FfMatrix::read_dump(&buf[..]).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn dump_rejects_unreduced_entries() {
        let bad = "1 2 7\n3 9\n";
        assert!(FfMatrix::read_dump(bad.as_bytes()).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let f = PrimeModulus::new(7).unwrap();
        let rows: Vec<Vec<i64>> = vec![vec![1, 2], vec![3]];
        assert!(matches!(
            FfMatrix::from_rows(f, &rows),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
