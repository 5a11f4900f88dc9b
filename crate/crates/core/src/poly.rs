//! Homogeneous polynomials as dense coefficient vectors.
//!
//! Monomials of degree `d` in `x_0, ..., x_n` are numbered in descending
//! graded reverse lexicographic order: `x_0 > x_1 > ... > x_n`, and of two
//! monomials the one with the smaller power of the last variable where
//! they differ comes first. For `n = 1, d = 3` this gives
//! `x_0^3, x_0^2 x_1, x_0 x_1^2, x_1^3`.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `deg` in `vars` variables.
fn count(vars: usize, deg: usize) -> u64 {
    if vars == 0 {
        return u64::from(deg == 0);
    }
    binomial((deg + vars - 1) as u64, (vars - 1) as u64)
}

/// Degree-`d` monomials in `n + 1` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    dim: usize,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            dim: count(n + 1, d) as usize,
        }
    }

    /// Index bound of the variables: they are `x_0 ..= x_n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vars(&self) -> usize {
        self.n + 1
    }

    pub fn index_of(&self, exponents: &[usize]) -> Result<usize> {
        if exponents.len() != self.n + 1 {
            return Err(Error::InvalidMonomial(format!(
                "expected {} exponents, got {}",
                self.n + 1,
                exponents.len()
            )));
        }
        let total: usize = exponents.iter().sum();
        if total != self.d {
            return Err(Error::InvalidMonomial(format!(
                "exponents sum to {total}, expected degree {}",
                self.d
            )));
        }
        Ok(self.index_unchecked(exponents))
    }

    fn index_unchecked(&self, exponents: &[usize]) -> usize {
        let mut idx = 0u64;
        let mut rem = self.d;
        for v in (1..=self.n).rev() {
            let e = exponents[v];
            for t in 0..e {
                idx += count(v, rem - t);
            }
            rem -= e;
        }
        idx as usize
    }

    pub fn exponents_of(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.dim {
            return Err(Error::InvalidMonomial(format!(
                "index {index} out of range for dimension {}",
                self.dim
            )));
        }
        let mut idx = index as u64;
        let mut rem = self.d;
        let mut exps = vec![0; self.n + 1];
        for v in (1..=self.n).rev() {
            let mut e = 0;
            loop {
                let block = count(v, rem - e);
                if idx < block {
                    break;
                }
                idx -= block;
                e += 1;
            }
            exps[v] = e;
            rem -= e;
        }
        exps[0] = rem;
        Ok(exps)
    }

    /// All exponent vectors in index order.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        (0..self.dim)
            .map(|i| self.exponents_of(i).expect("index in range"))
            .collect()
    }

    /// The basis one degree up.
    pub fn raised(&self) -> Self {
        Self::new(self.n, self.d + 1)
    }

    /// Multiplication-by-`x_i` table into the degree `d + 1` basis.
    pub fn shift_table(&self) -> ShiftTable {
        let target = self.raised();
        let vars = self.n + 1;
        let mut table = Vec::with_capacity(self.dim * vars);
        for mut exps in self.monomials() {
            for i in 0..vars {
                exps[i] += 1;
                table.push(target.index_unchecked(&exps) as u32);
                exps[i] -= 1;
            }
        }
        ShiftTable {
            source: *self,
            target,
            table,
        }
    }
}

/// `table[idx * (n + 1) + i]` is the index of `x_i * m_idx` one degree up.
#[derive(Clone, Debug)]
pub struct ShiftTable {
    source: MonomialBasis,
    target: MonomialBasis,
    table: Vec<u32>,
}

impl ShiftTable {
    pub fn source(&self) -> MonomialBasis {
        self.source
    }

    pub fn target(&self) -> MonomialBasis {
        self.target
    }

    #[inline]
    pub fn shift(&self, index: usize, var: usize) -> usize {
        self.table[index * (self.source.n + 1) + var] as usize
    }

    /// `x_var * p`.
    pub fn multiply_by_variable(&self, p: &Poly, var: usize) -> Result<Poly> {
        self.check_source(p)?;
        if var > self.source.n {
            return Err(Error::InvalidIndex(format!(
                "variable x_{var} with n = {}",
                self.source.n
            )));
        }
        let mut out = Poly::zero(self.target, p.modulus);
        for (idx, &c) in p.coeffs.iter().enumerate() {
            out.coeffs[self.shift(idx, var)] = c;
        }
        Ok(out)
    }

    /// `L * p`.
    pub fn multiply_by_linear(&self, p: &Poly, form: &LinearForm) -> Result<Poly> {
        self.check_source(p)?;
        if form.len() != self.source.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "linear form has {} coordinates, expected {}",
                form.len(),
                self.source.n + 1
            )));
        }
        if form.modulus != p.modulus {
            return Err(Error::ModulusMismatch(
                form.modulus.value(),
                p.modulus.value(),
            ));
        }
        let f = p.modulus;
        let mut out = Poly::zero(self.target, f);
        for (idx, &c) in p.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (var, &a) in form.coords.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let t = self.shift(idx, var);
                out.coeffs[t] = f.add_raw(out.coeffs[t], f.mul_raw(c, a));
            }
        }
        Ok(out)
    }

    fn check_source(&self, p: &Poly) -> Result<()> {
        if p.basis != self.source {
            return Err(Error::DimensionMismatch(format!(
                "polynomial of degree {} in {} variables, table expects degree {} in {}",
                p.basis.d,
                p.basis.n + 1,
                self.source.d,
                self.source.n + 1
            )));
        }
        Ok(())
    }
}

/// `a_0 x_0 + ... + a_n x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coords: Vec<u32>,
    modulus: PrimeModulus,
}

impl LinearForm {
    pub fn new(coords: &[FieldElement]) -> Result<Self> {
        let modulus = coords
            .first()
            .map(|x| x.modulus())
            .ok_or_else(|| Error::DimensionMismatch("empty linear form".into()))?;
        if let Some(x) = coords.iter().find(|x| x.modulus() != modulus) {
            return Err(Error::ModulusMismatch(x.modulus().value(), modulus.value()));
        }
        Ok(Self {
            coords: coords.iter().map(|x| x.value() as u32).collect(),
            modulus,
        })
    }

    /// From integers, which must already be reduced modulo `m`.
    pub fn from_values(modulus: PrimeModulus, values: &[u64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch("empty linear form".into()));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= modulus.value()) {
            return Err(Error::Precondition(format!(
                "coordinate {v} is not reduced modulo {modulus}"
            )));
        }
        Ok(Self {
            coords: values.iter().map(|&v| v as u32).collect(),
            modulus,
        })
    }

    /// The coordinate form `x_i`.
    pub fn variable(modulus: PrimeModulus, n: usize, i: usize) -> Self {
        let mut coords = vec![0; n + 1];
        coords[i] = 1;
        Self { coords, modulus }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coord(&self, i: usize) -> FieldElement {
        self.modulus.element(u64::from(self.coords[i]))
    }

    pub fn values(&self) -> Vec<u64> {
        self.coords.iter().map(|&x| u64::from(x)).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements from different moduli"
        );
        let f = self.modulus;
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add_raw(a, b))
                .collect(),
            modulus: f,
        }
    }

    pub fn scale(&self, c: FieldElement) -> LinearForm {
        let f = self.modulus;
        let c = c.value() as u32;
        Self {
            coords: self.coords.iter().map(|&a| f.mul_raw(a, c)).collect(),
            modulus: f,
        }
    }

    pub fn to_poly(&self) -> Poly {
        Poly {
            basis: MonomialBasis::new(self.coords.len() - 1, 1),
            coeffs: self.coords.clone(),
            modulus: self.modulus,
        }
    }
}

/// A homogeneous polynomial, stored as coefficients on a [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    basis: MonomialBasis,
    coeffs: Vec<u32>,
    modulus: PrimeModulus,
}

impl Poly {
    pub fn zero(basis: MonomialBasis, modulus: PrimeModulus) -> Self {
        Self {
            basis,
            coeffs: vec![0; basis.dim],
            modulus,
        }
    }

    pub fn constant_one(n: usize, modulus: PrimeModulus) -> Self {
        Self {
            basis: MonomialBasis::new(n, 0),
            coeffs: vec![1],
            modulus,
        }
    }

    pub fn monomial(
        basis: MonomialBasis,
        modulus: PrimeModulus,
        exponents: &[usize],
    ) -> Result<Self> {
        let mut p = Self::zero(basis, modulus);
        p.coeffs[basis.index_of(exponents)?] = 1;
        Ok(p)
    }

    pub fn from_coeffs(basis: MonomialBasis, coeffs: &[FieldElement]) -> Result<Self> {
        if coeffs.len() != basis.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a basis of dimension {}",
                coeffs.len(),
                basis.dim
            )));
        }
        let modulus = coeffs
            .first()
            .map(|x| x.modulus())
            .ok_or_else(|| Error::DimensionMismatch("empty coefficient vector".into()))?;
        if let Some(x) = coeffs.iter().find(|x| x.modulus() != modulus) {
            return Err(Error::ModulusMismatch(x.modulus().value(), modulus.value()));
        }
        Ok(Self {
            basis,
            coeffs: coeffs.iter().map(|x| x.value() as u32).collect(),
            modulus,
        })
    }

    pub fn basis(&self) -> MonomialBasis {
        self.basis
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn coeff(&self, index: usize) -> FieldElement {
        self.modulus.element(u64::from(self.coeffs[index]))
    }

    pub fn coeff_of(&self, exponents: &[usize]) -> Result<FieldElement> {
        Ok(self.coeff(self.basis.index_of(exponents)?))
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        self.coeffs
            .iter()
            .map(|&x| self.modulus.element(u64::from(x)))
            .collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| self.coeffs[i] != 0)
            .collect()
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(
                self.modulus.value(),
                other.modulus.value(),
            ));
        }
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch(format!(
                "bases differ: (n={}, d={}) vs (n={}, d={})",
                self.basis.n, self.basis.d, other.basis.n, other.basis.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let f = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(Poly {
            coeffs,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let f = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f.sub_raw(a, b))
            .collect();
        Ok(Poly {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = self.modulus;
        let c = c.value() as u32;
        Poly {
            coeffs: self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect(),
            ..self.clone()
        }
    }

    /// Unweighted coefficient dot product.
    pub fn contract(&self, other: &Poly) -> Result<FieldElement> {
        self.check_compatible(other)?;
        Ok(self
            .modulus
            .element(dot(self.modulus, &self.coeffs, &other.coeffs)))
    }

    /// `x_var * self`, one degree up.
    pub fn multiply_by_variable(&self, var: usize) -> Result<Poly> {
        self.basis.shift_table().multiply_by_variable(self, var)
    }

    pub fn multiply_by_linear(&self, form: &LinearForm) -> Result<Poly> {
        self.basis.shift_table().multiply_by_linear(self, form)
    }
}

pub(crate) fn dot(f: PrimeModulus, a: &[u32], b: &[u32]) -> u64 {
    let m = f.value();
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc = (acc + u64::from(x) * u64::from(y)) % m;
    }
    acc
}

/// Expands `L_1 L_2 ... L_k` into a degree-`k` coefficient vector.
pub fn expand_product(forms: &[LinearForm]) -> Result<Poly> {
    let first = forms
        .first()
        .ok_or_else(|| Error::Precondition("empty product".into()))?;
    let n = first.len() - 1;
    let mut acc = Poly::constant_one(n, first.modulus);
    for form in forms {
        acc = acc.basis.shift_table().multiply_by_linear(&acc, form)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeModulus {
        PrimeModulus::new(20201).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(MonomialBasis::new(1, 3).dim(), 4);
        assert_eq!(MonomialBasis::new(5, 3).dim(), 56);
        assert_eq!(MonomialBasis::new(102, 3).dim(), 187460);
        assert_eq!(MonomialBasis::new(4, 0).dim(), 1);
    }

    #[test]
    fn pinned_order_small_case() {
        let b = MonomialBasis::new(1, 3);
        assert_eq!(
            b.monomials(),
            vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]
        );
        // grevlex in three variables, degree 2
        let b = MonomialBasis::new(2, 2);
        assert_eq!(
            b.monomials(),
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![0, 2, 0],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
    }

    #[test]
    fn index_round_trip_exhaustive() {
        for n in 0..6 {
            for d in 0..5 {
                let b = MonomialBasis::new(n, d);
                for i in 0..b.dim() {
                    let e = b.exponents_of(i).unwrap();
                    assert_eq!(e.iter().sum::<usize>(), d);
                    assert_eq!(b.index_of(&e).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn large_basis_endpoints() {
        let b = MonomialBasis::new(102, 3);
        let mut last = vec![0; 103];
        last[102] = 3;
        assert_eq!(b.index_of(&last).unwrap(), 187459);
        let mut first = vec![0; 103];
        first[0] = 3;
        assert_eq!(b.index_of(&first).unwrap(), 0);
        assert_eq!(b.exponents_of(187459).unwrap(), last);
    }

    #[test]
    fn bad_exponents() {
        let b = MonomialBasis::new(2, 3);
        assert!(b.index_of(&[1, 1]).is_err());
        assert!(b.index_of(&[1, 1, 0]).is_err());
        assert!(b.exponents_of(10).is_err());
    }

    #[test]
    fn product_examples() {
        let f = fp();
        let x = |i| LinearForm::variable(f, 2, i);
        let cube = expand_product(&[x(0), x(0), x(0)]).unwrap();
        assert_eq!(cube.support(), vec![0]);
        assert_eq!(cube.coeff(0).value(), 1);
        let p = expand_product(&[x(0), x(1), x(2)]).unwrap();
        assert_eq!(p.support(), vec![p.basis().index_of(&[1, 1, 1]).unwrap()]);

        let f = fp();
        let s = LinearForm::from_values(f, &[1, 1]).unwrap();
        let p = expand_product(&[s.clone(), s.clone(), s]).unwrap();
        let vals: Vec<u64> = p.coeffs().iter().map(|x| x.value()).collect();
        assert_eq!(vals, vec![1, 3, 3, 1]);
    }

    #[test]
    fn contraction_examples() {
        let f = fp();
        let b = MonomialBasis::new(1, 3);
        let a = Poly::monomial(b, f, &[3, 0]).unwrap();
        let c = Poly::monomial(b, f, &[2, 1]).unwrap();
        let e = Poly::monomial(b, f, &[1, 2]).unwrap();
        assert_eq!(a.contract(&Poly::zero(b, f)).unwrap().value(), 0);
        assert_eq!(a.contract(&a).unwrap().value(), 1);
        assert_eq!(c.contract(&e).unwrap().value(), 0);
        assert!(a
            .contract(&Poly::zero(MonomialBasis::new(2, 3), f))
            .is_err());
    }

    #[test]
    fn variable_shift_examples() {
        let f = fp();
        let b2 = MonomialBasis::new(2, 2);
        let x0sq = Poly::monomial(b2, f, &[2, 0, 0]).unwrap();
        let up = x0sq.multiply_by_variable(0).unwrap();
        assert_eq!(up, Poly::monomial(b2.raised(), f, &[3, 0, 0]).unwrap());
        let x0x1 = Poly::monomial(b2, f, &[1, 1, 0]).unwrap();
        assert_eq!(
            x0x1.multiply_by_variable(2).unwrap(),
            Poly::monomial(b2.raised(), f, &[1, 1, 1]).unwrap()
        );
        assert!(x0x1.multiply_by_variable(3).is_err());
    }
}
