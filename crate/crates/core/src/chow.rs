//! Points of the cubic Chow variety and the matrices built from them.
//!
//! A point is a product `k * l * m` of three linear forms in `x_0..x_n`.
//! Its cone tangent space is spanned by the `3(n+1)` cubics
//! `x_i * (product of the other two forms)`, indexed factor-major then by
//! variable; this order is used for Terracini rows and Hessian
//! rows/columns alike.

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, SeededRng};
use crate::matrix::FfMatrix;
use crate::poly::{LinearForm, MonomialBasis, Poly, ShiftTable};

pub const FACTORS: usize = 3;

/// Dimension `3n + 1` of the cone over the cubic Chow variety.
pub fn cone_dim(n: usize) -> usize {
    3 * n + 1
}

/// Expected rank of the Terracini matrix for `r` generic points.
pub fn expected_tangent_rank(n: usize, r: usize) -> usize {
    cone_dim(n) * r
}

/// Expected rank of the contracted Hessian: the cone tangent dimension
/// minus the radial direction, `3n`.
pub fn expected_hessian_rank(n: usize) -> usize {
    3 * n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowPoint {
    forms: [LinearForm; FACTORS],
}

impl ChowPoint {
    pub fn new(forms: [LinearForm; FACTORS]) -> Result<Self> {
        let len = forms[0].len();
        let modulus = forms[0].modulus();
        if len < 2 {
            return Err(Error::Precondition("linear forms need n >= 1".into()));
        }
        for form in &forms {
            if form.len() != len {
                return Err(Error::DimensionMismatch(
                    "linear forms of a point must share n".into(),
                ));
            }
            if form.modulus() != modulus {
                return Err(Error::ModulusMismatch(
                    form.modulus().value(),
                    modulus.value(),
                ));
            }
            if form.is_zero() {
                return Err(Error::Precondition(
                    "a factor of a point is the zero form".into(),
                ));
            }
        }
        Ok(Self { forms })
    }

    pub fn forms(&self) -> &[LinearForm; FACTORS] {
        &self.forms
    }

    pub fn n(&self) -> usize {
        self.forms[0].len() - 1
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.forms[0].modulus()
    }
}

/// Tangent vectors `x_i * prod_{a != k} L_a`, in `(k, i)` row-major order.
#[derive(Clone, Debug)]
pub struct TangentBasis {
    n: usize,
    vectors: Vec<Poly>,
}

impl TangentBasis {
    pub fn vectors(&self) -> &[Poly] {
        &self.vectors
    }

    pub fn vector(&self, factor: usize, var: usize) -> &Poly {
        &self.vectors[factor * (self.n + 1) + var]
    }

    pub fn to_matrix(&self) -> FfMatrix {
        let basis = self.vectors[0].basis();
        let modulus = self.vectors[0].modulus();
        let rows: Vec<_> = self.vectors.iter().map(Poly::coeffs).collect();
        FfMatrix::from_element_rows(modulus, basis.dim(), &rows).expect("uniform basis")
    }
}

/// `H_j`: the contracted second fundamental form at one point, of order
/// `3(n+1)` with rows and columns indexed by `(factor, variable)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianMatrix {
    n: usize,
    entries: FfMatrix,
}

impl HessianMatrix {
    pub fn matrix(&self) -> &FfMatrix {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.rank()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.is_symmetric()
    }

    /// The `(k, k)` blocks vanish: both derivatives in one factor.
    pub fn diagonal_blocks_zero(&self) -> bool {
        let b = self.n + 1;
        (0..FACTORS)
            .all(|k| (0..b).all(|i| (0..b).all(|j| self.entries.value(k * b + i, k * b + j) == 0)))
    }
}

/// Precomputed multiplication tables for cubics in `n + 1` variables.
#[derive(Clone, Debug)]
pub struct ChowSpace {
    n: usize,
    modulus: PrimeModulus,
    /// degree 1 -> 2
    to_quadric: ShiftTable,
    /// degree 2 -> 3
    to_cubic: ShiftTable,
}

impl ChowSpace {
    pub fn new(n: usize, modulus: PrimeModulus) -> Result<Self> {
        if n < 1 {
            return Err(Error::Precondition("need n >= 1".into()));
        }
        Ok(Self {
            n,
            modulus,
            to_quadric: MonomialBasis::new(n, 1).shift_table(),
            to_cubic: MonomialBasis::new(n, 2).shift_table(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn cubic_basis(&self) -> MonomialBasis {
        self.to_cubic.target()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cubic_basis().dim()
    }

    fn check_point(&self, p: &ChowPoint) -> Result<()> {
        if p.n() != self.n || p.modulus() != self.modulus {
            return Err(Error::DimensionMismatch(format!(
                "point with n = {} over Z/{}, expected n = {} over Z/{}",
                p.n(),
                p.modulus(),
                self.n,
                self.modulus
            )));
        }
        Ok(())
    }

    /// Draws three forms with i.i.d. uniform coordinates. A zero form is
    /// redrawn; the number of redraws is returned alongside the point.
    pub fn sample_point(&self, rng: &mut SeededRng) -> (ChowPoint, usize) {
        let mut redraws = 0;
        let mut draw = || loop {
            let coords = rng.sample_vec(self.modulus, self.n + 1);
            let form = LinearForm::new(&coords).expect("nonempty, single modulus");
            if !form.is_zero() {
                return form;
            }
            redraws += 1;
        };
        let forms = [draw(), draw(), draw()];
        (ChowPoint { forms }, redraws)
    }

    fn quadric(&self, a: &LinearForm, b: &LinearForm) -> Poly {
        self.to_quadric
            .multiply_by_linear(&a.to_poly(), b)
            .expect("forms checked against this space")
    }

    /// The product `L_0 L_1 L_2`.
    pub fn point_polynomial(&self, p: &ChowPoint) -> Result<Poly> {
        self.check_point(p)?;
        let [a, b, c] = p.forms();
        self.to_cubic.multiply_by_linear(&self.quadric(a, b), c)
    }

    /// Products of the two factors other than `k`, for `k = 0, 1, 2`.
    fn cofactors(&self, p: &ChowPoint) -> [Poly; FACTORS] {
        let [a, b, c] = p.forms();
        [self.quadric(b, c), self.quadric(a, c), self.quadric(a, b)]
    }

    pub fn tangent_basis(&self, p: &ChowPoint) -> Result<TangentBasis> {
        self.check_point(p)?;
        let mut vectors = Vec::with_capacity(FACTORS * (self.n + 1));
        for q in self.cofactors(p) {
            for i in 0..=self.n {
                vectors.push(self.to_cubic.multiply_by_variable(&q, i)?);
            }
        }
        Ok(TangentBasis { n: self.n, vectors })
    }

    /// Stacks the tangent vectors of every point (point-major) into a
    /// `3(n+1) r x binom(n+3, 3)` matrix.
    pub fn terracini_matrix(&self, points: &[ChowPoint]) -> Result<FfMatrix> {
        if points.is_empty() {
            return Err(Error::Precondition("need at least one point".into()));
        }
        let per_point = FACTORS * (self.n + 1);
        let dim = self.ambient_dim();
        let mut t = FfMatrix::zeros(self.modulus, per_point * points.len(), dim);
        for (j, p) in points.iter().enumerate() {
            self.check_point(p)?;
            for (k, q) in self.cofactors(p).iter().enumerate() {
                let support: Vec<(usize, u32)> = q
                    .raw()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(idx, &c)| (idx, c))
                    .collect();
                for i in 0..=self.n {
                    let row = t.row_mut(j * per_point + k * (self.n + 1) + i);
                    for &(idx, c) in &support {
                        row[self.to_cubic.shift(idx, i)] = c;
                    }
                }
            }
        }
        Ok(t)
    }

    /// Entry `((k, i), (l, j))` is `<x_i x_j L_c, eta>` with `c` the third
    /// factor when `k != l`, and zero when `k == l`.
    pub fn hessian_at(&self, p: &ChowPoint, eta: &Poly) -> Result<HessianMatrix> {
        self.check_point(p)?;
        if eta.basis() != self.cubic_basis() || eta.modulus() != self.modulus {
            return Err(Error::DimensionMismatch(
                "normal vector is not a cubic of this space".into(),
            ));
        }
        let f = self.modulus;
        let m = f.value();
        let b = self.n + 1;
        let eta = eta.raw();
        // contracted[c][i * b + j] = <x_i x_j L_c, eta>
        let mut contracted = vec![vec![0u32; b * b]; FACTORS];
        for i in 0..b {
            for j in i..b {
                let q = self.to_quadric.shift(i, j);
                let column: Vec<u64> = (0..b)
                    .map(|t| u64::from(eta[self.to_cubic.shift(q, t)]))
                    .collect();
                for (c, form) in p.forms().iter().enumerate() {
                    let s = form
                        .raw()
                        .iter()
                        .zip(&column)
                        .fold(0u64, |acc, (&a, &e)| (acc + u64::from(a) * e) % m)
                        as u32;
                    contracted[c][i * b + j] = s;
                    contracted[c][j * b + i] = s;
                }
            }
        }
        let mut h = FfMatrix::zeros(f, FACTORS * b, FACTORS * b);
        for k in 0..FACTORS {
            for l in (0..FACTORS).filter(|&l| l != k) {
                let c = FACTORS - k - l;
                for i in 0..b {
                    let row = h.row_mut(k * b + i);
                    row[l * b..(l + 1) * b].copy_from_slice(&contracted[c][i * b..(i + 1) * b]);
                }
            }
        }
        Ok(HessianMatrix {
            n: self.n,
            entries: h,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::expand_product;

    fn fp() -> PrimeModulus {
        PrimeModulus::new(20201).unwrap()
    }

    fn monomial_point(n: usize) -> ChowPoint {
        let f = fp();
        ChowPoint::new([
            LinearForm::variable(f, n, 0),
            LinearForm::variable(f, n, 1),
            LinearForm::variable(f, n, 2),
        ])
        .unwrap()
    }

    #[test]
    fn monomial_point_tangent_rank() {
        let space = ChowSpace::new(2, fp()).unwrap();
        let t = space.terracini_matrix(&[monomial_point(2)]).unwrap();
        assert_eq!((t.rows(), t.cols()), (9, 10));
        assert_eq!(t.rank(), 7);
        assert_eq!(
            space.tangent_basis(&monomial_point(2)).unwrap().to_matrix(),
            t
        );
    }

    #[test]
    fn veronese_point_is_degenerate() {
        let f = fp();
        let x0 = LinearForm::variable(f, 2, 0);
        let p = ChowPoint::new([x0.clone(), x0.clone(), x0]).unwrap();
        let space = ChowSpace::new(2, f).unwrap();
        assert_eq!(space.terracini_matrix(&[p]).unwrap().rank(), 3);
    }

    #[test]
    fn tangent_vectors_match_definition() {
        let f = fp();
        let space = ChowSpace::new(3, f).unwrap();
        let mut rng = SeededRng::new(3);
        let (p, _) = space.sample_point(&mut rng);
        let tb = space.tangent_basis(&p).unwrap();
        for k in 0..3 {
            for i in 0..4 {
                let mut forms: Vec<LinearForm> = p.forms().to_vec();
                forms[k] = LinearForm::variable(f, 3, i);
                assert_eq!(tb.vector(k, i), &expand_product(&forms).unwrap());
            }
        }
        assert_eq!(
            space.point_polynomial(&p).unwrap(),
            expand_product(p.forms()).unwrap()
        );
    }

    #[test]
    fn sampling_is_reproducible() {
        let space = ChowSpace::new(4, fp()).unwrap();
        let a = space.sample_point(&mut SeededRng::new(11)).0;
        let b = space.sample_point(&mut SeededRng::new(11)).0;
        assert_eq!(a, b);
        assert!(a
            .forms()
            .iter()
            .all(|l| l.values().iter().all(|&v| v < 20201)));
    }

    #[test]
    fn zero_forms_rejected() {
        let f = fp();
        let z = LinearForm::from_values(f, &[0, 0, 0]).unwrap();
        let x = LinearForm::variable(f, 2, 0);
        assert!(ChowPoint::new([z, x.clone(), x]).is_err());
    }

    #[test]
    fn expected_ranks() {
        assert_eq!(expected_hessian_rank(5), 15);
        assert_eq!(expected_hessian_rank(2), 6);
        assert_eq!(expected_hessian_rank(102), 306);
        assert_eq!(expected_tangent_rank(5, 3), 48);
    }

    #[test]
    fn hessian_structure_at_random_point() {
        let f = fp();
        let n = 4;
        let space = ChowSpace::new(n, f).unwrap();
        let mut rng = SeededRng::new(17);
        let pts: Vec<_> = (0..2).map(|_| space.sample_point(&mut rng).0).collect();
        let t = space.terracini_matrix(&pts).unwrap();
        let rref = t.rref();
        assert_eq!(rref.rank(), 26);
        let f0 = rng.sample_vec(f, rref.nullity());
        let eta = Poly::from_coeffs(space.cubic_basis(), &rref.null_vector(&f0).unwrap()).unwrap();
        let h = space.hessian_at(&pts[0], &eta).unwrap();
        assert!(h.is_symmetric());
        assert!(h.diagonal_blocks_zero());
        assert_eq!(h.rank(), expected_hessian_rank(n));
    }
}
