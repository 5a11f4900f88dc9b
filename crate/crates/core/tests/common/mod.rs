//! Property checks shared by the property suite and the acceptance target.
//! Each returns `Err` with the shrunk counterexample on failure.

#![allow(dead_code)]

use chowcert::certify::{certify, CertifyOptions};
use chowcert::chow::{expected_hessian_rank, ChowSpace};
use chowcert::poly::expand_product;
use chowcert::ranks::RankTableRow;
use chowcert::{Elimination, FfMatrix, LinearForm, MulStrategy, Poly, PrimeModulus, SeededRng};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const FIELD_PRIMES: [u64; 4] = [7, 8191, 20201, 202001];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn random_matrix(f: PrimeModulus, rows: usize, cols: usize, rng: &mut SeededRng) -> FfMatrix {
    FfMatrix::from_fn(f, rows, cols, |_, _| rng.sample_uniform(f).value())
}

/// `rows x cols` of rank at most `k`, as a product of random factors.
fn low_rank(f: PrimeModulus, rows: usize, cols: usize, k: usize, rng: &mut SeededRng) -> FfMatrix {
    let b = random_matrix(f, rows, k, rng);
    let c = random_matrix(f, k, cols, rng);
    b.mul_with(&c, MulStrategy::Naive).expect("shapes agree")
}

/// Ring and field axioms on random triples, with `u128` arithmetic as the
/// oracle for sums and products.
pub fn field_axioms(p: u64, cases: u32) -> Result<(), String> {
    let f = PrimeModulus::new(p).map_err(|e| e.to_string())?;
    runner(cases)
        .run(&(0..p, 0..p, 0..p), |(a, b, c)| {
            let (x, y, z) = (f.element(a), f.element(b), f.element(c));
            let wide = |v: u128| (v % u128::from(p)) as u64;
            prop_assert_eq!((x + y).value(), wide(u128::from(a) + u128::from(b)));
            prop_assert_eq!((x * y).value(), wide(u128::from(a) * u128::from(b)));
            prop_assert_eq!(
                (x - y).value(),
                wide(u128::from(a) + u128::from(p) - u128::from(b))
            );
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!((x * y) * z, x * (y * z));
            prop_assert_eq!(x * (y + z), x * y + x * z);
            prop_assert_eq!(x + f.zero(), x);
            prop_assert_eq!(x * f.one(), x);
            prop_assert!((x + -x).is_zero());
            if x.is_zero() {
                prop_assert!(x.inv().is_err());
            } else {
                let inv = x.inv().map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(x * inv, f.one());
                prop_assert_eq!(inv, x.pow(p - 2));
            }
            Ok(())
        })
        .map_err(|e| format!("field axioms mod {p}: {e}"))
}

/// Elimination on random low-rank matrices up to 100 x 150: the echelon
/// form is a fixed point, both strategies agree, and kernel vectors built
/// from random free coordinates are annihilated.
pub fn rref_properties(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..=100,
        1usize..=150,
        0usize..=100,
        any::<u64>(),
        0usize..4,
    );
    runner(cases)
        .run(&strategy, |(rows, cols, k, seed, prime)| {
            let f = PrimeModulus::new(FIELD_PRIMES[prime]).unwrap();
            let mut rng = SeededRng::new(seed);
            let a = low_rank(f, rows, cols, k.min(rows).min(cols), &mut rng);
            let naive = a.rref_with(Elimination::Naive);
            let blocked = a.rref_with(Elimination::Blocked {
                block: 1 + (seed % 40) as usize,
            });
            prop_assert_eq!(naive.echelon(), blocked.echelon());
            prop_assert_eq!(naive.pivot_cols(), blocked.pivot_cols());
            prop_assert!(naive.rank() <= k.min(rows).min(cols));

            let again = naive.echelon().rref_with(Elimination::Naive);
            prop_assert_eq!(again.echelon(), naive.echelon());
            for (r, &c) in naive.pivot_cols().iter().enumerate() {
                prop_assert_eq!(naive.echelon().value(r, c), 1);
            }
            prop_assert!((naive.rank()..rows).all(|r| naive
                .echelon()
                .row(r)
                .iter()
                .all(|&x| x == 0)));

            if naive.nullity() > 0 {
                let f0 = rng.sample_vec(f, naive.nullity());
                let eta = naive
                    .null_vector(&f0)
                    .map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert!(a.mul_vec(&eta).unwrap().iter().all(|x| x.is_zero()));
                for (t, &c) in naive.free_cols().iter().enumerate() {
                    prop_assert_eq!(eta[c], f0[t]);
                }
            } else {
                prop_assert!(naive.null_vector(&[]).is_err());
            }
            Ok(())
        })
        .map_err(|e| format!("rref: {e}"))
}

/// Blocked and Strassen products equal the triple loop; blocked and naive
/// elimination give equal ranks. Shapes up to 256 x 256.
pub fn multiplication_properties(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..=128,
        1usize..=128,
        1usize..=128,
        any::<u64>(),
        0usize..4,
        any::<bool>(),
    );
    runner(cases)
        .run(&strategy, |(n, k, p, seed, prime, double)| {
            let f = PrimeModulus::new(FIELD_PRIMES[prime]).unwrap();
            // doubling keeps even shapes, which is where Strassen splits
            let s = if double { 2 } else { 1 };
            let (n, k, p) = (n * s, k * s, p * s);
            let mut rng = SeededRng::new(seed);
            let a = random_matrix(f, n, k, &mut rng);
            let b = random_matrix(f, k, p, &mut rng);
            let naive = a.mul_with(&b, MulStrategy::Naive).unwrap();
            prop_assert_eq!(&a.mul_with(&b, MulStrategy::Blocked).unwrap(), &naive);
            prop_assert_eq!(&a.mul_with(&b, MulStrategy::Strassen).unwrap(), &naive);
            prop_assert_eq!(&a.mul_with(&b, MulStrategy::Auto).unwrap(), &naive);
            let low = low_rank(f, n, p, k.min(n).min(p) / 2, &mut rng);
            prop_assert_eq!(
                low.rank_with(Elimination::Naive),
                low.rank_with(Elimination::default())
            );
            Ok(())
        })
        .map_err(|e| format!("multiplication: {e}"))
}

fn random_form(f: PrimeModulus, n: usize, rng: &mut SeededRng) -> LinearForm {
    LinearForm::new(&rng.sample_vec(f, n + 1)).unwrap()
}

/// `expand_product` of three linear forms is symmetric and trilinear.
pub fn expand_properties(cases: u32) -> Result<(), String> {
    let strategy = (1usize..=8, any::<u64>(), 0usize..4, 0usize..3);
    runner(cases)
        .run(&strategy, |(n, seed, prime, slot)| {
            let f = PrimeModulus::new(FIELD_PRIMES[prime]).unwrap();
            let mut rng = SeededRng::new(seed);
            let l: Vec<LinearForm> = (0..3).map(|_| random_form(f, n, &mut rng)).collect();
            let u = random_form(f, n, &mut rng);
            let c = rng.sample_uniform(f);
            let e = |forms: &[LinearForm]| expand_product(forms).unwrap();
            let base = e(&l);
            for perm in [[1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
                let permuted: Vec<_> = perm.iter().map(|&i| l[i].clone()).collect();
                prop_assert_eq!(&e(&permuted), &base);
            }
            let with = |form: LinearForm| {
                let mut v = l.clone();
                v[slot] = form;
                e(&v)
            };
            let sum = with(l[slot].add(&u));
            prop_assert_eq!(sum, base.add(&with(u.clone())).unwrap());
            prop_assert_eq!(with(l[slot].scale(c)), base.scale(c));

            // coefficient of x_0^3 is the product of the x_0 coordinates
            let mut cube = vec![0; n + 1];
            cube[0] = 3;
            let lead = l[0].coord(0) * l[1].coord(0) * l[2].coord(0);
            prop_assert_eq!(base.coeff_of(&cube).unwrap(), lead);
            Ok(())
        })
        .map_err(|e| format!("expand_product: {e}"))
}

/// On certified random instances, every Hessian is symmetric with zero
/// diagonal blocks and kills the scaling fiber `(L0, -L1, 0)`,
/// `(L0, 0, -L2)`; at the first point it has rank `3n`.
pub fn hessian_properties(cases: u32) -> Result<(), String> {
    let strategy = (2usize..=7, any::<u64>(), 1usize..=8);
    runner(cases)
        .run(&strategy, |(n, seed, r)| {
            let r = r.min(RankTableRow::new(n).certification_rank());
            let mut opts = CertifyOptions::new(n);
            opts.r = Some(r);
            opts.seed = seed;
            let cert = certify(&opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(cert.verdict);
            let f = cert.modulus;
            let space = ChowSpace::new(n, f).unwrap();
            let rref = space.terracini_matrix(&cert.points).unwrap().rref();
            let eta = Poly::from_coeffs(space.cubic_basis(), &rref.null_vector(&cert.f0).unwrap())
                .unwrap();
            for (j, p) in cert.points.iter().enumerate() {
                let h = space.hessian_at(p, &eta).unwrap();
                prop_assert!(h.is_symmetric());
                prop_assert!(h.diagonal_blocks_zero());
                let [l0, l1, l2] = p.forms();
                let zero = vec![f.zero(); n + 1];
                let neg = |l: &LinearForm| (0..=n).map(|i| -l.coord(i)).collect::<Vec<_>>();
                let own = |l: &LinearForm| (0..=n).map(|i| l.coord(i)).collect::<Vec<_>>();
                for v in [
                    [own(l0), neg(l1), zero.clone()].concat(),
                    [own(l0), zero.clone(), neg(l2)].concat(),
                ] {
                    prop_assert!(h.matrix().mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
                }
                if j == 0 {
                    prop_assert_eq!(h.rank(), expected_hessian_rank(n));
                }
            }
            Ok(())
        })
        .map_err(|e| format!("hessian: {e}"))
}
