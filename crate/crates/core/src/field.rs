//! Arithmetic in the prime field `Z/mZ`.
//!
//! Every other module computes over a single [`PrimeModulus`]. Values are
//! kept as canonical representatives in `[0, m)`; products are formed in
//! 64-bit integers, so any prime below `2^32` is supported.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A prime modulus `m >= 3` that fits in 32 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    /// Validates `m` by trial division, which is deterministic and cheap for
    /// 32-bit inputs.
    pub fn new(m: u64) -> Result<Self> {
        if m < 3 {
            return Err(Error::ModulusTooSmall(m));
        }
        if m > u64::from(u32::MAX) {
            return Err(Error::ModulusTooLarge(m));
        }
        if !is_prime(m) {
            return Err(Error::NotPrime(m));
        }
        Ok(Self(m as u32))
    }

    #[inline]
    pub fn value(self) -> u64 {
        u64::from(self.0)
    }

    #[inline]
    pub fn as_u32(self) -> u32 {
        self.0
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: (value % self.value()) as u32,
            modulus: self,
        }
    }

    /// Maps a signed integer to its canonical representative.
    pub fn from_i64(self, value: i64) -> FieldElement {
        let m = self.value() as i64;
        self.element(value.rem_euclid(m) as u64)
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    // Raw helpers used by the matrix kernels, which store bare `u32` values.

    #[inline]
    pub(crate) fn add_raw(self, a: u32, b: u32) -> u32 {
        let s = u64::from(a) + u64::from(b);
        let m = self.value();
        (if s >= m { s - m } else { s }) as u32
    }

    #[inline]
    pub(crate) fn sub_raw(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (u64::from(a) + self.value() - u64::from(b)) as u32
        }
    }

    #[inline]
    pub(crate) fn mul_raw(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % self.value()) as u32
    }

    #[inline]
    pub(crate) fn neg_raw(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub(crate) fn inv_raw(self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid on (a, m).
        let m = i64::from(self.0);
        let (mut old_r, mut r) = (i64::from(a), m);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(old_s.rem_euclid(m) as u32)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut p = 3u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

/// An element of `Z/mZ`, stored as its canonical representative.
///
/// Mixing elements of different moduli is a programming error and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        u64::from(self.value)
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(self) -> Result<Self> {
        Ok(Self {
            value: self.modulus.inv_raw(self.value)?,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = self.modulus.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn check(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements from different moduli"
        );
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: self.modulus.add_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: self.modulus.sub_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        Self {
            value: self.modulus.mul_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            value: self.modulus.neg_raw(self.value),
            modulus: self.modulus,
        }
    }
}

/// Deterministic, seedable generator (ChaCha8). The seed is recorded in
/// certificates for replay by this implementation only; certificates carry
/// every sampled value explicitly.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw from `Z/mZ` by rejection: values at or above the largest
    /// multiple of `m` below `2^64` are discarded, so there is no modulo bias.
    pub fn sample_uniform(&mut self, modulus: PrimeModulus) -> FieldElement {
        let m = modulus.value();
        let zone = u64::MAX - (u64::MAX % m) - 1;
        loop {
            let x = self.inner.next_u64();
            if x <= zone {
                return modulus.element(x % m);
            }
        }
    }

    pub fn sample_vec(&mut self, modulus: PrimeModulus, len: usize) -> Vec<FieldElement> {
        (0..len).map(|_| self.sample_uniform(modulus)).collect()
    }
}

/// Derives an independent child seed, e.g. for retries or per-case sweeps.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined input
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
