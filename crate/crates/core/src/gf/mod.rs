//! Exact arithmetic in finite fields F_{p^m}.
//!
//! A field is F_p[X]/(f) for the lexicographically smallest monic irreducible
//! f of degree m, so two fields built from the same (p, m) compare equal and
//! their elements interoperate. Elements of different fields never mix: the
//! operator impls panic on a mismatch, and every public entry point that
//! accepts elements from a caller checks membership first and reports
//! [`Error::FieldMismatch`].

mod matrix;
mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

pub use matrix::{matrix_rank, Matrix};
pub(crate) use poly::inv_mod;

/// Deterministic primality test by trial division; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct FieldInner {
    p: u32,
    m: usize,
    /// Monic modulus, lowest degree first, length m + 1.
    modulus: Vec<u32>,
}

/// The field F_{p^m}. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteField(Arc<FieldInner>);

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

/// Builds F_{p^m} with the lexicographically first monic irreducible modulus.
pub fn make_field(p: u64, m: usize) -> Result<FiniteField> {
    FiniteField::new(p, m)
}

impl FiniteField {
    pub fn new(p: u64, m: usize) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        let count = (p as u128).pow(m as u32);
        for idx in 0..count {
            let mut f: Vec<u64> = (0..m).map(|i| ((idx / (p as u128).pow(i as u32)) % p as u128) as u64).collect();
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return Ok(Self(Arc::new(FieldInner {
                    p: p as u32,
                    m,
                    modulus: f.into_iter().map(|c| c as u32).collect(),
                })));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// Uses a caller-supplied monic modulus (lowest degree first, leading 1
    /// included), rejecting it unless it is irreducible.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::InvalidInput("modulus must be monic of degree >= 1".into()));
        }
        let f: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !poly::is_irreducible(&f, p) {
            return Err(Error::InvalidInput(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Self(Arc::new(FieldInner {
            p: p as u32,
            m: modulus.len() - 1,
            modulus: f.into_iter().map(|c| c as u32).collect(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn order(&self) -> u64 {
        self.p().pow(self.m() as u32)
    }

    /// Modulus coefficients, lowest degree first, including the leading 1.
    pub fn modulus(&self) -> Vec<u64> {
        self.0.modulus.iter().map(|&c| c as u64).collect()
    }

    pub fn zero(&self) -> FFElem {
        FFElem { field: self.clone(), coeffs: vec![0; self.m()] }
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    /// Image of an integer under Z -> F_p -> F_{p^m}.
    pub fn from_int(&self, n: i64) -> FFElem {
        let p = self.p() as i64;
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(p) as u32;
        e
    }

    /// The class of X in F_p[X]/(f).
    pub fn generator(&self) -> FFElem {
        if self.m() == 1 {
            // X = -f_0 in F_p[X]/(X + f_0)
            return self.from_int(-(self.0.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() > self.m() {
            return Err(Error::InvalidInput(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.m()
            )));
        }
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = (c % self.p()) as u32;
        }
        Ok(e)
    }

    /// Element whose base-p digits (least significant first) are its
    /// coefficients in the power basis 1, X, X^2, ...
    pub fn from_index(&self, idx: u64) -> Result<FFElem> {
        if idx >= self.order() {
            return Err(Error::InvalidInput(format!("index {idx} outside a field of order {}", self.order())));
        }
        let p = self.p();
        let coeffs: Vec<u64> = (0..self.m()).map(|i| idx / p.pow(i as u32) % p).collect();
        self.from_coeffs(&coeffs)
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i).expect("index in range"))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        let p = self.p() as u32;
        FFElem { field: self.clone(), coeffs: (0..self.m()).map(|_| rng.random_range(0..p)).collect() }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FFElem {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn contains(&self, e: &FFElem) -> bool {
        &e.field == self
    }

    pub fn check(&self, e: &FFElem) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("element of {:?} used in {:?}", e.field, self)))
        }
    }
}

/// An element of a [`FiniteField`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    field: FiniteField,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}w^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl FFElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }

    /// Inverse of [`FiniteField::from_index`].
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// The prime-field value, if the element lies in F_p.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| self.coeffs[0] as u64)
    }

    fn same_field(&self, other: &FFElem) {
        assert!(
            self.field == other.field,
            "mixed-field arithmetic: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn pow(&self, mut exp: u64) -> FFElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Signed power; `None` for a negative power of zero.
    pub fn powi(&self, exp: i64) -> Option<FFElem> {
        if exp >= 0 {
            Some(self.pow(exp as u64))
        } else {
            self.inv().map(|i| i.pow(exp.unsigned_abs()))
        }
    }

    pub fn inv(&self) -> Option<FFElem> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.field.order() - 2))
        }
    }

    /// The unique b with b^p = self, namely self^(p^(m-1)).
    pub fn pth_root(&self) -> FFElem {
        let mut b = self.clone();
        for _ in 1..self.field.m() {
            b = b.frobenius();
        }
        b
    }

    pub fn frobenius(&self) -> FFElem {
        self.pow(self.field.p())
    }

    /// Trace to the prime field.
    pub fn trace(&self) -> u64 {
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..self.field.m() {
            cur = cur.frobenius();
            acc += &cur;
        }
        acc.as_prime_field().expect("trace lies in the prime field")
    }

    fn add_ref(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| (a + b) % p).collect();
        FFElem { field: self.field.clone(), coeffs }
    }

    fn sub_ref(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| (a + p - b) % p).collect();
        FFElem { field: self.field.clone(), coeffs }
    }

    fn mul_ref(&self, rhs: &FFElem) -> FFElem {
        self.same_field(rhs);
        let p = self.field.0.p as u64;
        let m = self.field.m();
        if m == 1 {
            let c = self.coeffs[0] as u64 * rhs.coeffs[0] as u64 % p;
            return FFElem { field: self.field.clone(), coeffs: vec![c as u32] };
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        let modulus = &self.field.0.modulus;
        for d in (m..prod.len()).rev() {
            let q = prod[d];
            if q == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..m {
                let sub = q * modulus[k] as u64 % p;
                prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
            }
        }
        FFElem { field: self.field.clone(), coeffs: prod[..m].iter().map(|&c| c as u32).collect() }
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        self.field.zero().sub_ref(self)
    }
}

impl Neg for FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        -&self
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $inner:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<&FFElem> for &FFElem {
            type Output = FFElem;
            fn $method(self, rhs: &FFElem) -> FFElem {
                self.$inner(rhs)
            }
        }
        impl $trait<FFElem> for FFElem {
            type Output = FFElem;
            fn $method(self, rhs: FFElem) -> FFElem {
                self.$inner(&rhs)
            }
        }
        impl $trait<&FFElem> for FFElem {
            type Output = FFElem;
            fn $method(self, rhs: &FFElem) -> FFElem {
                self.$inner(rhs)
            }
        }
        impl $trait<FFElem> for &FFElem {
            type Output = FFElem;
            fn $method(self, rhs: FFElem) -> FFElem {
                self.$inner(&rhs)
            }
        }
        impl $assign_trait<&FFElem> for FFElem {
            fn $assign(&mut self, rhs: &FFElem) {
                *self = self.$inner(rhs);
            }
        }
        impl $assign_trait<FFElem> for FFElem {
            fn $assign(&mut self, rhs: FFElem) {
                *self = self.$inner(&rhs);
            }
        }
    };
}

binop!(Add, add, add_ref, AddAssign, add_assign);
binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
