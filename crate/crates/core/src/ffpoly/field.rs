//! The prime field F_p (2 <= p <= 31) and points of F_p^n.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeModulus {
    p: u32,
}

impl PrimeModulus {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=31).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus { p })
    }

    #[inline]
    pub fn get(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero mod p.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a % self.p != 0);
        self.pow(a, (self.p - 2) as u64)
    }

    /// n! mod p for any n (zero once n >= p).
    pub fn factorial_mod(&self, n: usize) -> u32 {
        if n as u32 >= self.p {
            return 0;
        }
        let mut acc = 1u32;
        for i in 2..=n as u32 {
            acc = self.mul(acc, i);
        }
        acc
    }

    /// n! mod p, defined only for n < p.
    pub fn factorial(&self, n: usize) -> Result<u32> {
        if n as u32 >= self.p {
            return Err(Error::DegreeVsCharacteristic {
                d: n,
                p: self.p,
            });
        }
        let mut acc = 1u32;
        for i in 2..=n as u32 {
            acc = self.mul(acc, i);
        }
        Ok(acc)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A point of F_p^n, coordinates stored as residues in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldVector {
    pub p: PrimeModulus,
    pub coords: Vec<u32>,
}

impl FieldVector {
    pub fn new(p: PrimeModulus, coords: Vec<u32>) -> Self {
        let coords = coords.into_iter().map(|c| c % p.get()).collect();
        FieldVector { p, coords }
    }

    pub fn zero(p: PrimeModulus, n: usize) -> Self {
        FieldVector {
            p,
            coords: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        check_compat(self, other)?;
        Ok(FieldVector {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| self.p.add(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> FieldVector {
        FieldVector {
            p: self.p,
            coords: self.coords.iter().map(|&a| self.p.mul(a, c % self.p.get())).collect(),
        }
    }

    /// Lexicographic index of this point within F_p^n (first coordinate most
    /// significant). Inverse of `from_index`.
    pub fn index(&self) -> usize {
        let p = self.p.get() as usize;
        self.coords.iter().fold(0, |acc, &c| acc * p + c as usize)
    }

    pub fn from_index(p: PrimeModulus, n: usize, mut idx: usize) -> Self {
        let base = p.get() as usize;
        let mut coords = vec![0u32; n];
        for i in (0..n).rev() {
            coords[i] = (idx % base) as u32;
            idx /= base;
        }
        FieldVector { p, coords }
    }
}

pub(crate) fn check_compat(a: &FieldVector, b: &FieldVector) -> Result<()> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.get(), b.p.get()));
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// Iterate all points of F_p^n in lexicographic order.
pub fn points(p: PrimeModulus, n: usize) -> impl Iterator<Item = FieldVector> {
    let total = (p.get() as usize).checked_pow(n as u32).expect("domain too large");
    (0..total).map(move |i| FieldVector::from_index(p, n, i))
}

/// Number of points of F_p^n.
pub fn point_count(p: PrimeModulus, n: usize) -> u128 {
    (p.get() as u128).pow(n as u32)
}
