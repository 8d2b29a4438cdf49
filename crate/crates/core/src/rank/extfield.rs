//! Small extension fields F_{p^m}, m <= 3, for the rank module's
//! decomposition and subspace searches. Elements are coefficient vectors of
//! length m modulo a monic irreducible polynomial found by brute force.

use crate::error::{Error, Result};
use crate::ffpoly::PrimeModulus;

pub type ExtElem = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    p: PrimeModulus,
    m: usize,
    /// Monic modulus, coefficients low to high, length m + 1.
    modulus: Vec<u32>,
}

impl ExtField {
    pub fn new(p: PrimeModulus, m: usize) -> Result<Self> {
        if m == 0 || m > 3 {
            return Err(Error::Unsupported(format!(
                "extension degree {m} (supported: 1..=3)"
            )));
        }
        let modulus = find_irreducible(p, m);
        Ok(ExtField { p, m, modulus })
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Field size p^m.
    pub fn order(&self) -> usize {
        (self.p.get() as usize).pow(self.m as u32)
    }

    pub fn zero(&self) -> ExtElem {
        vec![0; self.m]
    }

    pub fn one(&self) -> ExtElem {
        self.embed(1)
    }

    pub fn embed(&self, c: u32) -> ExtElem {
        let mut e = vec![0; self.m];
        e[0] = c % self.p.get();
        e
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.p.add(x, y))
            .collect()
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.p.sub(x, y))
            .collect()
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        a.iter().map(|&x| self.p.neg(x)).collect()
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let mut prod = vec![0u32; 2 * self.m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.p.add(prod[i + j], self.p.mul(x, y));
            }
        }
        // reduce modulo the monic modulus
        for i in (self.m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..self.m {
                let sub = self.p.mul(c, self.modulus[j]);
                prod[i - self.m + j] = self.p.sub(prod[i - self.m + j], sub);
            }
        }
        prod.truncate(self.m);
        prod
    }

    pub fn inv(&self, a: &ExtElem) -> ExtElem {
        debug_assert!(!self.is_zero(a));
        // the field is tiny; exhaustive search is fine
        for idx in 1..self.order() {
            let b = self.elem_from_index(idx);
            if self.mul(a, &b) == self.one() {
                return b;
            }
        }
        unreachable!("every nonzero element is invertible")
    }

    /// Enumerate field elements by index (base-p digits, low coefficient
    /// least significant). Index 0 is zero.
    pub fn elem_from_index(&self, mut idx: usize) -> ExtElem {
        let base = self.p.get() as usize;
        let mut e = vec![0u32; self.m];
        for c in e.iter_mut() {
            *c = (idx % base) as u32;
            idx /= base;
        }
        e
    }

    pub fn elem_index(&self, a: &ExtElem) -> usize {
        let base = self.p.get() as usize;
        a.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * base + c as usize)
    }
}

fn find_irreducible(p: PrimeModulus, m: usize) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1]; // x
    }
    let pv = p.get();
    let total = pv.pow(m as u32) as usize;
    for idx in 0..total {
        let mut coeffs = vec![0u32; m + 1];
        let mut rest = idx;
        for c in coeffs.iter_mut().take(m) {
            *c = (rest % pv as usize) as u32;
            rest /= pv as usize;
        }
        coeffs[m] = 1;
        // degree 2 or 3: irreducible iff no roots in F_p
        let has_root = (0..pv).any(|x| {
            let mut acc = 0u32;
            for &c in coeffs.iter().rev() {
                acc = p.add(p.mul(acc, x), c);
            }
            acc == 0
        });
        if !has_root {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist over every finite field")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_arithmetic() {
        let p = PrimeModulus::new(3).unwrap();
        let f9 = ExtField::new(p, 2).unwrap();
        assert_eq!(f9.order(), 9);
        // every nonzero element has order dividing 8
        for idx in 1..9 {
            let a = f9.elem_from_index(idx);
            let mut acc = f9.one();
            for _ in 0..8 {
                acc = f9.mul(&acc, &a);
            }
            assert_eq!(acc, f9.one());
        }
    }

    #[test]
    fn inverses() {
        let p = PrimeModulus::new(2).unwrap();
        let f4 = ExtField::new(p, 2).unwrap();
        for idx in 1..4 {
            let a = f4.elem_from_index(idx);
            assert_eq!(f4.mul(&a, &f4.inv(&a)), f4.one());
        }
    }

    #[test]
    fn minus_one_is_a_square_in_quadratic_extension() {
        // needed so sums of squares factor over F_{p^2}
        for pv in [3u32, 5, 7] {
            let p = PrimeModulus::new(pv).unwrap();
            let ext = ExtField::new(p, 2).unwrap();
            let minus_one = ext.embed(p.neg(1));
            let found = (0..ext.order())
                .any(|i| {
                    let a = ext.elem_from_index(i);
                    ext.mul(&a, &a) == minus_one
                });
            assert!(found, "p = {pv}");
        }
    }

    #[test]
    fn degree_one_is_the_prime_field() {
        let p = PrimeModulus::new(5).unwrap();
        let f5 = ExtField::new(p, 1).unwrap();
        assert_eq!(f5.mul(&vec![3], &vec![4]), vec![2]);
    }
}
