//! Exact character sums.
//!
//! Counts are exact integers; the complex value is derived only at the
//! boundary with a fixed summation order, so equality-style assertions can
//! run on integers.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::budget::{pow_points, Budget};
use crate::error::Result;

use super::field::FieldVector;
use super::poly::Poly;

/// Residue-count vector for E psi(P): counts[a] inputs mapping to residue a.
/// The modulus is p for polynomial values, p^k for torsion value tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSum {
    pub modulus: u32,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl CharacterSum {
    pub fn new(modulus: u32) -> Self {
        CharacterSum {
            modulus,
            counts: vec![0; modulus as usize],
            total: 0,
        }
    }

    pub fn record(&mut self, residue: u32) {
        self.counts[(residue % self.modulus) as usize] += 1;
        self.total += 1;
    }

    /// Merge partial counts; the reduction is commutative and associative, so
    /// results are independent of worker count.
    pub fn merge(mut self, other: &CharacterSum) -> CharacterSum {
        debug_assert_eq!(self.modulus, other.modulus);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self
    }

    /// Sum_a counts[a] * exp(2 pi i a / modulus) / total, summed in index order.
    pub fn value(&self) -> Complex64 {
        if self.total == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, &c) in self.counts.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * a as f64 / self.modulus as f64;
            acc += Complex64::new(angle.cos(), angle.sin()) * c as f64;
        }
        acc / self.total as f64
    }

    pub fn real_value(&self) -> f64 {
        self.value().re
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.value().im.abs() <= tol
    }

    /// For modulus 2 the value is exactly (counts[0] - counts[1]) / total;
    /// returned as an exact integer pair.
    pub fn rational_value_mod2(&self) -> Option<(i64, u64)> {
        if self.modulus == 2 {
            Some((self.counts[0] as i64 - self.counts[1] as i64, self.total))
        } else {
            None
        }
    }
}

impl Poly {
    /// Exact residue counts of P over all of F_p^nvars.
    pub fn bias(&self, budget: &Budget) -> Result<CharacterSum> {
        let p = self.p();
        let n = self.nvars();
        budget.check(pow_points(p.get(), n))?;
        let total = (p.get() as usize).pow(n as u32);
        // partition the domain; merge integer count vectors by addition
        let chunk = 1 << 14;
        let sum = (0..total)
            .into_par_iter()
            .chunks(chunk)
            .map(|idxs| {
                let mut cs = CharacterSum::new(p.get());
                for i in idxs {
                    let x = FieldVector::from_index(p, n, i);
                    cs.record(self.eval(&x).expect("matching domain"));
                }
                cs
            })
            .reduce(|| CharacterSum::new(p.get()), |a, b| a.merge(&b));
        debug_assert_eq!(sum.total, total as u64);
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::text::parse_poly;

    #[test]
    fn zero_poly_has_bias_one() {
        let poly = parse_poly("p=5 n=2 d=0\n0").unwrap();
        let cs = poly.bias(&Budget::default()).unwrap();
        assert_eq!(cs.counts[0], 25);
        assert!((cs.real_value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_poly_has_bias_zero() {
        for p in [2u32, 3, 5, 7] {
            let poly = parse_poly(&format!("p={p} n=1 d=1\nx0")).unwrap();
            let cs = poly.bias(&Budget::default()).unwrap();
            // uniform counts
            assert!(cs.counts.iter().all(|&c| c == 1));
            assert!(cs.value().norm() < 1e-12);
        }
    }

    #[test]
    fn product_over_f2() {
        // x0*x1 over F_2: counts (3,1), bias 1/2
        let poly = parse_poly("p=2 n=2 d=2\nx0*x1").unwrap();
        let cs = poly.bias(&Budget::default()).unwrap();
        assert_eq!(cs.counts, vec![3, 1]);
        assert_eq!(cs.rational_value_mod2(), Some((2, 4)));
        assert!((cs.real_value() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let poly = parse_poly("p=5 n=4 d=1\nx0").unwrap();
        let err = poly.bias(&Budget::new(100)).unwrap_err();
        match err {
            crate::error::Error::BudgetExceeded { required, budget } => {
                assert_eq!(required, 625);
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
