//! Multilinear forms in d blocks of variables, and the multilinearization
//! P~(x_1,...,x_d) = Delta_{x_d}...Delta_{x_1}P with P = P~(x,...,x)/d!.

use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::error::{Error, Result};

use super::bias::CharacterSum;
use super::field::{FieldVector, PrimeModulus};
use super::poly::{Monomial, Poly};

/// A form of degree exactly 1 in each of `blocks` blocks of `block_vars`
/// variables. Coefficients are keyed by the tuple (j_1, ..., j_d) picking one
/// variable index per block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultilinearForm {
    p: PrimeModulus,
    blocks: usize,
    block_vars: usize,
    coeffs: BTreeMap<Vec<u16>, u32>,
}

impl MultilinearForm {
    pub fn zero(p: PrimeModulus, blocks: usize, block_vars: usize) -> Self {
        MultilinearForm {
            p,
            blocks,
            block_vars,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs<I>(p: PrimeModulus, blocks: usize, block_vars: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u16>, u32)>,
    {
        let mut form = Self::zero(p, blocks, block_vars);
        for (t, c) in coeffs {
            form.add_coeff(t, c);
        }
        form
    }

    pub fn add_coeff(&mut self, tuple: Vec<u16>, c: u32) {
        debug_assert_eq!(tuple.len(), self.blocks);
        debug_assert!(tuple.iter().all(|&j| (j as usize) < self.block_vars));
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(tuple.clone()).or_insert(0);
        *entry = self.p.add(*entry, c);
        if *entry == 0 {
            self.coeffs.remove(&tuple);
        }
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_vars(&self) -> usize {
        self.block_vars
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<u16>, u32)> {
        self.coeffs.iter().map(|(t, &c)| (t, c))
    }

    pub fn coefficient(&self, tuple: &[u16]) -> u32 {
        self.coeffs.get(tuple).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &MultilinearForm) -> Result<MultilinearForm> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.blocks != other.blocks || self.block_vars != other.block_vars {
            return Err(Error::DimensionMismatch {
                expected: self.blocks * self.block_vars,
                got: other.blocks * other.block_vars,
            });
        }
        let mut out = self.clone();
        for (t, &c) in &other.coeffs {
            out.add_coeff(t.clone(), c);
        }
        Ok(out)
    }

    pub fn eval(&self, xs: &[FieldVector]) -> Result<u32> {
        if xs.len() != self.blocks {
            return Err(Error::DimensionMismatch {
                expected: self.blocks,
                got: xs.len(),
            });
        }
        for x in xs {
            if x.p != self.p {
                return Err(Error::ModulusMismatch(self.p.get(), x.p.get()));
            }
            if x.len() != self.block_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.block_vars,
                    got: x.len(),
                });
            }
        }
        let mut acc = 0u32;
        for (t, &c) in &self.coeffs {
            let mut v = c;
            for (b, &j) in t.iter().enumerate() {
                v = self.p.mul(v, xs[b].coords[j as usize]);
            }
            acc = self.p.add(acc, v);
        }
        Ok(acc)
    }

    /// Invariance of the coefficient table under all block permutations.
    pub fn is_symmetric(&self) -> bool {
        for (t, &c) in &self.coeffs {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            for perm in distinct_permutations(&sorted) {
                if self.coefficient(&perm) != c {
                    return false;
                }
            }
        }
        true
    }

    /// Flatten onto a single space of blocks * block_vars variables, block b
    /// variable j mapping to x_{b * block_vars + j}.
    pub fn as_poly(&self) -> Poly {
        let nvars = self.blocks * self.block_vars;
        let mut poly = Poly::zero(self.p, nvars);
        for (t, &c) in &self.coeffs {
            let mut exps = vec![0u16; nvars];
            for (b, &j) in t.iter().enumerate() {
                exps[b * self.block_vars + j as usize] += 1;
            }
            poly.add_term(Monomial::new(exps), c);
        }
        poly
    }

    /// Bias over the full product domain (F_p^block_vars)^blocks.
    pub fn bias(&self, budget: &Budget) -> Result<CharacterSum> {
        self.as_poly().bias(budget)
    }
}

/// Symmetric multilinear form P~ of a homogeneous P of degree d, computed at
/// base point 0: the coefficient at the ordered tuple (j_1,...,j_d) with
/// multiset equal to the monomial's exponent vector is c * prod_j e_j!.
///
/// Defined for any d (the iterated difference always exists); only
/// [`diagonal_restore`] needs d < p.
pub fn multilinearize(poly: &Poly) -> Result<MultilinearForm> {
    if !poly.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let p = poly.p();
    let d = poly.degree();
    let mut form = MultilinearForm::zero(p, d, poly.nvars());
    if poly.is_zero() || d == 0 {
        return Ok(form);
    }
    for (m, c) in poly.terms() {
        let mut weight = c;
        let mut base = Vec::with_capacity(d);
        for (j, &e) in m.exponents.iter().enumerate() {
            weight = p.mul(weight, p.factorial_mod(e as usize));
            base.extend(std::iter::repeat(j as u16).take(e as usize));
        }
        if weight == 0 {
            continue;
        }
        for tuple in distinct_permutations(&base) {
            form.add_coeff(tuple, weight);
        }
    }
    Ok(form)
}

/// Inverse of multilinearization for symmetric forms: P(x) = T(x,...,x)/d!.
pub fn diagonal_restore(form: &MultilinearForm, d: usize) -> Result<Poly> {
    let p = form.p();
    if d as u32 >= p.get() {
        return Err(Error::DegreeVsCharacteristic { d, p: p.get() });
    }
    if form.blocks() != d {
        return Err(Error::DimensionMismatch {
            expected: form.blocks(),
            got: d,
        });
    }
    let inv_fact = p.inv(p.factorial(d)?);
    let mut poly = Poly::zero(p, form.block_vars());
    for (t, c) in form.coeffs() {
        let mut exps = vec![0u16; form.block_vars()];
        for &j in t {
            exps[j as usize] += 1;
        }
        poly.add_term(Monomial::new(exps), p.mul(c, inv_fact));
    }
    Ok(poly)
}

/// All distinct permutations of a multiset, in lexicographic order.
pub fn distinct_permutations(sorted: &[u16]) -> Vec<Vec<u16>> {
    let mut items = sorted.to_vec();
    items.sort_unstable();
    let mut out = Vec::new();
    loop {
        out.push(items.clone());
        // next lexicographic permutation
        let Some(i) = (0..items.len().saturating_sub(1))
            .rev()
            .find(|&i| items[i] < items[i + 1])
        else {
            break;
        };
        let j = (i + 1..items.len())
            .rev()
            .find(|&j| items[j] > items[i])
            .unwrap();
        items.swap(i, j);
        items[i + 1..].reverse();
    }
    out
}
