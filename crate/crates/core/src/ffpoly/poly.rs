//! Exact multivariate polynomials over F_p.
//!
//! Polynomials are formal: exponents may reach or exceed p. When a bijection
//! with functions F_p^n -> F_p is required, callers reduce via
//! [`Poly::function_representative`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

use super::field::{FieldVector, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u16>,
}

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial { exponents }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exponents: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exponents = vec![0; nvars];
        exponents[i] = 1;
        Monomial { exponents }
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: PrimeModulus,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Poly {
    pub fn zero(p: PrimeModulus, nvars: usize) -> Self {
        Poly {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: PrimeModulus, nvars: usize, c: u32) -> Self {
        let mut poly = Poly::zero(p, nvars);
        poly.add_term(Monomial::one(nvars), c);
        poly
    }

    pub fn variable(p: PrimeModulus, nvars: usize, i: usize) -> Self {
        let mut poly = Poly::zero(p, nvars);
        poly.add_term(Monomial::var(nvars, i), 1);
        poly
    }

    pub fn from_terms<I>(p: PrimeModulus, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let mut poly = Poly::zero(p, nvars);
        for (m, c) in terms {
            poly.add_term(m, c);
        }
        poly
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True when all monomials have equal degree (vacuously true for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        match degrees.next() {
            None => true,
            Some(d0) => degrees.all(|d| d == d0),
        }
    }

    /// Accumulate `c * m` into the term map, dropping zero coefficients.
    pub fn add_term(&mut self, m: Monomial, c: u32) {
        debug_assert_eq!(m.exponents.len(), self.nvars);
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert(0);
        *entry = self.p.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    fn check_compat(&self, other: &Poly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), self.p.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), self.p.mul(a, c % self.p.get()));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = Poly::zero(self.p, self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.add_term(m1.mul(m2), self.p.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &FieldVector) -> Result<u32> {
        if x.p != self.p {
            return Err(Error::ModulusMismatch(self.p.get(), x.p.get()));
        }
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x.len(),
            });
        }
        let mut acc = 0u32;
        for (m, &c) in &self.terms {
            let mut v = c;
            for (i, &e) in m.exponents.iter().enumerate() {
                if e > 0 {
                    v = self.p.mul(v, self.p.pow(x.coords[i], e as u64));
                }
            }
            acc = self.p.add(acc, v);
        }
        Ok(acc)
    }

    /// The polynomial x |-> P(x + h).
    pub fn shift(&self, h: &FieldVector) -> Result<Poly> {
        if h.p != self.p {
            return Err(Error::ModulusMismatch(self.p.get(), h.p.get()));
        }
        if h.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: h.len(),
            });
        }
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, &c) in &self.terms {
            // expand prod_i (x_i + h_i)^{e_i}
            let mut partial: Vec<(Monomial, u32)> = vec![(Monomial::one(self.nvars), c)];
            for (i, &e) in m.exponents.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let hi = h.coords[i];
                let mut next: Vec<(Monomial, u32)> = Vec::new();
                for (pm, pc) in &partial {
                    for a in 0..=e {
                        let coeff = self.p.mul(
                            binomial_mod(self.p, e as u64, a as u64),
                            self.p.pow(hi, (e - a) as u64),
                        );
                        if coeff == 0 {
                            continue;
                        }
                        let mut nm = pm.clone();
                        nm.exponents[i] += a;
                        next.push((nm, self.p.mul(*pc, coeff)));
                    }
                }
                partial = next;
            }
            for (nm, nc) in partial {
                out.add_term(nm, nc);
            }
        }
        Ok(out)
    }

    /// Difference operator: x |-> P(x + h) - P(x).
    pub fn delta(&self, h: &FieldVector) -> Result<Poly> {
        Ok(self.shift(h)?.sub(self)?)
    }

    /// Homogeneous component of degree d.
    pub fn homogeneous_component(&self, d: usize) -> Poly {
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, &c) in &self.terms {
            if m.degree() == d {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    /// Homogeneous degree-d component (requires deg P <= d).
    pub fn top_degree(&self, d: usize) -> Result<Poly> {
        if self.degree() > d {
            return Err(Error::Precondition(format!(
                "top_degree: degree {} exceeds requested {}",
                self.degree(),
                d
            )));
        }
        Ok(self.homogeneous_component(d))
    }

    /// Substitute 0 for every variable of index >= l; output lives in l variables.
    pub fn project(&self, l: usize) -> Result<Poly> {
        if l > self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: l,
            });
        }
        let mut out = Poly::zero(self.p, l);
        for (m, &c) in &self.terms {
            if m.exponents[l..].iter().all(|&e| e == 0) {
                out.add_term(Monomial::new(m.exponents[..l].to_vec()), c);
            }
        }
        Ok(out)
    }

    /// Re-embed into a larger variable space (new variables unused).
    pub fn extend_vars(&self, nvars: usize) -> Result<Poly> {
        if nvars < self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: nvars,
            });
        }
        let mut out = Poly::zero(self.p, nvars);
        for (m, &c) in &self.terms {
            let mut e = m.exponents.clone();
            e.resize(nvars, 0);
            out.add_term(Monomial::new(e), c);
        }
        Ok(out)
    }

    /// Smallest l such that the polynomial only involves x_0..x_{l-1}.
    pub fn support_bound(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| {
                m.exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, _)| i + 1)
            })
            .max()
            .unwrap_or(0)
    }

    /// True when every per-variable exponent is <= p - 1.
    pub fn is_function_representative(&self) -> bool {
        let cap = (self.p.get() - 1) as u16;
        self.terms
            .keys()
            .all(|m| m.exponents.iter().all(|&e| e <= cap))
    }

    /// Reduce exponents by x^p = x so the result represents the same function
    /// with every per-variable exponent <= p - 1.
    pub fn function_representative(&self) -> Poly {
        let p1 = (self.p.get() - 1) as u16;
        let mut out = Poly::zero(self.p, self.nvars);
        for (m, &c) in &self.terms {
            let e: Vec<u16> = m
                .exponents
                .iter()
                .map(|&e| if e == 0 { 0 } else { (e - 1) % p1 + 1 })
                .collect();
            out.add_term(Monomial::new(e), c);
        }
        out
    }

    /// Canonical serialization of the term map, usable as a cache key.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.p.get().to_le_bytes());
        out.extend_from_slice(&(self.nvars as u32).to_le_bytes());
        for (m, &c) in &self.terms {
            for &e in &m.exponents {
                out.extend_from_slice(&e.to_le_bytes());
            }
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`,
/// lexicographically ordered by exponent vector.
pub fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(exps: &mut Vec<u16>, pos: usize, left: usize, out: &mut Vec<Monomial>) {
        if pos + 1 == exps.len() {
            exps[pos] = left as u16;
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[pos] = e as u16;
            rec(exps, pos + 1, left - e, out);
        }
        exps[pos] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(&mut exps, 0, d, &mut out);
    out.sort();
    out
}

/// All homogeneous polynomials of degree exactly `d` (including zero),
/// enumerated in a fixed canonical order.
pub fn homogeneous_polys(p: PrimeModulus, nvars: usize, d: usize) -> Vec<Poly> {
    let mons = monomials_of_degree(nvars, d);
    let mut out = Vec::new();
    let count = (p.get() as u64).pow(mons.len() as u32);
    for idx in 0..count {
        let mut poly = Poly::zero(p, nvars);
        let mut rest = idx;
        for m in &mons {
            let c = (rest % p.get() as u64) as u32;
            rest /= p.get() as u64;
            if c != 0 {
                poly.add_term(m.clone(), c);
            }
        }
        out.push(poly);
    }
    out
}

/// Binomial coefficient mod p via Lucas' theorem.
pub fn binomial_mod(p: PrimeModulus, n: u64, k: u64) -> u32 {
    if k > n {
        return 0;
    }
    let pp = p.get() as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u32;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % pp, k % pp);
        if kd > nd {
            return 0;
        }
        acc = p.mul(acc, binomial_small(p, nd as u32, kd as u32));
        n /= pp;
        k /= pp;
    }
    acc
}

fn binomial_small(p: PrimeModulus, n: u32, k: u32) -> u32 {
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..k {
        num = p.mul(num, (n - i) % p.get());
        den = p.mul(den, (i + 1) % p.get());
    }
    p.mul(num, p.inv(den))
}

impl fmt::Display for Poly {
    /// Canonical text form: terms sorted lexicographically by exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field::points;

    fn fp(p: u32) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn parse(s: &str) -> Poly {
        crate::ffpoly::text::parse_poly(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        // P = x0^2 over F_5 at x = 2
        let p = fp(5);
        let sq = Poly::from_terms(p, 1, [(Monomial::new(vec![2]), 1)]);
        assert_eq!(sq.eval(&FieldVector::new(p, vec![2])).unwrap(), 4);

        // zero polynomial
        let z = Poly::zero(p, 1);
        for x in points(p, 1) {
            assert_eq!(z.eval(&x).unwrap(), 0);
        }

        // P = x0*x1 + x2^3 over F_7 at (1,2,3) -> 1
        let poly = parse("p=7 n=3 d=3\nx0*x1 + x2^3");
        let p7 = fp(7);
        assert_eq!(
            poly.eval(&FieldVector::new(p7, vec![1, 2, 3])).unwrap(),
            (2 + 27) % 7
        );
    }

    // Independent term-by-term evaluator used as an oracle against eval().
    fn eval_oracle(poly: &Poly, x: &FieldVector) -> u32 {
        let p = poly.p();
        let mut total: u64 = 0;
        for (m, c) in poly.terms() {
            let mut term: u64 = c as u64;
            for (i, &e) in m.exponents.iter().enumerate() {
                for _ in 0..e {
                    term = term * x.coords[i] as u64 % p.get() as u64;
                }
            }
            total = (total + term) % p.get() as u64;
        }
        total as u32
    }

    #[test]
    fn eval_agrees_with_term_oracle() {
        let poly = parse("p=7 n=3 d=4\n3*x0^2*x1 + 5*x2^3 + x0*x1*x2 + 6");
        let p = fp(7);
        for x in points(p, 3) {
            assert_eq!(poly.eval(&x).unwrap(), eval_oracle(&poly, &x));
        }
    }

    #[test]
    fn delta_examples() {
        let p = fp(5);
        // Δ_1 x0^2 = 2 x0 + 1
        let sq = parse("p=5 n=1 d=2\nx0^2");
        let d = sq.delta(&FieldVector::new(p, vec![1])).unwrap();
        assert_eq!(d, parse("p=5 n=1 d=1\n2*x0 + 1"));

        // Δ_0 = 0
        let poly = parse("p=5 n=2 d=3\nx0^3 + 2*x0*x1");
        assert!(poly.delta(&FieldVector::zero(p, 2)).unwrap().is_zero());

        // Δ_{(1,1)} (x0 x1) = x0 + x1 + 1 over F_3
        let p3 = fp(3);
        let prod = parse("p=3 n=2 d=2\nx0*x1");
        let d = prod.delta(&FieldVector::new(p3, vec![1, 1])).unwrap();
        assert_eq!(d, parse("p=3 n=2 d=1\nx0 + x1 + 1"));
    }

    #[test]
    fn delta_drops_degree() {
        let poly = parse("p=5 n=2 d=4\nx0^2*x1^2 + 3*x1^3");
        let p = fp(5);
        for h in points(p, 2) {
            let d = poly.delta(&h).unwrap();
            assert!(d.is_zero() || d.degree() < poly.degree());
        }
    }

    #[test]
    fn shift_matches_pointwise() {
        let poly = parse("p=3 n=2 d=3\nx0^2*x1 + 2*x1 + 1");
        let p = fp(3);
        for h in points(p, 2) {
            let shifted = poly.shift(&h).unwrap();
            for x in points(p, 2) {
                let xh = x.add(&h).unwrap();
                assert_eq!(shifted.eval(&x).unwrap(), poly.eval(&xh).unwrap());
            }
        }
    }

    #[test]
    fn project_examples() {
        let poly = parse("p=5 n=3 d=2\nx0*x1 + x2^2");
        assert_eq!(poly.project(2).unwrap(), parse("p=5 n=2 d=2\nx0*x1"));
        assert_eq!(poly.project(3).unwrap(), poly);
        let sq = parse("p=5 n=3 d=2\nx2^2");
        assert!(sq.project(2).unwrap().is_zero());
    }

    #[test]
    fn project_composition() {
        let poly = parse("p=3 n=3 d=3\nx0*x1*x2 + x1^2 + 2*x0");
        let a = poly.project(2).unwrap().project(1).unwrap();
        let b = poly.project(1).unwrap();
        assert_eq!(a, b);
        assert!(poly.project(2).unwrap().num_terms() <= poly.num_terms());
    }

    #[test]
    fn top_degree_examples() {
        let poly = parse("p=5 n=2 d=2\nx0^2 + x1 + 3");
        assert_eq!(poly.top_degree(2).unwrap(), parse("p=5 n=2 d=2\nx0^2"));
        let hom = parse("p=7 n=2 d=3\nx0^3 + x0*x1^2");
        assert_eq!(hom.top_degree(3).unwrap(), hom);
        let mix = parse("p=7 n=2 d=3\nx0^3 + x0*x1");
        assert_eq!(mix.top_degree(3).unwrap(), parse("p=7 n=2 d=3\nx0^3"));
    }

    #[test]
    fn function_representative_preserves_values() {
        let p = fp(3);
        let poly = parse("p=3 n=2 d=6\nx0^5 + 2*x1^3 + x0^2*x1^4");
        let reduced = poly.function_representative();
        assert!(reduced.is_function_representative());
        for x in points(p, 2) {
            assert_eq!(poly.eval(&x).unwrap(), reduced.eval(&x).unwrap());
        }
    }

    #[test]
    fn mismatch_errors() {
        let poly = parse("p=5 n=2 d=2\nx0*x1");
        let p7 = fp(7);
        assert!(poly.eval(&FieldVector::new(p7, vec![1, 2])).is_err());
        let p5 = fp(5);
        assert!(poly.eval(&FieldVector::new(p5, vec![1])).is_err());
    }
}
