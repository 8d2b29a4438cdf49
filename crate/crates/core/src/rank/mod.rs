//! Schmidt rank (h-invariant) computation and certification.
//!
//! Rank is defined over the algebraic closure; exact search over all
//! extensions is impossible, so results are bracketed: upper bounds come from
//! vanishing-subspace search over F_{p^m}, lower bounds from linear-factor
//! exclusion (a linear factor of a degree-d form is defined over an extension
//! of degree at most d, so exhausting m <= d certifies rank >= 2) and from
//! the analytic rank.

pub mod extfield;
pub mod subspace;

use std::collections::HashMap;

use crate::budget::{pow_points, Budget};
use crate::error::{Error, Result};
use crate::ffpoly::{multilinearize, MultilinearForm, Poly, PrimeModulus};
use crate::matrix::Matrix;

use extfield::ExtField;
use subspace::{find_annihilator, kernel_of_annihilator, subspace_count, vanishes_on_span, Annihilator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankCertificate {
    /// P = sum of factor * cofactor with all factors of positive degree
    /// (base-field decompositions only).
    Decomposition { factors: Vec<(Poly, Poly)> },
    /// P vanishes on the common kernel of the annihilator forms; the
    /// certified rank bound is the number of forms.
    VanishingSubspace(Annihilator),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    QuadraticOracle,
    SubspaceSearch,
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct RankResult {
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub certificate: Option<RankCertificate>,
    pub method: RankMethod,
    pub ext_degree_used: usize,
}

impl RankResult {
    /// Definite value when the bracket is tight.
    pub fn exact(&self) -> Option<usize> {
        (self.lower_bound == self.upper_bound).then_some(self.upper_bound)
    }
}

/// Exact closure rank of a homogeneous quadratic over odd p: ceil(m/2) where
/// m is the rank of the associated symmetric matrix.
pub fn quad_rank(poly: &Poly) -> Result<RankResult> {
    let p = poly.p();
    if p.get() == 2 {
        return Err(Error::Unsupported(
            "quad_rank needs odd p; use strength_rank for p = 2".into(),
        ));
    }
    if poly.is_zero() {
        return Ok(exact(0, RankMethod::QuadraticOracle, None, 1));
    }
    if !poly.is_homogeneous() || poly.degree() != 2 {
        return Err(Error::Precondition(
            "quad_rank expects a homogeneous quadratic".into(),
        ));
    }
    let m = symmetric_matrix(poly)?.rank();
    Ok(exact(m.div_ceil(2), RankMethod::QuadraticOracle, None, 1))
}

/// As `quad_rank`, with a vanishing-subspace certificate over F_{p^2}.
pub fn quad_rank_with_certificate(poly: &Poly, budget: &Budget) -> Result<RankResult> {
    let mut result = quad_rank(poly)?;
    let r = result.upper_bound;
    if r > 0 {
        // a sum of squares decomposition always yields an isotropic subspace
        // of codimension ceil(m/2) over the quadratic extension
        let ext = ExtField::new(poly.p(), 2)?;
        let ann = search_codim(poly, &ext, r, budget)?
            .ok_or_else(|| Error::Precondition("quadratic witness must exist over F_{p^2}".into()))?;
        result.certificate = Some(RankCertificate::VanishingSubspace(ann));
        result.ext_degree_used = 2;
    }
    Ok(result)
}

/// The symmetric matrix B with P(x) = x^T B x (odd p).
pub fn symmetric_matrix(poly: &Poly) -> Result<Matrix> {
    let p = poly.p();
    let n = poly.nvars();
    let half = p.inv(2);
    let mut b = Matrix::zero(p, n, n);
    for (m, c) in poly.terms() {
        let vars: Vec<(usize, u16)> = m
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e))
            .collect();
        match vars.as_slice() {
            [(i, 2)] => b.set(*i, *i, c),
            [(i, 1), (j, 1)] => {
                let v = p.mul(c, half);
                b.set(*i, *j, p.add(b.get(*i, *j), v));
                b.set(*j, *i, p.add(b.get(*j, *i), v));
            }
            _ => {
                return Err(Error::Precondition(
                    "symmetric_matrix expects a homogeneous quadratic".into(),
                ))
            }
        }
    }
    Ok(b)
}

/// Rank by minimal-codimension vanishing subspace, exact over the searched
/// extensions F_{p^m}, m <= ext_degree. Valid for d in {2, 3}, where every
/// decomposition term has a linear factor.
pub fn strength_rank(
    poly: &Poly,
    max_r: usize,
    ext_degree: usize,
    budget: &Budget,
) -> Result<RankResult> {
    if poly.is_zero() {
        return Ok(exact(0, RankMethod::SubspaceSearch, None, 1));
    }
    if !poly.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = poly.degree();
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!(
            "strength_rank handles d in {{2,3}}, got {d}"
        )));
    }
    let n = poly.nvars();
    let cap = max_r.min(n);
    let mut upper: Option<(usize, Annihilator)> = None;
    let mut no_hyperplane_up_to = 0usize; // largest m exhausted at r = 1 without witness
    'search: for r in 1..=cap {
        for m in 1..=ext_degree.min(3) {
            let ext = ExtField::new(poly.p(), m)?;
            if let Some(ann) = search_codim(poly, &ext, r, budget)? {
                upper = Some((r, ann));
                break 'search;
            }
            if r == 1 {
                no_hyperplane_up_to = m;
            }
        }
    }
    let Some((r, ann)) = upper else {
        // nothing found within max_r: report the bracket honestly
        let lower = lower_bound(poly, d, no_hyperplane_up_to, ext_degree, budget);
        return Ok(RankResult {
            lower_bound: lower.max(cap + 1).min(n),
            upper_bound: n,
            certificate: None,
            method: RankMethod::SubspaceSearch,
            ext_degree_used: ext_degree.min(3),
        });
    };
    let ext_used = ann.ext_degree;
    let lower = lower_bound(poly, d, no_hyperplane_up_to, ext_degree, budget).min(r);
    Ok(RankResult {
        lower_bound: lower,
        upper_bound: r,
        certificate: Some(RankCertificate::VanishingSubspace(ann)),
        method: RankMethod::SubspaceSearch,
        ext_degree_used: ext_used,
    })
}

fn lower_bound(
    poly: &Poly,
    d: usize,
    no_hyperplane_up_to: usize,
    ext_degree: usize,
    budget: &Budget,
) -> usize {
    let mut lower = 1; // nonzero
    // a linear factor of a degree-d form is defined over degree <= d
    if no_hyperplane_up_to >= d {
        lower = 2;
    }
    // analytic-rank floor: bias(P~) >= p^{-d * m * rank} over searched
    // extensions, so rank >= AR / (d * m)
    if d < poly.p().get() as usize {
        if let Ok(ar) = multilinearize(poly).and_then(|t| analytic_rank(&t, budget)) {
            let divisor = (d * ext_degree.clamp(1, 3)) as f64;
            let floor = (ar / divisor - 1e-9).ceil() as usize;
            lower = lower.max(floor.max(if poly.is_zero() { 0 } else { 1 }));
        }
    }
    lower
}

fn search_codim(
    poly: &Poly,
    ext: &ExtField,
    r: usize,
    budget: &Budget,
) -> Result<Option<Annihilator>> {
    let n = poly.nvars();
    if r > n {
        return Ok(None);
    }
    budget.check(subspace_count(ext.order(), n, r))?;
    Ok(find_annihilator(ext, n, r, |forms| {
        let basis = kernel_of_annihilator(ext, n, forms);
        vanishes_on_span(poly, ext, &basis)
    }))
}

fn exact(
    value: usize,
    method: RankMethod,
    certificate: Option<RankCertificate>,
    ext: usize,
) -> RankResult {
    RankResult {
        lower_bound: value,
        upper_bound: value,
        certificate,
        method,
        ext_degree_used: ext,
    }
}

/// -log_p of the bias of a multilinear form over the full product domain.
/// The bias of a multilinear form is the (positive) fraction of argument
/// tuples on which the last-block slice vanishes, so the value is finite.
pub fn analytic_rank(form: &MultilinearForm, budget: &Budget) -> Result<f64> {
    if form.blocks() == 0 {
        return Ok(0.0);
    }
    let zero_slices = count_vanishing_slices(form, budget)?;
    let denom = pow_points(form.p().get(), form.block_vars() * (form.blocks() - 1));
    // bias = zero_slices / p^{bv*(d-1)}, exact from integer counts
    let bias = zero_slices as f64 / denom as f64;
    assert!(bias > 0.0, "multilinear bias is always positive");
    Ok(-bias.ln() / (form.p().get() as f64).ln())
}

/// Count tuples (x_2..x_d) for which the multilinear slice in the first block
/// is identically zero; bias equals this count over the tuple total.
fn count_vanishing_slices(form: &MultilinearForm, budget: &Budget) -> Result<u64> {
    use crate::ffpoly::points;
    let d = form.blocks();
    let bv = form.block_vars();
    let p = form.p();
    if d == 0 {
        return Ok(1);
    }
    budget.check(pow_points(p.get(), bv * (d - 1)))?;
    let tuple_count = (p.get() as usize).pow((bv * (d - 1)) as u32);
    let mut zero = 0u64;
    for idx in 0..tuple_count {
        let mut xs = Vec::with_capacity(d - 1);
        let mut rest = idx;
        let block_size = (p.get() as usize).pow(bv as u32);
        for _ in 0..d - 1 {
            xs.push(crate::ffpoly::FieldVector::from_index(p, bv, rest % block_size));
            rest /= block_size;
        }
        // linear functional on the first block: zero iff all coefficients are
        let vanishes = points(p, bv).all(|x0| {
            let mut args = vec![x0];
            args.extend(xs.iter().cloned());
            form.eval(&args).unwrap() == 0
        });
        if vanishes {
            zero += 1;
        }
    }
    Ok(zero)
}

/// Minimum bias over enumerated multilinear forms of degree d and rank <= L:
/// an empirical lower estimate of the bias-rank constant at this size.
pub fn bias_rank_constant(
    p: PrimeModulus,
    d: usize,
    level: usize,
    block_vars: usize,
    budget: &Budget,
) -> Result<f64> {
    if level == 0 {
        return Ok(1.0); // only the zero form
    }
    let terms = slice_terms(p, d, block_vars);
    let mut seen = std::collections::BTreeSet::new();
    let mut min_bias = 1.0f64;
    // sums of at most `level` slice terms, combinations with repetition
    let mut stack: Vec<usize> = Vec::new();
    enumerate_sums(
        p,
        d,
        block_vars,
        &terms,
        level,
        0,
        &mut stack,
        &mut seen,
        &mut min_bias,
        budget,
    )?;
    assert!(min_bias > 0.0);
    Ok(min_bias)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_sums(
    p: PrimeModulus,
    d: usize,
    block_vars: usize,
    terms: &[MultilinearForm],
    remaining: usize,
    start: usize,
    stack: &mut Vec<usize>,
    seen: &mut std::collections::BTreeSet<Vec<u8>>,
    min_bias: &mut f64,
    budget: &Budget,
) -> Result<()> {
    let mut form = MultilinearForm::zero(p, d, block_vars);
    for &i in stack.iter() {
        form = form.add(&terms[i])?;
    }
    if seen.insert(form.as_poly().canonical_key()) {
        let bias = form.bias(budget)?.real_value();
        if bias < *min_bias {
            *min_bias = bias;
        }
    }
    if remaining == 0 {
        return Ok(());
    }
    for i in start..terms.len() {
        stack.push(i);
        enumerate_sums(
            p, d, block_vars, terms, remaining - 1, i, stack, seen, min_bias, budget,
        )?;
        stack.pop();
    }
    Ok(())
}

/// All rank-<=1 slice terms l(x_j) * Q(remaining blocks) for a d-block
/// multilinear space with `block_vars` variables per block.
fn slice_terms(p: PrimeModulus, d: usize, block_vars: usize) -> Vec<MultilinearForm> {
    use crate::ffpoly::points;
    let mut out = Vec::new();
    let sub_tuples: Vec<Vec<u16>> = tuples(block_vars, d - 1);
    let sub_count = sub_tuples.len();
    for j in 0..d {
        for l in points(p, block_vars) {
            if l.is_zero() {
                continue;
            }
            // all coefficient assignments for the complementary form
            let assignments = (p.get() as usize).pow(sub_count as u32);
            for a in 0..assignments {
                let mut form = MultilinearForm::zero(p, d, block_vars);
                let mut rest = a;
                for t in &sub_tuples {
                    let c = (rest % p.get() as usize) as u32;
                    rest /= p.get() as usize;
                    if c == 0 {
                        continue;
                    }
                    for (v, &coeff) in l.coords.iter().enumerate() {
                        if coeff == 0 {
                            continue;
                        }
                        let mut tuple = Vec::with_capacity(d);
                        let mut it = t.iter();
                        for b in 0..d {
                            if b == j {
                                tuple.push(v as u16);
                            } else {
                                tuple.push(*it.next().unwrap());
                            }
                        }
                        form.add_coeff(tuple, p.mul(c, coeff));
                    }
                }
                if !form.is_zero() {
                    out.push(form);
                }
            }
        }
    }
    // dedup by canonical key, keep first occurrence order
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|f| seen.insert(f.as_poly().canonical_key()));
    out
}

fn tuples(block_vars: usize, len: usize) -> Vec<Vec<u16>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in tuples(block_vars, len - 1) {
        for v in 0..block_vars as u16 {
            let mut t = vec![v];
            t.extend(rest.iter().copied());
            out.push(t);
        }
    }
    out
}

/// Validate a certificate against the polynomial it claims to bound.
pub fn validate_certificate(poly: &Poly, cert: &RankCertificate) -> Result<bool> {
    match cert {
        RankCertificate::Decomposition { factors } => {
            let mut sum = Poly::zero(poly.p(), poly.nvars());
            for (f, g) in factors {
                if f.is_zero() || g.is_zero() || f.degree() == 0 || g.degree() == 0 {
                    return Ok(false);
                }
                sum = sum.add(&f.mul(g)?)?;
            }
            Ok(&sum == poly)
        }
        RankCertificate::VanishingSubspace(ann) => {
            let ext = ExtField::new(poly.p(), ann.ext_degree)?;
            let basis = kernel_of_annihilator(&ext, poly.nvars(), &ann.forms);
            Ok(vanishes_on_span(poly, &ext, &basis))
        }
    }
}

/// Shared rank oracle with a cache keyed by canonical polynomial form.
/// Homogeneous values of degree <= 1 have rank 0; inhomogeneous polynomials
/// are bracketed per homogeneous component (degree >= 2), the affine part
/// being free.
pub struct RankOracle {
    pub ext_degree: usize,
    pub budget: Budget,
    cache: HashMap<Vec<u8>, (usize, usize)>,
}

impl RankOracle {
    pub fn new(ext_degree: usize, budget: Budget) -> Self {
        RankOracle {
            ext_degree,
            budget,
            cache: HashMap::new(),
        }
    }

    /// (lower, upper) rank bracket for an arbitrary polynomial of degree <= 3.
    pub fn bracket(&mut self, poly: &Poly) -> Result<(usize, usize)> {
        let key = poly.canonical_key();
        if let Some(&b) = self.cache.get(&key) {
            return Ok(b);
        }
        let mut lower = 0usize;
        let mut upper = 0usize;
        for deg in 2..=poly.degree() {
            let comp = poly.homogeneous_component(deg);
            if comp.is_zero() {
                continue;
            }
            let res = self.homogeneous(&comp)?;
            lower += res.lower_bound;
            upper += res.upper_bound;
        }
        self.cache.insert(key, (lower, upper));
        Ok((lower, upper))
    }

    fn homogeneous(&mut self, poly: &Poly) -> Result<RankResult> {
        let key = poly.canonical_key();
        if let Some(&(lo, hi)) = self.cache.get(&key) {
            return Ok(RankResult {
                lower_bound: lo,
                upper_bound: hi,
                certificate: None,
                method: RankMethod::SubspaceSearch,
                ext_degree_used: self.ext_degree,
            });
        }
        let res = if poly.degree() == 2 && poly.p().get() != 2 {
            quad_rank(poly)?
        } else {
            strength_rank(poly, poly.nvars(), self.ext_degree, &self.budget)?
        };
        self.cache
            .insert(key, (res.lower_bound, res.upper_bound));
        Ok(res)
    }

    /// Certified upper bound only (usable as a conservative predicate input).
    pub fn upper(&mut self, poly: &Poly) -> Result<usize> {
        Ok(self.bracket(poly)?.1)
    }
}

/// Build a base-field decomposition certificate for a constructed sum of
/// products (used by synthesizers and tests).
pub fn decomposition_certificate(factors: Vec<(Poly, Poly)>) -> RankCertificate {
    RankCertificate::Decomposition { factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::parse_poly;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn quad_rank_examples() {
        // x0*x1 over F_5: already a product of linear forms
        let poly = parse_poly("p=5 n=2 d=2\nx0*x1").unwrap();
        assert_eq!(quad_rank(&poly).unwrap().exact(), Some(1));

        // x0^2 + x1^2 over F_3: rank 1 with a certificate over F_9
        let sos = parse_poly("p=3 n=2 d=2\nx0^2 + x1^2").unwrap();
        let res = quad_rank_with_certificate(&sos, &budget()).unwrap();
        assert_eq!(res.exact(), Some(1));
        let cert = res.certificate.unwrap();
        assert!(validate_certificate(&sos, &cert).unwrap());

        // zero polynomial
        let zero = Poly::zero(PrimeModulus::new(3).unwrap(), 2);
        assert_eq!(quad_rank(&zero).unwrap().exact(), Some(0));

        // p = 2 rejected
        let f2 = parse_poly("p=2 n=2 d=2\nx0*x1").unwrap();
        assert!(quad_rank(&f2).is_err());
    }

    #[test]
    fn strength_rank_examples() {
        // x0*x1*x2 vanishes on x0 = 0
        let poly = parse_poly("p=5 n=3 d=3\nx0*x1*x2").unwrap();
        let res = strength_rank(&poly, 3, 1, &budget()).unwrap();
        assert_eq!(res.upper_bound, 1);
        assert!(validate_certificate(&poly, res.certificate.as_ref().unwrap()).unwrap());

        // x0^2*x1 + x2^3: no vanishing hyperplane, a codim-2 witness exists
        let two = parse_poly("p=5 n=3 d=3\nx0^2*x1 + x2^3").unwrap();
        let res = strength_rank(&two, 3, 1, &budget()).unwrap();
        assert_eq!(res.upper_bound, 2);

        // constructed l * Q has rank <= 1
        let l = parse_poly("p=5 n=3 d=1\nx0 + 2*x1").unwrap();
        let q = parse_poly("p=5 n=3 d=2\nx1*x2 + 3*x2^2").unwrap();
        let prod = l.mul(&q).unwrap();
        let res = strength_rank(&prod, 3, 1, &budget()).unwrap();
        assert_eq!(res.upper_bound, 1);
        let cert = decomposition_certificate(vec![(l, q)]);
        assert!(validate_certificate(&prod, &cert).unwrap());
    }

    #[test]
    fn strength_rank_lower_bound_certifies_two() {
        // no linear factor over F_{p^m}, m <= 3 => closure rank >= 2
        let two = parse_poly("p=5 n=3 d=3\nx0^2*x1 + x2^3").unwrap();
        let res = strength_rank(&two, 3, 3, &budget()).unwrap();
        assert_eq!(res.lower_bound, 2);
        assert_eq!(res.exact(), Some(2));
    }

    #[test]
    fn quad_and_strength_agree_on_a_sample() {
        for text in [
            "p=3 n=3 d=2\nx0^2 + x1*x2",
            "p=3 n=3 d=2\nx0*x1 + x1*x2 + x0*x2",
            "p=5 n=2 d=2\nx0^2 + 4*x1^2",
            "p=5 n=3 d=2\nx0^2 + x1^2 + x2^2",
        ] {
            let poly = parse_poly(text).unwrap();
            let q = quad_rank(&poly).unwrap();
            let s = strength_rank(&poly, 3, 2, &budget()).unwrap();
            assert_eq!(q.exact().unwrap(), s.upper_bound, "{text}");
        }
    }

    #[test]
    fn analytic_rank_examples() {
        let p2 = PrimeModulus::new(2).unwrap();
        // zero form: bias 1, analytic rank 0
        let zero = MultilinearForm::zero(p2, 2, 1);
        assert!(analytic_rank(&zero, &budget()).unwrap().abs() < 1e-12);

        // x*y over F_2: bias 1/2, analytic rank 1
        let xy = MultilinearForm::from_coeffs(p2, 2, 1, [(vec![0, 0], 1)]);
        assert!((analytic_rank(&xy, &budget()).unwrap() - 1.0).abs() < 1e-9);

        // two disjoint products: bias multiplies, analytic rank 2
        let two = MultilinearForm::from_coeffs(
            p2,
            2,
            2,
            [(vec![0, 0], 1), (vec![1, 1], 1)],
        );
        assert!((analytic_rank(&two, &budget()).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bias_rank_constant_examples() {
        let p2 = PrimeModulus::new(2).unwrap();
        assert_eq!(bias_rank_constant(p2, 2, 0, 1, &budget()).unwrap(), 1.0);
        // only form x*y at one variable per block: bias 1/2
        let c = bias_rank_constant(p2, 2, 1, 1, &budget()).unwrap();
        assert!((c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bias_rank_quadratic_base_case() {
        // every rank-<=L bilinear form has bias >= p^{-L}
        for pv in [2u32, 3] {
            let p = PrimeModulus::new(pv).unwrap();
            for level in 1..=2usize {
                let c = bias_rank_constant(p, 2, level, 2, &budget()).unwrap();
                assert!(
                    c >= (pv as f64).powi(-(level as i32)) - 1e-9,
                    "p={pv} L={level} c={c}"
                );
            }
        }
    }

    #[test]
    fn projection_does_not_increase_rank() {
        let poly = parse_poly("p=5 n=3 d=3\nx0^2*x1 + x2^3").unwrap();
        let full = strength_rank(&poly, 3, 2, &budget()).unwrap();
        for l in 0..=3usize {
            let proj = poly.project(l).unwrap();
            if proj.is_zero() || proj.degree() < 2 {
                continue;
            }
            let pr = strength_rank(&proj, 3, 2, &budget()).unwrap();
            assert!(pr.upper_bound <= full.upper_bound);
        }
    }

    #[test]
    fn oracle_brackets_inhomogeneous_by_components() {
        let mut oracle = RankOracle::new(2, budget());
        let poly = parse_poly("p=5 n=3 d=3\nx0*x1*x2 + x0^2 + x1 + 4").unwrap();
        let (lo, hi) = oracle.bracket(&poly).unwrap();
        assert!(lo >= 1);
        assert!(hi <= 2);
        // affine polynomials are free
        let affine = parse_poly("p=5 n=3 d=1\nx0 + 2").unwrap();
        assert_eq!(oracle.bracket(&affine).unwrap(), (0, 0));
    }
}
