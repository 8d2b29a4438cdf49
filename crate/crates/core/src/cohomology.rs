//! Cochain spaces C^n(G, M) for G = F_p^s, the coboundary operator for the
//! trivial and translation actions, defect measurement against the rank
//! filtrations, and the finite-rank-homomorphism test.
//!
//! The differential uses bar-complex signs throughout. Only the rank of a
//! differential value is ever consumed downstream, and rank is invariant
//! under negation, so the sign convention is interchangeable with the
//! "A(v+v') - A(v) - A(v')" form; a test pins down the equivalence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffpoly::{
    homogeneous_polys, parse_poly, points, write_poly, FieldVector, Poly, PrimeModulus,
};
use crate::rank::RankOracle;

/// The ambient group G = F_p^s with lexicographic element order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    pub p: PrimeModulus,
    pub s: usize,
}

impl GroupSpec {
    pub fn new(p: PrimeModulus, s: usize) -> Self {
        GroupSpec { p, s }
    }

    pub fn order(&self) -> usize {
        (self.p.get() as usize).pow(self.s as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldVector> {
        points(self.p, self.s)
    }

    pub fn element(&self, idx: usize) -> FieldVector {
        FieldVector::from_index(self.p, self.s, idx)
    }

    /// The standard generator e_i.
    pub fn generator(&self, i: usize) -> FieldVector {
        let mut coords = vec![0u32; self.s];
        coords[i] = 1;
        FieldVector::new(self.p, coords)
    }

    /// Lexicographic index of an n-tuple of group elements, first coordinate
    /// most significant.
    pub fn tuple_index(&self, tuple: &[FieldVector]) -> usize {
        let order = self.order();
        tuple.iter().fold(0, |acc, g| acc * order + g.index())
    }

    pub fn tuple_from_index(&self, n: usize, mut idx: usize) -> Vec<FieldVector> {
        let order = self.order();
        let mut out = vec![FieldVector::zero(self.p, self.s); n];
        for slot in (0..n).rev() {
            out[slot] = self.element(idx % order);
            idx /= order;
        }
        out
    }

    pub fn tuple_count(&self, n: usize) -> usize {
        self.order().pow(n as u32)
    }
}

/// How G acts on the coefficient polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionTag {
    Trivial,
    /// (v . P)(x) = P(x + v); requires the value space to live in s variables.
    Translation,
}

/// Rank filtration on the value module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    /// A_d: homogeneous degree-d values only.
    Homogeneous,
    /// B_d: arbitrary values of degree <= d; rank is summed over the
    /// homogeneous components of degree >= 2, the affine part being free.
    Inhomogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiltrationTag {
    pub kind: FiltrationKind,
    pub degree: usize,
}

/// A cochain G^n -> M stored as a complete table in tuple-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub group: GroupSpec,
    pub action: ActionTag,
    values: Vec<Poly>,
}

impl Cochain {
    pub fn new(
        degree: usize,
        group: GroupSpec,
        action: ActionTag,
        values: Vec<Poly>,
    ) -> Result<Self> {
        if values.len() != group.tuple_count(degree) {
            return Err(Error::DimensionMismatch {
                expected: group.tuple_count(degree),
                got: values.len(),
            });
        }
        let nvars = values.first().map(|v| v.nvars()).unwrap_or(0);
        for v in &values {
            if v.p() != group.p {
                return Err(Error::ModulusMismatch(v.p().get(), group.p.get()));
            }
            if v.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: v.nvars(),
                });
            }
        }
        if action == ActionTag::Translation && nvars != group.s {
            return Err(Error::Precondition(format!(
                "translation action needs values in s={} variables, got {}",
                group.s, nvars
            )));
        }
        Ok(Cochain {
            degree,
            group,
            action,
            values,
        })
    }

    /// Construct from a closure over tuples, in canonical order.
    pub fn from_fn<F>(
        degree: usize,
        group: GroupSpec,
        action: ActionTag,
        mut f: F,
    ) -> Result<Self>
    where
        F: FnMut(&[FieldVector]) -> Poly,
    {
        let values = (0..group.tuple_count(degree))
            .map(|i| f(&group.tuple_from_index(degree, i)))
            .collect();
        Cochain::new(degree, group, action, values)
    }

    pub fn nvars(&self) -> usize {
        self.values.first().map(|v| v.nvars()).unwrap_or(0)
    }

    pub fn values(&self) -> &[Poly] {
        &self.values
    }

    pub fn value(&self, tuple: &[FieldVector]) -> &Poly {
        &self.values[self.group.tuple_index(tuple)]
    }

    pub fn max_value_degree(&self) -> usize {
        self.values.iter().map(|v| v.degree()).max().unwrap_or(0)
    }

    fn act(&self, g: &FieldVector, value: &Poly) -> Result<Poly> {
        match self.action {
            ActionTag::Trivial => Ok(value.clone()),
            ActionTag::Translation => value.shift(g),
        }
    }

    /// Bar-complex differential:
    /// (dc)(g_1..g_{n+1}) = g_1.c(g_2..g_{n+1})
    ///   + sum_i (-1)^i c(.., g_i + g_{i+1}, ..) + (-1)^{n+1} c(g_1..g_n).
    pub fn coboundary(&self) -> Result<Cochain> {
        let n = self.degree;
        let group = self.group;
        let mut values = Vec::with_capacity(group.tuple_count(n + 1));
        for idx in 0..group.tuple_count(n + 1) {
            let tuple = group.tuple_from_index(n + 1, idx);
            let mut acc = self.act(&tuple[0], self.value(&tuple[1..]))?;
            for i in 1..=n {
                let mut merged = Vec::with_capacity(n);
                merged.extend_from_slice(&tuple[..i - 1]);
                merged.push(tuple[i - 1].add(&tuple[i])?);
                merged.extend_from_slice(&tuple[i + 1..]);
                let term = self.value(&merged);
                acc = if i % 2 == 1 {
                    acc.sub(term)?
                } else {
                    acc.add(term)?
                };
            }
            let last = self.value(&tuple[..n]);
            acc = if (n + 1) % 2 == 1 {
                acc.sub(last)?
            } else {
                acc.add(last)?
            };
            values.push(acc);
        }
        Cochain::new(n + 1, group, self.action, values)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, Poly::add)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, Poly::sub)
    }

    fn zip_with(
        &self,
        other: &Cochain,
        op: fn(&Poly, &Poly) -> Result<Poly>,
    ) -> Result<Cochain> {
        if self.degree != other.degree || self.group != other.group {
            return Err(Error::Precondition("cochain shape mismatch".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>>>()?;
        Cochain::new(self.degree, self.group, self.action, values)
    }

    pub fn to_json(&self) -> String {
        let file = CochainFile {
            p: self.group.p.get(),
            s: self.group.s,
            degree: self.degree,
            action: self.action,
            nvars: self.nvars(),
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| (i.to_string(), write_poly(v)))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Cochain> {
        let file: CochainFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let p = PrimeModulus::new(file.p)?;
        let group = GroupSpec::new(p, file.s);
        let count = group.tuple_count(file.degree);
        let mut values = Vec::with_capacity(count);
        for i in 0..count {
            let text = file
                .values
                .get(&i.to_string())
                .ok_or_else(|| Error::Parse(format!("missing cochain value at index {i}")))?;
            let mut poly = parse_poly(text)?;
            if poly.nvars() < file.nvars {
                poly = poly.extend_vars(file.nvars)?;
            }
            values.push(poly);
        }
        Cochain::new(file.degree, group, file.action, values)
    }
}

#[derive(Serialize, Deserialize)]
struct CochainFile {
    p: u32,
    s: usize,
    degree: usize,
    action: ActionTag,
    nvars: usize,
    values: BTreeMap<String, String>,
}

/// Defect of a 1-cochain: the rank bracket of the worst differential value.
#[derive(Debug, Clone)]
pub struct DefectReport {
    pub max_rank_upper: usize,
    pub max_rank_lower: usize,
    /// First pair (in tuple order) attaining the maximal upper bound.
    pub argmax: Vec<FieldVector>,
    /// Bracket -> number of pairs; counts sum to |G|^2.
    pub histogram: BTreeMap<(usize, usize), u64>,
}

/// Maximal bracketed rank of the differential of a degree-1 cochain over all
/// pairs, with histogram and argmax. Rank queries are cached inside `oracle`
/// keyed by canonical polynomial form.
pub fn defect(
    a: &Cochain,
    filtration: FiltrationTag,
    oracle: &mut RankOracle,
) -> Result<DefectReport> {
    if a.degree != 1 {
        return Err(Error::Precondition(
            "defect is defined for degree-1 cochains".into(),
        ));
    }
    if filtration.kind == FiltrationKind::Homogeneous {
        for v in a.values() {
            if !v.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
        }
    }
    if a.max_value_degree() > filtration.degree {
        return Err(Error::Precondition(format!(
            "cochain degree {} exceeds filtration degree {}",
            a.max_value_degree(),
            filtration.degree
        )));
    }
    let d = a.coboundary()?;
    let mut report = DefectReport {
        max_rank_upper: 0,
        max_rank_lower: 0,
        argmax: a.group.tuple_from_index(2, 0),
        histogram: BTreeMap::new(),
    };
    for (idx, value) in d.values().iter().enumerate() {
        let (lo, hi) = oracle.bracket(value)?;
        *report.histogram.entry((lo, hi)).or_insert(0) += 1;
        if hi > report.max_rank_upper {
            report.max_rank_upper = hi;
            report.argmax = a.group.tuple_from_index(2, idx);
        }
        report.max_rank_lower = report.max_rank_lower.max(lo);
    }
    Ok(report)
}

/// Conservative three-valued answer backed by rank brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trilean {
    True,
    False,
    Indeterminate,
}

/// Does the differential of `a` stay within rank `i`? True/False only when
/// certified by the bracket; a gap yields Indeterminate.
pub fn is_approx_cocycle(
    a: &Cochain,
    filtration: FiltrationTag,
    i: usize,
    oracle: &mut RankOracle,
) -> Result<Trilean> {
    let report = defect(a, filtration, oracle)?;
    Ok(if report.max_rank_upper <= i {
        Trilean::True
    } else if report.max_rank_lower > i {
        Trilean::False
    } else {
        Trilean::Indeterminate
    })
}

/// Is every value of r - dt within rank `i`?
pub fn is_approx_coboundary(
    r: &Cochain,
    t: &Cochain,
    i: usize,
    oracle: &mut RankOracle,
) -> Result<Trilean> {
    let residual = r.sub(&t.coboundary()?)?;
    let mut all_certified = true;
    for value in residual.values() {
        let (lo, hi) = oracle.bracket(value)?;
        if lo > i {
            return Ok(Trilean::False);
        }
        if hi > i {
            all_certified = false;
        }
    }
    Ok(if all_certified {
        Trilean::True
    } else {
        Trilean::Indeterminate
    })
}

/// Reduce an approximate translation-cocycle P at level i to a trivial-action
/// cochain of its top-degree parts; the output's defect is certified <= i+1.
pub fn top_degree_reduce(
    p: &Cochain,
    d: usize,
    i: usize,
    oracle: &mut RankOracle,
) -> Result<(Cochain, DefectReport)> {
    if p.degree != 1 || p.action != ActionTag::Translation {
        return Err(Error::Precondition(
            "expected a degree-1 translation-action cochain".into(),
        ));
    }
    let diff = p.coboundary()?;
    for value in diff.values() {
        let (_, hi) = oracle.bracket(value)?;
        if hi > i {
            return Err(Error::Precondition(format!(
                "input is not certified as an approximate cocycle at level {i} (value bracket upper {hi})"
            )));
        }
    }
    let reduced = Cochain::new(
        1,
        p.group,
        ActionTag::Trivial,
        p.values()
            .iter()
            .map(|v| v.top_degree(d))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let report = defect(
        &reduced,
        FiltrationTag {
            kind: FiltrationKind::Homogeneous,
            degree: d,
        },
        oracle,
    )?;
    if report.max_rank_upper > i + 1 {
        return Err(Error::Precondition(format!(
            "reduced defect {} exceeds certified bound {}",
            report.max_rank_upper,
            i + 1
        )));
    }
    Ok((reduced, report))
}

/// One term Q_j (x) R_j of a finite-rank decomposition: Q_j is the linear map
/// given by its images on the group generators, R_j the fixed cofactor.
#[derive(Debug, Clone)]
pub struct FiniteRankTerm {
    pub images: Vec<Poly>,
    pub cofactor: Poly,
}

#[derive(Debug, Clone)]
pub struct FiniteRankCertificate {
    pub terms: Vec<FiniteRankTerm>,
}

impl FiniteRankCertificate {
    /// Re-expand the decomposition on each generator and compare.
    pub fn validates(&self, images: &[Poly], p: PrimeModulus, nvars: usize) -> Result<bool> {
        for (i, target) in images.iter().enumerate() {
            let mut acc = Poly::zero(p, nvars);
            for term in &self.terms {
                acc = acc.add(&term.images[i].mul(&term.cofactor)?)?;
            }
            if &acc != target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Search for a decomposition chi = sum_j Q_j R_j of a linear map given by its
/// generator images (each homogeneous of degree d or zero). Terms are tried in
/// increasing count, each drawn from a canonically ordered candidate list, so
/// the smallest certificate is found first. A budget failure is not a
/// disproof.
pub fn finite_rank_test(
    images: &[Poly],
    d: usize,
    max_terms: usize,
    budget: &Budget,
) -> Result<Option<FiniteRankCertificate>> {
    if images.is_empty() {
        return Ok(Some(FiniteRankCertificate { terms: Vec::new() }));
    }
    let p = images[0].p();
    let nvars = images[0].nvars();
    for v in images {
        if !v.is_zero() && (!v.is_homogeneous() || v.degree() != d) {
            return Err(Error::NotHomogeneous);
        }
    }
    if images.iter().all(|v| v.is_zero()) {
        return Ok(Some(FiniteRankCertificate { terms: Vec::new() }));
    }

    // candidate terms: cofactor R of degree k (nonzero), images of degree d-k
    let mut candidates: Vec<FiniteRankTerm> = Vec::new();
    for k in 1..d {
        let cofactors: Vec<Poly> = homogeneous_polys(p, nvars, k)
            .into_iter()
            .filter(|r| !r.is_zero())
            .collect();
        let image_polys = homogeneous_polys(p, nvars, d - k);
        let mut combo = vec![0usize; images.len()];
        loop {
            let q_images: Vec<Poly> = combo.iter().map(|&i| image_polys[i].clone()).collect();
            if q_images.iter().any(|q| !q.is_zero()) {
                for r in &cofactors {
                    candidates.push(FiniteRankTerm {
                        images: q_images.clone(),
                        cofactor: r.clone(),
                    });
                }
            }
            let mut slot = combo.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                combo[slot] += 1;
                if combo[slot] < image_polys.len() {
                    break;
                }
                combo[slot] = 0;
            }
            if combo.iter().all(|&i| i == 0) {
                break;
            }
        }
    }

    let mut tried: u128 = 0;
    for t in 1..=max_terms {
        let mut pick = vec![0usize; t];
        'combos: loop {
            tried += 1;
            budget.check(tried)?;
            let cert = FiniteRankCertificate {
                terms: pick.iter().map(|&i| candidates[i].clone()).collect(),
            };
            if cert.validates(images, p, nvars)? {
                return Ok(Some(cert));
            }
            // next nondecreasing index tuple
            let mut slot = t;
            loop {
                if slot == 0 {
                    break 'combos;
                }
                slot -= 1;
                pick[slot] += 1;
                if pick[slot] < candidates.len() {
                    for j in slot + 1..t {
                        pick[j] = pick[slot];
                    }
                    break;
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::parse_poly;

    fn fp(p: u32) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(text: &str) -> Poly {
        parse_poly(text).unwrap()
    }

    fn a2(d: usize) -> FiltrationTag {
        FiltrationTag {
            kind: FiltrationKind::Homogeneous,
            degree: d,
        }
    }

    fn oracle() -> RankOracle {
        RankOracle::new(2, Budget::default())
    }

    /// Linear cochain e_i -> images[i], extended additively.
    fn linear_cochain(group: GroupSpec, images: &[Poly]) -> Cochain {
        let nvars = images[0].nvars();
        Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            let v = &t[0];
            let mut acc = Poly::zero(group.p, nvars);
            for (i, img) in images.iter().enumerate() {
                acc = acc.add(&img.scale(v.coords[i])).unwrap();
            }
            acc
        })
        .unwrap()
    }

    #[test]
    fn coboundary_of_homomorphism_vanishes() {
        let group = GroupSpec::new(fp(3), 2);
        let a = linear_cochain(
            group,
            &[poly("p=3 n=2 d=2\nx0^2"), poly("p=3 n=2 d=2\nx0*x1")],
        );
        let d = a.coboundary().unwrap();
        assert!(d.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn coboundary_of_constant_is_the_constant() {
        let group = GroupSpec::new(fp(3), 1);
        let q = poly("p=3 n=2 d=2\nx0^2 + x1");
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |_| q.clone()).unwrap();
        let d = a.coboundary().unwrap();
        // bar signs give c(g2) - c(g1+g2) + c(g1) = +Q
        assert!(d.values().iter().all(|v| v == &q));
    }

    #[test]
    fn dd_is_zero_for_both_actions() {
        let group = GroupSpec::new(fp(2), 2);
        let vals = [
            "p=2 n=2 d=2\nx0*x1",
            "p=2 n=2 d=2\nx0^2 + x1",
            "p=2 n=2 d=2\nx1^2 + x0*x1",
            "p=2 n=2 d=1\nx0 + 1",
        ];
        for action in [ActionTag::Trivial, ActionTag::Translation] {
            let c = Cochain::new(
                1,
                group,
                action,
                vals.iter().map(|t| poly(t)).collect(),
            )
            .unwrap();
            let dd = c.coboundary().unwrap().coboundary().unwrap();
            assert!(dd.values().iter().all(|v| v.is_zero()), "{action:?}");
        }
    }

    #[test]
    fn bar_signs_are_rank_equivalent_to_the_plain_convention() {
        let group = GroupSpec::new(fp(3), 1);
        let a = Cochain::new(
            1,
            group,
            ActionTag::Trivial,
            vec![
                poly("p=3 n=2 d=2\nx0^2"),
                poly("p=3 n=2 d=2\nx0*x1 + x1^2"),
                poly("p=3 n=2 d=2\n2*x1^2"),
            ],
        )
        .unwrap();
        let d = a.coboundary().unwrap();
        let mut oracle = oracle();
        for (idx, value) in d.values().iter().enumerate() {
            let t = group.tuple_from_index(2, idx);
            let plain = a
                .value(&[t[0].add(&t[1]).unwrap()])
                .sub(a.value(&t[..1]))
                .unwrap()
                .sub(a.value(&t[1..]))
                .unwrap();
            assert_eq!(plain.neg(), *value);
            assert_eq!(
                oracle.bracket(&plain).unwrap(),
                oracle.bracket(value).unwrap()
            );
        }
    }

    #[test]
    fn defect_of_linear_cochain_is_zero() {
        let group = GroupSpec::new(fp(2), 2);
        let a = linear_cochain(
            group,
            &[poly("p=2 n=2 d=2\nx0*x1"), poly("p=2 n=2 d=2\nx0^2")],
        );
        let report = defect(&a, a2(2), &mut oracle()).unwrap();
        assert_eq!(report.max_rank_upper, 0);
        assert_eq!(report.histogram.values().sum::<u64>(), 16);
    }

    #[test]
    fn single_corruption_shows_only_at_involved_pairs() {
        let group = GroupSpec::new(fp(2), 2);
        let noise = poly("p=2 n=3 d=2\nx0*x1");
        let v0 = group.element(3);
        let base = poly("p=2 n=3 d=2\nx2^2");
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            let mut val = base.scale(t[0].coords[0]);
            if t[0] == v0 {
                val = val.add(&noise).unwrap();
            }
            val
        })
        .unwrap();
        let report = defect(&a, a2(2), &mut oracle()).unwrap();
        assert_eq!(report.max_rank_upper, 1);
        let d = a.coboundary().unwrap();
        for (idx, value) in d.values().iter().enumerate() {
            let t = group.tuple_from_index(2, idx);
            let involved =
                t[0] == v0 || t[1] == v0 || t[0].add(&t[1]).unwrap() == v0;
            if !value.is_zero() {
                assert!(involved, "unexpected defect at {t:?}");
            }
        }
    }

    #[test]
    fn defect_invariant_under_adding_a_homomorphism() {
        let group = GroupSpec::new(fp(2), 2);
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            if t[0].index() == 1 {
                poly("p=2 n=2 d=2\nx0*x1")
            } else {
                Poly::zero(fp(2), 2)
            }
        })
        .unwrap();
        let chi = linear_cochain(
            group,
            &[poly("p=2 n=2 d=2\nx0^2"), poly("p=2 n=2 d=2\nx1^2")],
        );
        let mut o = oracle();
        let r1 = defect(&a, a2(2), &mut o).unwrap();
        let r2 = defect(&a.add(&chi).unwrap(), a2(2), &mut o).unwrap();
        assert_eq!(r1.histogram, r2.histogram);
    }

    #[test]
    fn cocycle_predicate_uses_certified_brackets() {
        // single corrupted value of certified rank 2 at p=3
        let group = GroupSpec::new(fp(3), 1);
        let rank2 = poly("p=3 n=4 d=2\nx0*x1 + x2*x3");
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            if t[0].index() == 1 {
                rank2.clone()
            } else {
                Poly::zero(fp(3), 4)
            }
        })
        .unwrap();
        let mut o = oracle();
        assert_eq!(is_approx_cocycle(&a, a2(2), 1, &mut o).unwrap(), Trilean::False);
        assert_eq!(is_approx_cocycle(&a, a2(2), 2, &mut o).unwrap(), Trilean::True);
        assert_eq!(is_approx_cocycle(&a, a2(2), 3, &mut o).unwrap(), Trilean::True);
    }

    #[test]
    fn coboundary_predicate() {
        let group = GroupSpec::new(fp(3), 1);
        let t0 = Cochain::from_fn(0, group, ActionTag::Trivial, |_| {
            poly("p=3 n=2 d=2\nx0^2 + x0*x1")
        })
        .unwrap();
        let r = t0.coboundary().unwrap();
        let mut o = oracle();
        assert_eq!(is_approx_coboundary(&r, &t0, 0, &mut o).unwrap(), Trilean::True);
        // perturb by a constant rank-1 value
        let perturbed = r
            .add(
                &Cochain::from_fn(1, group, ActionTag::Trivial, |_| {
                    poly("p=3 n=2 d=2\nx1^2")
                })
                .unwrap(),
            )
            .unwrap();
        assert_eq!(
            is_approx_coboundary(&perturbed, &t0, 2, &mut o).unwrap(),
            Trilean::True
        );
        assert_eq!(
            is_approx_coboundary(&perturbed, &t0, 0, &mut o).unwrap(),
            Trilean::False
        );
    }

    #[test]
    fn translation_cocycle_reduces_with_small_defect() {
        // P(v) = Q(x + v) for a fixed quadratic Q over F_5, s = n = 1
        let group = GroupSpec::new(fp(5), 1);
        let q = poly("p=5 n=1 d=2\nx0^2 + 3*x0");
        let p = Cochain::from_fn(1, group, ActionTag::Translation, |t| {
            q.shift(&t[0]).unwrap()
        })
        .unwrap();
        let mut o = oracle();
        let (reduced, report) = top_degree_reduce(&p, 2, 1, &mut o).unwrap();
        assert!(report.max_rank_upper <= 1);
        assert!(reduced.values().iter().all(|v| v == &poly("p=5 n=1 d=2\nx0^2")));
    }

    #[test]
    fn top_degree_reduce_of_zero_and_linear_values() {
        let group = GroupSpec::new(fp(5), 1);
        let zero = Cochain::from_fn(1, group, ActionTag::Translation, |_| {
            Poly::zero(fp(5), 1)
        })
        .unwrap();
        let mut o = oracle();
        let (r, report) = top_degree_reduce(&zero, 2, 0, &mut o).unwrap();
        assert!(r.values().iter().all(|v| v.is_zero()));
        assert_eq!(report.max_rank_upper, 0);

        let linear = Cochain::from_fn(1, group, ActionTag::Translation, |t| {
            Poly::variable(fp(5), 1, 0).scale(t[0].coords[0])
        })
        .unwrap();
        let (r, report) = top_degree_reduce(&linear, 2, 1, &mut o).unwrap();
        assert!(r.values().iter().all(|v| v.is_zero()));
        assert_eq!(report.max_rank_upper, 0);
    }

    #[test]
    fn finite_rank_search_finds_single_term() {
        // chi(e_0) = x0 * R, chi(e_1) = 0 for the fixed linear cofactor R
        let images = vec![poly("p=2 n=2 d=2\nx0^2 + x0*x1"), Poly::zero(fp(2), 2)];
        let cert = finite_rank_test(&images, 2, 2, &Budget::default())
            .unwrap()
            .expect("certificate");
        assert_eq!(cert.terms.len(), 1);
        assert!(cert.validates(&images, fp(2), 2).unwrap());
    }

    #[test]
    fn finite_rank_search_zero_map() {
        let images = vec![Poly::zero(fp(2), 2), Poly::zero(fp(2), 2)];
        let cert = finite_rank_test(&images, 2, 1, &Budget::default())
            .unwrap()
            .expect("certificate");
        assert!(cert.terms.is_empty());
    }

    #[test]
    fn finite_rank_search_rank_one_values() {
        // all images of rank <= 1 at p = 2, d = 2, s = n = 2
        let images = vec![poly("p=2 n=2 d=2\nx0^2"), poly("p=2 n=2 d=2\nx0*x1")];
        let cert = finite_rank_test(&images, 2, 2, &Budget::default())
            .unwrap()
            .expect("certificate");
        assert!(cert.validates(&images, fp(2), 2).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let group = GroupSpec::new(fp(2), 2);
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            poly("p=2 n=2 d=2\nx0*x1").scale(t[0].coords[0])
        })
        .unwrap();
        let text = a.to_json();
        let back = Cochain::from_json(&text).unwrap();
        assert_eq!(a, back);
    }
}
