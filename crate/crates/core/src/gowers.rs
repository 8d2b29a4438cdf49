//! Exact Gowers U^m norms of phase functions, iterated differences, and the
//! nonclassical degree checker for torsion-valued tables.
//!
//! All averages are integer residue counts; reals are derived only at the
//! boundary, so cross-algorithm agreement is asserted on counts.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::budget::{pow_points, Budget};
use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::ffpoly::{
    multilinearize, CharacterSum, FieldVector, MultilinearForm, Poly, PrimeModulus,
};

/// A function F_p^n -> Z/p^k given as a complete value table in lexicographic
/// point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueTable {
    pub p: PrimeModulus,
    pub n: usize,
    pub k: u32,
    pub values: Vec<u32>,
}

impl ValueTable {
    pub fn new(p: PrimeModulus, n: usize, k: u32, values: Vec<u32>) -> Result<Self> {
        let expected = (p.get() as usize).pow(n as u32);
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        if k == 0 {
            return Err(Error::Precondition("torsion exponent k must be >= 1".into()));
        }
        let modulus = p.get().pow(k);
        Ok(ValueTable {
            p,
            n,
            k,
            values: values.into_iter().map(|v| v % modulus).collect(),
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p.get().pow(self.k)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Index of v + h for each point index v, as a permutation table.
    fn shift_permutation(&self, h: &FieldVector) -> Vec<usize> {
        (0..self.values.len())
            .map(|i| {
                FieldVector::from_index(self.p, self.n, i)
                    .add(h)
                    .expect("matching domain")
                    .index()
            })
            .collect()
    }

    /// The difference table v -> f(v + h) - f(v) mod p^k.
    pub fn delta(&self, h: &FieldVector) -> Result<ValueTable> {
        let modulus = self.modulus();
        let perm = self.shift_permutation(h);
        let values = (0..self.values.len())
            .map(|i| (modulus + self.values[perm[i]] - self.values[i]) % modulus)
            .collect();
        ValueTable::new(self.p, self.n, self.k, values)
    }
}

/// The phase f = psi(F): either a symbolic polynomial carrier (k = 1) or an
/// explicit torsion value table.
#[derive(Debug, Clone)]
pub enum PhaseFunction {
    Carrier(Poly),
    Table(ValueTable),
}

impl PhaseFunction {
    pub fn p(&self) -> PrimeModulus {
        match self {
            PhaseFunction::Carrier(f) => f.p(),
            PhaseFunction::Table(t) => t.p,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            PhaseFunction::Carrier(f) => f.nvars(),
            PhaseFunction::Table(t) => t.n,
        }
    }

    pub fn modulus(&self) -> u32 {
        match self {
            PhaseFunction::Carrier(f) => f.p().get(),
            PhaseFunction::Table(t) => t.modulus(),
        }
    }

    pub fn to_table(&self, budget: &Budget) -> Result<ValueTable> {
        match self {
            PhaseFunction::Table(t) => Ok(t.clone()),
            PhaseFunction::Carrier(f) => {
                let p = f.p();
                let n = f.nvars();
                budget.check(pow_points(p.get(), n))?;
                let values = (0..(p.get() as usize).pow(n as u32))
                    .map(|i| f.eval(&FieldVector::from_index(p, n, i)))
                    .collect::<Result<Vec<_>>>()?;
                ValueTable::new(p, n, 1, values)
            }
        }
    }
}

/// Delta_{dirs_m} ... Delta_{dirs_1} F, symbolically for a polynomial carrier
/// and by table differences otherwise.
pub fn iterated_delta(f: &PhaseFunction, dirs: &[FieldVector]) -> Result<PhaseFunction> {
    match f {
        PhaseFunction::Carrier(poly) => {
            let mut cur = poly.clone();
            for h in dirs {
                cur = cur.delta(h)?;
            }
            Ok(PhaseFunction::Carrier(cur))
        }
        PhaseFunction::Table(table) => {
            let mut cur = table.clone();
            for h in dirs {
                if h.len() != cur.n {
                    return Err(Error::DimensionMismatch {
                        expected: cur.n,
                        got: h.len(),
                    });
                }
                cur = cur.delta(h)?;
            }
            Ok(PhaseFunction::Table(cur))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Naive,
    Derivative,
}

/// ||psi(F)||_{U^m}: residue counts of the m-fold iterated difference over
/// the full (v, v_1..v_m) domain, plus the derived real norm.
#[derive(Debug, Clone)]
pub struct GowersResult {
    pub m: usize,
    pub counts: CharacterSum,
    pub value: f64,
}

impl GowersResult {
    /// The 2^m-th power of the norm as a derived real; exact rational data
    /// lives in `counts`.
    pub fn raw_power(&self) -> f64 {
        self.counts.real_value()
    }

    fn from_counts(m: usize, counts: CharacterSum) -> GowersResult {
        let raw = counts.real_value().max(0.0);
        let value = raw.powf(1.0 / (1u64 << m) as f64);
        GowersResult { m, counts, value }
    }
}

pub fn gowers_norm(
    f: &PhaseFunction,
    m: usize,
    algorithm: Algorithm,
    budget: &Budget,
) -> Result<GowersResult> {
    if m == 0 {
        return Err(Error::Precondition("Gowers norm needs m >= 1".into()));
    }
    let p = f.p();
    let n = f.n();
    budget.check(pow_points(p.get(), n * (m + 1)))?;
    let counts = match algorithm {
        Algorithm::Naive => naive_counts(&f.to_table(budget)?, m),
        Algorithm::Derivative => {
            let poly = match f {
                PhaseFunction::Carrier(poly) => poly,
                PhaseFunction::Table(_) => {
                    return Err(Error::Precondition(
                        "derivative algorithm needs a polynomial carrier".into(),
                    ))
                }
            };
            derivative_counts(poly, m, budget)?
        }
    };
    Ok(GowersResult::from_counts(m, counts))
}

/// Full enumeration over direction tuples; the outermost direction is the
/// parallel partition and partial counts merge additively.
fn naive_counts(table: &ValueTable, m: usize) -> CharacterSum {
    let p = table.p;
    let n = table.n;
    let domain = (p.get() as usize).pow(n as u32);
    (0..domain)
        .into_par_iter()
        .map(|first| {
            let h = FieldVector::from_index(p, n, first);
            let mut cs = CharacterSum::new(table.modulus());
            naive_rec(&table.delta(&h).expect("same domain"), m - 1, &mut cs);
            cs
        })
        .reduce(
            || CharacterSum::new(table.modulus()),
            |a, b| a.merge(&b),
        )
}

fn naive_rec(table: &ValueTable, left: usize, cs: &mut CharacterSum) {
    if left == 0 {
        for &v in &table.values {
            cs.record(v);
        }
        return;
    }
    let p = table.p;
    let domain = (p.get() as usize).pow(table.n as u32);
    for i in 0..domain {
        let h = FieldVector::from_index(p, table.n, i);
        naive_rec(&table.delta(&h).expect("same domain"), left - 1, cs);
    }
}

/// Symbolic variant: group direction tuples by the derived polynomial they
/// produce (canonical form), then take each distinct polynomial's bias once.
fn derivative_counts(poly: &Poly, m: usize, budget: &Budget) -> Result<CharacterSum> {
    let p = poly.p();
    let n = poly.nvars();
    let domain = (p.get() as usize).pow(n as u32);
    let mut level: HashMap<Vec<u8>, (Poly, u64)> = HashMap::new();
    level.insert(poly.canonical_key(), (poly.clone(), 1));
    for _ in 0..m {
        let mut next: HashMap<Vec<u8>, (Poly, u64)> = HashMap::new();
        for (q, count) in level.values() {
            for i in 0..domain {
                let h = FieldVector::from_index(p, n, i);
                let dq = q.delta(&h)?;
                let entry = next.entry(dq.canonical_key()).or_insert((dq, 0));
                entry.1 += count;
            }
        }
        level = next;
    }
    let mut total = CharacterSum::new(p.get());
    let mut bias_memo: HashMap<Vec<u8>, CharacterSum> = HashMap::new();
    // deterministic accumulation order
    let mut entries: Vec<_> = level.into_iter().collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    for (key, (q, count)) in entries {
        let bias = match bias_memo.get(&key) {
            Some(b) => b.clone(),
            None => {
                let b = q.bias(budget)?;
                bias_memo.insert(key, b.clone());
                b
            }
        };
        for (slot, &c) in bias.counts.iter().enumerate() {
            total.counts[slot] += c * count;
        }
        total.total += bias.total * count;
    }
    Ok(total)
}

/// Least d <= max_d such that every (d+1)-fold difference of the table
/// vanishes identically; None when the bound is exceeded.
pub fn delta_degree(
    table: &ValueTable,
    max_d: usize,
    budget: &Budget,
) -> Result<Option<usize>> {
    let p = table.p;
    let domain = (p.get() as usize).pow(table.n as u32);
    let mut level: Vec<ValueTable> = vec![table.clone()];
    for d in 0..=max_d {
        budget.check(level.len() as u128 * domain as u128 * domain as u128)?;
        let mut next: HashMap<Vec<u32>, ValueTable> = HashMap::new();
        for t in &level {
            for i in 0..domain {
                let h = FieldVector::from_index(p, table.n, i);
                let dt = t.delta(&h)?;
                next.entry(dt.values.clone()).or_insert(dt);
            }
        }
        if next.values().all(|t| t.is_zero()) {
            return Ok(Some(d));
        }
        level = next.into_values().collect();
        level.sort_by(|a, b| a.values.cmp(&b.values));
    }
    Ok(None)
}

/// Build the phase on V x W^d from the multilinearized values of a degree-1
/// cochain: f(v, x_1..x_d) = psi(multilinearize(A(v))(x_1..x_d)). Block
/// coordinates are flattened into a single point, v most significant.
pub fn cocycle_phase(a: &Cochain, d: usize, budget: &Budget) -> Result<PhaseFunction> {
    if a.degree != 1 {
        return Err(Error::Precondition("cocycle phase needs a 1-cochain".into()));
    }
    let p = a.group.p;
    let w = a.nvars();
    for value in a.values() {
        if !value.is_zero() && (!value.is_homogeneous() || value.degree() != d) {
            return Err(Error::NotHomogeneous);
        }
    }
    let forms: Vec<MultilinearForm> = a
        .values()
        .iter()
        .map(|v| {
            if v.is_zero() {
                Ok(MultilinearForm::zero(p, d, w))
            } else {
                multilinearize(v)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let n_total = a.group.s + d * w;
    budget.check(pow_points(p.get(), n_total))?;
    let block_count = (p.get() as usize).pow((d * w) as u32);
    let mut values = Vec::with_capacity((p.get() as usize).pow(n_total as u32));
    for v_idx in 0..a.group.order() {
        let form = &forms[v_idx];
        for x_idx in 0..block_count {
            let flat = FieldVector::from_index(p, d * w, x_idx);
            let blocks: Vec<FieldVector> = (0..d)
                .map(|b| {
                    FieldVector::new(p, flat.coords[b * w..(b + 1) * w].to_vec())
                })
                .collect();
            values.push(form.eval(&blocks)?);
        }
    }
    Ok(PhaseFunction::Table(ValueTable::new(p, n_total, 1, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{ActionTag, GroupSpec};
    use crate::ffpoly::parse_poly;

    fn fp(p: u32) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn phase(text: &str) -> PhaseFunction {
        PhaseFunction::Carrier(parse_poly(text).unwrap())
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn linear_phase_has_norm_one_at_m_two() {
        let f = phase("p=5 n=1 d=1\n2*x0 + 1");
        let res = gowers_norm(&f, 2, Algorithm::Naive, &budget()).unwrap();
        // all second differences vanish, so every residue is 0
        assert_eq!(res.counts.counts[0], res.counts.total);
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_d_phase_has_norm_one_at_m_d_plus_one() {
        let f = phase("p=5 n=1 d=3\nx0^3 + 2*x0");
        let res = gowers_norm(&f, 4, Algorithm::Derivative, &budget()).unwrap();
        assert_eq!(res.counts.counts[0], res.counts.total);
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_phase_over_f2_both_algorithms() {
        let f = phase("p=2 n=2 d=2\nx0*x1");
        let naive = gowers_norm(&f, 2, Algorithm::Naive, &budget()).unwrap();
        let deriv = gowers_norm(&f, 2, Algorithm::Derivative, &budget()).unwrap();
        assert_eq!(naive.counts, deriv.counts);
        // U^2 power of (-1)^{x0 x1} is 1/4: counts (40, 24) over 2^6 points
        assert_eq!(naive.counts.rational_value_mod2(), Some((16, 64)));
    }

    #[test]
    fn algorithms_agree_on_a_cubic_over_f3() {
        let f = phase("p=3 n=2 d=3\nx0^3 + x0*x1 + 2*x1^2");
        for m in 1..=3 {
            let naive = gowers_norm(&f, m, Algorithm::Naive, &budget()).unwrap();
            let deriv = gowers_norm(&f, m, Algorithm::Derivative, &budget()).unwrap();
            assert_eq!(naive.counts, deriv.counts, "m={m}");
        }
    }

    #[test]
    fn norm_is_monotone_in_m() {
        let f = phase("p=3 n=2 d=2\nx0^2 + x0*x1");
        let mut prev = 0.0;
        for m in 1..=4 {
            let res = gowers_norm(&f, m, Algorithm::Naive, &budget()).unwrap();
            assert!(res.counts.is_real(1e-9));
            assert!(res.value + 1e-9 >= prev, "m={m}");
            prev = res.value;
        }
    }

    #[test]
    fn m_zero_rejected() {
        let f = phase("p=2 n=1 d=1\nx0");
        assert!(gowers_norm(&f, 0, Algorithm::Naive, &budget()).is_err());
    }

    #[test]
    fn iterated_delta_examples() {
        let f = phase("p=5 n=1 d=2\nx0^2");
        // empty direction list is the identity
        match iterated_delta(&f, &[]).unwrap() {
            PhaseFunction::Carrier(poly) => {
                assert_eq!(poly, parse_poly("p=5 n=1 d=2\nx0^2").unwrap())
            }
            _ => panic!("expected carrier"),
        }
        // two differences in direction 1 give the constant 2
        let one = FieldVector::new(fp(5), vec![1]);
        match iterated_delta(&f, &[one.clone(), one]).unwrap() {
            PhaseFunction::Carrier(poly) => {
                assert_eq!(poly, Poly::constant(fp(5), 1, 2))
            }
            _ => panic!("expected carrier"),
        }
        // a zero direction kills everything
        let zero = FieldVector::zero(fp(5), 1);
        match iterated_delta(&f, &[zero]).unwrap() {
            PhaseFunction::Carrier(poly) => assert!(poly.is_zero()),
            _ => panic!("expected carrier"),
        }
    }

    #[test]
    fn table_and_symbolic_deltas_agree() {
        let poly = parse_poly("p=3 n=2 d=3\nx0^2*x1 + 2*x0").unwrap();
        let f = PhaseFunction::Carrier(poly.clone());
        let dirs = vec![
            FieldVector::new(fp(3), vec![1, 2]),
            FieldVector::new(fp(3), vec![0, 1]),
        ];
        let symbolic = iterated_delta(&f, &dirs).unwrap();
        let table_in = PhaseFunction::Table(f.to_table(&budget()).unwrap());
        let tabular = iterated_delta(&table_in, &dirs).unwrap();
        assert_eq!(
            symbolic.to_table(&budget()).unwrap(),
            tabular.to_table(&budget()).unwrap()
        );
    }

    #[test]
    fn delta_degree_of_constants_and_classical_polys() {
        let constant = ValueTable::new(fp(3), 1, 1, vec![2, 2, 2]).unwrap();
        assert_eq!(delta_degree(&constant, 3, &budget()).unwrap(), Some(0));

        for (text, want) in [
            ("p=3 n=2 d=1\nx0 + 2*x1", 1),
            ("p=3 n=2 d=2\nx0*x1", 2),
            ("p=5 n=1 d=3\nx0^3", 3),
        ] {
            let f = phase(text);
            let table = f.to_table(&budget()).unwrap();
            assert_eq!(
                delta_degree(&table, 4, &budget()).unwrap(),
                Some(want),
                "{text}"
            );
        }
    }

    #[test]
    fn nonclassical_lift_over_f2_has_degree_two() {
        // x -> lift(x) in Z/4 on F_2
        let table = ValueTable::new(fp(2), 1, 2, vec![0, 1]).unwrap();
        assert_eq!(delta_degree(&table, 4, &budget()).unwrap(), Some(2));
    }

    #[test]
    fn delta_degree_bound_exceeded() {
        let f = phase("p=5 n=1 d=3\nx0^3");
        let table = f.to_table(&budget()).unwrap();
        assert_eq!(delta_degree(&table, 2, &budget()).unwrap(), None);
    }

    #[test]
    fn norm_one_iff_low_delta_degree_exhaustive_f2() {
        // all 16 functions F_2^2 -> F_2
        let p = fp(2);
        for bits in 0u32..16 {
            let values: Vec<u32> = (0..4).map(|i| (bits >> i) & 1).collect();
            let table = ValueTable::new(p, 2, 1, values).unwrap();
            let deg = delta_degree(&table, 4, &budget()).unwrap().unwrap();
            for m in 1..=3usize {
                let res = gowers_norm(
                    &PhaseFunction::Table(table.clone()),
                    m,
                    Algorithm::Naive,
                    &budget(),
                )
                .unwrap();
                let is_one = res.counts.counts[0] == res.counts.total;
                assert_eq!(is_one, deg <= m - 1, "bits={bits} m={m} deg={deg}");
            }
        }
    }

    #[test]
    fn zero_cochain_phase_is_constant_one() {
        let group = GroupSpec::new(fp(2), 1);
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |_| Poly::zero(fp(2), 1))
            .unwrap();
        let f = cocycle_phase(&a, 2, &budget()).unwrap();
        match &f {
            PhaseFunction::Table(t) => assert!(t.is_zero()),
            _ => panic!("expected table"),
        }
        let res = gowers_norm(&f, 4, Algorithm::Naive, &budget()).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_linear_cochain_phase_has_positive_u4_power() {
        // A linear in v with rank-<=1 quadratic values at p = 2, one variable
        // per block
        let group = GroupSpec::new(fp(2), 1);
        let q = parse_poly("p=2 n=1 d=2\nx0^2").unwrap();
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            q.scale(t[0].coords[0])
        })
        .unwrap();
        let f = cocycle_phase(&a, 2, &budget()).unwrap();
        let res = gowers_norm(&f, 4, Algorithm::Naive, &budget()).unwrap();
        let (num, _den) = res.counts.rational_value_mod2().unwrap();
        assert!(num > 0, "raw power should be strictly positive");
    }

    #[test]
    fn bounded_rank_linear_cochains_have_positive_average_bias() {
        // every linear chi with rank <= 1 values has strictly positive
        // average multilinearized bias over v
        let group = GroupSpec::new(fp(2), 2);
        let images = [
            parse_poly("p=2 n=2 d=2\nx0*x1").unwrap(),
            parse_poly("p=2 n=2 d=2\nx0^2 + x0*x1").unwrap(),
        ];
        let a = Cochain::from_fn(1, group, ActionTag::Trivial, |t| {
            let mut acc = Poly::zero(fp(2), 2);
            for (i, img) in images.iter().enumerate() {
                acc = acc.add(&img.scale(t[0].coords[i])).unwrap();
            }
            acc
        })
        .unwrap();
        let mut num_sum = 0i64;
        for value in a.values() {
            let form = multilinearize(value).unwrap();
            let cs = form.bias(&budget()).unwrap();
            let (num, _) = cs.rational_value_mod2().unwrap();
            num_sum += num;
        }
        assert!(num_sum > 0);
    }
}
