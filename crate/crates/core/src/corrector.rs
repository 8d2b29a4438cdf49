//! Correcting-homomorphism search: exhaustive minimax, seeded greedy descent,
//! the rank-1 cyclic-group algorithm, test-instance synthesis and the
//! minimax-growth experiment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::cohomology::{defect, ActionTag, Cochain, DefectReport, FiltrationKind, FiltrationTag, GroupSpec};
use crate::error::{Error, Result};
use crate::ffpoly::{monomials_of_degree, FieldVector, Poly, PrimeModulus};
use crate::matrix::Matrix;
use crate::rank::{decomposition_certificate, RankCertificate, RankOracle};

/// A homomorphism chi: G -> M given by its images on the standard generators
/// and extended linearly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub group: GroupSpec,
    pub images: Vec<Poly>,
}

impl LinearMap {
    pub fn new(group: GroupSpec, images: Vec<Poly>) -> Result<Self> {
        if images.len() != group.s {
            return Err(Error::DimensionMismatch {
                expected: group.s,
                got: images.len(),
            });
        }
        Ok(LinearMap { group, images })
    }

    pub fn eval(&self, v: &FieldVector) -> Result<Poly> {
        let nvars = self.images.first().map(|q| q.nvars()).unwrap_or(0);
        let mut acc = Poly::zero(self.group.p, nvars);
        for (i, img) in self.images.iter().enumerate() {
            acc = acc.add(&img.scale(v.coords[i]))?;
        }
        Ok(acc)
    }

    pub fn to_cochain(&self) -> Result<Cochain> {
        Cochain::from_fn(1, self.group, ActionTag::Trivial, |t| {
            self.eval(&t[0]).expect("generator images share shape")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionMethod {
    Exhaustive,
    Greedy,
    CyclicRank1,
}

#[derive(Debug, Clone)]
pub struct CorrectionResult {
    pub chi: LinearMap,
    /// max over v of the certified rank upper bound of A(v) - chi(v).
    pub distance: usize,
    pub method: CorrectionMethod,
    pub optimal: bool,
}

/// Coefficient-vector arithmetic on the canonical enumeration of homogeneous
/// degree-d polynomials: an index is the base-p digit string of the
/// coefficients over the lexicographic monomial list.
struct HomSpace {
    p: PrimeModulus,
    nvars: usize,
    d: usize,
    mons: usize,
    size: u64,
}

impl HomSpace {
    fn new(p: PrimeModulus, nvars: usize, d: usize) -> Self {
        let mons = monomials_of_degree(nvars, d).len();
        HomSpace {
            p,
            nvars,
            d,
            mons,
            size: (p.get() as u64).pow(mons as u32),
        }
    }

    fn poly(&self, mut idx: u64) -> Poly {
        let mons = monomials_of_degree(self.nvars, self.d);
        let mut poly = Poly::zero(self.p, self.nvars);
        for m in mons {
            let c = (idx % self.p.get() as u64) as u32;
            idx /= self.p.get() as u64;
            if c != 0 {
                poly.add_term(m, c);
            }
        }
        poly
    }

    fn index_of(&self, poly: &Poly) -> u64 {
        let mons = monomials_of_degree(self.nvars, self.d);
        let mut idx = 0u64;
        for m in mons.iter().rev() {
            idx = idx * self.p.get() as u64 + poly.coefficient(m) as u64;
        }
        idx
    }

    fn add_scaled(&self, a: u64, b: u64, c: u32) -> u64 {
        let p = self.p.get() as u64;
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.mons {
            let digit = (a % p + (b % p) * c as u64) % p;
            out += digit * mult;
            mult *= p;
            a /= p;
            b /= p;
        }
        out
    }
}

/// Per-(group element, candidate image) certified rank upper bounds of the
/// residual A(v) - q, precomputed so candidate evaluation is table lookup.
struct ResidualTable {
    space: HomSpace,
    group: GroupSpec,
    uppers: Vec<Vec<usize>>,
}

impl ResidualTable {
    fn build(a: &Cochain, d: usize, oracle: &mut RankOracle) -> Result<Self> {
        let group = a.group;
        let space = HomSpace::new(group.p, a.nvars(), d);
        let mut uppers = Vec::with_capacity(group.order());
        for v_idx in 0..group.order() {
            let value = &a.values()[v_idx];
            let mut row = Vec::with_capacity(space.size as usize);
            for q_idx in 0..space.size {
                let residual = value.sub(&space.poly(q_idx))?;
                row.push(oracle.upper(&residual)?);
            }
            uppers.push(row);
        }
        Ok(ResidualTable {
            space,
            group,
            uppers,
        })
    }

    /// Distance of the candidate given by generator image indices.
    fn distance(&self, images: &[u64]) -> usize {
        let mut worst = 0;
        for v_idx in 0..self.group.order() {
            let v = self.group.element(v_idx);
            let mut chi_idx = 0u64;
            for (i, &img) in images.iter().enumerate() {
                chi_idx = self.space.add_scaled(chi_idx, img, v.coords[i]);
            }
            worst = worst.max(self.uppers[v_idx][chi_idx as usize]);
        }
        worst
    }
}

fn check_trivial_degree_one(a: &Cochain) -> Result<()> {
    if a.degree != 1 || a.action != ActionTag::Trivial {
        return Err(Error::Precondition(
            "correction expects a degree-1 trivial-action cochain".into(),
        ));
    }
    Ok(())
}

/// Exact minimax over all linear chi with homogeneous degree-d images;
/// candidates evaluate in parallel and the minimum is taken by (distance,
/// canonical candidate index).
pub fn minimax_correct(a: &Cochain, d: usize, oracle: &mut RankOracle) -> Result<CorrectionResult> {
    check_trivial_degree_one(a)?;
    let table = ResidualTable::build(a, d, oracle)?;
    let s = a.group.s;
    let candidates = (table.space.size as u128).pow(s as u32);
    oracle
        .budget
        .check(candidates * a.group.order() as u128)?;
    let (best_dist, best_combo) = (0..candidates as u64)
        .into_par_iter()
        .map(|combo| {
            let images = combo_images(combo, table.space.size, s);
            (table.distance(&images), combo)
        })
        .reduce(
            || (usize::MAX, u64::MAX),
            |a, b| if b < a { b } else { a },
        );
    let images: Vec<Poly> = combo_images(best_combo, table.space.size, s)
        .into_iter()
        .map(|i| table.space.poly(i))
        .collect();
    let chi = LinearMap::new(a.group, images)?;
    let verified = verify_distance(a, &chi, oracle)?;
    debug_assert_eq!(verified, best_dist);
    Ok(CorrectionResult {
        chi,
        distance: verified,
        method: CorrectionMethod::Exhaustive,
        optimal: true,
    })
}

fn combo_images(mut combo: u64, size: u64, s: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(s);
    for _ in 0..s {
        out.push(combo % size);
        combo /= size;
    }
    out
}

/// Re-check a correction by bracketing every residual from the polynomials.
pub fn verify_distance(a: &Cochain, chi: &LinearMap, oracle: &mut RankOracle) -> Result<usize> {
    let mut worst = 0;
    for v_idx in 0..a.group.order() {
        let v = a.group.element(v_idx);
        let residual = a.values()[v_idx].sub(&chi.eval(&v)?)?;
        worst = worst.max(oracle.upper(&residual)?);
    }
    Ok(worst)
}

/// Seeded coordinate descent over the generator images with random restarts;
/// deterministic for a fixed seed, never reported as optimal.
pub fn greedy_correct(
    a: &Cochain,
    d: usize,
    seed: u64,
    iterations: usize,
    restarts: usize,
    oracle: &mut RankOracle,
) -> Result<CorrectionResult> {
    check_trivial_degree_one(a)?;
    let table = ResidualTable::build(a, d, oracle)?;
    let s = a.group.s;
    // start from the top-degree parts of the generator images
    let init: Vec<u64> = (0..s)
        .map(|i| {
            let v = a.group.generator(i);
            table
                .space
                .index_of(&a.values()[v.index()].homogeneous_component(d))
        })
        .collect();
    let mut starts = vec![init];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        starts.push(
            (0..s)
                .map(|_| rng.gen_range(0..table.space.size))
                .collect(),
        );
    }
    let mut best: Option<(usize, Vec<u64>)> = None;
    for mut images in starts {
        let mut dist = table.distance(&images);
        for _ in 0..iterations {
            let mut improved = false;
            for slot in 0..s {
                let mut local_best = (dist, images[slot]);
                for q in 0..table.space.size {
                    let saved = images[slot];
                    images[slot] = q;
                    let trial = table.distance(&images);
                    images[slot] = saved;
                    if trial < local_best.0 || (trial == local_best.0 && q < local_best.1) {
                        local_best = (trial, q);
                    }
                }
                // move only on strict improvement so the sweep terminates
                if local_best.0 < dist {
                    images[slot] = local_best.1;
                    dist = local_best.0;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        match &best {
            Some((bd, bi)) if (*bd, bi.clone()) <= (dist, images.clone()) => {}
            _ => best = Some((dist, images)),
        }
    }
    let (_, images) = best.expect("at least one start");
    let chi = LinearMap::new(
        a.group,
        images.into_iter().map(|i| table.space.poly(i)).collect(),
    )?;
    let distance = verify_distance(a, &chi, oracle)?;
    Ok(CorrectionResult {
        chi,
        distance,
        method: CorrectionMethod::Greedy,
        optimal: false,
    })
}

/// A map from the truncated interval [-N, N] of Z into dim x dim matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixCochain {
    pub n_max: i64,
    pub dim: usize,
    pub p: PrimeModulus,
    values: Vec<Matrix>,
}

impl MatrixCochain {
    pub fn new(p: PrimeModulus, n_max: i64, dim: usize, values: Vec<Matrix>) -> Result<Self> {
        let expected = (2 * n_max + 1) as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(MatrixCochain {
            n_max,
            dim,
            p,
            values,
        })
    }

    pub fn from_fn<F>(p: PrimeModulus, n_max: i64, dim: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(i64) -> Matrix,
    {
        MatrixCochain::new(p, n_max, dim, (-n_max..=n_max).map(|n| f(n)).collect())
    }

    pub fn value(&self, n: i64) -> &Matrix {
        &self.values[(n + self.n_max) as usize]
    }

    /// Defect r_{m,n} = A(m+n) - A(m) - A(n), for in-range triples only.
    pub fn defect_at(&self, m: i64, n: i64) -> Matrix {
        self.value(m + n).sub(self.value(m)).sub(self.value(n))
    }

    pub fn in_range(&self, n: i64) -> bool {
        -self.n_max <= n && n <= self.n_max
    }
}

#[derive(Debug, Clone)]
pub struct CyclicCorrection {
    /// chi(n) = n * slope.
    pub slope: Matrix,
    pub distance: usize,
    pub method: CorrectionMethod,
    pub optimal: bool,
    /// Whether all defect triples showed a common kernel hyperplane (true) or
    /// a common image line (false) after normalization.
    pub kernel_structure: bool,
}

/// The introduction's rank-1 algorithm over the truncated cyclic data:
/// normalize so the defect at (0,0) vanishes, verify the kernel/image
/// dichotomy on every in-range triple, correct by chi(n) = n (A(1) - A(0))
/// and certify the distance (<= 2 on well-formed inputs).
pub fn cyclic_rank1_correct(a: &MatrixCochain) -> Result<CyclicCorrection> {
    if a.p.get() == 2 {
        return Err(Error::Precondition(
            "the rank-1 cyclic algorithm needs characteristic != 2".into(),
        ));
    }
    if a.n_max < 1 {
        return Err(Error::Precondition("need at least the interval [-1, 1]".into()));
    }
    // precondition: every in-range defect has rank <= 1
    for m in -a.n_max..=a.n_max {
        for n in -a.n_max..=a.n_max {
            if !a.in_range(m + n) {
                continue;
            }
            let r = a.defect_at(m, n);
            if r.rank() > 1 {
                return Err(Error::Precondition(format!(
                    "defect at ({m}, {n}) has rank {} > 1",
                    r.rank()
                )));
            }
        }
    }
    // normalized cochain A'(n) = A(n) - A(0) has vanishing defect at (0,0)
    let normalized = MatrixCochain::from_fn(a.p, a.n_max, a.dim, |n| {
        a.value(n).sub(a.value(0))
    })?;
    debug_assert!(normalized.defect_at(0, 0).is_zero());
    // structure dichotomy on each triple r_{a,-a} = r_{a+c,-a} + r_{a,c}
    let mut kernel_votes = 0usize;
    let mut triples = 0usize;
    for t in -a.n_max..=a.n_max {
        for c in -a.n_max..=a.n_max {
            if !a.in_range(-t) || !a.in_range(t + c) {
                continue;
            }
            let ops = [
                normalized.defect_at(t, -t),
                normalized.defect_at(t + c, -t),
                normalized.defect_at(t, c),
            ];
            if ops.iter().all(|m| m.is_zero()) {
                continue;
            }
            triples += 1;
            let kernel_ok = common_kernel_hyperplane(&ops, a.p, a.dim);
            let image_ok = common_image_line(&ops, a.p, a.dim);
            if !kernel_ok && !image_ok {
                return Err(Error::Precondition(format!(
                    "structure detection failed on the triple (a={t}, c={c})"
                )));
            }
            if kernel_ok {
                kernel_votes += 1;
            }
        }
    }
    let slope = a.value(1).sub(a.value(0));
    let mut distance = 0;
    let mut worst = 0i64;
    for n in -a.n_max..=a.n_max {
        let chi_n = slope.scale(a.p.reduce(n));
        let rank = a.value(n).sub(&chi_n).rank();
        if rank > distance {
            distance = rank;
            worst = n;
        }
    }
    if distance > 2 {
        return Err(Error::Precondition(format!(
            "correction left rank {distance} at n = {worst}; expected <= 2"
        )));
    }
    Ok(CyclicCorrection {
        slope,
        distance,
        method: CorrectionMethod::CyclicRank1,
        optimal: false,
        kernel_structure: triples == 0 || kernel_votes == triples,
    })
}

fn common_kernel_hyperplane(ops: &[Matrix], p: PrimeModulus, dim: usize) -> bool {
    let mut rows = Vec::new();
    for m in ops {
        for i in 0..dim {
            rows.push((0..dim).map(|j| m.get(i, j)).collect::<Vec<_>>());
        }
    }
    let stacked = Matrix::from_rows(p, rows).expect("rectangular");
    // kernel of the stack is the common kernel
    dim - stacked.rank() >= dim.saturating_sub(1)
}

fn common_image_line(ops: &[Matrix], p: PrimeModulus, dim: usize) -> bool {
    // columns of all operators side by side span the combined image
    let mut rows = vec![Vec::new(); dim];
    for m in ops {
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..dim {
                row.push(m.get(i, j));
            }
        }
    }
    Matrix::from_rows(p, rows).expect("rectangular").rank() <= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    Constant,
    Iid,
}

#[derive(Debug, Clone)]
pub struct SynthesisReport {
    pub cochain: Cochain,
    /// Decomposition certificates for each noise value, indexed like the
    /// cochain table.
    pub noise_certificates: Vec<RankCertificate>,
    pub defect: DefectReport,
}

/// A = chi + noise with every noise value certified of rank <= noise_rank.
/// The realized defect (<= 3 * noise_rank by subadditivity) is measured and
/// included.
pub fn synthesize(
    chi: &LinearMap,
    d: usize,
    noise_rank: usize,
    model: NoiseModel,
    seed: u64,
    oracle: &mut RankOracle,
) -> Result<SynthesisReport> {
    let group = chi.group;
    let nvars = chi.images.first().map(|q| q.nvars()).unwrap_or(0);
    let constant = random_bounded_rank(group.p, nvars, d, noise_rank, seed);
    let mut values = Vec::with_capacity(group.order());
    let mut certs = Vec::with_capacity(group.order());
    for v_idx in 0..group.order() {
        let v = group.element(v_idx);
        let (noise, factors) = match model {
            NoiseModel::Constant => constant.clone(),
            NoiseModel::Iid => random_bounded_rank(
                group.p,
                nvars,
                d,
                noise_rank,
                seed.wrapping_add(1 + v_idx as u64),
            ),
        };
        values.push(chi.eval(&v)?.add(&noise)?);
        certs.push(decomposition_certificate(factors));
    }
    let cochain = Cochain::new(1, group, ActionTag::Trivial, values)?;
    let filtration = FiltrationTag {
        kind: FiltrationKind::Inhomogeneous,
        degree: d,
    };
    let report = defect(&cochain, filtration, oracle)?;
    debug_assert!(report.max_rank_upper <= 3 * noise_rank);
    Ok(SynthesisReport {
        cochain,
        noise_certificates: certs,
        defect: report,
    })
}

/// A random sum of `rank` products (linear) x (degree d-1), with its factor
/// list as a certificate.
fn random_bounded_rank(
    p: PrimeModulus,
    nvars: usize,
    d: usize,
    rank: usize,
    seed: u64,
) -> (Poly, Vec<(Poly, Poly)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Poly::zero(p, nvars);
    let mut factors = Vec::new();
    for _ in 0..rank {
        let linear = random_homogeneous(&mut rng, p, nvars, 1);
        let cofactor = random_homogeneous(&mut rng, p, nvars, d - 1);
        if linear.is_zero() || cofactor.is_zero() {
            continue;
        }
        acc = acc.add(&linear.mul(&cofactor).expect("same field")).expect("same field");
        factors.push((linear, cofactor));
    }
    (acc, factors)
}

fn random_homogeneous(rng: &mut ChaCha8Rng, p: PrimeModulus, nvars: usize, d: usize) -> Poly {
    let mut poly = Poly::zero(p, nvars);
    for m in monomials_of_degree(nvars, d) {
        let c = rng.gen_range(0..p.get());
        if c != 0 {
            poly.add_term(m, c);
        }
    }
    poly
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub p: u32,
    pub d: usize,
    pub n: usize,
    pub s: usize,
    pub defect: usize,
    pub distance: usize,
    pub method: &'static str,
    pub optimal: bool,
}

/// For each (n, s) cell, exhaustively enumerate all degree-1 cochains with
/// homogeneous degree-d values, group them by realized defect (up to
/// `defect_cap`), and record the worst exact minimax distance per defect.
pub fn minimax_growth_experiment(
    p: PrimeModulus,
    d: usize,
    n_range: std::ops::RangeInclusive<usize>,
    s_range: std::ops::RangeInclusive<usize>,
    defect_cap: usize,
    budget: &Budget,
) -> Result<Vec<GrowthRow>> {
    let mut rows = Vec::new();
    for n in n_range {
        for s in s_range.clone() {
            let group = GroupSpec::new(p, s);
            let space = HomSpace::new(p, n, d);
            let tables = (space.size as u128).pow(group.order() as u32);
            budget.check(tables)?;
            let mut oracle = RankOracle::new(2, budget.clone());
            let filtration = FiltrationTag {
                kind: FiltrationKind::Homogeneous,
                degree: d,
            };
            let mut worst: std::collections::BTreeMap<usize, usize> =
                std::collections::BTreeMap::new();
            for assignment in 0..tables as u64 {
                let mut rest = assignment;
                let values: Vec<Poly> = (0..group.order())
                    .map(|_| {
                        let q = space.poly(rest % space.size);
                        rest /= space.size;
                        q
                    })
                    .collect();
                let a = Cochain::new(1, group, ActionTag::Trivial, values)?;
                let report = defect(&a, filtration, &mut oracle)?;
                if report.max_rank_upper > defect_cap {
                    continue;
                }
                let result = minimax_correct(&a, d, &mut oracle)?;
                let slot = worst.entry(report.max_rank_upper).or_insert(0);
                *slot = (*slot).max(result.distance);
            }
            for (defect_value, distance) in worst {
                rows.push(GrowthRow {
                    p: p.get(),
                    d,
                    n,
                    s,
                    defect: defect_value,
                    distance,
                    method: "exhaustive",
                    optimal: true,
                });
            }
        }
    }
    Ok(rows)
}
