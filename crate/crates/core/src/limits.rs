//! Finite-horizon inverse-limit machinery: compatible-sequence selection
//! through stabilized images, lifting of per-level corrections to the top
//! level, and the homomorphism-compatibility harness for matrix actions.

use serde::{Deserialize, Serialize};

use crate::budget::{pow_points, Budget};
use crate::cohomology::{ActionTag, Cochain};
use crate::corrector::LinearMap;
use crate::error::{Error, Result};
use crate::ffpoly::{monomials_of_degree, points, FieldVector, Poly, PrimeModulus};
use crate::matrix::Matrix;
use crate::rank::RankOracle;

/// A finite tower X_0 <- X_1 <- ... <- X_N of non-empty sets with total
/// connecting maps, elements in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseSystem {
    /// Element labels per level.
    pub sets: Vec<Vec<String>>,
    /// maps[n][i] = index in sets[n] of the image of sets[n+1][i].
    pub maps: Vec<Vec<usize>>,
}

impl InverseSystem {
    pub fn new(sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Precondition("need at least one level".into()));
        }
        if maps.len() + 1 != sets.len() {
            return Err(Error::DimensionMismatch {
                expected: sets.len() - 1,
                got: maps.len(),
            });
        }
        for (n, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Precondition(format!("level {n} is empty")));
            }
        }
        for (n, map) in maps.iter().enumerate() {
            if map.len() != sets[n + 1].len() {
                return Err(Error::DimensionMismatch {
                    expected: sets[n + 1].len(),
                    got: map.len(),
                });
            }
            if map.iter().any(|&i| i >= sets[n].len()) {
                return Err(Error::Precondition(format!(
                    "map at level {n} is not total"
                )));
            }
        }
        Ok(InverseSystem { sets, maps })
    }

    pub fn depth(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sys: InverseSystem =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        InverseSystem::new(sys.sets, sys.maps)
    }
}

/// Indices x_0..x_N with f_n(x_{n+1}) = x_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleSequence {
    pub indices: Vec<usize>,
}

/// Select a compatible sequence through the tower. The stabilized image of
/// level n at finite depth is its image from X_N; the root picks the first
/// surviving element and each step the first canonical preimage. Image
/// chains are checked to be monotone along the way.
pub fn koenig_select(sys: &InverseSystem) -> Result<CompatibleSequence> {
    let depth = sys.depth();
    // images[m][n] = sorted image of X_m inside X_n, for n <= m
    let mut survivors: Vec<Vec<usize>> = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        // push X_n itself, then refine every lower level through f_{..}
        survivors.push((0..sys.sets[n].len()).collect());
        if n > 0 {
            let mut level_image: Vec<bool> = vec![false; sys.sets[n - 1].len()];
            for &i in &survivors[n] {
                level_image[sys.maps[n - 1][i]] = true;
            }
            let image: Vec<usize> = (0..level_image.len()).filter(|&i| level_image[i]).collect();
            // monotone chain: the deeper image refines the previous one
            debug_assert!(image.iter().all(|i| survivors[n - 1].contains(i)));
            survivors[n - 1] = image;
            // propagate the shrink downward
            for m in (1..n).rev() {
                let mut keep = vec![false; sys.sets[m - 1].len()];
                for &i in &survivors[m] {
                    keep[sys.maps[m - 1][i]] = true;
                }
                let refined: Vec<usize> = (0..keep.len()).filter(|&i| keep[i]).collect();
                debug_assert!(refined.iter().all(|i| survivors[m - 1].contains(i)));
                survivors[m - 1] = refined;
            }
        }
    }
    for (n, level) in survivors.iter().enumerate() {
        if level.is_empty() {
            return Err(Error::Precondition(format!(
                "stabilized image at level {n} is empty"
            )));
        }
    }
    let mut indices = Vec::with_capacity(depth + 1);
    indices.push(survivors[0][0]);
    for n in 0..depth {
        let target = indices[n];
        let next = survivors[n + 1]
            .iter()
            .copied()
            .find(|&i| sys.maps[n][i] == target)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "no preimage of stabilized element at level {}",
                    n + 1
                ))
            })?;
        indices.push(next);
    }
    for n in 0..depth {
        debug_assert_eq!(sys.maps[n][indices[n + 1]], indices[n]);
    }
    Ok(CompatibleSequence { indices })
}

/// Canonical enumeration of linear maps V_n -> (homogeneous degree-d polys in
/// `nvars` variables) by generator-image digit strings.
struct LevelSpace {
    p: PrimeModulus,
    generators: usize,
    nvars: usize,
    d: usize,
    image_size: u64,
}

impl LevelSpace {
    fn new(p: PrimeModulus, generators: usize, nvars: usize, d: usize) -> Self {
        let mons = monomials_of_degree(nvars, d).len();
        LevelSpace {
            p,
            generators,
            nvars,
            d,
            image_size: (p.get() as u64).pow(mons as u32),
        }
    }

    fn count(&self) -> u128 {
        (self.image_size as u128).pow(self.generators as u32)
    }

    fn images(&self, mut combo: u64) -> Vec<Poly> {
        let mons = monomials_of_degree(self.nvars, self.d);
        (0..self.generators)
            .map(|_| {
                let mut idx = combo % self.image_size;
                combo /= self.image_size;
                let mut poly = Poly::zero(self.p, self.nvars);
                for m in &mons {
                    let c = (idx % self.p.get() as u64) as u32;
                    idx /= self.p.get() as u64;
                    if c != 0 {
                        poly.add_term(m.clone(), c);
                    }
                }
                poly
            })
            .collect()
    }

    fn combo_of(&self, images: &[Poly]) -> u64 {
        let mons = monomials_of_degree(self.nvars, self.d);
        let mut combo = 0u64;
        for poly in images.iter().rev() {
            let mut idx = 0u64;
            for m in mons.iter().rev() {
                idx = idx * self.p.get() as u64 + poly.coefficient(m) as u64;
            }
            combo = combo * self.image_size + idx;
        }
        combo
    }
}

#[derive(Debug, Clone)]
pub struct LiftReport {
    pub chi: LinearMap,
    /// Minimal variable bound l(n) per level.
    pub level_bounds: Vec<usize>,
    /// Size of each level set of admissible corrections.
    pub level_sizes: Vec<usize>,
    pub horizon: usize,
}

/// Lift per-level corrections of a global map P on V_N to a single linear
/// chi with rank(P(v) - chi(v)) <= c for every v. Level n works inside the
/// minimal variable range l(n) covering P on V_n; levels are linked by
/// restriction-and-projection and threaded by `koenig_select`. An empty
/// level is reported as a falsifying instance.
pub fn lift_correction(
    p_map: &Cochain,
    d: usize,
    c: usize,
    oracle: &mut RankOracle,
) -> Result<LiftReport> {
    if p_map.degree != 1 || p_map.action != ActionTag::Trivial {
        return Err(Error::Precondition(
            "lift expects a degree-1 trivial-action cochain".into(),
        ));
    }
    let group = p_map.group;
    let p = group.p;
    let horizon = group.s;
    let nvars = p_map.nvars();

    // minimal l(n): the variable support of P over V_n
    let mut level_bounds = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let mut bound = 0;
        for v in points(p, n) {
            let full = embed(&v, horizon);
            bound = bound.max(p_map.value(&[full]).support_bound());
        }
        level_bounds.push(bound.min(nvars));
    }

    // level sets: combos satisfying the per-level condition
    let mut levels: Vec<Vec<u64>> = Vec::with_capacity(horizon + 1);
    let mut spaces: Vec<LevelSpace> = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let l = level_bounds[n];
        let space = LevelSpace::new(p, n, l, d);
        oracle
            .budget
            .check(space.count() * pow_points(p.get(), n))?;
        let mut admissible = Vec::new();
        for combo in 0..space.count() as u64 {
            let images = space.images(combo);
            let mut ok = true;
            for v in points(p, n) {
                let full = embed(&v, horizon);
                let projected = p_map.value(&[full]).project(l)?;
                let mut chi_v = Poly::zero(p, l);
                for (i, img) in images.iter().enumerate() {
                    chi_v = chi_v.add(&img.scale(v.coords[i]))?;
                }
                if oracle.upper(&projected.sub(&chi_v)?)? > c {
                    ok = false;
                    break;
                }
            }
            if ok {
                admissible.push(combo);
            }
        }
        if admissible.is_empty() {
            return Err(Error::Precondition(format!(
                "level {n} has no admissible correction at rank bound {c}"
            )));
        }
        levels.push(admissible);
        spaces.push(space);
    }

    // connecting maps: drop the last generator and project images down
    let mut maps = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let mut table = Vec::with_capacity(levels[n + 1].len());
        for &combo in &levels[n + 1] {
            let images = spaces[n + 1].images(combo);
            let restricted: Vec<Poly> = images[..n]
                .iter()
                .map(|q| q.project(level_bounds[n]))
                .collect::<Result<Vec<_>>>()?;
            let down = spaces[n].combo_of(&restricted);
            let pos = levels[n]
                .iter()
                .position(|&x| x == down)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "restriction from level {} left the admissible set",
                        n + 1
                    ))
                })?;
            table.push(pos);
        }
        maps.push(table);
    }

    let sys = InverseSystem::new(
        levels
            .iter()
            .map(|lvl| lvl.iter().map(|c| c.to_string()).collect())
            .collect(),
        maps,
    )?;
    let seq = koenig_select(&sys)?;
    let top_combo = levels[horizon][seq.indices[horizon]];
    let images: Vec<Poly> = spaces[horizon]
        .images(top_combo)
        .into_iter()
        .map(|q| q.extend_vars(nvars))
        .collect::<Result<Vec<_>>>()?;
    let chi = LinearMap::new(group, images)?;

    // final certificate on the full group
    for v in group.elements() {
        let residual = p_map
            .value(&[v.clone()])
            .sub(&chi.eval(&v)?.extend_vars(nvars)?)?;
        let upper = oracle.upper(&residual)?;
        if upper > c {
            return Err(Error::Precondition(format!(
                "lifted correction leaves rank {upper} > {c}"
            )));
        }
    }
    Ok(LiftReport {
        chi,
        level_bounds,
        level_sizes: levels.iter().map(|l| l.len()).collect(),
        horizon,
    })
}

fn embed(v: &FieldVector, s: usize) -> FieldVector {
    let mut coords = v.coords.clone();
    coords.resize(s, 0);
    FieldVector::new(v.p, coords)
}

#[derive(Debug, Clone)]
pub struct HomCompatReport {
    /// Selected generator images of chi_n per level.
    pub family: Vec<Vec<Matrix>>,
    pub level_sizes: Vec<usize>,
}

/// Compatibility harness for matrix-valued maps a: Gamma_N -> End(V). Level n
/// sees Gamma_n (the first n generators) through the top-left dims[n] block;
/// its set holds the linear chi_n within matrix-rank C of the compressed a,
/// linked by compression, and `koenig_select` threads a compatible family.
pub fn hom_compat_harness(
    p: PrimeModulus,
    a_table: &[Matrix],
    dims: &[usize],
    c: usize,
    budget: &Budget,
) -> Result<HomCompatReport> {
    let horizon = dims.len() - 1;
    let dim_top = *dims.last().unwrap();
    let expected = (p.get() as usize).pow(horizon as u32);
    if a_table.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: a_table.len(),
        });
    }
    if dims.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("dims must be nondecreasing".into()));
    }
    let mut levels: Vec<Vec<Vec<Matrix>>> = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let dn = dims[n];
        let cells = n * dn * dn;
        let count = (p.get() as u128).pow(cells as u32);
        budget.check(count * pow_points(p.get(), n))?;
        let mut admissible = Vec::new();
        for combo in 0..count as u64 {
            let images = matrices_from_combo(p, combo, n, dn);
            let mut ok = true;
            for gamma in points(p, n) {
                let full = embed(&gamma, horizon);
                let compressed = compress(&a_table[full.index()], p, dn);
                let mut chi = Matrix::zero(p, dn, dn);
                for (i, img) in images.iter().enumerate() {
                    chi = chi.add(&img.scale(gamma.coords[i]));
                }
                if compressed.sub(&chi).rank() > c {
                    ok = false;
                    break;
                }
            }
            if ok {
                admissible.push(images);
            }
        }
        if admissible.is_empty() {
            return Err(Error::Precondition(format!(
                "level {n} has no compatible homomorphism at rank bound {c}"
            )));
        }
        levels.push(admissible);
    }
    let mut maps = Vec::with_capacity(horizon);
    for n in 0..horizon {
        let mut table = Vec::with_capacity(levels[n + 1].len());
        for images in &levels[n + 1] {
            let down: Vec<Matrix> = images[..n]
                .iter()
                .map(|m| compress(m, p, dims[n]))
                .collect();
            let pos = levels[n]
                .iter()
                .position(|x| *x == down)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "compression from level {} left the admissible set",
                        n + 1
                    ))
                })?;
            table.push(pos);
        }
        maps.push(table);
    }
    let sys = InverseSystem::new(
        levels
            .iter()
            .map(|lvl| (0..lvl.len()).map(|i| i.to_string()).collect())
            .collect(),
        maps,
    )?;
    let seq = koenig_select(&sys)?;
    let family: Vec<Vec<Matrix>> = seq
        .indices
        .iter()
        .enumerate()
        .map(|(n, &i)| levels[n][i].clone())
        .collect();
    let _ = dim_top;
    Ok(HomCompatReport {
        level_sizes: levels.iter().map(|l| l.len()).collect(),
        family,
    })
}

fn matrices_from_combo(p: PrimeModulus, mut combo: u64, n: usize, dim: usize) -> Vec<Matrix> {
    (0..n)
        .map(|_| {
            let mut m = Matrix::zero(p, dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    m.set(i, j, (combo % p.get() as u64) as u32);
                    combo /= p.get() as u64;
                }
            }
            m
        })
        .collect()
}

fn compress(m: &Matrix, p: PrimeModulus, dim: usize) -> Matrix {
    let mut out = Matrix::zero(p, dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}
