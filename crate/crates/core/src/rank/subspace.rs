//! Vanishing-subspace search over F_{p^m}.
//!
//! Subspaces are enumerated through row-reduced echelon annihilator matrices
//! so each subspace appears exactly once; enumeration order (pivot sets
//! lexicographic, then free entries by element index) is the canonical tie
//! break.

use std::collections::BTreeMap;

use crate::ffpoly::Poly;

use super::extfield::{ExtElem, ExtField};

/// A codimension-r subspace given by r independent linear forms in RREF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilator {
    pub forms: Vec<Vec<ExtElem>>,
    pub ext_degree: usize,
}

impl Annihilator {
    pub fn codim(&self) -> usize {
        self.forms.len()
    }
}

/// Number of annihilator matrices (= subspaces of codimension r) in F_q^n.
pub fn subspace_count(q: usize, n: usize, r: usize) -> u128 {
    // Gaussian binomial [n choose r]_q
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num *= q.pow((n - i) as u32) as u128 - 1;
        den *= q.pow((i + 1) as u32) as u128 - 1;
    }
    num / den
}

/// Visit every full-rank r x n RREF matrix over F_{p^m}; stops early when the
/// visitor returns true and returns that matrix.
pub fn find_annihilator<F>(
    ext: &ExtField,
    n: usize,
    r: usize,
    mut accept: F,
) -> Option<Annihilator>
where
    F: FnMut(&[Vec<ExtElem>]) -> bool,
{
    if r > n {
        return None;
    }
    let mut pivots = Vec::new();
    find_rec(ext, n, r, 0, &mut pivots, &mut accept)
}

fn find_rec<F>(
    ext: &ExtField,
    n: usize,
    r: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    accept: &mut F,
) -> Option<Annihilator>
where
    F: FnMut(&[Vec<ExtElem>]) -> bool,
{
    if pivots.len() == r {
        return fill_free_entries(ext, n, pivots, accept);
    }
    let remaining = r - pivots.len();
    for col in start..=(n - remaining) {
        pivots.push(col);
        if let Some(found) = find_rec(ext, n, r, col + 1, pivots, accept) {
            pivots.pop();
            return Some(found);
        }
        pivots.pop();
    }
    None
}

fn fill_free_entries<F>(
    ext: &ExtField,
    n: usize,
    pivots: &[usize],
    accept: &mut F,
) -> Option<Annihilator>
where
    F: FnMut(&[Vec<ExtElem>]) -> bool,
{
    let r = pivots.len();
    // free positions: (row, col) with col > pivots[row], col not a pivot
    let free: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| {
            (pivots[i] + 1..n)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (i, c))
        })
        .collect();
    let q = ext.order();
    let total = q.checked_pow(free.len() as u32).expect("free entry count");
    for idx in 0..total {
        let mut forms = vec![vec![ext.zero(); n]; r];
        for (i, &pc) in pivots.iter().enumerate() {
            forms[i][pc] = ext.one();
        }
        let mut rest = idx;
        for &(i, c) in &free {
            forms[i][c] = ext.elem_from_index(rest % q);
            rest /= q;
        }
        if accept(&forms) {
            return Some(Annihilator {
                forms,
                ext_degree: ext.degree(),
            });
        }
    }
    None
}

/// Basis of the common kernel of RREF forms, as vectors over the extension.
pub fn kernel_of_annihilator(ext: &ExtField, n: usize, forms: &[Vec<ExtElem>]) -> Vec<Vec<ExtElem>> {
    let pivots: Vec<usize> = forms
        .iter()
        .map(|row| row.iter().position(|e| !ext.is_zero(e)).expect("full rank"))
        .collect();
    let mut basis = Vec::new();
    for free_col in 0..n {
        if pivots.contains(&free_col) {
            continue;
        }
        let mut v = vec![ext.zero(); n];
        v[free_col] = ext.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = ext.neg(&forms[row][free_col]);
        }
        basis.push(v);
    }
    basis
}

/// Does P vanish identically (as a formal polynomial) on the span of `basis`?
/// Substitutes x_i = sum_a basis[a][i] t_a and expands over F_{p^m}.
pub fn vanishes_on_span(poly: &Poly, ext: &ExtField, basis: &[Vec<ExtElem>]) -> bool {
    let k = basis.len();
    if k == 0 {
        // the zero subspace; homogeneous polynomials always vanish there
        return poly.terms().all(|(m, _)| m.degree() > 0);
    }
    let mut acc: BTreeMap<Vec<u16>, ExtElem> = BTreeMap::new();
    for (m, c) in poly.terms() {
        // expand c * prod_i (sum_a basis[a][i] t_a)^{e_i}
        let mut partial: BTreeMap<Vec<u16>, ExtElem> = BTreeMap::new();
        partial.insert(vec![0u16; k], ext.embed(c));
        for (i, &e) in m.exponents.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u16>, ExtElem> = BTreeMap::new();
                for (tm, tc) in &partial {
                    for (a, bv) in basis.iter().enumerate() {
                        if ext.is_zero(&bv[i]) {
                            continue;
                        }
                        let mut nm = tm.clone();
                        nm[a] += 1;
                        let nc = ext.mul(tc, &bv[i]);
                        merge_term(ext, &mut next, nm, nc);
                    }
                }
                partial = next;
            }
        }
        for (tm, tc) in partial {
            merge_term(ext, &mut acc, tm, tc);
        }
    }
    acc.is_empty()
}

fn merge_term(
    ext: &ExtField,
    map: &mut BTreeMap<Vec<u16>, ExtElem>,
    key: Vec<u16>,
    val: ExtElem,
) {
    let entry = map.entry(key.clone()).or_insert_with(|| ext.zero());
    *entry = ext.add(entry, &val);
    if ext.is_zero(entry) {
        map.remove(&key);
    }
}
