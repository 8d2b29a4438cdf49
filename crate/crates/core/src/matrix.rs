//! Dense matrices over F_p with exact rank via Gaussian elimination.

use crate::error::{Error, Result};
use crate::ffpoly::PrimeModulus;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub p: PrimeModulus,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zero(p: PrimeModulus, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: PrimeModulus, rows: Vec<Vec<u32>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Precondition("ragged matrix rows".into()));
        }
        let data = rows
            .into_iter()
            .flatten()
            .map(|x| x % p.get())
            .collect();
        Ok(Matrix {
            p,
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p.get();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.p.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&other.data) {
            *a = self.p.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.p.mul(*a, c % self.p.get());
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.p.add(out.get(i, j), self.p.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(pr) = pivot else { continue };
            m.swap_rows(rank, col, pr);
            let inv = m.p.inv(m.get(rank, col));
            for j in col..m.cols {
                m.set(rank, j, m.p.mul(m.get(rank, j), inv));
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) != 0 {
                    let f = m.get(r, col);
                    for j in col..m.cols {
                        let v = m.p.sub(m.get(r, j), m.p.mul(f, m.get(rank, j)));
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, _from_col: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    /// Basis of the (right) kernel, each vector of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(pr) = pivot else { continue };
            m.swap_rows(rank, col, pr);
            let inv = p.inv(m.get(rank, col));
            for j in 0..m.cols {
                m.set(rank, j, p.mul(m.get(rank, j), inv));
            }
            for r in 0..m.rows {
                if r != rank && m.get(r, col) != 0 {
                    let f = m.get(r, col);
                    for j in 0..m.cols {
                        let v = p.sub(m.get(r, j), p.mul(f, m.get(rank, j)));
                        m.set(r, j, v);
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        let pivots: Vec<usize> = pivot_col_of_row;
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u32; m.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(m.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Column space basis (as column vectors of length `rows`).
    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        let mut t = Matrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        // row-reduce the transpose; nonzero rows span the column space
        t.row_reduce();
        (0..t.rows)
            .filter_map(|i| {
                let row: Vec<u32> = (0..t.cols).map(|j| t.get(i, j)).collect();
                if row.iter().any(|&x| x != 0) {
                    Some(row)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn row_reduce(&mut self) {
        let p = self.p;
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| self.get(r, col) != 0);
            let Some(pr) = pivot else { continue };
            self.swap_rows(rank, col, pr);
            let inv = p.inv(self.get(rank, col));
            for j in 0..self.cols {
                self.set(rank, j, p.mul(self.get(rank, j), inv));
            }
            for r in 0..self.rows {
                if r != rank && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for j in 0..self.cols {
                        let v = p.sub(self.get(r, j), p.mul(f, self.get(rank, j)));
                        self.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
    }
}
