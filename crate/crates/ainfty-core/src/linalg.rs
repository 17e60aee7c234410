//! Dense exact linear algebra over the rationals.
//!
//! Everything is deterministic: row echelon forms are canonical (reduced, with
//! pivots in ascending column order) and solving honours an explicit column
//! (pivot) order so that different pivot rules can be compared reproducibly.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::Rat;

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    /// Number of rows.
    pub rows: usize,
    /// Number of columns.
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Builds a matrix from row vectors (all of equal length).
    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Mat::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Entry accessor.
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    /// Entry mutator.
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &x[j])
                    .fold(Rat::zero(), |a, v| a + v)
            })
            .collect()
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + &a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// The rows of the matrix as vectors.
    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

/// Canonical basis of the row space: reduced row echelon form without zero
/// rows, pivots in ascending column order, pivot entries equal to one.
pub fn rref_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows
        .iter()
        .filter(|r| !r.iter().all(Zero::is_zero))
        .cloned()
        .collect();
    let cols = work.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for col in 0..cols {
        let Some(pos) = work.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot = work.swap_remove(pos);
        let inv = pivot[col].recip();
        for v in pivot.iter_mut() {
            *v = &*v * &inv;
        }
        for r in work.iter_mut().chain(out.iter_mut()) {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (rv, pv) in r.iter_mut().zip(&pivot) {
                    *rv = &*rv - &f * pv;
                }
            }
        }
        work.retain(|r| !r.iter().all(Zero::is_zero));
        out.push(pivot);
    }
    out.sort_by_key(|r| r.iter().position(|v| !v.is_zero()));
    out
}

/// Dimension of the span of the given vectors.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref_rows(rows).len()
}

/// Whether `v` lies in the span of `rows`.
pub fn in_span(rows: &[Vec<Rat>], v: &[Rat]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let basis = rref_rows(rows);
    let mut w: Vec<Rat> = v.to_vec();
    for b in &basis {
        let col = b.iter().position(|x| !x.is_zero()).unwrap();
        if !w[col].is_zero() {
            let f = w[col].clone();
            for (wv, bv) in w.iter_mut().zip(b) {
                *wv = &*wv - &f * bv;
            }
        }
    }
    w.iter().all(Zero::is_zero)
}

/// Canonical kernel basis of the linear map `x ↦ M·x`: one vector per free
/// column, free coordinate set to one, in ascending column order.
pub fn kernel(m: &Mat) -> Vec<Vec<Rat>> {
    let rref = rref_rows(&m.to_rows());
    let pivots: Vec<usize> = rref
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).unwrap())
        .collect();
    let mut out = Vec::new();
    for free in 0..m.cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = Rat::one();
        for (r, &p) in rref.iter().zip(&pivots) {
            v[p] = -r[free].clone();
        }
        out.push(v);
    }
    out
}

/// Solves `M·x = rhs`, picking pivot columns in the order given by
/// `col_order` (a permutation of the columns) and setting every free variable
/// to zero. Returns `None` when the system is inconsistent.
pub fn solve_with_col_order(m: &Mat, rhs: &[Rat], col_order: &[usize]) -> Option<Vec<Rat>> {
    assert_eq!(rhs.len(), m.rows);
    assert_eq!(col_order.len(), m.cols);
    // Augmented rows [A | b].
    let mut work: Vec<Vec<Rat>> = (0..m.rows)
        .map(|i| {
            let mut r: Vec<Rat> = (0..m.cols).map(|j| m.get(i, j).clone()).collect();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let mut pivot_rows: Vec<(usize, Vec<Rat>)> = Vec::new();
    for &col in col_order {
        let Some(pos) = work.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot = work.swap_remove(pos);
        let inv = pivot[col].recip();
        for v in pivot.iter_mut() {
            *v = &*v * &inv;
        }
        for r in work.iter_mut().chain(pivot_rows.iter_mut().map(|(_, r)| r)) {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (rv, pv) in r.iter_mut().zip(&pivot) {
                    *rv = &*rv - &f * pv;
                }
            }
        }
        pivot_rows.push((col, pivot));
        work.retain(|r| !r.iter().all(Zero::is_zero));
    }
    // Every remaining row has a zero variable part (each column was
    // eliminated or empty), so a nonzero augmented entry means inconsistency.
    if work.iter().any(|r| !r[m.cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols];
    for (col, row) in pivot_rows {
        // Free variables are zero, so x[col] is just the augmented entry.
        x[col] = row[m.cols].clone();
    }
    Some(x)
}

/// Basis (canonical) of the preimage `{x : M·x ∈ span(target)}`.
pub fn preimage(m: &Mat, target: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    // Solve M·x − Σ y_j t_j = 0 for (x, y) and project onto x.
    let ny = target.len();
    let mut aug = Mat::zero(m.rows, m.cols + ny);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        for (j, t) in target.iter().enumerate() {
            assert_eq!(t.len(), m.rows);
            aug.set(i, m.cols + j, -t[i].clone());
        }
    }
    let ker = kernel(&aug);
    let xs: Vec<Vec<Rat>> = ker.into_iter().map(|v| v[..m.cols].to_vec()).collect();
    rref_rows(&xs)
}

/// Basis (canonical) of the intersection of two spans.
pub fn intersect(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let dim = a[0].len();
    // x = Σ u_i a_i = Σ v_j b_j  ⟺  (u, v) ∈ ker [Aᵀ | −Bᵀ].
    let mut m = Mat::zero(dim, a.len() + b.len());
    for (j, r) in a.iter().enumerate() {
        for i in 0..dim {
            m.set(i, j, r[i].clone());
        }
    }
    for (j, r) in b.iter().enumerate() {
        for i in 0..dim {
            m.set(i, a.len() + j, -r[i].clone());
        }
    }
    let ker = kernel(&m);
    let vecs: Vec<Vec<Rat>> = ker
        .into_iter()
        .map(|uv| {
            let mut x = vec![Rat::zero(); dim];
            for (j, r) in a.iter().enumerate() {
                if !uv[j].is_zero() {
                    for i in 0..dim {
                        x[i] = &x[i] + &uv[j] * &r[i];
                    }
                }
            }
            x
        })
        .collect();
    rref_rows(&vecs)
}

/// Basis (canonical) of the sum of two spans.
pub fn span_sum(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    rref_rows(&all)
}
