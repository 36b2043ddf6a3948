use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Fp, PrimeField};

/// `dst += c * src (mod p)` on raw residues.
#[inline]
pub(crate) fn axpy(dst: &mut [u32], src: &[u32], c: u32, p: u32) {
    if c == 0 {
        return;
    }
    let (c, p64) = (c as u64, p as u64);
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ((*d as u64 + c * s as u64) % p64) as u32;
        }
    }
}

#[inline]
pub(crate) fn scale_in_place(row: &mut [u32], c: u32, p: u32) {
    let (c, p64) = (c as u64, p as u64);
    for x in row.iter_mut() {
        *x = ((*x as u64 * c) % p64) as u32;
    }
}

#[inline]
pub(crate) fn neg_raw(x: u32, p: u32) -> u32 {
    if x == 0 {
        0
    } else {
        p - x
    }
}

/// Row-major dense matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<Fp>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.data[i * cols + j] = v.value();
            }
        }
        m
    }

    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { field, rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fp {
        self.field.from_reduced(self.data[i * self.cols + j])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fp) {
        self.data[i * self.cols + j] = v.value();
    }

    #[inline]
    pub(crate) fn row_raw(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> Vec<Fp> {
        self.row_raw(i).iter().map(|&x| self.field.from_reduced(x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let p = self.field.modulus();
        let mut out = DenseMatrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    axpy(dst, &other.data[k * other.cols..(k + 1) * other.cols], a, p);
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; pivots are taken only in columns
    /// `< pivot_limit`. Returns the pivot columns, whose rows come first.
    pub fn rref_limited(&mut self, pivot_limit: usize) -> Vec<usize> {
        let p = self.field.modulus();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_limit.min(cols) {
            if r == self.rows {
                break;
            }
            let Some(found) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if found != r {
                for j in 0..cols {
                    self.data.swap(found * cols + j, r * cols + j);
                }
            }
            let inv = self.field.inv(self.field.from_reduced(self.data[r * cols + c])).unwrap();
            scale_in_place(&mut self.data[r * cols..(r + 1) * cols], inv.value(), p);
            let pivot_row: Vec<u32> = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f != 0 {
                    axpy(&mut self.data[i * cols..(i + 1) * cols], &pivot_row, neg_raw(f, p), p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        self.rref_limited(self.cols)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Fp>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.field.modulus();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fp::ZERO; self.cols];
            v[f] = Fp::ONE;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = self.field.from_reduced(neg_raw(m.data[r * self.cols + f], p));
            }
            out.push(v);
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }
}

/// Incrementally built row echelon form of fixed width, used to accumulate
/// homogeneous linear constraints one row at a time.
#[derive(Debug, Clone)]
pub struct DenseEchelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl DenseEchelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Self { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` in place against the stored rows.
    pub(crate) fn reduce(&self, row: &mut [u32]) {
        let p = self.field.modulus();
        for (r, &c) in self.rows.iter().zip(&self.pivots) {
            let f = row[c];
            if f != 0 {
                axpy(row, r, neg_raw(f, p), p);
            }
        }
    }

    /// Adds a row; returns true when it was independent of the stored rows.
    pub(crate) fn insert_raw(&mut self, mut row: Vec<u32>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        self.reduce(&mut row);
        let Some(c) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(self.field.from_reduced(row[c])).unwrap();
        scale_in_place(&mut row, inv.value(), self.field.modulus());
        self.rows.push(row);
        self.pivots.push(c);
        true
    }

    /// Widens every stored row with zero columns.
    pub(crate) fn grow(&mut self, width: usize) {
        debug_assert!(width >= self.width);
        for r in &mut self.rows {
            r.resize(width, 0);
        }
        self.width = width;
    }

    pub fn insert(&mut self, row: &[Fp]) -> bool {
        self.insert_raw(row.iter().map(|x| x.value()).collect())
    }

    pub fn contains(&self, row: &[Fp]) -> bool {
        let mut r: Vec<u32> = row.iter().map(|x| x.value()).collect();
        self.reduce(&mut r);
        r.iter().all(|&x| x == 0)
    }

    /// Null space of the stored rows as a `width × k` matrix whose columns
    /// form a basis.
    pub fn nullspace_matrix(&self) -> DenseMatrix {
        let data: Vec<u32> = self.rows.iter().flatten().copied().collect();
        let m = DenseMatrix::from_raw(self.field, self.rows.len(), self.width, data);
        let basis = m.nullspace();
        let mut out = DenseMatrix::zeros(self.field, self.width, basis.len());
        for (j, v) in basis.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                out.data[i * basis.len() + j] = x.value();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn m(rows: &[&[i64]]) -> DenseMatrix {
        let f = k();
        let cols = rows[0].len();
        let rows: Vec<Vec<Fp>> = rows.iter().map(|r| r.iter().map(|&x| f.elem(x)).collect()).collect();
        DenseMatrix::from_rows(f, cols, &rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(DenseMatrix::identity(k(), 5).rank(), 5);
        assert_eq!(DenseMatrix::zeros(k(), 3, 4).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[3, 1]]).rank(), 1);
        assert_eq!(m(&[&[1, 2], &[3, 2]]).rank(), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 0, 4], &[0, 1, 1, 1], &[1, 3, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len() + a.rank(), 4);
        for v in &ns {
            for i in 0..a.rows() {
                let s = (0..4).fold(Fp::ZERO, |acc, j| k().add(acc, k().mul(a.get(i, j), v[j])));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn echelon_tracks_rank() {
        let f = k();
        let mut e = DenseEchelon::new(f, 3);
        assert!(e.insert(&[f.elem(1), f.elem(2), f.elem(0)]));
        assert!(!e.insert(&[f.elem(2), f.elem(4), f.elem(0)]));
        assert!(e.insert(&[f.elem(0), f.elem(0), f.elem(3)]));
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace_matrix();
        assert_eq!((ns.rows(), ns.cols()), (3, 1));
        assert!(e.contains(&[f.elem(3), f.elem(1), f.elem(4)]));
    }
}
