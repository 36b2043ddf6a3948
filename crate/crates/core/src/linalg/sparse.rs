//! Sparse Gaussian elimination over GF(p) with Markowitz-style pivoting.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::dense::DenseMatrix;
use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};

type Row = Vec<(u32, u32)>;

/// Tuning knobs for [`SparseMatrix`] elimination.
#[derive(Debug, Clone, Copy)]
pub struct EliminationOptions {
    /// Fill ratio above which elimination switches to the dense kernel.
    pub dense_threshold: f64,
    /// Dense elimination is only used when `rows * cols` stays below this.
    pub dense_max_entries: usize,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        Self { dense_threshold: 0.25, dense_max_entries: 4_000_000 }
    }
}

/// A sparse matrix stored as a list of nonzero `(row, col, value)` triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Fp)>,
}

impl SparseMatrix {
    /// Validates that indices are in range, distinct, and values nonzero.
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(usize, usize, Fp)>) -> Result<Self> {
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(AlgebraError::BadEntry { row: w[1].0, col: w[1].1 });
            }
        }
        for &(r, c, v) in &entries {
            if r >= rows || c >= cols || v.is_zero() {
                return Err(AlgebraError::BadEntry { row: r, col: c });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds from sparse rows; repeated column indices within a row are summed.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<(usize, Fp)>]) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (c, v) in normalize_row(field, r.iter().map(|&(c, v)| (c, v.value())))? {
                if c as usize >= cols {
                    return Err(AlgebraError::BadEntry { row: i, col: c as usize });
                }
                entries.push((i, c as usize, field.from_reduced(v)));
            }
        }
        Ok(Self { rows: rows.len(), cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: Vec::new() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Fp)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn row_lists(&self) -> Vec<Row> {
        let mut rows = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            rows[r].push((c as u32, v.value()));
        }
        rows
    }

    fn use_dense(&self, opts: &EliminationOptions) -> bool {
        let cells = self.rows.saturating_mul(self.cols);
        cells > 0
            && cells <= opts.dense_max_entries
            && self.entries.len() as f64 >= opts.dense_threshold * cells as f64
    }

    fn to_dense(&self, field: PrimeField) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(field, self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            d.set(r, c, v);
        }
        d
    }

    pub fn rank(&self, field: PrimeField) -> usize {
        self.rank_with(field, &EliminationOptions::default())
    }

    pub fn rank_with(&self, field: PrimeField, opts: &EliminationOptions) -> usize {
        if self.use_dense(opts) {
            return self.to_dense(field).rank();
        }
        Eliminator::run(field, self.cols, self.row_lists(), false).pivots.len()
    }

    /// Basis of the right null space as dense vectors.
    pub fn kernel_basis(&self, field: PrimeField) -> Vec<Vec<Fp>> {
        self.kernel_basis_with(field, &EliminationOptions::default())
    }

    pub fn kernel_basis_with(&self, field: PrimeField, opts: &EliminationOptions) -> Vec<Vec<Fp>> {
        if self.use_dense(opts) {
            return self.to_dense(field).nullspace();
        }
        let e = Eliminator::run(field, self.cols, self.row_lists(), true);
        let mut pivot_of_col = vec![usize::MAX; self.cols];
        for &(r, c) in &e.pivots {
            pivot_of_col[c] = r;
        }
        let p = field.modulus();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivot_of_col[f] != usize::MAX {
                continue;
            }
            let mut v = vec![Fp::ZERO; self.cols];
            v[f] = Fp::ONE;
            for &(r, c) in &e.pivots {
                if let Ok(pos) = e.rows[r].binary_search_by_key(&(f as u32), |&(cc, _)| cc) {
                    let x = e.rows[r][pos].1;
                    v[c] = field.from_reduced(p - x);
                }
            }
            out.push(v);
        }
        out
    }

    /// `M v` for a dense vector.
    pub fn mul_vec(&self, field: PrimeField, v: &[Fp]) -> Result<Vec<Fp>> {
        if v.len() != self.cols {
            return Err(AlgebraError::LengthMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![Fp::ZERO; self.rows];
        for &(r, c, x) in &self.entries {
            out[r] = field.add(out[r], field.mul(x, v[c]));
        }
        Ok(out)
    }
}

/// Sorts, merges duplicates, drops zeros.
fn normalize_row(field: PrimeField, it: impl Iterator<Item = (usize, u32)>) -> Result<Row> {
    let p = field.modulus();
    let mut v: Vec<(u32, u32)> = it.map(|(c, x)| (c as u32, x % p)).collect();
    v.sort_unstable_by_key(|&(c, _)| c);
    let mut out: Row = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = (last.1 + x) % p,
            _ => out.push((c, x)),
        }
    }
    out.retain(|&(_, x)| x != 0);
    Ok(out)
}

/// `a + f * b` over sorted sparse rows.
fn merge_axpy(a: &[(u32, u32)], b: &[(u32, u32)], f: u32, p: u32, out: &mut Row) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    let mul = |x: u32| ((x as u64 * f as u64) % p as u64) as u32;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = mul(b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = (a[i].1 + mul(b[j].1)) % p;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
}

struct Eliminator {
    rows: Vec<Row>,
    /// `(row, col)` pairs in pivot order; pivot rows are normalized to 1.
    pivots: Vec<(usize, usize)>,
}

impl Eliminator {
    /// With `full`, pivot columns are cleared from every other row, leaving a
    /// reduced form suitable for reading off the kernel.
    fn run(field: PrimeField, cols: usize, mut rows: Vec<Row>, full: bool) -> Self {
        let p = field.modulus();
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
        for (i, r) in rows.iter().enumerate() {
            for &(c, _) in r {
                col_rows[c as usize].push(i as u32);
            }
        }
        // Active rows bucketed by nonzero count for cheap minimum selection.
        let mut active: BTreeSet<(usize, usize)> =
            rows.iter().enumerate().filter(|(_, r)| !r.is_empty()).map(|(i, r)| (r.len(), i)).collect();
        let mut is_active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
        let mut pivots = Vec::new();
        let mut scratch = Vec::new();
        while let Some(&(len, r)) = active.iter().next() {
            active.remove(&(len, r));
            is_active[r] = false;
            if rows[r].is_empty() {
                continue;
            }
            // Markowitz: among the row's entries take the sparsest column.
            let &(c, v) = rows[r]
                .iter()
                .min_by_key(|&&(c, _)| col_rows[c as usize].len())
                .expect("nonempty row");
            let inv = field.inv(field.from_reduced(v)).unwrap().value();
            for e in rows[r].iter_mut() {
                e.1 = ((e.1 as u64 * inv as u64) % p as u64) as u32;
            }
            let pivot_row = core::mem::take(&mut rows[r]);
            let touching = core::mem::take(&mut col_rows[c as usize]);
            for &ri in &touching {
                let ri = ri as usize;
                if ri == r || !(is_active[ri] || full) {
                    continue;
                }
                let Ok(pos) = rows[ri].binary_search_by_key(&c, |&(cc, _)| cc) else {
                    continue;
                };
                let f = p - rows[ri][pos].1;
                let old_len = rows[ri].len();
                merge_axpy(&rows[ri], &pivot_row, f, p, &mut scratch);
                // Register fill-in.
                for &(cc, _) in scratch.iter() {
                    if cc != c && rows[ri].binary_search_by_key(&cc, |&(x, _)| x).is_err() {
                        col_rows[cc as usize].push(ri as u32);
                    }
                }
                core::mem::swap(&mut rows[ri], &mut scratch);
                if is_active[ri] {
                    active.remove(&(old_len, ri));
                    if rows[ri].is_empty() {
                        is_active[ri] = false;
                    } else {
                        active.insert((rows[ri].len(), ri));
                    }
                }
            }
            col_rows[c as usize] = vec![r as u32];
            rows[r] = pivot_row;
            pivots.push((r, c as usize));
        }
        Self { rows, pivots }
    }
}

/// Decides whether `v` lies in the span of `basis`; on success returns
/// coefficients `c` with `Σ c_i basis_i = v`.
pub fn in_span(field: PrimeField, v: &[Fp], basis: &[Vec<Fp>]) -> Result<Option<Vec<Fp>>> {
    for b in basis {
        if b.len() != v.len() {
            return Err(AlgebraError::LengthMismatch { expected: v.len(), got: b.len() });
        }
    }
    // Columns = basis vectors plus v; a kernel vector with last entry 1
    // yields the combination.
    let k = basis.len();
    let mut rows: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); v.len()];
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            if !x.is_zero() {
                rows[i].push((j, x));
            }
        }
    }
    for (i, &x) in v.iter().enumerate() {
        if !x.is_zero() {
            rows[i].push((k, field.neg(x)));
        }
    }
    let m = SparseMatrix::from_rows(field, k + 1, &rows)?;
    for w in m.kernel_basis(field) {
        if !w[k].is_zero() {
            let inv = field.inv(w[k])?;
            return Ok(Some(w[..k].iter().map(|&x| field.mul(x, inv)).collect()));
        }
    }
    Ok(None)
}
