//! Graded Lie algebras and modules given by structure constants on a fixed
//! basis ordered by degree.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};

/// Sparse coordinate vector `(basis index, coefficient)`.
pub type Coords = Vec<(usize, Fp)>;

/// Degree bookkeeping for a basis sorted by Z-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLayout {
    min: i32,
    offsets: Vec<usize>,
}

impl DegreeLayout {
    /// `dims[k]` is the dimension in degree `min + k`.
    pub fn from_dims(min: i32, dims: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        offsets.push(0);
        for d in dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        Self { min, offsets }
    }

    /// Builds from a list of degrees that must be non-decreasing.
    pub fn from_degrees(degrees: &[i32]) -> Result<Self> {
        let Some(&min) = degrees.first() else {
            return Ok(Self::from_dims(0, &[]));
        };
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(AlgebraError::InconsistentGrading("basis not sorted by degree".into()));
        }
        let max = *degrees.last().unwrap();
        let mut dims = vec![0; (max - min + 1) as usize];
        for &d in degrees {
            dims[(d - min) as usize] += 1;
        }
        Ok(Self::from_dims(min, &dims))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    #[inline]
    pub fn min_degree(&self) -> i32 {
        self.min
    }

    #[inline]
    pub fn max_degree(&self) -> i32 {
        self.min + self.offsets.len() as i32 - 2
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        (self.min..=self.max_degree()).filter(|&d| self.dim_at(d) > 0)
    }

    /// Lowest degree with a nonzero piece.
    pub fn lowest(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn highest(&self) -> Option<i32> {
        self.degrees().last()
    }

    #[inline]
    pub fn range(&self, d: i32) -> Range<usize> {
        if d < self.min || d > self.max_degree() {
            return 0..0;
        }
        let k = (d - self.min) as usize;
        self.offsets[k]..self.offsets[k + 1]
    }

    #[inline]
    pub fn dim_at(&self, d: i32) -> usize {
        self.range(d).len()
    }

    pub fn degree_of(&self, idx: usize) -> i32 {
        debug_assert!(idx < self.dim());
        let k = self.offsets.partition_point(|&o| o <= idx) - 1;
        self.min + k as i32
    }
}

/// A finite-dimensional Z-graded Lie algebra with a homogeneous basis.
pub trait GradedLieAlgebra {
    fn field(&self) -> PrimeField;
    fn layout(&self) -> &DegreeLayout;
    /// Appends the coordinates of `[b_i, b_j]`; indices may repeat.
    fn bracket_into(&self, i: usize, j: usize, out: &mut Coords);

    fn dim(&self) -> usize {
        self.layout().dim()
    }
}

/// A graded module over a graded Lie algebra, with the action given on bases.
pub trait GradedModule {
    fn layout(&self) -> &DegreeLayout;
    /// Appends the coordinates of `b_a · v_j`; indices may repeat.
    fn act_into(&self, a: usize, j: usize, out: &mut Coords);
}

/// The adjoint module of a Lie algebra: `x · v = [x, v]`.
pub struct Adjoint<'a, L: ?Sized>(pub &'a L);

impl<L: GradedLieAlgebra + ?Sized> GradedModule for Adjoint<'_, L> {
    fn layout(&self) -> &DegreeLayout {
        self.0.layout()
    }

    fn act_into(&self, a: usize, j: usize, out: &mut Coords) {
        self.0.bracket_into(a, j, out)
    }
}

/// Sums repeated indices, drops zeros, sorts.
pub fn normalize_coords(field: PrimeField, mut v: Coords) -> Coords {
    v.sort_unstable_by_key(|&(i, _)| i);
    let mut out: Coords = Vec::with_capacity(v.len());
    for (i, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = field.add(last.1, c),
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Structure constants of an (even) Lie algebra, stored for `i < j`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    field: PrimeField,
    layout: DegreeLayout,
    offsets: Vec<u32>,
    entries: Vec<(u32, Fp)>,
}

impl StructureConstants {
    /// Fills the table from `f(i, j, out)` for every `i < j`.
    pub fn from_fn(
        field: PrimeField,
        layout: DegreeLayout,
        mut f: impl FnMut(usize, usize, &mut Coords),
    ) -> Self {
        let n = layout.dim();
        let pairs = n * n.saturating_sub(1) / 2;
        let mut offsets = Vec::with_capacity(pairs + 1);
        offsets.push(0u32);
        let mut entries = Vec::new();
        let mut buf = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                buf.clear();
                f(i, j, &mut buf);
                let v = normalize_coords(field, core::mem::take(&mut buf));
                entries.extend(v.iter().map(|&(k, c)| (k as u32, c)));
                buf = v;
                offsets.push(u32::try_from(entries.len()).expect("structure table too large"));
            }
        }
        Self { field, layout, offsets, entries }
    }

    /// Reassembles a table from exported triples `(i, j, k, c)`, `i < j`.
    pub fn from_triples(
        field: PrimeField,
        layout: DegreeLayout,
        triples: &[(usize, usize, usize, Fp)],
    ) -> Result<Self> {
        let n = layout.dim();
        let mut sorted = triples.to_vec();
        sorted.sort_unstable_by_key(|&(i, j, k, _)| (i, j, k));
        for &(i, j, k, _) in &sorted {
            if i >= j || j >= n || k >= n {
                return Err(AlgebraError::BadEntry { row: i, col: j });
            }
        }
        let mut cursor = 0;
        Ok(Self::from_fn(field, layout, |i, j, out| {
            while cursor < sorted.len() && (sorted[cursor].0, sorted[cursor].1) < (i, j) {
                cursor += 1;
            }
            while cursor < sorted.len() && (sorted[cursor].0, sorted[cursor].1) == (i, j) {
                out.push((sorted[cursor].2, sorted[cursor].3));
                cursor += 1;
            }
        }))
    }

    #[inline]
    fn pair_index(&self, i: usize, j: usize) -> usize {
        let n = self.layout.dim();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// The stored half of the table: `[b_i, b_j]` for `i < j`.
    pub fn upper(&self, i: usize, j: usize) -> &[(u32, Fp)] {
        let k = self.pair_index(i, j);
        &self.entries[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }

    /// All nonzero constants as `(i, j, k, c)` with `i < j`, sorted.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize, Fp)> + '_ {
        let n = self.layout.dim();
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| self.upper(i, j).iter().map(move |&(k, c)| (i, j, k as usize, c)))
        })
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }
}

impl GradedLieAlgebra for StructureConstants {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn layout(&self) -> &DegreeLayout {
        &self.layout
    }

    fn bracket_into(&self, i: usize, j: usize, out: &mut Coords) {
        use core::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => {}
            Less => out.extend(self.upper(i, j).iter().map(|&(k, c)| (k as usize, c))),
            Greater => out.extend(self.upper(j, i).iter().map(|&(k, c)| (k as usize, self.field.neg(c)))),
        }
    }
}

/// Bracket of two coordinate vectors by bilinear expansion.
pub fn bracket_coords<L: GradedLieAlgebra + ?Sized>(alg: &L, x: &[(usize, Fp)], y: &[(usize, Fp)]) -> Coords {
    let k = alg.field();
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for &(i, a) in x {
        for &(j, b) in y {
            buf.clear();
            alg.bracket_into(i, j, &mut buf);
            let ab = k.mul(a, b);
            out.extend(buf.iter().map(|&(t, c)| (t, k.mul(c, ab))));
        }
    }
    normalize_coords(k, out)
}
