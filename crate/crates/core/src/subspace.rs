use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};
use crate::lie::{Coords, DegreeLayout};
use crate::linalg::SpanSolver;
use crate::witt::{FieldTerm, VectorField};

/// A Z-graded subspace of W(n,n;t) with an ordered homogeneous basis.
///
/// Basis vectors are sorted by degree (stable within a degree) and indexed
/// globally; each degree keeps an echelon form over field terms so that a
/// vector field can be converted to exact coordinates, or rejected when it
/// leaves the subspace.
#[derive(Debug, Clone)]
pub struct GradedSubspace {
    field: PrimeField,
    layout: DegreeLayout,
    vectors: Vec<VectorField>,
    solvers: Vec<SpanSolver<FieldTerm>>,
}

impl GradedSubspace {
    /// Builds from vectors that must be nonzero, homogeneous and independent.
    pub fn new(field: PrimeField, vectors: Vec<VectorField>) -> Result<Self> {
        let n = vectors.len();
        let (space, kept) = Self::spanned_by(field, vectors)?;
        if kept.len() != n {
            return Err(AlgebraError::DependentBasis);
        }
        Ok(space)
    }

    /// Keeps a maximal independent subset (first occurrences win) and
    /// reports which input positions were kept, in basis order.
    pub fn spanned_by(field: PrimeField, vectors: Vec<VectorField>) -> Result<(Self, Vec<usize>)> {
        let mut tagged = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let d = v.zdegree().ok_or(AlgebraError::NotHomogeneous)?;
            tagged.push((d, i, v));
        }
        tagged.sort_by_key(|&(d, i, _)| (d, i));
        let (min, max) = match (tagged.first(), tagged.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => (0, -1),
        };
        let slots = (max - min + 1).max(0) as usize;
        let mut solvers: Vec<SpanSolver<FieldTerm>> = (0..slots).map(|_| SpanSolver::new(field, true)).collect();
        let mut kept = Vec::new();
        let mut degrees = Vec::new();
        let mut basis = Vec::new();
        let mut local = alloc::vec![0usize; slots];
        for (d, i, v) in tagged {
            let slot = (d - min) as usize;
            if solvers[slot].insert(v.iter().map(|(t, &c)| (*t, c)), local[slot]) {
                local[slot] += 1;
                kept.push(i);
                degrees.push(d);
                basis.push(v);
            }
        }
        let layout = if basis.is_empty() {
            DegreeLayout::from_dims(0, &[])
        } else {
            DegreeLayout::from_degrees(&degrees)?
        };
        Ok((Self { field, layout, vectors: basis, solvers }, kept))
    }

    pub fn empty(field: PrimeField) -> Self {
        Self { field, layout: DegreeLayout::from_dims(0, &[]), vectors: Vec::new(), solvers: Vec::new() }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn layout(&self) -> &DegreeLayout {
        &self.layout
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn dim_at(&self, d: i32) -> usize {
        self.layout.dim_at(d)
    }

    pub fn vectors(&self) -> &[VectorField] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &VectorField {
        &self.vectors[i]
    }

    pub fn basis_at(&self, d: i32) -> &[VectorField] {
        &self.vectors[self.layout.range(d)]
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.layout.degree_of(i)
    }

    /// Canonical text label of basis vector `i`.
    pub fn label(&self, i: usize) -> String {
        self.vectors[i].to_string()
    }

    fn solver(&self, d: i32) -> Option<&SpanSolver<FieldTerm>> {
        let slot = d - self.layout.min_degree();
        (slot >= 0).then(|| self.solvers.get(slot as usize)).flatten()
    }

    /// Exact global coordinates, or [`AlgebraError::NotInSubspace`].
    pub fn coordinates(&self, v: &VectorField) -> Result<Coords> {
        let mut by_degree: alloc::collections::BTreeMap<i32, Vec<(FieldTerm, Fp)>> = Default::default();
        for (t, &c) in v.iter() {
            by_degree.entry(t.zdegree()).or_default().push((*t, c));
        }
        let mut out = Vec::new();
        for (d, terms) in by_degree {
            let solver = self.solver(d).ok_or(AlgebraError::NotInSubspace)?;
            let local = solver.coordinates(terms).ok_or(AlgebraError::NotInSubspace)?;
            let off = self.layout.range(d).start;
            out.extend(local.into_iter().map(|(i, c)| (off + i, c)));
        }
        Ok(out)
    }

    pub fn contains(&self, v: &VectorField) -> bool {
        self.coordinates(v).is_ok()
    }

    /// `Σ c_i b_i`.
    pub fn vector_from_coords(&self, coords: &[(usize, Fp)]) -> VectorField {
        let mut out = VectorField::zero();
        for &(i, c) in coords {
            out.add_scaled(self.field, &self.vectors[i], c);
        }
        out
    }

    /// True when every basis vector of `other` lies in `self`.
    pub fn contains_space(&self, other: &GradedSubspace) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }
}
