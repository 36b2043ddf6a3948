//! The odd Hamiltonian map `T_H` and the even part 𝓗𝓞 of HO(n,n;t).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};
use crate::lie::{normalize_coords, Coords, DegreeLayout, GradedLieAlgebra, StructureConstants};
use crate::linalg::SparseMatrix;
use crate::subspace::GradedSubspace;
use crate::superalgebra::{AlgebraParams, Monomial, Parity, SuperPoly};
use crate::witt::{FieldTerm, VectorField};

/// `T_H` on a single monomial.
pub fn t_h_monomial(params: &AlgebraParams, m: &Monomial) -> VectorField {
    let k = params.field();
    let odd = m.parity().is_odd();
    let mut out = VectorField::zero();
    for i in 1..=2 * params.n() {
        if let Some((s, dm)) = params.partial_monomial(i, m) {
            let sign = k.sign(odd && params.is_odd_index(i));
            out.add_term(k, FieldTerm::new(dm, params.prime(i)), k.mul(s, sign));
        }
    }
    out
}

/// `T_H(a) = Σ_i (−1)^{μ(i)p(a)} ∂_i(a) ∂_{i'}` for parity-homogeneous `a`.
pub fn t_h(params: &AlgebraParams, a: &SuperPoly) -> Result<VectorField> {
    if a.is_zero() {
        return Ok(VectorField::zero());
    }
    a.parity().ok_or(AlgebraError::MixedParity)?;
    let k = params.field();
    let mut out = VectorField::zero();
    for (m, &c) in a.iter() {
        out.add_scaled(k, &t_h_monomial(params, m), c);
    }
    Ok(out)
}

/// Checks `[T_H(a), T_H(b)] = T_H(T_H(a)(b))` exactly.
pub fn verify_th_morphism(params: &AlgebraParams, a: &SuperPoly, b: &SuperPoly) -> Result<bool> {
    let ta = t_h(params, a)?;
    let tb = t_h(params, b)?;
    let lhs = params.bracket(&ta, &tb);
    let rhs = t_h(params, &params.apply(&ta, b))?;
    Ok(lhs == rhs)
}

#[inline]
fn member_sign(params: &AlgebraParams, i: usize, j: usize) -> bool {
    let (mi, mj) = (params.is_odd_index(i), params.is_odd_index(j));
    ((mi && mj) as u8 + mi as u8 + mj as u8) % 2 == 1
}

/// The defining conditions of the even part of overline-HO:
/// `∂_i(a_{j'}) = (−1)^{μ(i)μ(j)+μ(i)+μ(j)} ∂_j(a_{i'})` for all `i, j ∈ Y`.
///
/// Expects an even-parity field.
pub fn is_member(params: &AlgebraParams, v: &VectorField) -> bool {
    let k = params.field();
    let dim = 2 * params.n();
    let comps: Vec<SuperPoly> = (1..=dim).map(|r| v.component(r)).collect();
    for i in 1..=dim {
        for j in i..=dim {
            let lhs = params.partial(i, &comps[params.prime(j) - 1]).expect("index in range");
            let rhs = params.partial(j, &comps[params.prime(i) - 1]).expect("index in range");
            let rhs = rhs.scaled(k, k.sign(member_sign(params, i, j)));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Dimension of the solution space of the membership conditions inside
/// each graded piece of 𝓦, as `(degree, dim)`.
pub fn membership_kernel_dims(params: &AlgebraParams) -> Vec<(i32, usize)> {
    let k = params.field();
    let w = params.even_part_basis();
    let dim = 2 * params.n();
    let mut out = Vec::new();
    for d in w.layout().degrees() {
        let mut row_of: BTreeMap<(u8, u8, Monomial), usize> = BTreeMap::new();
        let mut rows: Vec<Vec<(usize, Fp)>> = Vec::new();
        let mut push = |key: (u8, u8, Monomial), col: usize, c: Fp, rows: &mut Vec<Vec<(usize, Fp)>>| {
            let next = row_of.len();
            let r = *row_of.entry(key).or_insert(next);
            if r == rows.len() {
                rows.push(Vec::new());
            }
            rows[r].push((col, c));
        };
        let basis = w.basis_at(d);
        for (col, v) in basis.iter().enumerate() {
            let (t, _) = v.iter().next().expect("single-term basis vector");
            let r = t.dir();
            // lhs: ∂_i(a_{j'}) with j' = r.
            let j = params.prime(r);
            for i in 1..=dim {
                if let Some((s, dm)) = params.partial_monomial(i, &t.mono) {
                    push((i as u8, j as u8, dm), col, s, &mut rows);
                }
            }
            // rhs: −sign · ∂_j(a_{i'}) with i' = r.
            let i = params.prime(r);
            for j in 1..=dim {
                if let Some((s, dm)) = params.partial_monomial(j, &t.mono) {
                    let c = k.neg(k.mul(s, k.sign(member_sign(params, i, j))));
                    push((i as u8, j as u8, dm), col, c, &mut rows);
                }
            }
        }
        let m = SparseMatrix::from_rows(k, basis.len(), &rows).expect("columns in range");
        out.push((d, basis.len() - m.rank(k)));
    }
    out
}

/// Rank of `T_H` on the monomials of the given parity.
pub fn th_rank(params: &AlgebraParams, parity: Parity) -> usize {
    let images: Vec<VectorField> =
        params.enumerate_basis(None, Some(parity)).iter().map(|m| t_h_monomial(params, m)).collect();
    let (space, _) = GradedSubspace::spanned_by(params.field(), images).expect("T_H images are homogeneous");
    space.dim()
}

/// `Δ_i = x_{i'}∂_{i'} − x_i∂_i`, `i ∈ Y₀`.
pub fn delta(params: &AlgebraParams, i: usize) -> Result<VectorField> {
    if i == 0 || i > params.n() {
        return Err(AlgebraError::IndexOutOfRange { index: i, max: params.n() });
    }
    let k = params.field();
    let ip = params.prime(i);
    let mut v = VectorField::zero();
    v.add_term(k, FieldTerm::new(params.variable(ip)?, ip), Fp::ONE);
    v.add_term(k, FieldTerm::new(params.variable(i)?, i), k.neg(Fp::ONE));
    Ok(v)
}

/// `Γ = Σ_{i∈Y₀} x_{i'}∂_{i'}`.
pub fn gamma(params: &AlgebraParams) -> VectorField {
    let k = params.field();
    let mut v = VectorField::zero();
    for i in 1..=params.n() {
        let ip = params.prime(i);
        v.add_term(k, FieldTerm::new(params.variable(ip).expect("odd variable"), ip), Fp::ONE);
    }
    v
}

/// The generating families `M` and `N` of 𝓗𝓞.
#[derive(Debug, Clone)]
pub struct Generators {
    /// `T_H(x^{(qε_i)} x_k)` for every `i ∈ Y₀`, `0 ≤ q ≤ π_i`, `k ∈ Y₁`, with
    /// the `q = 0` entries repeated once per `i`.
    pub m: Vec<VectorField>,
    /// `T_H(x_k x_l x_q)` for `k < l < q` in `Y₁`.
    pub n: Vec<VectorField>,
}

impl Generators {
    pub fn all(&self) -> impl Iterator<Item = &VectorField> {
        self.m.iter().chain(&self.n)
    }
}

pub fn generators(params: &AlgebraParams) -> Generators {
    let n = params.n();
    let mut m = Vec::new();
    for i in 1..=n {
        for q in 0..=params.pi()[i - 1] {
            let mut alpha = vec![0; n];
            alpha[i - 1] = q;
            for kk in n + 1..=2 * n {
                let mono = params.monomial(&alpha, &[kk]).expect("valid monomial");
                m.push(t_h_monomial(params, &mono));
            }
        }
    }
    let zero = vec![0; n];
    let mut nn = Vec::new();
    for a in n + 1..=2 * n {
        for b in a + 1..=2 * n {
            for c in b + 1..=2 * n {
                let mono = params.monomial(&zero, &[a, b, c]).expect("valid monomial");
                nn.push(t_h_monomial(params, &mono));
            }
        }
    }
    Generators { m, n: nn }
}

/// Smallest bracket-closed subspace containing the (homogeneous) seed.
pub fn closure(params: &AlgebraParams, seed: &[VectorField], ambient: &GradedSubspace) -> Result<GradedSubspace> {
    use crate::linalg::SpanSolver;
    let k = params.field();
    let mut solvers: BTreeMap<i32, SpanSolver<FieldTerm>> = BTreeMap::new();
    let mut vectors: Vec<VectorField> = Vec::new();
    let mut add = |v: VectorField, vectors: &mut Vec<VectorField>| -> Result<()> {
        if v.is_zero() {
            return Ok(());
        }
        let d = v.zdegree().ok_or(AlgebraError::NotHomogeneous)?;
        let s = solvers.entry(d).or_insert_with(|| SpanSolver::new(k, false));
        if s.insert(v.iter().map(|(t, &c)| (*t, c)), 0) {
            vectors.push(v);
        }
        Ok(())
    };
    for v in seed {
        if !ambient.contains(v) {
            return Err(AlgebraError::NotInSubspace);
        }
        add(v.clone(), &mut vectors)?;
    }
    // Every pair (j ≤ i) is bracketed exactly once; new vectors join the queue.
    let mut i = 0;
    while i < vectors.len() {
        for j in 0..i {
            let b = params.bracket(&vectors[i], &vectors[j]);
            add(b, &mut vectors)?;
        }
        i += 1;
    }
    GradedSubspace::new(k, vectors)
}

/// `{X ∈ ambient : [X, s] = 0 ∀ s ∈ sub}` for homogeneous `sub`.
pub fn centralizer(params: &AlgebraParams, sub: &[VectorField], ambient: &GradedSubspace) -> Result<GradedSubspace> {
    let k = params.field();
    for s in sub {
        if !s.is_zero() && s.zdegree().is_none() {
            return Err(AlgebraError::NotHomogeneous);
        }
    }
    let mut out = Vec::new();
    for d in ambient.layout().degrees() {
        let basis = ambient.basis_at(d);
        let mut row_of: BTreeMap<(usize, FieldTerm), usize> = BTreeMap::new();
        let mut rows: Vec<Vec<(usize, Fp)>> = Vec::new();
        for (col, b) in basis.iter().enumerate() {
            for (si, s) in sub.iter().enumerate() {
                for (t, &c) in params.bracket(b, s).iter() {
                    let next = row_of.len();
                    let r = *row_of.entry((si, *t)).or_insert(next);
                    if r == rows.len() {
                        rows.push(Vec::new());
                    }
                    rows[r].push((col, c));
                }
            }
        }
        let m = SparseMatrix::from_rows(k, basis.len(), &rows)?;
        for kv in m.kernel_basis(k) {
            let mut v = VectorField::zero();
            for (x, b) in kv.iter().zip(basis) {
                if !x.is_zero() {
                    v.add_scaled(k, b, *x);
                }
            }
            out.push(v);
        }
    }
    GradedSubspace::new(k, out)
}

/// Basis of the center of a graded Lie algebra, in coordinates.
pub fn center<L: GradedLieAlgebra + ?Sized>(alg: &L) -> Vec<Coords> {
    let k = alg.field();
    let n = alg.dim();
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for d in alg.layout().degrees().collect::<Vec<_>>() {
        let range = alg.layout().range(d);
        let mut row_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut rows: Vec<Vec<(usize, Fp)>> = Vec::new();
        for (col, a) in range.clone().enumerate() {
            for s in 0..n {
                buf.clear();
                alg.bracket_into(a, s, &mut buf);
                for &(t, c) in &normalize_coords(k, core::mem::take(&mut buf)) {
                    let next = row_of.len();
                    let r = *row_of.entry((s, t)).or_insert(next);
                    if r == rows.len() {
                        rows.push(Vec::new());
                    }
                    rows[r].push((col, c));
                }
            }
        }
        let m = SparseMatrix::from_rows(k, range.len(), &rows).expect("columns in range");
        for kv in m.kernel_basis(k) {
            out.push(kv.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, &x)| (range.start + i, x)).collect());
        }
    }
    out
}

/// The even part 𝓗𝓞 of HO(n,n;t) with a fixed basis and structure constants.
///
/// Basis vector `b_k = T_H(s_k · m_k)` for an odd monomial `m_k`, the scale
/// `s_k` making the leading coefficient 1.
#[derive(Debug, Clone)]
pub struct HOAlgebra {
    params: AlgebraParams,
    space: GradedSubspace,
    preimage: Vec<(Monomial, Fp)>,
    constants: StructureConstants,
}

impl HOAlgebra {
    pub fn build(params: &AlgebraParams) -> Result<Self> {
        let k = params.field();
        let odd = params.enumerate_basis(None, Some(Parity::Odd));
        let mut images = Vec::with_capacity(odd.len());
        let mut scales = Vec::with_capacity(odd.len());
        for m in &odd {
            let v = t_h_monomial(params, m);
            let s = match v.iter().next() {
                Some((_, &c)) => k.inv(c)?,
                None => Fp::ONE,
            };
            images.push(v.scaled(k, s));
            scales.push(s);
        }
        let (space, kept) = GradedSubspace::spanned_by(k, images)?;
        let preimage: Vec<(Monomial, Fp)> = kept.iter().map(|&i| (odd[i], scales[i])).collect();
        let layout = space.layout().clone();
        let constants = if kept.len() == odd.len() {
            Self::buttin_constants(params, &preimage, layout)?
        } else {
            Self::direct_constants(params, &space)?
        };
        Ok(Self { params: params.clone(), space, preimage, constants })
    }

    /// Structure constants from `[T_H a, T_H b] = T_H(T_H(a)(b))`; valid when
    /// `T_H` is injective on the odd monomials, so that each odd monomial
    /// maps to a rescaled basis vector.
    fn buttin_constants(
        params: &AlgebraParams,
        preimage: &[(Monomial, Fp)],
        layout: DegreeLayout,
    ) -> Result<StructureConstants> {
        let k = params.field();
        let index: BTreeMap<Monomial, usize> = preimage.iter().enumerate().map(|(i, &(m, _))| (m, i)).collect();
        let inv_scale: Vec<Fp> = preimage.iter().map(|&(_, s)| k.inv(s)).collect::<Result<_>>()?;
        let raw: Vec<VectorField> = preimage.iter().map(|(m, _)| t_h_monomial(params, m)).collect();
        let mut missing = None;
        let sc = StructureConstants::from_fn(k, layout, |i, j, out| {
            let mj = &preimage[j].0;
            let sij = k.mul(preimage[i].1, preimage[j].1);
            for (t, &c) in raw[i].iter() {
                let Some((s1, dm)) = params.partial_monomial(t.dir(), mj) else { continue };
                let Some((s2, prod)) = params.mul_monomials(&t.mono, &dm) else { continue };
                match index.get(&prod) {
                    Some(&kk) => out.push((kk, k.mul(k.mul(c, k.mul(s1, s2)), k.mul(sij, inv_scale[kk])))),
                    None => missing = Some(prod),
                }
            }
        });
        match missing {
            Some(m) => Err(AlgebraError::InconsistentGrading(format!("bracket produced monomial {m} outside the basis"))),
            None => Ok(sc),
        }
    }

    fn direct_constants(params: &AlgebraParams, space: &GradedSubspace) -> Result<StructureConstants> {
        let mut err = None;
        let sc = StructureConstants::from_fn(space.field(), space.layout().clone(), |i, j, out| {
            match space.coordinates(&params.bracket(space.vector(i), space.vector(j))) {
                Ok(c) => out.extend(c),
                Err(e) => err = Some(e),
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(sc),
        }
    }

    /// Recomputes `[b_i, b_j]` by bracketing vector fields and solving for
    /// coordinates, and compares with the stored constants.
    pub fn cross_check(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<usize> {
        let mut checked = 0;
        let mut buf = Vec::new();
        for (i, j) in pairs {
            let direct = self.space.coordinates(&self.params.bracket(self.vector(i), self.vector(j)))?;
            buf.clear();
            self.constants.bracket_into(i, j, &mut buf);
            if normalize_coords(self.field(), core::mem::take(&mut buf)) != normalize_coords(self.field(), direct) {
                return Err(AlgebraError::RouteMismatch(format!("bracket of basis vectors {i} and {j}")));
            }
            checked += 1;
        }
        Ok(checked)
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn space(&self) -> &GradedSubspace {
        &self.space
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn vector(&self, i: usize) -> &VectorField {
        self.space.vector(i)
    }

    /// `(m, s)` with `b_i = T_H(s·m)`.
    pub fn preimage(&self, i: usize) -> (Monomial, Fp) {
        self.preimage[i]
    }

    pub fn coordinates(&self, v: &VectorField) -> Result<Coords> {
        self.space.coordinates(v)
    }

    /// Index of the basis vector proportional to `T_H(m)`, if any.
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.preimage.iter().position(|(pm, _)| pm == m)
    }
}

impl GradedLieAlgebra for HOAlgebra {
    fn field(&self) -> PrimeField {
        self.space.field()
    }

    fn layout(&self) -> &DegreeLayout {
        self.space.layout()
    }

    fn bracket_into(&self, i: usize, j: usize, out: &mut Coords) {
        self.constants.bracket_into(i, j, out)
    }
}
