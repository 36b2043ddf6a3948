//! Graded derivation spaces `Der_m(g, V)` of a graded Lie algebra with
//! values in a graded module, inner and p-power derivations, and the
//! assembly of the full derivation algebra of 𝓗𝓞.
//!
//! Module convention: `D([x, y]) = x·D(y) − y·D(x)`. The inner derivation
//! attached to `v ∈ V_m` is `x ↦ x·v`; on the adjoint module that is
//! `x ↦ [x, v] = −(ad v)(x)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};
use crate::ho::{gamma, HOAlgebra};
use crate::lie::{bracket_coords, normalize_coords, Adjoint, Coords, DegreeLayout, GradedLieAlgebra, GradedModule};
use crate::linalg::{axpy, neg_raw, DenseEchelon, DenseMatrix};
use crate::subspace::GradedSubspace;
use crate::superalgebra::AlgebraParams;
use crate::witt::{FieldTerm, VectorField};

/// A degree-`m` linear map `g → V`, stored as the image of every source
/// basis vector in target coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    degree: i32,
    images: Vec<Coords>,
}

impl GradedMap {
    pub fn new(degree: i32, images: Vec<Coords>) -> Self {
        Self { degree, images }
    }

    pub fn zero(degree: i32, source_dim: usize) -> Self {
        Self { degree, images: vec![Vec::new(); source_dim] }
    }

    #[inline]
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn source_dim(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> &[(usize, Fp)] {
        &self.images[i]
    }

    pub fn images(&self) -> &[Coords] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Vec::is_empty)
    }

    /// Matrix of the block `g_d → V_{d+m}` (rows: target, columns: source).
    pub fn block(&self, field: PrimeField, source: &DegreeLayout, target: &DegreeLayout, d: i32) -> DenseMatrix {
        let src = source.range(d);
        let tgt = target.range(d + self.degree);
        let mut out = DenseMatrix::zeros(field, tgt.len(), src.len());
        for (col, i) in src.enumerate() {
            for &(t, c) in &self.images[i] {
                out.set(t - tgt.start, col, c);
            }
        }
        out
    }

    /// Image of an arbitrary coordinate vector.
    pub fn apply(&self, field: PrimeField, x: &[(usize, Fp)]) -> Coords {
        let mut out = Vec::new();
        for &(i, a) in x {
            out.extend(self.images[i].iter().map(|&(t, c)| (t, field.mul(a, c))));
        }
        normalize_coords(field, out)
    }

    /// `self ∘ other` for endomorphisms.
    pub fn compose(&self, field: PrimeField, other: &GradedMap) -> GradedMap {
        let images = other.images.iter().map(|x| self.apply(field, x)).collect();
        GradedMap { degree: self.degree + other.degree, images }
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, field: PrimeField, other: &GradedMap) -> GradedMap {
        let ab = self.compose(field, other);
        let ba = other.compose(field, self);
        let images = ab
            .images
            .into_iter()
            .zip(ba.images)
            .map(|(mut x, y)| {
                x.extend(y.into_iter().map(|(t, c)| (t, field.neg(c))));
                normalize_coords(field, x)
            })
            .collect();
        GradedMap { degree: self.degree + other.degree, images }
    }

    fn flat(&self) -> impl Iterator<Item = ((usize, usize), Fp)> + '_ {
        self.images.iter().enumerate().flat_map(|(i, v)| v.iter().map(move |&(t, c)| ((i, t), c)))
    }
}

/// Rank of a family of maps of a common degree.
pub fn span_rank(field: PrimeField, maps: &[GradedMap]) -> usize {
    let mut s = crate::linalg::SpanSolver::new(field, false);
    maps.iter().filter(|m| s.insert(m.flat(), 0)).count()
}

/// Reduced echelon basis of the span of `maps` over the column order
/// `(source index, target index)`.
pub fn canonical_basis(field: PrimeField, degree: i32, source_dim: usize, maps: &[GradedMap]) -> Vec<GradedMap> {
    let mut cols: Vec<(usize, usize)> = maps.iter().flat_map(|m| m.flat().map(|(k, _)| k)).collect();
    cols.sort_unstable();
    cols.dedup();
    let col_of: BTreeMap<(usize, usize), usize> = cols.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut m = DenseMatrix::zeros(field, maps.len(), cols.len());
    for (r, map) in maps.iter().enumerate() {
        for (k, c) in map.flat() {
            m.set(r, col_of[&k], c);
        }
    }
    let rank = m.rref().len();
    (0..rank)
        .map(|r| {
            let mut images = vec![Vec::new(); source_dim];
            for (j, &(i, t)) in cols.iter().enumerate() {
                let c = m.get(r, j);
                if !c.is_zero() {
                    images[i].push((t, c));
                }
            }
            GradedMap { degree, images }
        })
        .collect()
}

/// A basis of `Der_m(g, V)` with flags for members lying in the inner span.
#[derive(Debug, Clone)]
pub struct DerivationBasis {
    pub degree: i32,
    pub maps: Vec<GradedMap>,
    pub inner: Vec<bool>,
}

impl DerivationBasis {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }
}

/// Which Leibniz pairs the solver imposes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum PairMode {
    /// Every pair of basis vectors.
    #[default]
    All,
    /// Only pairs with at least one member in the given generating set.
    Generators(Vec<usize>),
}

#[derive(Debug, Clone, Default)]
pub struct DerOptions {
    /// Source degrees on which the derivation is forced to vanish.
    pub vanish_on: Vec<i32>,
    pub pairs: PairMode,
}

/// Row-major `rows × width` block of parameter coefficients. Blocks created
/// before the parameter space grew are narrower; missing columns are zero.
#[derive(Debug, Clone)]
struct Block {
    rows: usize,
    width: usize,
    data: Vec<u32>,
}

impl Block {
    fn zeros(rows: usize, width: usize) -> Self {
        Self { rows, width, data: vec![0; rows * width] }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.width..(r + 1) * self.width]
    }

    #[inline]
    fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.width..(r + 1) * self.width]
    }

    /// `self · n` for an `width × k` matrix (missing rows of `n` unused).
    fn rebased(&self, n: &DenseMatrix, p: u32) -> Block {
        let k = n.cols();
        let mut out = Block::zeros(self.rows, k);
        for r in 0..self.rows {
            let dst = &mut out.data[r * k..(r + 1) * k];
            for (c, &x) in self.row(r).iter().enumerate() {
                if x != 0 {
                    axpy(dst, n.row_raw(c), x, p);
                }
            }
        }
        out
    }
}

/// Adds `c · src` (rows shifted by `offset`) into `dst`.
fn add_block(dst: &mut Block, offset: usize, src: &Block, c: u32, p: u32) {
    debug_assert!(src.width <= dst.width);
    for r in 0..src.rows {
        let s = src.row(r);
        if s.iter().any(|&x| x != 0) {
            axpy(&mut dst.row_mut(offset + r)[..src.width], s, c, p);
        }
    }
}

struct Solver<'a, L: ?Sized, V: ?Sized> {
    g: &'a L,
    v: &'a V,
    m: i32,
    field: PrimeField,
    blocks: Vec<Option<Block>>,
    width: usize,
    constraints: DenseEchelon,
    buf: Coords,
    since_rebase: usize,
}

impl<L: GradedLieAlgebra + ?Sized, V: GradedModule + ?Sized> Solver<'_, L, V> {
    fn p(&self) -> u32 {
        self.field.modulus()
    }

    fn target_dim(&self, src_degree: i32) -> usize {
        self.v.layout().dim_at(src_degree + self.m)
    }

    fn fresh_params(&mut self, count: usize) -> usize {
        let first = self.width;
        self.width += count;
        self.constraints.grow(self.width);
        first
    }

    /// `a · X` for a block `X` over `V_e`, written into `dst` rows over `V_{e+deg a}`.
    fn act_block(&mut self, a: usize, x: &Block, e: i32, dst: &mut Block, offset: usize, sign: u32) -> Result<()> {
        let p = self.p();
        let src = self.v.layout().range(e);
        let tgt = self.v.layout().range(e + self.g.layout().degree_of(a));
        for r in 0..x.rows {
            let row = x.row(r);
            if row.iter().all(|&z| z == 0) {
                continue;
            }
            self.buf.clear();
            self.v.act_into(a, src.start + r, &mut self.buf);
            for &(t, c) in &self.buf {
                if !tgt.contains(&t) {
                    return Err(AlgebraError::InconsistentGrading(format!(
                        "action of basis vector {a} leaves the expected degree"
                    )));
                }
                let coeff = self.field.mul(c, self.field.from_reduced(sign)).value();
                axpy(&mut dst.row_mut(offset + t - tgt.start)[..x.width], row, coeff, p);
            }
        }
        Ok(())
    }

    /// `Σ c_k D(b_k)` for `[a, b] = Σ c_k b_k`, added into `dst`.
    fn add_bracket_image(&mut self, a: usize, b: usize, dst: &mut Block, offset: usize) {
        let p = self.p();
        self.buf.clear();
        self.g.bracket_into(a, b, &mut self.buf);
        let terms = normalize_coords(self.field, core::mem::take(&mut self.buf));
        for &(k, c) in &terms {
            let blk = self.blocks[k].as_ref().expect("bracket image computed before use");
            add_block(dst, offset, blk, c.value(), p);
        }
        self.buf = terms;
    }

    fn constrain(&mut self, blk: &Block) {
        for r in 0..blk.rows {
            let row = blk.row(r);
            if row.iter().any(|&x| x != 0) {
                let mut full = row.to_vec();
                full.resize(self.width, 0);
                self.constraints.insert_raw(full);
            }
        }
    }

    /// Leibniz residual `D([a,b]) − a·D(b) + b·D(a)` as constraints.
    fn impose_pair(&mut self, a: usize, b: usize) -> Result<()> {
        let lay = self.g.layout();
        let (da, db) = (lay.degree_of(a), lay.degree_of(b));
        let rows = self.target_dim(da + db);
        if rows == 0 {
            return Ok(());
        }
        let ba = self.blocks[a].take().expect("block computed");
        let bb = self.blocks[b].take().expect("block computed");
        let mut res = Block::zeros(rows, self.width);
        let p = self.p();
        let out = (|| {
            self.act_block(a, &bb, db + self.m, &mut res, 0, neg_raw(1, p))?;
            self.act_block(b, &ba, da + self.m, &mut res, 0, 1)
        })();
        self.blocks[a] = Some(ba);
        self.blocks[b] = Some(bb);
        out?;
        self.add_bracket_image(a, b, &mut res, 0);
        self.constrain(&res);
        self.since_rebase += 1;
        Ok(())
    }

    /// Restricts the parameters to the solution space of the constraints.
    fn rebase(&mut self) {
        if self.constraints.rank() == 0 {
            return;
        }
        let n = self.constraints.nullspace_matrix();
        let p = self.p();
        for blk in self.blocks.iter_mut().flatten() {
            *blk = blk.rebased(&n, p);
        }
        self.width = n.cols();
        self.constraints = DenseEchelon::new(self.field, self.width);
        self.since_rebase = 0;
    }

    fn maybe_rebase(&mut self) {
        let rank = self.constraints.rank();
        if rank >= 8 && (2 * rank >= self.width || self.since_rebase >= 4096) {
            self.rebase();
        }
    }

    /// Determines `D(b)` for every `b ∈ g_K` from `q·D(b) = D([q,b]) + b·D(q)`
    /// over the probes `q ∈ g_L`; kernel directions become new parameters.
    fn propagate(&mut self, probes: &[usize], low: i32, k_deg: i32) -> Result<()> {
        let p = self.p();
        let e = k_deg + self.m;
        let lay_v = self.v.layout().clone();
        let (src, out) = (lay_v.range(e), lay_v.range(e + low));
        let (dx, dy) = (src.len(), out.len());
        let rows = probes.len() * dy;
        // Augmented [T | I], T stacking ρ(q): V_e → V_{e+L}.
        let mut aug = DenseMatrix::zeros(self.field, rows, dx + rows);
        for (qi, &q) in probes.iter().enumerate() {
            for (j, gj) in src.clone().enumerate() {
                self.buf.clear();
                self.v.act_into(q, gj, &mut self.buf);
                for &(t, c) in &self.buf {
                    if !out.contains(&t) {
                        return Err(AlgebraError::InconsistentGrading("probe action leaves its degree".into()));
                    }
                    let r = qi * dy + t - out.start;
                    let cur = aug.get(r, j);
                    aug.set(r, j, self.field.add(cur, c));
                }
            }
        }
        for r in 0..rows {
            aug.set(r, dx + r, Fp::ONE);
        }
        let pivots = aug.rref_limited(dx);
        let mut is_pivot = vec![false; dx];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..dx).filter(|&c| !is_pivot[c]).collect();
        // Sparse rows of the left transform for the pivot rows.
        let transform: Vec<Vec<(usize, u32)>> = (0..pivots.len())
            .map(|r| {
                let row = aug.row_raw(r);
                (0..rows).filter(|&s| row[dx + s] != 0).map(|s| (s, row[dx + s])).collect()
            })
            .collect();

        for b in self.g.layout().range(k_deg) {
            let mut rhs = Block::zeros(rows, self.width);
            for (qi, &q) in probes.iter().enumerate() {
                if dy > 0 {
                    self.add_bracket_image(q, b, &mut rhs, qi * dy);
                    let dq = self.blocks[q].take().expect("probe block");
                    let res = self.act_block(b, &dq, low + self.m, &mut rhs, qi * dy, 1);
                    self.blocks[q] = Some(dq);
                    res?;
                }
            }
            let first = self.fresh_params(free.len());
            let mut x = Block::zeros(dx, self.width);
            for (fi, &f) in free.iter().enumerate() {
                x.row_mut(f)[first + fi] = 1;
            }
            for (r, &c) in pivots.iter().enumerate() {
                let xr = x.row_mut(c);
                for &(s, coef) in &transform[r] {
                    axpy(&mut xr[..rhs.width], rhs.row(s), coef, p);
                }
                let trow = aug.row_raw(r);
                for (fi, &f) in free.iter().enumerate() {
                    if trow[f] != 0 {
                        xr[first + fi] = (xr[first + fi] + neg_raw(trow[f], p)) % p;
                    }
                }
            }
            self.blocks[b] = Some(x);
        }
        Ok(())
    }
}

/// Degree pairs `(i, j)`, `i ≤ j`, grouped by the highest source or bracket
/// degree involved.
fn pair_schedule(layout: &DegreeLayout) -> BTreeMap<i32, Vec<(i32, i32)>> {
    let degs: Vec<i32> = layout.degrees().collect();
    let mut out: BTreeMap<i32, Vec<(i32, i32)>> = BTreeMap::new();
    for (x, &i) in degs.iter().enumerate() {
        for &j in &degs[x..] {
            let s = i + j;
            let key = if layout.dim_at(s) > 0 { j.max(s) } else { j };
            out.entry(key).or_default().push((i, j));
        }
    }
    out
}

/// A basis of `Der_m(g, V)`, canonically normalized and re-verified on all
/// basis pairs.
pub fn der_space<L, V>(g: &L, v: &V, m: i32, opts: &DerOptions) -> Result<Vec<GradedMap>>
where
    L: GradedLieAlgebra + ?Sized,
    V: GradedModule + ?Sized,
{
    let field = g.field();
    let n = g.dim();
    let lay = g.layout().clone();
    let Some(low) = lay.lowest() else {
        return Ok(Vec::new());
    };
    let mut s = Solver {
        g,
        v,
        m,
        field,
        blocks: vec![None; n],
        width: 0,
        constraints: DenseEchelon::new(field, 0),
        buf: Vec::new(),
        since_rebase: 0,
    };
    // Propagation needs [g_L, g_K] ⊆ g_{K+L} to be computed before g_K.
    let propagate = low < 0;
    let seeded: Vec<i32> = if propagate { vec![low] } else { lay.degrees().collect() };
    for &d in &seeded {
        for b in lay.range(d) {
            let rows = s.target_dim(d);
            if opts.vanish_on.contains(&d) {
                s.blocks[b] = Some(Block::zeros(rows, 0));
                continue;
            }
            let first = s.fresh_params(rows);
            let mut blk = Block::zeros(rows, s.width);
            for r in 0..rows {
                blk.row_mut(r)[first + r] = 1;
            }
            s.blocks[b] = Some(blk);
        }
    }
    let probes: Vec<usize> = lay.range(low).collect();
    let in_gens = |a: usize, b: usize| match &opts.pairs {
        PairMode::All => true,
        PairMode::Generators(gens) => gens.contains(&a) || gens.contains(&b),
    };
    let schedule = pair_schedule(&lay);
    for d in lay.degrees() {
        if propagate && d > low {
            s.propagate(&probes, low, d)?;
            if opts.vanish_on.contains(&d) {
                for b in lay.range(d) {
                    let blk = s.blocks[b].clone().expect("block computed");
                    s.constrain(&blk);
                }
            }
        }
        let groups: Vec<(i32, i32)> = if propagate {
            schedule.get(&d).cloned().unwrap_or_default()
        } else if d == low {
            schedule.values().flatten().copied().collect()
        } else {
            Vec::new()
        };
        for (i, j) in groups {
            for a in lay.range(i) {
                let start = if i == j { a + 1 } else { lay.range(j).start };
                for b in start..lay.range(j).end {
                    if in_gens(a, b) {
                        s.impose_pair(a, b)?;
                        s.maybe_rebase();
                    }
                }
            }
        }
        s.rebase();
    }
    s.rebase();
    let lay_v = v.layout();
    let maps: Vec<GradedMap> = (0..s.width)
        .map(|c| {
            let images = (0..n)
                .map(|b| {
                    let blk = s.blocks[b].as_ref().expect("all blocks computed");
                    let off = lay_v.range(lay.degree_of(b) + m).start;
                    (0..blk.rows)
                        .filter_map(|r| {
                            let x = if c < blk.width { blk.row(r)[c] } else { 0 };
                            (x != 0).then(|| (off + r, field.from_reduced(x)))
                        })
                        .collect()
                })
                .collect();
            GradedMap { degree: m, images }
        })
        .filter(|mp: &GradedMap| !mp.is_zero())
        .collect();
    let basis = canonical_basis(field, m, n, &maps);
    for (i, mp) in basis.iter().enumerate() {
        if let Some((a, b)) = leibniz_failure(g, v, mp) {
            return Err(AlgebraError::RouteMismatch(format!(
                "solver output {i} in degree {m} violates the Leibniz rule on pair ({a}, {b})"
            )));
        }
    }
    Ok(basis)
}

/// First basis pair `(a, b)` on which `D([a,b]) = a·D(b) − b·D(a)` fails.
pub fn leibniz_failure<L, V>(g: &L, v: &V, d: &GradedMap) -> Option<(usize, usize)>
where
    L: GradedLieAlgebra + ?Sized,
    V: GradedModule + ?Sized,
{
    let k = g.field();
    let n = g.dim();
    let mut br = Vec::new();
    let mut acc = Vec::new();
    let mut tmp = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            acc.clear();
            br.clear();
            g.bracket_into(a, b, &mut br);
            for &(kk, c) in &br {
                acc.extend(d.images[kk].iter().map(|&(t, x)| (t, k.mul(c, x))));
            }
            for &(j, c) in &d.images[b] {
                tmp.clear();
                v.act_into(a, j, &mut tmp);
                acc.extend(tmp.iter().map(|&(t, x)| (t, k.neg(k.mul(c, x)))));
            }
            for &(j, c) in &d.images[a] {
                tmp.clear();
                v.act_into(b, j, &mut tmp);
                acc.extend(tmp.iter().map(|&(t, x)| (t, k.mul(c, x))));
            }
            if !acc.is_empty() && !normalize_coords(k, core::mem::take(&mut acc)).is_empty() {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_derivation<L, V>(g: &L, v: &V, d: &GradedMap) -> bool
where
    L: GradedLieAlgebra + ?Sized,
    V: GradedModule + ?Sized,
{
    leibniz_failure(g, v, d).is_none()
}

/// The inner derivation `x ↦ x·w` for `w ∈ V_m` given in coordinates.
pub fn inner_map<L, V>(g: &L, v: &V, w: &[(usize, Fp)], m: i32) -> GradedMap
where
    L: GradedLieAlgebra + ?Sized,
    V: GradedModule + ?Sized,
{
    let k = g.field();
    let mut tmp = Vec::new();
    let images = (0..g.dim())
        .map(|a| {
            let mut out = Vec::new();
            for &(j, c) in w {
                tmp.clear();
                v.act_into(a, j, &mut tmp);
                out.extend(tmp.iter().map(|&(t, x)| (t, k.mul(c, x))));
            }
            normalize_coords(k, out)
        })
        .collect();
    GradedMap { degree: m, images }
}

/// Inner derivations of `g` attached to the basis of `g_m`.
pub fn inner_basis_maps<L: GradedLieAlgebra + ?Sized>(g: &L, m: i32) -> Vec<GradedMap> {
    g.layout().range(m).map(|s| inner_map(g, &Adjoint(g), &[(s, Fp::ONE)], m)).collect()
}

/// `x ↦ [x, s]` computed on vector fields and expressed in `v` coordinates,
/// for every `s` in `fields` (each homogeneous of degree `m`).
pub fn ad_image(
    params: &AlgebraParams,
    fields: &[VectorField],
    g: &GradedSubspace,
    v: &GradedSubspace,
    m: i32,
) -> Result<Vec<GradedMap>> {
    fields
        .iter()
        .map(|s| {
            if !s.is_zero() && s.zdegree() != Some(m) {
                return Err(AlgebraError::NotHomogeneous);
            }
            let images = g.vectors().iter().map(|x| v.coordinates(&params.bracket(x, s))).collect::<Result<_>>()?;
            Ok(GradedMap { degree: m, images })
        })
        .collect()
}

/// `(ad ∂_i)^{p^e}` on 𝓗𝓞, computed by applying `∂_i^{p^e}` to every
/// coefficient and, independently, by iterating `x ↦ [∂_i, x]`; the two
/// results must agree.
pub fn ad_partial_power(alg: &HOAlgebra, i: usize, e: u32) -> Result<GradedMap> {
    let params = alg.params();
    let k = alg.field();
    if i == 0 || i > params.n() {
        return Err(AlgebraError::IndexOutOfRange { index: i, max: params.n() });
    }
    let power = (params.p() as u64).checked_pow(e).filter(|&q| q <= u16::MAX as u64);
    let degree = -(power.map_or(i32::MAX, |q| q as i32));
    let Some(power) = power.filter(|&q| q <= params.xi() as u64) else {
        return Ok(GradedMap::zero(degree, alg.dim()));
    };
    let power = power as u32;
    let mut coefficientwise = Vec::with_capacity(alg.dim());
    for b in alg.space().vectors() {
        let mut out = VectorField::zero();
        for (t, &c) in b.iter() {
            if let Some(mono) = params.partial_power_monomial(i, power, &t.mono) {
                out.add_term(k, FieldTerm::new(mono, t.dir()), c);
            }
        }
        coefficientwise.push(alg.coordinates(&out)?);
    }
    let di = alg.coordinates(&VectorField::partial(params, i)?)?;
    for (b, expected) in coefficientwise.iter().enumerate() {
        let mut x: Coords = vec![(b, Fp::ONE)];
        for _ in 0..power {
            if x.is_empty() {
                break;
            }
            x = bracket_coords(alg, &di, &x);
        }
        if &x != expected {
            return Err(AlgebraError::RouteMismatch(format!(
                "(ad ∂_{i})^{power} on basis vector {b}: iterate differs from coefficientwise power"
            )));
        }
    }
    Ok(GradedMap { degree, images: coefficientwise })
}

/// The map `x ↦ [x, Γ]` on 𝓗𝓞.
pub fn gamma_map(alg: &HOAlgebra) -> Result<GradedMap> {
    let g = gamma(alg.params());
    let images =
        alg.space().vectors().iter().map(|x| alg.coordinates(&alg.params().bracket(x, &g))).collect::<Result<_>>()?;
    Ok(GradedMap { degree: 0, images })
}

/// What the classification predicts for `Der_m(𝓗𝓞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    /// `ad 𝓗𝓞_m`.
    Inner,
    /// `ad(𝓗𝓞 + FΓ)_0`.
    InnerAndGamma,
    /// Span of `(ad ∂_i)^{p^r}`, `i ∈ Y₀`.
    PPower { r: u32 },
    Zero,
}

impl Expected {
    pub fn for_degree(p: u32, m: i32) -> Self {
        match m {
            0 => Expected::InnerAndGamma,
            -1 => Expected::Inner,
            m if m > 0 => Expected::Inner,
            m => {
                let mut q = p as i64;
                let mut r = 1;
                while q < -(m as i64) {
                    q *= p as i64;
                    r += 1;
                }
                if q == -(m as i64) {
                    Expected::PPower { r }
                } else {
                    Expected::Zero
                }
            }
        }
    }
}

/// The predicted spanning maps for degree `m`.
pub fn expected_maps(alg: &HOAlgebra, m: i32) -> Result<(Expected, Vec<GradedMap>)> {
    let kind = Expected::for_degree(alg.params().p(), m);
    let maps = match kind {
        Expected::Inner => inner_basis_maps(alg, m),
        Expected::InnerAndGamma => {
            let mut v = inner_basis_maps(alg, 0);
            v.push(gamma_map(alg)?);
            v
        }
        Expected::PPower { r } => {
            (1..=alg.params().n()).map(|i| ad_partial_power(alg, i, r)).collect::<Result<Vec<_>>>()?
        }
        Expected::Zero => Vec::new(),
    };
    Ok((kind, maps))
}

/// Verdict for one degree of `Der(𝓗𝓞)`.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub degree: i32,
    pub expected: Expected,
    pub der_dim: usize,
    pub expected_dim: usize,
    pub inner_dim: usize,
    /// `Der_m` and the predicted span contain each other.
    pub matches: bool,
    pub basis: DerivationBasis,
}

impl DegreeReport {
    pub fn outer_dim(&self) -> usize {
        self.der_dim - self.inner_dim
    }
}

/// Computes `Der_m(𝓗𝓞)` and compares it with the predicted span.
pub fn classify_degree(alg: &HOAlgebra, m: i32) -> Result<DegreeReport> {
    let k = alg.field();
    let maps = der_space(alg, &Adjoint(alg), m, &DerOptions::default())?;
    let (expected, predicted) = expected_maps(alg, m)?;
    let inner = inner_basis_maps(alg, m);
    let inner_dim = span_rank(k, &inner);
    let expected_dim = span_rank(k, &predicted);
    let union: Vec<GradedMap> = maps.iter().chain(&predicted).cloned().collect();
    let matches = span_rank(k, &union) == maps.len() && expected_dim == maps.len();
    let flags = maps
        .iter()
        .map(|d| {
            let mut v = inner.clone();
            v.push(d.clone());
            span_rank(k, &v) == inner_dim
        })
        .collect();
    Ok(DegreeReport {
        degree: m,
        expected,
        der_dim: maps.len(),
        expected_dim,
        inner_dim,
        matches,
        basis: DerivationBasis { degree: m, maps, inner: flags },
    })
}

/// Every degree in which a nonzero map `𝓗𝓞 → 𝓗𝓞` can exist; empty for
/// the zero algebra.
pub fn hom_degrees(layout: &DegreeLayout) -> core::ops::Range<i32> {
    match (layout.lowest(), layout.highest()) {
        (Some(lo), Some(hi)) => (lo - hi)..(hi - lo + 1),
        _ => 0..0,
    }
}

/// Outer part over a set of computed degrees, with the abelian check on the
/// chosen outer representatives (`x ↦ [x, Γ]` and the nonzero p-power maps).
#[derive(Debug, Clone)]
pub struct OuterReport {
    pub der_total: usize,
    pub inner_total: usize,
    pub outer_dim: usize,
    pub representatives: usize,
    pub commutators_vanish: bool,
}

pub fn outer_quotient(alg: &HOAlgebra, reports: &[DegreeReport]) -> Result<OuterReport> {
    let k = alg.field();
    let der_total: usize = reports.iter().map(|r| r.der_dim).sum();
    let inner_total: usize = reports.iter().map(|r| r.inner_dim).sum();
    let mut reps = Vec::new();
    for r in reports {
        match r.expected {
            Expected::InnerAndGamma => reps.push(gamma_map(alg)?),
            Expected::PPower { r: e } => {
                for i in 1..=alg.params().n() {
                    let mp = ad_partial_power(alg, i, e)?;
                    if !mp.is_zero() {
                        reps.push(mp);
                    }
                }
            }
            _ => {}
        }
    }
    let mut vanish = true;
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            vanish &= reps[a].commutator(k, &reps[b]).is_zero();
        }
    }
    Ok(OuterReport {
        der_total,
        inner_total,
        outer_dim: der_total - inner_total,
        representatives: reps.len(),
        commutators_vanish: vanish,
    })
}

/// 𝓦 as a graded 𝓗𝓞-module, `x·w = [x, w]`.
pub struct WittModule<'a> {
    alg: &'a HOAlgebra,
    space: GradedSubspace,
    index: BTreeMap<FieldTerm, usize>,
}

impl<'a> WittModule<'a> {
    pub fn new(alg: &'a HOAlgebra) -> Self {
        let space = alg.params().even_part_basis();
        let index = space
            .vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| (*v.iter().next().expect("single-term basis").0, i))
            .collect();
        Self { alg, space, index }
    }

    pub fn space(&self) -> &GradedSubspace {
        &self.space
    }

    /// Coordinates of an element of 𝓦 (the basis is the standard one).
    pub fn coordinates(&self, v: &VectorField) -> Coords {
        v.iter().map(|(t, &c)| (self.index[t], c)).collect()
    }
}

impl GradedModule for WittModule<'_> {
    fn layout(&self) -> &DegreeLayout {
        self.space.layout()
    }

    fn act_into(&self, a: usize, j: usize, out: &mut Coords) {
        let b = self.alg.params().bracket(self.alg.vector(a), self.space.vector(j));
        out.extend(b.iter().map(|(t, &c)| (self.index[t], c)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::StructureConstants;

    fn sl2() -> StructureConstants {
        let k = PrimeField::new(5).unwrap();
        // e=0, h=1, f=2: [e,h] = −2e, [e,f] = h, [h,f] = −2f.
        StructureConstants::from_fn(k, DegreeLayout::from_dims(0, &[3]), |i, j, out| match (i, j) {
            (0, 1) => out.push((0, k.elem(-2))),
            (0, 2) => out.push((1, Fp::ONE)),
            (1, 2) => out.push((2, k.elem(-2))),
            _ => {}
        })
    }

    #[test]
    fn sl2_derivations_are_inner() {
        let g = sl2();
        let der = der_space(&g, &Adjoint(&g), 0, &DerOptions::default()).unwrap();
        assert_eq!(der.len(), 3);
        let inner = inner_basis_maps(&g, 0);
        let mut all = der.clone();
        all.extend(inner);
        assert_eq!(span_rank(g.field(), &all), 3);
        assert!(der_space(&g, &Adjoint(&g), 1, &DerOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn commutator_of_commuting_maps() {
        let k = PrimeField::new(5).unwrap();
        let a = GradedMap::new(0, vec![vec![(0, k.elem(2))], vec![(1, k.elem(3))]]);
        let b = GradedMap::new(0, vec![vec![(0, k.elem(4))], vec![]]);
        assert!(a.commutator(k, &b).is_zero());
        let c = GradedMap::new(0, vec![vec![(1, Fp::ONE)], vec![]]);
        assert!(!a.commutator(k, &c).is_zero());
    }

    #[test]
    fn expected_kinds() {
        assert_eq!(Expected::for_degree(5, -5), Expected::PPower { r: 1 });
        assert_eq!(Expected::for_degree(5, -25), Expected::PPower { r: 2 });
        assert_eq!(Expected::for_degree(5, -2), Expected::Zero);
        assert_eq!(Expected::for_degree(5, -1), Expected::Inner);
        assert_eq!(Expected::for_degree(5, 0), Expected::InnerAndGamma);
        assert_eq!(Expected::for_degree(5, 3), Expected::Inner);
    }
}
