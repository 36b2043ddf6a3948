//! The generalized Witt superalgebra W(n,n;t) and its even part 𝓦.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::field::{Fp, PrimeField};
use crate::subspace::GradedSubspace;
use crate::superalgebra::{AlgebraParams, Monomial, Parity, SuperPoly};

/// A single basis field `x^(α) x^u ∂_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldTerm {
    pub mono: Monomial,
    /// Direction `r ∈ {1, …, 2n}`.
    pub dir: u8,
}

impl FieldTerm {
    #[inline]
    pub fn new(mono: Monomial, dir: usize) -> Self {
        Self { mono, dir: dir as u8 }
    }

    #[inline]
    pub fn dir(&self) -> usize {
        self.dir as usize
    }

    /// `p(f) + μ(r)`.
    #[inline]
    pub fn parity(&self) -> Parity {
        let odd_dir = self.dir as usize > self.mono.n();
        self.mono.parity().plus(Parity::from_odd(odd_dir))
    }

    /// `zd(f) - 1`.
    #[inline]
    pub fn zdegree(&self) -> i32 {
        self.mono.zdegree() as i32 - 1
    }
}

impl fmt::Display for FieldTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.zdegree() == 0 {
            write!(f, "∂{}", self.dir)
        } else {
            write!(f, "{}*∂{}", self.mono, self.dir)
        }
    }
}

/// `Σ f_r ∂_r`, stored as a sparse map over [`FieldTerm`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VectorField {
    terms: BTreeMap<FieldTerm, Fp>,
}

impl VectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_term(c: Fp, term: FieldTerm) -> Self {
        let mut v = Self::zero();
        if !c.is_zero() {
            v.terms.insert(term, c);
        }
        v
    }

    /// The coordinate field `∂_r`.
    pub fn partial(params: &AlgebraParams, r: usize) -> Result<Self> {
        params.check_index(r)?;
        Ok(Self::from_term(Fp::ONE, FieldTerm::new(params.one(), r)))
    }

    /// `f ∂_r`.
    pub fn from_poly(params: &AlgebraParams, f: &SuperPoly, r: usize) -> Result<Self> {
        params.check_index(r)?;
        let mut v = Self::zero();
        for (m, &c) in f.iter() {
            v.terms.insert(FieldTerm::new(*m, r), c);
        }
        Ok(v)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FieldTerm, &Fp)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &FieldTerm) -> Fp {
        self.terms.get(t).copied().unwrap_or(Fp::ZERO)
    }

    pub fn add_term(&mut self, k: PrimeField, t: FieldTerm, c: Fp) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t).or_insert(Fp::ZERO);
        *slot = k.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add_scaled(&mut self, k: PrimeField, other: &VectorField, c: Fp) {
        for (t, &v) in other.iter() {
            self.add_term(k, *t, k.mul(v, c));
        }
    }

    pub fn scaled(&self, k: PrimeField, c: Fp) -> VectorField {
        let mut out = VectorField::zero();
        out.add_scaled(k, self, c);
        out
    }

    pub fn sub(&self, k: PrimeField, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        out.add_scaled(k, other, k.neg(Fp::ONE));
        out
    }

    /// Coefficient function `f_r`.
    pub fn component(&self, r: usize) -> SuperPoly {
        let mut out = SuperPoly::zero();
        for (t, &c) in self.iter().filter(|(t, _)| t.dir() == r) {
            out.insert_fresh(t.mono, c);
        }
        out
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(FieldTerm::parity);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    pub fn zdegree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(FieldTerm::zdegree);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    /// True when no term carries a divided-power factor.
    pub fn is_exterior(&self) -> bool {
        self.terms.keys().all(|t| t.mono.is_exterior())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c != Fp::ONE {
                write!(f, "{c}*")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl AlgebraParams {
    /// `D(g) = Σ f_r ∂_r(g)`.
    pub fn apply(&self, d: &VectorField, g: &SuperPoly) -> SuperPoly {
        let k = self.field();
        let mut out = SuperPoly::zero();
        for (t, &c) in d.iter() {
            for (gm, &gc) in g.iter() {
                let Some((s, dg)) = self.partial_monomial(t.dir(), gm) else { continue };
                if let Some((s2, prod)) = self.mul_monomials(&t.mono, &dg) {
                    out.add_term(k, prod, k.mul(k.mul(s, s2), k.mul(c, gc)));
                }
            }
        }
        out
    }

    /// Super-bracket, termwise:
    /// `[f∂_r, g∂_s] = f∂_r(g)∂_s − (−1)^{p(f∂_r)p(g∂_s)} g∂_s(f)∂_r`.
    pub fn bracket(&self, a: &VectorField, b: &VectorField) -> VectorField {
        let k = self.field();
        let mut out = VectorField::zero();
        for (ta, &ca) in a.iter() {
            for (tb, &cb) in b.iter() {
                let cab = k.mul(ca, cb);
                if let Some((s, dg)) = self.partial_monomial(ta.dir(), &tb.mono) {
                    if let Some((s2, prod)) = self.mul_monomials(&ta.mono, &dg) {
                        out.add_term(k, FieldTerm::new(prod, tb.dir()), k.mul(k.mul(s, s2), cab));
                    }
                }
                if let Some((s, df)) = self.partial_monomial(tb.dir(), &ta.mono) {
                    if let Some((s2, prod)) = self.mul_monomials(&tb.mono, &df) {
                        let both_odd = ta.parity().is_odd() && tb.parity().is_odd();
                        let sign = k.neg(k.sign(both_odd));
                        out.add_term(k, FieldTerm::new(prod, ta.dir()), k.mul(k.mul(sign, k.mul(s, s2)), cab));
                    }
                }
            }
        }
        out
    }

    /// Basis of 𝓦 = W(n,n;t)_0̄: all even fields `x^(α)x^u∂_r`.
    pub fn even_part_basis(&self) -> GradedSubspace {
        let mut vectors = Vec::new();
        for m in self.enumerate_basis(None, None) {
            for r in 1..=2 * self.n() {
                let t = FieldTerm::new(m, r);
                if t.parity() == Parity::Even {
                    vectors.push(VectorField::from_term(Fp::ONE, t));
                }
            }
        }
        GradedSubspace::new(self.field(), vectors).expect("standard basis is independent")
    }

    /// Basis of 𝓖: even fields `x^u∂_r` without divided-power factor.
    pub fn g_basis(&self) -> GradedSubspace {
        let mut vectors = Vec::new();
        for m in self.enumerate_basis(None, None).into_iter().filter(Monomial::is_exterior) {
            for r in 1..=2 * self.n() {
                let t = FieldTerm::new(m, r);
                if t.parity() == Parity::Even {
                    vectors.push(VectorField::from_term(Fp::ONE, t));
                }
            }
        }
        GradedSubspace::new(self.field(), vectors).expect("standard basis is independent")
    }
}
