//! The truncated divided-power superalgebra O(n,n;t).
//!
//! A basis element is `x^(α) x^u`: a divided-power monomial in the even
//! variables `x_1..x_n` (with `α_i <= π_i = p^{t_i} - 1`) times an exterior
//! word in the odd variables `x_{n+1}..x_{2n}`. Words are kept strictly
//! increasing, so every sign is resolved when a [`Monomial`] is built and the
//! struct doubles as a canonical sparse-map key.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{AlgebraError, Result};
use crate::field::{Fp, PrimeField};

/// Upper bound on `n`; exterior words are stored as a `u16` bit set.
pub const MAX_VARS: usize = 8;

/// Z/2 grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    #[inline]
    pub fn flip(self) -> Self {
        Parity::from_odd(!self.is_odd())
    }

    #[inline]
    pub fn plus(self, other: Parity) -> Self {
        Parity::from_odd(self.is_odd() ^ other.is_odd())
    }
}

/// `n`, `p`, `t` and the derived truncation data `π`, `ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraParams {
    n: usize,
    field: PrimeField,
    t: Vec<u32>,
    pi: Vec<u32>,
    xi: u32,
}

impl AlgebraParams {
    pub fn new(n: usize, p: u64, t: &[u32]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if n < 3 {
            return Err(AlgebraError::InvalidParams(format!("n must be at least 3 (got {n})")));
        }
        if n > MAX_VARS {
            return Err(AlgebraError::InvalidParams(format!(
                "n must be at most {MAX_VARS} (got {n})"
            )));
        }
        if t.len() != n {
            return Err(AlgebraError::InvalidParams(format!(
                "t must have exactly n = {n} entries (got {})",
                t.len()
            )));
        }
        let mut pi = Vec::with_capacity(n);
        for &ti in t {
            if ti == 0 {
                return Err(AlgebraError::InvalidParams("every t_i must be at least 1".into()));
            }
            let bound = (p as u128).checked_pow(ti).filter(|&b| b <= u16::MAX as u128 + 1);
            match bound {
                Some(b) => pi.push((b - 1) as u32),
                None => {
                    return Err(AlgebraError::InvalidParams(format!(
                        "p^t_i must not exceed {} (got p = {p}, t_i = {ti})",
                        u16::MAX as u32 + 1
                    )))
                }
            }
        }
        let xi = pi.iter().sum::<u32>() + n as u32;
        Ok(Self { n, field, t: t.to_vec(), pi, xi })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    pub fn pi(&self) -> &[u32] {
        &self.pi
    }

    /// Top Z-degree of O(n,n;t).
    #[inline]
    pub fn xi(&self) -> u32 {
        self.xi
    }

    /// `Σ t_i`.
    pub fn t_sum(&self) -> u32 {
        self.t.iter().sum()
    }

    /// Number of divided-power exponents, `∏ p^{t_i}`.
    pub fn divided_power_count(&self) -> usize {
        self.pi.iter().map(|&x| x as usize + 1).product()
    }

    /// `dim O(n,n;t) = 2^n ∏ p^{t_i}`.
    pub fn dim(&self) -> usize {
        self.divided_power_count() << self.n
    }

    /// `μ(r)`: true for odd directions `r ∈ Y₁`.
    #[inline]
    pub fn is_odd_index(&self, r: usize) -> bool {
        r > self.n
    }

    /// The index swap `i ↦ i'` between `Y₀` and `Y₁`.
    #[inline]
    pub fn prime(&self, i: usize) -> usize {
        if i <= self.n {
            i + self.n
        } else {
            i - self.n
        }
    }

    pub fn check_index(&self, r: usize) -> Result<()> {
        if r == 0 || r > 2 * self.n {
            return Err(AlgebraError::IndexOutOfRange { index: r, max: 2 * self.n });
        }
        Ok(())
    }

    /// The unit `1 = x^(0)`.
    pub fn one(&self) -> Monomial {
        Monomial { alpha: [0; MAX_VARS], n: self.n as u8, word: 0 }
    }

    /// Builds `x^(α) x^u` from an exponent vector and a strictly increasing
    /// word of odd indices in `n+1..=2n`.
    pub fn monomial(&self, alpha: &[u32], word: &[usize]) -> Result<Monomial> {
        if alpha.len() != self.n {
            return Err(AlgebraError::LengthMismatch { expected: self.n, got: alpha.len() });
        }
        let mut m = self.one();
        for (i, (&a, &bound)) in alpha.iter().zip(&self.pi).enumerate() {
            if a > bound {
                return Err(AlgebraError::InvalidParams(format!(
                    "exponent α_{} = {a} exceeds π_{} = {bound}",
                    i + 1,
                    i + 1
                )));
            }
            m.alpha[i] = a as u16;
        }
        let mut prev = self.n;
        for &k in word {
            if k <= prev || k > 2 * self.n {
                return Err(AlgebraError::InvalidParams(format!(
                    "exterior word must be strictly increasing in {}..={} (got {word:?})",
                    self.n + 1,
                    2 * self.n
                )));
            }
            m.word |= 1 << (k - self.n - 1);
            prev = k;
        }
        Ok(m)
    }

    /// The single variable `x_r`, `r ∈ Y`.
    pub fn variable(&self, r: usize) -> Result<Monomial> {
        self.check_index(r)?;
        let mut m = self.one();
        if r <= self.n {
            if self.pi[r - 1] == 0 {
                return Err(AlgebraError::InvalidParams("π_r is zero".into()));
            }
            m.alpha[r - 1] = 1;
        } else {
            m.word = 1 << (r - self.n - 1);
        }
        Ok(m)
    }

    /// Product of two basis monomials: `None` when it vanishes.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Fp, Monomial)> {
        if a.word & b.word != 0 {
            return None;
        }
        let k = self.field;
        let mut out = *a;
        let mut coeff = Fp::ONE;
        for i in 0..self.n {
            let s = a.alpha[i] as u32 + b.alpha[i] as u32;
            // Exponents beyond π are dropped outright; Lucas would also give 0.
            if s > self.pi[i] {
                return None;
            }
            if b.alpha[i] != 0 && a.alpha[i] != 0 {
                coeff = k.mul(coeff, k.binom(s as u64, a.alpha[i] as u64));
                if coeff.is_zero() {
                    return None;
                }
            }
            out.alpha[i] = s as u16;
        }
        out.word = a.word | b.word;
        Some((k.mul(coeff, k.sign(merge_sign_odd(a.word, b.word))), out))
    }

    /// `∂_r` on a basis monomial: `None` when the result is zero.
    pub fn partial_monomial(&self, r: usize, m: &Monomial) -> Option<(Fp, Monomial)> {
        if r <= self.n {
            let i = r - 1;
            if m.alpha[i] == 0 {
                return None;
            }
            let mut out = *m;
            out.alpha[i] -= 1;
            Some((Fp::ONE, out))
        } else {
            let bit = 1u16 << (r - self.n - 1);
            if m.word & bit == 0 {
                return None;
            }
            let mut out = *m;
            out.word &= !bit;
            let before = (m.word & (bit - 1)).count_ones();
            Some((self.field.sign(before % 2 == 1), out))
        }
    }

    /// `∂_r^k` on a monomial for an even direction `r ∈ Y₀`.
    pub fn partial_power_monomial(&self, r: usize, k: u32, m: &Monomial) -> Option<Monomial> {
        debug_assert!(r >= 1 && r <= self.n);
        let i = r - 1;
        if (m.alpha[i] as u32) < k {
            return None;
        }
        let mut out = *m;
        out.alpha[i] -= k as u16;
        Some(out)
    }

    /// Bilinear product of two super-polynomials.
    pub fn multiply(&self, f: &SuperPoly, g: &SuperPoly) -> SuperPoly {
        let k = self.field;
        let mut out = SuperPoly::zero();
        for (a, &ca) in f.iter() {
            for (b, &cb) in g.iter() {
                if let Some((c, m)) = self.mul_monomials(a, b) {
                    out.add_term(k, m, k.mul(c, k.mul(ca, cb)));
                }
            }
        }
        out
    }

    /// The superderivation `∂_r`, `r ∈ {1, …, 2n}`.
    pub fn partial(&self, r: usize, f: &SuperPoly) -> Result<SuperPoly> {
        self.check_index(r)?;
        let k = self.field;
        let mut out = SuperPoly::zero();
        for (m, &c) in f.iter() {
            if let Some((s, dm)) = self.partial_monomial(r, m) {
                out.add_term(k, dm, k.mul(s, c));
            }
        }
        Ok(out)
    }

    /// Basis monomials of a given Z-degree (and parity), in canonical order:
    /// degree-major, then lexicographic in `(α, u)`. With `degree = None`
    /// the full basis is returned.
    pub fn enumerate_basis(&self, degree: Option<u32>, parity: Option<Parity>) -> Vec<Monomial> {
        if let Some(d) = degree {
            if d > self.xi {
                return Vec::new();
            }
        }
        let mut out = Vec::new();
        let mut alpha = [0u32; MAX_VARS];
        loop {
            let a_deg: u32 = alpha[..self.n].iter().sum();
            for word in 0u16..(1 << self.n) {
                let deg = a_deg + word.count_ones();
                if degree.is_some_and(|d| d != deg) {
                    continue;
                }
                if parity.is_some_and(|par| par.is_odd() != (word.count_ones() % 2 == 1)) {
                    continue;
                }
                let mut m = self.one();
                for (dst, &a) in m.alpha.iter_mut().zip(&alpha) {
                    *dst = a as u16;
                }
                m.word = word;
                out.push(m);
            }
            // Odometer over α with α_i <= π_i.
            let mut i = 0;
            loop {
                if i == self.n {
                    out.sort_unstable();
                    return out;
                }
                if alpha[i] < self.pi[i] {
                    alpha[i] += 1;
                    break;
                }
                alpha[i] = 0;
                i += 1;
            }
        }
    }
}

/// `true` when bringing `x^u x^v` to increasing order needs an odd number of
/// transpositions.
#[inline]
fn merge_sign_odd(u: u16, v: u16) -> bool {
    let mut swaps = 0u32;
    let mut rest = v;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (u >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

/// A basis element `x^(α) x^u` of O(n,n;t).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    alpha: [u16; MAX_VARS],
    n: u8,
    word: u16,
}

impl Monomial {
    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn alpha(&self) -> impl Iterator<Item = u32> + '_ {
        self.alpha[..self.n as usize].iter().map(|&a| a as u32)
    }

    /// `α_i` for `i ∈ Y₀` (1-based).
    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.alpha[i - 1] as u32
    }

    /// The exterior word as increasing indices in `n+1..=2n`.
    pub fn word(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n as usize;
        (0..n).filter(move |b| self.word & (1 << b) != 0).map(move |b| n + 1 + b)
    }

    #[inline]
    pub fn word_len(&self) -> u32 {
        self.word.count_ones()
    }

    #[inline]
    pub fn contains_odd(&self, k: usize) -> bool {
        let n = self.n as usize;
        k > n && self.word & (1 << (k - n - 1)) != 0
    }

    /// `|α| + |u|`.
    #[inline]
    pub fn zdegree(&self) -> u32 {
        self.alpha.iter().map(|&a| a as u32).sum::<u32>() + self.word.count_ones()
    }

    #[inline]
    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.word.count_ones() % 2 == 1)
    }

    /// True when `α = 0`.
    #[inline]
    pub fn is_exterior(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0)
    }

    fn cmp_word(&self, other: &Self) -> Ordering {
        // Lexicographic comparison of the increasing index sequences.
        let (mut a, mut b) = (self.word, other.word);
        loop {
            match (a, b) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
            if x != y {
                return x.cmp(&y);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.zdegree()
            .cmp(&other.zdegree())
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.cmp_word(other))
            .then_with(|| self.n.cmp(&other.n))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("x^(")?;
        for (i, a) in self.alpha().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")*x[")?;
        for (i, k) in self.word().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sparse F_p-combination of monomials; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuperPoly {
    terms: BTreeMap<Monomial, Fp>,
}

impl SuperPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(Fp::ONE, m)
    }

    pub fn term(c: Fp, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Fp)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Fp {
        self.terms.get(m).copied().unwrap_or(Fp::ZERO)
    }

    pub fn add_term(&mut self, k: PrimeField, m: Monomial, c: Fp) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert(Fp::ZERO);
        *slot = k.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Inserts a nonzero coefficient at a key not yet present.
    pub(crate) fn insert_fresh(&mut self, m: Monomial, c: Fp) {
        debug_assert!(!c.is_zero());
        let prev = self.terms.insert(m, c);
        debug_assert!(prev.is_none());
    }

    pub fn add_scaled(&mut self, k: PrimeField, other: &SuperPoly, c: Fp) {
        for (m, &v) in other.iter() {
            self.add_term(k, *m, k.mul(v, c));
        }
    }

    pub fn scaled(&self, k: PrimeField, c: Fp) -> SuperPoly {
        let mut out = SuperPoly::zero();
        out.add_scaled(k, self, c);
        out
    }

    /// Parity of a parity-homogeneous nonzero element.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    /// Z-degree of a degree-homogeneous nonzero element.
    pub fn zdegree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::zdegree);
        let first = it.next()?;
        it.all(|q| q == first).then_some(first)
    }

    /// Splits into (even part, odd part).
    pub fn split_parity(&self) -> (SuperPoly, SuperPoly) {
        let mut even = SuperPoly::zero();
        let mut odd = SuperPoly::zero();
        for (m, &c) in self.iter() {
            let target = if m.parity().is_odd() { &mut odd } else { &mut even };
            target.terms.insert(*m, c);
        }
        (even, odd)
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c != Fp::ONE {
                write!(f, "{c}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> AlgebraParams {
        AlgebraParams::new(3, 5, &[1, 1, 1]).unwrap()
    }

    fn mono(p: &AlgebraParams, a: &[u32], u: &[usize]) -> SuperPoly {
        SuperPoly::from_monomial(p.monomial(a, u).unwrap())
    }

    #[test]
    fn derived_data() {
        let p = params();
        assert_eq!(p.pi(), &[4, 4, 4]);
        assert_eq!(p.xi(), 15);
        assert_eq!(p.dim(), 1000);
        let b = AlgebraParams::new(3, 5, &[2, 1, 1]).unwrap();
        assert_eq!(b.pi(), &[24, 4, 4]);
        assert_eq!(b.xi(), 35);
        assert_eq!(b.prime(1), 4);
        assert_eq!(b.prime(6), 3);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(AlgebraParams::new(2, 5, &[1, 1]).is_err());
        assert!(AlgebraParams::new(3, 4, &[1, 1, 1]).is_err());
        assert!(AlgebraParams::new(3, 5, &[1, 0, 1]).is_err());
        assert!(AlgebraParams::new(3, 5, &[1, 1]).is_err());
    }

    #[test]
    fn multiply_examples() {
        let p = params();
        let k = p.field();
        let x1 = mono(&p, &[1, 0, 0], &[]);
        assert_eq!(p.multiply(&x1, &x1), SuperPoly::term(k.elem(2), p.monomial(&[2, 0, 0], &[]).unwrap()));
        let x4 = mono(&p, &[0, 0, 0], &[4]);
        let x5 = mono(&p, &[0, 0, 0], &[5]);
        assert!(p.multiply(&x4, &x4).is_zero());
        assert_eq!(
            p.multiply(&x5, &x4),
            SuperPoly::term(k.elem(-1), p.monomial(&[0, 0, 0], &[4, 5]).unwrap())
        );
        let x14 = mono(&p, &[4, 0, 0], &[]);
        assert!(p.multiply(&x14, &x1).is_zero());
    }

    #[test]
    fn partial_examples() {
        let p = params();
        let k = p.field();
        let f = mono(&p, &[2, 0, 0], &[]);
        assert_eq!(p.partial(1, &f).unwrap(), mono(&p, &[1, 0, 0], &[]));
        let w = mono(&p, &[0, 0, 0], &[4, 5]);
        assert_eq!(p.partial(4, &w).unwrap(), mono(&p, &[0, 0, 0], &[5]));
        assert_eq!(
            p.partial(5, &w).unwrap(),
            SuperPoly::term(k.elem(-1), p.monomial(&[0, 0, 0], &[4]).unwrap())
        );
        assert!(p.partial(7, &w).is_err());
        assert!(p.partial(0, &w).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let p = params();
        assert_eq!(p.enumerate_basis(None, None).len(), 1000);
        assert_eq!(p.enumerate_basis(Some(0), None), alloc::vec![p.one()]);
        let top = p.enumerate_basis(Some(15), None);
        assert_eq!(top, alloc::vec![p.monomial(&[4, 4, 4], &[4, 5, 6]).unwrap()]);
        assert!(p.enumerate_basis(Some(16), None).is_empty());
        assert_eq!(p.enumerate_basis(None, Some(Parity::Odd)).len(), 500);
        let b = AlgebraParams::new(3, 5, &[2, 1, 1]).unwrap();
        assert_eq!(b.enumerate_basis(None, None).len(), 5000);
    }

    #[test]
    fn canonical_order_and_text() {
        let p = params();
        let basis = p.enumerate_basis(None, None);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
        let m = p.monomial(&[2, 0, 0], &[4, 6]).unwrap();
        assert_eq!(alloc::format!("{m}"), "x^(2,0,0)*x[4,6]");
        let a = p.monomial(&[0, 0, 0], &[4, 5]).unwrap();
        let b = p.monomial(&[0, 0, 0], &[4, 6]).unwrap();
        assert!(a < b);
    }
}
