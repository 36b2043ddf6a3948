//! Arithmetic in the prime field GF(p), p > 3.
//!
//! Elements are plain residues wrapped in [`Fp`]; every operation goes
//! through a [`PrimeField`] context that carries the modulus. The context is
//! `Copy` and validated once, so downstream code never re-checks `p`.

use core::fmt;

use crate::error::{AlgebraError, Result};

/// A fully reduced residue modulo the prime of its [`PrimeField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp(u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field GF(p) with p an odd prime greater than 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Largest supported modulus; products of two residues must fit in `u64`.
    pub const MAX_PRIME: u64 = 65521;

    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p > Self::MAX_PRIME || !is_prime(p) {
            return Err(AlgebraError::InvalidPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer.
    #[inline]
    pub fn elem(self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u32)
    }

    /// Wraps a value already known to lie in `[0, p)`.
    #[inline]
    pub fn from_reduced(self, v: u32) -> Fp {
        debug_assert!(v < self.p);
        Fp(v)
    }

    #[inline]
    pub fn add(self, a: Fp, b: Fp) -> Fp {
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(self, a: Fp, b: Fp) -> Fp {
        Fp(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(self, a: Fp) -> Fp {
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(self, a: Fp, mut e: u64) -> Fp {
        let mut base = a;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: Fp) -> Result<Fp> {
        if a.is_zero() {
            return Err(AlgebraError::NoInverse);
        }
        // Fermat: a^(p-2) = a^-1.
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// `(-1)^k`.
    #[inline]
    pub fn sign(self, odd: bool) -> Fp {
        if odd {
            Fp(self.p - 1)
        } else {
            Fp::ONE
        }
    }

    /// `C(a, b) mod p` via Lucas' theorem, zero when `b > a`.
    pub fn binom(self, mut a: u64, mut b: u64) -> Fp {
        if b > a {
            return Fp::ZERO;
        }
        let p = self.p as u64;
        let mut acc = Fp::ONE;
        while b > 0 || a > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return Fp::ZERO;
            }
            acc = self.mul(acc, self.small_binom(ad as u32, bd as u32));
            a /= p;
            b /= p;
        }
        acc
    }

    /// `C(a, b)` for digits `b <= a < p` by the multiplicative formula.
    fn small_binom(self, a: u32, b: u32) -> Fp {
        let b = b.min(a - b);
        let mut num = Fp::ONE;
        let mut den = Fp::ONE;
        for k in 0..b {
            num = self.mul(num, Fp(a - k));
            den = self.mul(den, Fp(k + 1));
        }
        // den is a product of integers < p, hence invertible.
        self.mul(num, self.inv(den).expect("digit factorials are units"))
    }

    /// `∏ C(a_i, b_i) mod p` over two multi-indices of equal length.
    pub fn binom_multi(self, a: &[u32], b: &[u32]) -> Result<Fp> {
        if a.len() != b.len() {
            return Err(AlgebraError::LengthMismatch { expected: a.len(), got: b.len() });
        }
        if a.iter().zip(b).any(|(x, y)| y > x) {
            return Err(AlgebraError::InvalidBinomial);
        }
        let mut acc = Fp::ONE;
        for (&x, &y) in a.iter().zip(b) {
            acc = self.mul(acc, self.binom(x as u64, y as u64));
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }
}
