use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::{Fp, PrimeField};

/// Sparse vector with ordered keys.
pub type KeyedVec<K> = Vec<(K, Fp)>;

#[derive(Debug, Clone)]
struct EchelonRow<K> {
    terms: KeyedVec<K>,
    /// Expression of this row in the originally inserted vectors.
    combo: Vec<(usize, Fp)>,
}

/// Incremental row echelon form over arbitrary ordered keys.
///
/// Vectors are inserted one at a time; each independent one becomes a row
/// whose leading key is unique. Rows remember how they combine the inserted
/// vectors, so membership queries also return coordinates.
#[derive(Debug, Clone)]
pub struct SpanSolver<K: Ord + Copy> {
    field: PrimeField,
    pivots: BTreeMap<K, usize>,
    rows: Vec<EchelonRow<K>>,
    track: bool,
}

impl<K: Ord + Copy> SpanSolver<K> {
    /// With `track_coordinates = false` only membership is answered.
    pub fn new(field: PrimeField, track_coordinates: bool) -> Self {
        Self { field, pivots: BTreeMap::new(), rows: Vec::new(), track: track_coordinates }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows, returning the remainder (empty iff
    /// `v` is in the span) and the accumulated combination.
    fn reduce(&self, v: impl IntoIterator<Item = (K, Fp)>) -> (BTreeMap<K, Fp>, BTreeMap<usize, Fp>) {
        let k = self.field;
        let mut work: BTreeMap<K, Fp> = BTreeMap::new();
        for (key, c) in v {
            if c.is_zero() {
                continue;
            }
            let slot = work.entry(key).or_insert(Fp::ZERO);
            *slot = k.add(*slot, c);
            if slot.is_zero() {
                work.remove(&key);
            }
        }
        let mut coords: BTreeMap<usize, Fp> = BTreeMap::new();
        let mut remainder = BTreeMap::new();
        while let Some((key, c)) = work.pop_first() {
            let Some(&ri) = self.pivots.get(&key) else {
                remainder.insert(key, c);
                continue;
            };
            let row = &self.rows[ri];
            // Row leads with coefficient 1 at `key`.
            for &(rk, rc) in &row.terms[1..] {
                let slot = work.entry(rk).or_insert(Fp::ZERO);
                *slot = k.sub(*slot, k.mul(c, rc));
                if slot.is_zero() {
                    work.remove(&rk);
                }
            }
            if self.track {
                for &(oi, oc) in &row.combo {
                    let slot = coords.entry(oi).or_insert(Fp::ZERO);
                    *slot = k.add(*slot, k.mul(c, oc));
                    if slot.is_zero() {
                        coords.remove(&oi);
                    }
                }
            }
        }
        (remainder, coords)
    }

    /// Inserts `v` tagged as original vector `tag`; returns false (and stores
    /// nothing) when `v` is already in the span.
    pub fn insert(&mut self, v: impl IntoIterator<Item = (K, Fp)>, tag: usize) -> bool {
        let k = self.field;
        let (rem, coords) = self.reduce(v);
        let Some((&lead, &lc)) = rem.iter().next() else {
            return false;
        };
        let inv = k.inv(lc).expect("nonzero leading coefficient");
        let terms: KeyedVec<K> = rem.into_iter().map(|(key, c)| (key, k.mul(c, inv))).collect();
        // Row = (v - Σ coords) / lc.
        let combo = if self.track {
            let mut combo: BTreeMap<usize, Fp> = coords.into_iter().map(|(i, c)| (i, k.neg(k.mul(c, inv)))).collect();
            let slot = combo.entry(tag).or_insert(Fp::ZERO);
            *slot = k.add(*slot, inv);
            combo.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        } else {
            Vec::new()
        };
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(EchelonRow { terms, combo });
        true
    }

    pub fn contains(&self, v: impl IntoIterator<Item = (K, Fp)>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates of `v` in the inserted vectors (by tag), or `None` when
    /// `v` lies outside the span. Requires coordinate tracking.
    pub fn coordinates(&self, v: impl IntoIterator<Item = (K, Fp)>) -> Option<Vec<(usize, Fp)>> {
        debug_assert!(self.track, "coordinate tracking disabled");
        let (rem, coords) = self.reduce(v);
        rem.is_empty().then(|| coords.into_iter().collect())
    }
}
