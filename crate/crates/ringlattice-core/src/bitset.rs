//! Fixed-universe bit sets of ring elements.

use alloc::vec::Vec;
use core::cmp::Ordering;

/// A set of element indices drawn from `0..universe`.
///
/// Ordering is canonical: first by cardinality, then lexicographically on the
/// ascending list of members. Because a proper subset is always smaller, this
/// order is a linear extension of inclusion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ElemSet {
    words: Vec<u64>,
    universe: u32,
    count: u32,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            words: alloc::vec![0; universe.div_ceil(64)],
            universe: universe as u32,
            count: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i as u32);
        }
        s
    }

    pub fn from_elems(universe: usize, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn len(&self) -> usize {
        self.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        (self.words[(e >> 6) as usize] >> (e & 63)) & 1 == 1
    }

    /// Inserts `e`, returning whether it was new.
    #[inline]
    pub fn insert(&mut self, e: u32) -> bool {
        let w = &mut self.words[(e >> 6) as usize];
        let bit = 1u64 << (e & 63);
        if *w & bit == 0 {
            *w |= bit;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros();
                    rest &= rest - 1;
                    Some((wi as u32) * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.count <= other.count && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        let count = words.iter().map(|w| w.count_ones()).sum();
        ElemSet { words, universe: self.universe, count }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        let count = words.iter().map(|w| w.count_ones()).sum();
        ElemSet { words, universe: self.universe, count }
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        let count = words.iter().map(|w| w.count_ones()).sum();
        ElemSet { words, universe: self.universe, count }
    }

    /// Raw words, usable as a hash or map key.
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count.cmp(&other.count).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    // The lowest differing bit decides: the set holding it has
                    // the smaller element at the first differing position.
                    let diff = a ^ b;
                    let low = diff & diff.wrapping_neg();
                    return if a & low != 0 { Ordering::Less } else { Ordering::Greater };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_tie_break() {
        let a = ElemSet::from_elems(10, [0, 5]);
        let b = ElemSet::from_elems(10, [0, 7]);
        let c = ElemSet::from_elems(10, [1, 2]);
        assert!(a < b);
        assert!(b < c);
        assert!(ElemSet::from_elems(10, [9]) < a);
    }

    #[test]
    fn set_algebra() {
        let a = ElemSet::from_elems(130, [1, 64, 129]);
        let b = ElemSet::from_elems(130, [64, 3]);
        assert_eq!(a.intersection(&b).to_vec(), [64]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).to_vec(), [1, 129]);
        assert!(a.intersection(&b).is_subset(&a));
    }
}
