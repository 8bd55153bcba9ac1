//! Fixed-capacity vertex sets.
//!
//! A [`VertexSet`] is sized once for an instance and never grows. Equality and
//! hashing are bit-exact over the backing words, which is what the prefix
//! equivalence table relies on.

use std::fmt;

const WORD_BITS: usize = 64;

/// A set of vertex indices in `0..capacity`, stored as a packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    words: Box<[u64]>,
}

impl VertexSet {
    /// Empty set able to hold vertices `0..capacity`.
    pub fn with_capacity(capacity: usize) -> Self {
        let nb_words = capacity.div_ceil(WORD_BITS).max(1);
        Self {
            words: vec![0u64; nb_words].into_boxed_slice(),
        }
    }

    /// Set containing every vertex of `0..capacity`.
    pub fn full(capacity: usize) -> Self {
        let mut set = Self::with_capacity(capacity);
        for v in 0..capacity {
            set.insert(v);
        }
        set
    }

    pub fn from_iter_with_capacity<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut set = Self::with_capacity(capacity);
        for v in it {
            set.insert(v);
        }
        set
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let was = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// `true` when every member of `self` is also in `other`.
    #[inline]
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn insert_remove_contains() {
        let mut s = VertexSet::with_capacity(700);
        assert!(s.is_empty());
        assert!(s.insert(0));
        assert!(s.insert(699));
        assert!(!s.insert(699));
        assert!(s.contains(699));
        assert!(!s.contains(64));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![699]);
    }

    #[test]
    fn full_set_has_every_vertex() {
        let s = VertexSet::full(130);
        assert_eq!(s.len(), 130);
        assert_eq!(s.iter().last(), Some(129));
    }

    proptest! {
        #[test]
        fn behaves_like_btreeset(a in prop::collection::vec(0usize..300, 0..60),
                                 b in prop::collection::vec(0usize..300, 0..60)) {
            let sa = VertexSet::from_iter_with_capacity(300, a.iter().copied());
            let sb = VertexSet::from_iter_with_capacity(300, b.iter().copied());
            let ra: BTreeSet<usize> = a.iter().copied().collect();
            let rb: BTreeSet<usize> = b.iter().copied().collect();
            prop_assert_eq!(sa.iter().collect::<Vec<_>>(), ra.iter().copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.len(), ra.len());
            prop_assert_eq!(sa.is_subset(&sb), ra.is_subset(&rb));
            prop_assert_eq!(sa == sb, ra == rb);
        }
    }
}
