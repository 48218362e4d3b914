//! Fixed-width bit sets over edge (= arrow) indices.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Bits {
        Bits { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Bits {
        let mut b = Bits::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::new(len);
        for i in idx {
            b.insert(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union(&self, o: &Bits) -> Bits {
        let words = self.words.iter().zip(&o.words).map(|(a, b)| a | b).collect();
        Bits { words, len: self.len }
    }

    pub fn intersection(&self, o: &Bits) -> Bits {
        let words = self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect();
        Bits { words, len: self.len }
    }

    pub fn difference(&self, o: &Bits) -> Bits {
        let words = self.words.iter().zip(&o.words).map(|(a, b)| a & !b).collect();
        Bits { words, len: self.len }
    }

    pub fn symmetric_difference(&self, o: &Bits) -> Bits {
        let words = self.words.iter().zip(&o.words).map(|(a, b)| a ^ b).collect();
        Bits { words, len: self.len }
    }

    pub fn complement(&self) -> Bits {
        Bits::full(self.len).difference(self)
    }

    pub fn is_subset(&self, o: &Bits) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = Bits::from_indices(70, [1, 5, 66]);
        let b = Bits::from_indices(70, [5, 69]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 5, 66, 69]);
        assert_eq!(a.intersection(&b).to_vec(), vec![5]);
        assert_eq!(a.symmetric_difference(&b).to_vec(), vec![1, 66, 69]);
        assert_eq!(a.complement().count(), 67);
        assert!(Bits::from_indices(70, [5]).is_subset(&a));
        assert!(!a.contains(70));
    }
}
