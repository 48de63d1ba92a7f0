//! Fixed-width bitsets used for adjacency rows and vertex subsets.

/// Bitset over `0..len` with 64-bit words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_count(&self, other: &Bits) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Iterates set indices in ascending order.
    pub fn iter(&self) -> BitsIter<'_> {
        BitsIter {
            bits: self,
            word_idx: 0,
            cur: if self.words.is_empty() { 0 } else { self.words[0] },
        }
    }
}

pub struct BitsIter<'a> {
    bits: &'a Bits,
    word_idx: usize,
    cur: u64,
}

impl Iterator for BitsIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.bits.words.len() {
                return None;
            }
            self.cur = self.bits.words[self.word_idx];
        }
        let bit = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some(self.word_idx * 64 + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_iter() {
        let mut b = Bits::new(130);
        for i in [0, 63, 64, 127, 129] {
            b.set(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 127, 129]);
        assert_eq!(b.count(), 5);
        b.clear(0);
        assert!(!b.get(0));
        assert!(b.get(129));
    }

    #[test]
    fn intersection_counting() {
        let mut a = Bits::new(70);
        let mut b = Bits::new(70);
        a.set(1);
        a.set(65);
        b.set(65);
        b.set(3);
        assert_eq!(a.intersection_count(&b), 1);
        assert_eq!(a.intersection_count(&a), 2);
        assert_eq!(Bits::new(70).intersection_count(&b), 0);
    }
}
