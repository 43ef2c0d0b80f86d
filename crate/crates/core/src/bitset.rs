/// Fixed-length bit set over `u64` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; words_for(len)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Population count of `self & row`, where `row` uses the same layout.
    #[inline]
    pub fn and_count(&self, row: &[u64]) -> u32 {
        self.words.iter().zip(row).map(|(a, b)| (a & b).count_ones()).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_count() {
        let mut b = BitSet::new(130);
        for i in [0, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.count_ones(), 4);
        assert!(b.contains(64) && !b.contains(65) && !b.contains(500));
        b.remove(63);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
    }

    #[test]
    fn and_count_crosses_words() {
        let mut a = BitSet::new(100);
        let mut row = BitSet::new(100);
        for i in (0..100).step_by(3) {
            a.insert(i);
        }
        for i in (0..100).step_by(2) {
            row.insert(i);
        }
        assert_eq!(a.and_count(row.words()), (0..100).filter(|i| i % 6 == 0).count() as u32);
    }
}
