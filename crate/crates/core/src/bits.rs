//! Fixed-length bit vectors with word-level shifts.

/// `len` bits, least significant bit of word 0 first; bits past `len` are
/// kept zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = BitVec {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Self::zeros(len);
        for i in indices {
            b.set(i, true);
        }
        b
    }

    pub fn from_words(len: usize, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), len.div_ceil(64));
        let mut b = BitVec { len, words };
        b.clear_tail();
        b
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    /// Bit `i` of the result is bit `i + t` of `self` (zero past the end).
    pub fn shifted_down(&self, t: usize) -> Self {
        let mut out = Self::zeros(self.len);
        if t >= self.len {
            return out;
        }
        let (ws, bs) = (t / 64, t % 64);
        let n = self.words.len();
        for i in 0..n - ws {
            let lo = self.words[i + ws] >> bs;
            let hi = if bs > 0 && i + ws + 1 < n {
                self.words[i + ws + 1] << (64 - bs)
            } else {
                0
            };
            out.words[i] = lo | hi;
        }
        out.clear_tail();
        out
    }

    /// Bit `i + t` of the result is bit `i` of `self` (bits past the end dropped).
    pub fn shifted_up(&self, t: usize) -> Self {
        let mut out = Self::zeros(self.len);
        if t >= self.len {
            return out;
        }
        let (ws, bs) = (t / 64, t % 64);
        let n = self.words.len();
        for i in ws..n {
            let lo = self.words[i - ws] << bs;
            let hi = if bs > 0 && i > ws { self.words[i - ws - 1] >> (64 - bs) } else { 0 };
            out.words[i] = lo | hi;
        }
        out.clear_tail();
        out
    }

    /// Bit `i` of the result is bit `(i + t) mod len` of `self`.
    pub fn rotated(&self, t: usize) -> Self {
        if self.len == 0 {
            return self.clone();
        }
        let t = t % self.len;
        if t == 0 {
            return self.clone();
        }
        let mut out = self.shifted_down(t);
        out.or_assign(&self.shifted_up(self.len - t));
        out
    }

    pub fn and_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Popcount of `self & other`.
    pub fn and_count(&self, other: &Self) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }
}
