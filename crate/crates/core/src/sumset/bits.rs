//! Dense bit-vector used as the second storage of [`IntegerSet`](super::IntegerSet).
//!
//! Bit `i` stands for the integer `window.lo + i`. Sumsets are built by OR-ing
//! word-shifted copies, which is where the enumeration engine spends its time.

const WORD: usize = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self |= other << shift`, truncated to `self.len()`.
    pub fn or_shifted(&mut self, other: &Bits, shift: usize) {
        let (word_shift, bit_shift) = (shift / WORD, shift % WORD);
        let n = self.words.len();
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let lo = i + word_shift;
            if lo >= n {
                break;
            }
            self.words[lo] |= w << bit_shift;
            if bit_shift != 0 && lo + 1 < n {
                self.words[lo + 1] |= w >> (WORD - bit_shift);
            }
        }
        self.trim();
    }

    /// Whether `self` and `other << shift` share a set bit.
    pub fn intersects_shifted(&self, other: &Bits, shift: usize) -> bool {
        let (word_shift, bit_shift) = (shift / WORD, shift % WORD);
        let n = self.words.len();
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let lo = i + word_shift;
            if lo >= n {
                break;
            }
            if self.words[lo] & (w << bit_shift) != 0 {
                return true;
            }
            if bit_shift != 0 && lo + 1 < n && self.words[lo + 1] & (w >> (WORD - bit_shift)) != 0 {
                return true;
            }
        }
        false
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + t)
            })
        })
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}
