//! Packed bit strings.
//!
//! `Bits` stores a sequence of bits `b_0 b_1 … b_{n-1}` in 64-bit words,
//! least significant bit first. All bitmap, segment and cover machinery is
//! built on this type. Ordering compares the printed form `b_0 b_1 …`
//! character by character, so sorted containers enumerate bit strings in
//! the same order they would appear written out.

use std::fmt;

/// A fixed-length sequence of bits, packed LSB-first into `u64` words.
///
/// Unused high bits of the last word are kept zero so that equality,
/// hashing and word-wise operations need no masking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    /// All-zero bit string of length `len`.
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds from `'0'`/`'1'` characters, `b_0` first.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut bits = Bits::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits.set(i, true),
                _ => return None,
            }
        }
        Some(bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Copies bits `[start, start + len)` into a fresh string.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = Bits::zeros(len);
        // word-aligned fast path; the shifted path handles arbitrary offsets
        let shift = start % 64;
        let first = start / 64;
        for wi in 0..out.words.len() {
            let lo = self.words.get(first + wi).copied().unwrap_or(0);
            let w = if shift == 0 {
                lo
            } else {
                let hi = self.words.get(first + wi + 1).copied().unwrap_or(0);
                lo >> shift | hi << (64 - shift)
            };
            out.words[wi] = w;
        }
        out.mask_tail();
        out
    }

    /// Appends all bits of `other` after the current contents.
    pub fn extend(&mut self, other: &Bits) {
        let old_len = self.len;
        self.len += other.len;
        self.words.resize(self.len.div_ceil(64), 0);
        let shift = old_len % 64;
        let first = old_len / 64;
        if shift == 0 {
            self.words[first..first + other.words.len()].copy_from_slice(&other.words);
        } else {
            for (wi, &w) in other.words.iter().enumerate() {
                self.words[first + wi] |= w << shift;
                if first + wi + 1 < self.words.len() {
                    self.words[first + wi + 1] |= w >> (64 - shift);
                }
            }
        }
        self.mask_tail();
    }

    /// True iff every set bit of `self` is also set in `other`.
    pub fn is_submask_of(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn or_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn or(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.or_assign(other);
        out
    }

    pub fn not(&self) -> Bits {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        // keep exactly ceil(len/64) words
        let need = self.len.div_ceil(64);
        self.words.truncate(need);
        self.words.resize(need, 0);
    }
}

impl Ord for Bits {
    /// Printed-form lexicographic order: compare `b_0 b_1 …` left to right,
    /// with a proper prefix sorting before its extensions.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let common_words = self.words.len().min(other.words.len());
        for wi in 0..common_words {
            // reversing bits makes LSB-first printed order match numeric order
            let a = self.words[wi].reverse_bits();
            let b = other.words[wi].reverse_bits();
            if a != b {
                // only bits inside both strings may decide
                let diff = (a ^ b).leading_zeros() as usize + wi * 64;
                if diff < self.len.min(other.len) {
                    return a.cmp(&b);
                }
                break;
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({})", self)
    }
}
