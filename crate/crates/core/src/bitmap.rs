//! Block languages as bitmaps.
//!
//! A block language is a set of words that all share one length `ell` over a
//! `k`-symbol alphabet. Such a language is fully described by a bit string of
//! length `k^ell`: bit `i` records whether the `i`-th word of the block, in
//! lexicographic order, belongs to the language. Slicing the bitmap into
//! segments of length `k^i` yields the bitmaps of the left quotients of the
//! language, which is what the automaton constructions in
//! [`synthesis`](crate::synthesis) exploit.

use crate::bits::Bits;
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Hard cap on `k^ell`: bitmaps are materialized, so reject universes that
/// could not be.
pub const UNIVERSE_CAP: u64 = 1 << 40;

/// Alphabet size and block length; the universe descriptor `(k, ell)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockParams {
    k: u32,
    ell: u32,
}

impl BlockParams {
    /// Checks `k >= 1`, `ell >= 1` and the universe cap.
    pub fn new(k: u32, ell: u32) -> Result<Self> {
        if k < 1 || ell < 1 {
            return Err(Error::Invalid(format!(
                "k and ell must be at least 1 (got k={k}, ell={ell})"
            )));
        }
        Self::with_zero_length(k, ell)
    }

    /// Like [`new`](Self::new) but permits `ell = 0`, the degenerate block
    /// `{ε}` that arises when quotienting by a full-length word. Not
    /// accepted by the file format.
    pub fn with_zero_length(k: u32, ell: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid(format!("k must be at least 1 (got {k})")));
        }
        let mut size: u64 = 1;
        for _ in 0..ell {
            size = size
                .checked_mul(k as u64)
                .filter(|&s| s <= UNIVERSE_CAP)
                .ok_or(Error::ParamsTooLarge { k, ell })?;
        }
        Ok(BlockParams { k, ell })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `k^ell`, the number of words in the block.
    pub fn universe_size(&self) -> u64 {
        (self.k as u64).pow(self.ell)
    }

    /// `k^i` for `i <= ell`; always representable given the cap.
    pub fn pow(&self, i: u32) -> u64 {
        debug_assert!(i <= self.ell);
        (self.k as u64).pow(i)
    }
}

/// A word over the alphabet, stored as symbol indices `0..k`.
///
/// Rendering uses the letters `a, b, c, …` when the alphabet has at most 26
/// symbols and dot-separated decimal indices otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word { symbols }
    }

    /// The empty word.
    pub fn empty() -> Self {
        Word { symbols: vec![] }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word {
            symbols: self.symbols.iter().rev().copied().collect(),
        }
    }

    /// Renders for an alphabet of size `k`.
    pub fn render(&self, k: u32) -> String {
        if k <= 26 {
            self.symbols
                .iter()
                .map(|&s| (b'a' + s as u8) as char)
                .collect()
        } else {
            self.symbols
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Parses the rendering produced by [`render`](Self::render).
    pub fn parse(text: &str, k: u32) -> Result<Self> {
        let symbols: Vec<u32> = if k <= 26 {
            text.chars()
                .map(|c| {
                    if c.is_ascii_lowercase() {
                        Ok(c as u32 - 'a' as u32)
                    } else {
                        Err(Error::Parse(format!("bad symbol character `{c}`")))
                    }
                })
                .collect::<Result<_>>()?
        } else if text.is_empty() {
            vec![]
        } else {
            text.split('.')
                .map(|p| {
                    p.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad symbol index `{p}`")))
                })
                .collect::<Result<_>>()?
        };
        for &s in &symbols {
            if s >= k {
                return Err(Error::BadSymbol { symbol: s, k });
            }
        }
        Ok(Word { symbols })
    }
}

/// Index of `w` in the lexicographic enumeration of the block `Σ^ell`.
pub fn word_to_index(w: &Word, p: &BlockParams) -> Result<u64> {
    if w.len() != p.ell() as usize {
        return Err(Error::WrongLength {
            expected: p.ell() as usize,
            got: w.len(),
        });
    }
    rank_in_length(w, p.k())
}

/// Index of `w` among words of its own length (used for segment addressing).
pub fn rank_in_length(w: &Word, k: u32) -> Result<u64> {
    let mut index: u64 = 0;
    for &s in w.symbols() {
        if s >= k {
            return Err(Error::BadSymbol { symbol: s, k });
        }
        index = index * k as u64 + s as u64;
    }
    Ok(index)
}

/// Inverse of [`word_to_index`]: the `i`-th word of the block.
pub fn index_to_word(i: u64, p: &BlockParams) -> Result<Word> {
    if i >= p.universe_size() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: p.universe_size(),
        });
    }
    let mut symbols = vec![0u32; p.ell() as usize];
    let mut rest = i;
    for slot in symbols.iter_mut().rev() {
        *slot = (rest % p.k() as u64) as u32;
        rest /= p.k() as u64;
    }
    Ok(Word::new(symbols))
}

/// Membership bitmap of a block language.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    params: BlockParams,
    bits: Bits,
}

impl Bitmap {
    /// All-zero bitmap (the empty language).
    pub fn empty(params: BlockParams) -> Self {
        Bitmap {
            params,
            bits: Bits::zeros(params.universe_size() as usize),
        }
    }

    /// Full block `Σ^ell`.
    pub fn full(params: BlockParams) -> Self {
        Bitmap::empty(params).not_bits()
    }

    pub fn from_bits(params: BlockParams, bits: Bits) -> Result<Self> {
        if bits.len() as u64 != params.universe_size() {
            return Err(Error::WidthMismatch);
        }
        Ok(Bitmap { params, bits })
    }

    /// Parses a `0`/`1` string of length exactly `k^ell`.
    pub fn from_bit_str(params: BlockParams, s: &str) -> Result<Self> {
        let bits = Bits::from_bit_str(s)
            .ok_or_else(|| Error::Parse("bitmap may only contain 0 and 1".into()))?;
        Bitmap::from_bits(params, bits)
    }

    /// Sets the bits of exactly the given words.
    pub fn from_words<'a, I>(words: I, params: BlockParams) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut bm = Bitmap::empty(params);
        for w in words {
            let i = word_to_index(w, &params)?;
            bm.bits.set(i as usize, true);
        }
        Ok(bm)
    }

    /// Members in lexicographic order.
    pub fn words(&self) -> Vec<Word> {
        self.bits
            .iter_ones()
            .map(|i| index_to_word(i as u64, &self.params).expect("index within universe"))
            .collect()
    }

    pub fn params(&self) -> BlockParams {
        self.params
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        Ok(self.bits.get(word_to_index(w, &self.params)? as usize))
    }

    pub fn is_empty_language(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn add_word(&self, w: &Word) -> Result<Bitmap> {
        let mut out = self.clone();
        out.bits.set(word_to_index(w, &self.params)? as usize, true);
        Ok(out)
    }

    pub fn remove_word(&self, w: &Word) -> Result<Bitmap> {
        let mut out = self.clone();
        out.bits
            .set(word_to_index(w, &self.params)? as usize, false);
        Ok(out)
    }

    fn not_bits(&self) -> Bitmap {
        Bitmap {
            params: self.params,
            bits: self.bits.not(),
        }
    }

    /// The `j`-th segment of length `k^i`: bits `[j·k^i, (j+1)·k^i)`.
    pub fn segment(&self, i: u32, j: u64) -> Result<Segment> {
        if i > self.params.ell() {
            return Err(Error::IndexOutOfRange {
                index: i as u64,
                limit: self.params.ell() as u64 + 1,
            });
        }
        let seg_len = self.params.pow(i);
        let count = self.params.universe_size() / seg_len;
        if j >= count {
            return Err(Error::IndexOutOfRange {
                index: j,
                limit: count,
            });
        }
        Ok(Segment {
            level: i,
            index: j,
            bits: self.bits.slice((j * seg_len) as usize, seg_len as usize),
        })
    }

    /// Bitmap of the left quotient `w^{-1}L`, a block language of length
    /// `ell - |w|`. Quotients by full-length words yield a length-1 bitmap
    /// over a zero-length block.
    pub fn quotient(&self, w: &Word) -> Result<Bitmap> {
        let ell = self.params.ell() as usize;
        if w.len() > ell {
            return Err(Error::WrongLength {
                expected: ell,
                got: w.len(),
            });
        }
        let level = (ell - w.len()) as u32;
        let j = rank_in_length(w, self.params.k())?;
        let seg = self.segment(level, j)?;
        let params = BlockParams::with_zero_length(self.params.k(), level)?;
        Bitmap::from_bits(params, seg.bits)
    }

    /// Distinct non-zero segments of length `k^i`, the set `B_i`.
    pub fn segment_set(&self, i: u32) -> Result<SegmentSet> {
        if i > self.params.ell() {
            return Err(Error::IndexOutOfRange {
                index: i as u64,
                limit: self.params.ell() as u64 + 1,
            });
        }
        let seg_len = self.params.pow(i) as usize;
        let count = (self.params.universe_size() / seg_len as u64) as usize;
        let mut members = BTreeSet::new();
        for j in 0..count {
            let s = self.bits.slice(j * seg_len, seg_len);
            if !s.is_zero() {
                members.insert(s);
            }
        }
        Ok(SegmentSet { level: i, members })
    }

    /// Serializes to the `BLK1` text format.
    pub fn to_blk(&self) -> String {
        format!(
            "BLK1 {} {}\n{}\n",
            self.params.k(),
            self.params.ell(),
            self.bits
        )
    }

    /// Parses the `BLK1` text format: header line `BLK1 <k> <ell>` followed
    /// by one line of exactly `k^ell` characters from `{0,1}`.
    pub fn from_blk(text: &str) -> Result<Bitmap> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "BLK1" {
            return Err(Error::Parse("expected header `BLK1 <k> <ell>`".into()));
        }
        let k = fields[1]
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad k `{}`", fields[1])))?;
        let ell = fields[2]
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("bad ell `{}`", fields[2])))?;
        let params = BlockParams::new(k, ell)?;
        let body = lines
            .next()
            .ok_or_else(|| Error::Parse("missing bitmap line".into()))?;
        if body.len() as u64 != params.universe_size() {
            return Err(Error::Parse(format!(
                "bitmap line has {} characters, expected {}",
                body.len(),
                params.universe_size()
            )));
        }
        if let Some(extra) = lines.next() {
            if !extra.trim().is_empty() {
                return Err(Error::Parse("trailing content after bitmap".into()));
            }
        }
        Bitmap::from_bit_str(params, body)
    }
}

impl fmt::Display for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

impl fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bitmap(k={}, ell={}, {})",
            self.params.k(),
            self.params.ell(),
            self.bits
        )
    }
}

/// One slice `s_i^j` of a bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub level: u32,
    pub index: u64,
    pub bits: Bits,
}

/// The distinct non-zero segments of one level, `B_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentSet {
    pub level: u32,
    pub members: BTreeSet<Bits>,
}

impl SegmentSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
