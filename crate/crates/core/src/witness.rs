//! Generators for the witness language families that attain the
//! state-complexity bounds.

use crate::bitmap::{BlockParams, Bitmap, Word};
use crate::error::{Error, Result};

/// Derived parameters of the maximal-DFA witness over a binary alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxWitnessParams {
    pub ell: u32,
    /// Least `i` with `2^(ell-i) <= 2^(2^i) - 1`.
    pub r: u32,
    /// Width of the widest rank: `max(2^(ell-r), 2^(2^(r-1)) - 1)`.
    pub t: u64,
    /// The widest rank itself: `r` when `t = 2^(ell-r)`, else `r - 1`.
    pub r_star: u32,
}

/// `2^(ell-i) <= 2^(2^i) - 1`, evaluated without overflow. The universe cap
/// keeps `ell <= 40`, so `i >= 7` makes the right side absurdly large.
fn max_rank_condition(ell: u32, i: u32) -> bool {
    if i >= 7 {
        return true;
    }
    (1u128 << (ell - i)) <= (1u128 << (1u32 << i)) - 1
}

impl MaxWitnessParams {
    pub fn derive(ell: u32) -> Result<Self> {
        BlockParams::new(2, ell)?;
        let r = (0..=ell)
            .find(|&i| max_rank_condition(ell, i))
            .expect("condition holds at i = ell");
        assert!(r >= 1, "ell >= 1 forces r >= 1");
        let wide = 1u64 << (ell - r);
        let narrow = (1u64 << (1u64 << (r - 1))) - 1;
        let (t, r_star) = if wide >= narrow { (wide, r) } else { (narrow, r - 1) };
        let params = MaxWitnessParams { ell, r, t, r_star };
        // both defining inequalities, and the proximity of r to log2(ell)
        assert!(max_rank_condition(ell, r));
        assert!(r == 0 || !max_rank_condition(ell, r - 1));
        let log = 31 - ell.leading_zeros();
        assert!((log..=log + 2).contains(&r), "r={r} strays from log2({ell})");
        Ok(params)
    }
}

/// The binary-alphabet witness whose minimal DFA has the maximal number of
/// states among all block languages of length `ell`.
///
/// A word `w1 w2` with `|w2| = r_star` belongs to the language when bit
/// `ind(w2)` of the binary representation of `ind(w1) + 1` is set. The
/// bitmap is produced from its closed form, the concatenated reversed
/// binary representations of `1 ..= t` padded to width `2^r_star` (plus one
/// zero block when `t` is odd), and cross-checked against the set-builder
/// definition; the two must agree.
pub fn max_witness(ell: u32) -> Result<(Bitmap, MaxWitnessParams)> {
    let mp = MaxWitnessParams::derive(ell)?;
    let params = BlockParams::new(2, ell)?;
    let width = 1usize << mp.r_star;

    // closed form: reversed zero-padded binaries of the first t integers
    let mut text = String::with_capacity(params.universe_size() as usize);
    for i in 1..=mp.t {
        let padded = format!("{i:0width$b}");
        text.extend(padded.chars().rev());
    }
    if (text.len() as u64) < params.universe_size() {
        text.extend(std::iter::repeat('0').take(width));
    }
    let from_formula = Bitmap::from_bit_str(params, &text)?;

    // set-builder definition over actual words
    let mut members = Vec::new();
    for idx in 0..params.universe_size() {
        let word = crate::bitmap::index_to_word(idx, &params)?;
        let (w1, w2) = word.symbols().split_at((ell - mp.r_star) as usize);
        let i = crate::bitmap::rank_in_length(&Word::new(w1.to_vec()), 2)?;
        let j = crate::bitmap::rank_in_length(&Word::new(w2.to_vec()), 2)?;
        let bin = format!("{:b}", i + 1);
        let bit = (j as usize) < bin.len()
            && bin.as_bytes()[bin.len() - 1 - j as usize] == b'1';
        if bit {
            members.push(word);
        }
    }
    let from_definition = Bitmap::from_words(&members, params)?;
    assert_eq!(
        from_formula, from_definition,
        "closed form and set-builder definition must agree at ell={ell}"
    );
    Ok((from_formula, mp))
}

/// Palindromes of length `2d`: `{ w · reverse(w) | w ∈ Σ^d }`. Minimal NFAs
/// for these languages have the maximal size for their block length.
pub fn palindrome_witness(k: u32, d: u32) -> Result<Bitmap> {
    if k < 2 {
        return Err(Error::Invalid(format!("palindrome witness needs k >= 2, got {k}")));
    }
    if d < 1 {
        return Err(Error::Invalid("palindrome witness needs d >= 1".into()));
    }
    let params = BlockParams::new(k, 2 * d)?;
    let half = BlockParams::new(k, d)?;
    let mut members = Vec::new();
    for i in 0..half.universe_size() {
        let w = crate::bitmap::index_to_word(i, &half)?;
        let mut symbols = w.symbols().to_vec();
        symbols.extend(w.reversed().symbols());
        members.push(Word::new(symbols));
    }
    Bitmap::from_words(&members, params)
}

/// Half-mirrored words: positions `i < d` with `i ≡ x (mod 2)` must match
/// their mirror position `2d-1-i`. Intersecting the `x = 0` and `x = 1`
/// families yields exactly the palindromes, which is what makes these the
/// intersection witnesses.
pub fn half_match_witness(k: u32, d: u32, x: u32) -> Result<Bitmap> {
    if x > 1 {
        return Err(Error::BadParity { got: x });
    }
    if k < 2 {
        return Err(Error::Invalid(format!("half-match witness needs k >= 2, got {k}")));
    }
    if d < 1 {
        return Err(Error::Invalid("half-match witness needs d >= 1".into()));
    }
    let params = BlockParams::new(k, 2 * d)?;
    let d = d as usize;
    let mut members = Vec::new();
    for idx in 0..params.universe_size() {
        let w = crate::bitmap::index_to_word(idx, &params)?;
        let s = w.symbols();
        let ok = (0..d)
            .filter(|i| i % 2 == x as usize)
            .all(|i| s[i] == s[2 * d - 1 - i]);
        if ok {
            members.push(w);
        }
    }
    Bitmap::from_words(&members, params)
}

/// Words `w_0 … w_{2d-1}` where some position `i < d` repeats at `i + d`
/// with a symbol other than the prohibited last one. The block complement
/// of this family needs exponentially more NFA states than the family
/// itself.
pub fn prohibited_symbol_witness(k: u32, d: u32) -> Result<Bitmap> {
    if k < 2 {
        return Err(Error::Invalid(format!(
            "prohibited-symbol witness needs k >= 2, got {k}"
        )));
    }
    if d < 2 {
        return Err(Error::Invalid("prohibited-symbol witness needs d >= 2".into()));
    }
    let params = BlockParams::new(k, 2 * d)?;
    let prohibited = k - 1;
    let d = d as usize;
    let mut members = Vec::new();
    for idx in 0..params.universe_size() {
        let w = crate::bitmap::index_to_word(idx, &params)?;
        let s = w.symbols();
        if (0..d).any(|i| s[i] == s[i + d] && s[i] != prohibited) {
            members.push(w);
        }
    }
    Bitmap::from_words(&members, params)
}

/// The small fixed families used as operation witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleFamily {
    /// The whole block `Σ^ell`.
    Full,
    /// `{σ^ell}` for one symbol.
    Singleton { symbol: u32 },
    /// All words over two chosen symbols, e.g. `(a+c)^ell`.
    TwoSymbols { first: u32, second: u32 },
    /// `{σ1^ell} ∪ {σ2^ell}`.
    SingletonPair { first: u32, second: u32 },
}

pub fn simple_witness(family: SimpleFamily, k: u32, ell: u32) -> Result<Bitmap> {
    let params = BlockParams::new(k, ell)?;
    let check = |s: u32| {
        if s >= k {
            Err(Error::BadSymbol { symbol: s, k })
        } else {
            Ok(())
        }
    };
    match family {
        SimpleFamily::Full => Ok(Bitmap::full(params)),
        SimpleFamily::Singleton { symbol } => {
            check(symbol)?;
            let w = Word::new(vec![symbol; ell as usize]);
            Bitmap::from_words(&[w], params)
        }
        SimpleFamily::TwoSymbols { first, second } => {
            check(first)?;
            check(second)?;
            let mut members = Vec::new();
            for idx in 0..params.universe_size() {
                let w = crate::bitmap::index_to_word(idx, &params)?;
                if w.symbols().iter().all(|&s| s == first || s == second) {
                    members.push(w);
                }
            }
            Bitmap::from_words(&members, params)
        }
        SimpleFamily::SingletonPair { first, second } => {
            check(first)?;
            check(second)?;
            let words = [
                Word::new(vec![first; ell as usize]),
                Word::new(vec![second; ell as usize]),
            ];
            Bitmap::from_words(&words, params)
        }
    }
}
