//! Free-group words in syllable (run-length) normal form.
//!
//! A [`Word`] is a sequence of `(generator, exponent)` syllables with no zero
//! exponents and no two adjacent syllables on the same generator. Every
//! constructor free-reduces, so structural equality is free-group equality.
//!
//! Words carry generator *indices* only. Symbols live in an [`Alphabet`],
//! which is owned by a presentation and used for parsing, printing and JSON.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a generator inside an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(pub u32);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A single letter `g^{+1}` or `g^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid generator symbol {0:?}: must be nonempty without whitespace or '^'")]
    InvalidSymbol(String),
    #[error("duplicate generator symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("generator index {index} outside an alphabet of {size} generators")]
    AlphabetMismatch { index: u32, size: usize },
    #[error("cannot parse word token {0:?}")]
    BadToken(String),
}

/// A named generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub symbol: String,
    pub index: u32,
}

/// Interned generator symbols of one presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<Generator>,
    lookup: HashMap<String, u32>,
}

fn valid_symbol(s: &str) -> bool {
    !s.is_empty() && !s.contains('^') && !s.chars().any(char::is_whitespace)
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet::default();
        for s in symbols {
            alphabet.push(s)?;
        }
        Ok(alphabet)
    }

    /// Adds a symbol and returns its generator.
    pub fn push(&mut self, symbol: impl Into<String>) -> Result<Gen, WordError> {
        let symbol = symbol.into();
        if !valid_symbol(&symbol) {
            return Err(WordError::InvalidSymbol(symbol));
        }
        if self.lookup.contains_key(&symbol) {
            return Err(WordError::DuplicateSymbol(symbol));
        }
        let index = self.generators.len() as u32;
        self.lookup.insert(symbol.clone(), index);
        self.generators.push(Generator { symbol, index });
        Ok(Gen(index))
    }

    /// Adds a symbol derived from `stem` that is not yet in use.
    pub fn push_fresh(&mut self, stem: &str) -> Gen {
        let mut candidate = stem.to_string();
        let mut suffix = 1usize;
        while self.lookup.contains_key(&candidate) {
            candidate = format!("{stem}_{suffix}");
            suffix += 1;
        }
        self.push(candidate).expect("fresh symbol is valid and unused")
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.generators.iter().map(|g| g.symbol.as_str())
    }

    pub fn gen(&self, symbol: &str) -> Result<Gen, WordError> {
        self.lookup
            .get(symbol)
            .map(|&i| Gen(i))
            .ok_or_else(|| WordError::UnknownSymbol(symbol.to_string()))
    }

    pub fn symbol(&self, g: Gen) -> &str {
        &self.generators[g.index()].symbol
    }

    /// Fails if `w` mentions a generator this alphabet does not have.
    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.max_gen() {
            Some(g) if g.index() >= self.len() => {
                Err(WordError::AlphabetMismatch { index: g.0, size: self.len() })
            }
            _ => Ok(()),
        }
    }

    /// Builds a word from `[symbol, exponent]` pairs, free-reducing it.
    pub fn word_from_pairs(&self, pairs: &[(String, i64)]) -> Result<Word, WordError> {
        let mut syllables = Vec::with_capacity(pairs.len());
        for (sym, e) in pairs {
            syllables.push((self.gen(sym)?, *e));
        }
        Ok(Word::from_syllables(syllables))
    }

    pub fn word_to_pairs(&self, w: &Word) -> Vec<(String, i64)> {
        w.syllables()
            .iter()
            .map(|&(g, e)| (self.symbol(g).to_string(), e))
            .collect()
    }

    /// Parses text such as `"a^3 t^-1 b"`; `"1"` or an empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut syllables = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*' || c == '.') {
            if token.is_empty() || token == "1" {
                continue;
            }
            let (sym, exp) = match token.split_once('^') {
                Some((s, e)) => {
                    let e = e
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .parse::<i64>()
                        .map_err(|_| WordError::BadToken(token.to_string()))?;
                    (s, e)
                }
                None => (token, 1),
            };
            syllables.push((self.gen(sym)?, exp));
        }
        Ok(Word::from_syllables(syllables))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .syllables()
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    self.symbol(g).to_string()
                } else {
                    format!("{}^{}", self.symbol(g), e)
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// Reduced free-group word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<(Gen, i64)>,
}

/// Pushes one syllable onto a reduced stack, merging and cancelling.
fn push_syllable(stack: &mut Vec<(Gen, i64)>, g: Gen, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(last) = stack.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1 == 0 {
                stack.pop();
            }
            return;
        }
    }
    stack.push((g, e));
}

impl Word {
    pub fn identity() -> Self {
        Word { syllables: Vec::new() }
    }

    pub fn generator(g: Gen) -> Self {
        Word { syllables: vec![(g, 1)] }
    }

    /// `g^e`.
    pub fn gen_pow(g: Gen, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word { syllables: vec![(g, e)] }
        }
    }

    /// Free reduction of a raw syllable list.
    pub fn from_syllables<I: IntoIterator<Item = (Gen, i64)>>(raw: I) -> Self {
        let mut stack = Vec::new();
        for (g, e) in raw {
            push_syllable(&mut stack, g, e);
        }
        Word { syllables: stack }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word::from_syllables(letters.into_iter().map(|l| (l.gen, l.exponent())))
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length (sum of absolute exponents).
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    pub fn max_gen(&self) -> Option<Gen> {
        self.syllables.iter().map(|&(g, _)| g).max()
    }

    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.syllables.iter().filter(|s| s.0 == g).map(|s| s.1).sum()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|&(gen, e)| {
            std::iter::repeat_n(Letter { gen, inverse: e < 0 }, e.unsigned_abs() as usize)
        })
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Reduced concatenation `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut stack = self.syllables.clone();
        stack.reserve(other.syllables.len());
        for &(g, e) in &other.syllables {
            push_syllable(&mut stack, g, e);
        }
        Word { syllables: stack }
    }

    /// In-place right multiplication.
    pub fn mul_assign(&mut self, other: &Word) {
        for &(g, e) in &other.syllables {
            push_syllable(&mut self.syllables, g, e);
        }
    }

    /// `x · self · x⁻¹`.
    pub fn conjugate(&self, x: &Word) -> Word {
        x.mul(self).mul(&x.inverse())
    }

    /// `g⁻¹ h⁻¹ g h`.
    pub fn commutator(g: &Word, h: &Word) -> Word {
        g.inverse().mul(&h.inverse()).mul(g).mul(h)
    }

    /// `self^k`; negative `k` gives powers of the inverse.
    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_identity() {
            return Word::identity();
        }
        if let [(g, e)] = self.syllables[..] {
            return Word::gen_pow(g, e * k);
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out.mul_assign(&base);
        }
        out
    }

    /// Splits after the first `pos` letters. `pos` must not exceed `len()`.
    pub fn split_at_letter(&self, pos: u64) -> (Word, Word) {
        let mut remaining = pos;
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut iter = self.syllables.iter();
        for &(g, e) in iter.by_ref() {
            let size = e.unsigned_abs();
            if remaining >= size {
                left.push((g, e));
                remaining -= size;
                if remaining == 0 {
                    break;
                }
            } else {
                let sign = e.signum();
                let take = remaining as i64;
                if take > 0 {
                    left.push((g, sign * take));
                }
                right.push((g, e - sign * take));
                remaining = 0;
                break;
            }
        }
        right.extend(iter.copied());
        debug_assert_eq!(remaining, 0, "split position beyond word length");
        (Word { syllables: left }, Word { syllables: right })
    }

    /// Length of the longest common letter prefix of two words.
    pub fn common_prefix_len(&self, other: &Word) -> u64 {
        let mut total = 0u64;
        for (&(g1, e1), &(g2, e2)) in self.syllables.iter().zip(&other.syllables) {
            if g1 != g2 || e1.signum() != e2.signum() {
                break;
            }
            if e1 == e2 {
                total += e1.unsigned_abs();
            } else {
                total += e1.unsigned_abs().min(e2.unsigned_abs());
                break;
            }
        }
        total
    }

    /// Returns `(c, core)` with `self = c · core · c⁻¹` and `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let s = &self.syllables;
        let (mut lo, mut hi) = (0usize, s.len());
        let mut conj = Vec::new();
        while hi - lo >= 2 {
            let (g1, e1) = s[lo];
            let (g2, e2) = s[hi - 1];
            if g1 != g2 || e1.signum() == e2.signum() {
                break;
            }
            if e1 == -e2 {
                conj.push((g1, e1));
                lo += 1;
                hi -= 1;
                continue;
            }
            // g^{e1} ... g^{e2} with opposite signs and different magnitudes:
            // conjugate away the smaller one, the larger keeps a remainder.
            let common = e1.abs().min(e2.abs()) * e1.signum();
            conj.push((g1, common));
            let mut core = Vec::with_capacity(hi - lo - 1);
            if e1 - common != 0 {
                core.push((g1, e1 - common));
            }
            core.extend_from_slice(&s[lo + 1..hi - 1]);
            if e2 + common != 0 {
                core.push((g1, e2 + common));
            }
            return (Word { syllables: conj }, Word { syllables: core });
        }
        (Word { syllables: conj }, Word { syllables: s[lo..hi].to_vec() })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "g{}", g.0)?;
            } else {
                write!(f, "g{}^{}", g.0, e)?;
            }
        }
        Ok(())
    }
}

/// Free reduction of a raw syllable list.
pub fn free_reduce<I: IntoIterator<Item = (Gen, i64)>>(raw: I) -> Word {
    Word::from_syllables(raw)
}

pub fn inverse(w: &Word) -> Word {
    w.inverse()
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.mul(v)
}

pub fn conjugate(g: &Word, x: &Word) -> Word {
    g.conjugate(x)
}

pub fn commutator(g: &Word, h: &Word) -> Word {
    Word::commutator(g, h)
}

pub fn power(w: &Word, k: i64) -> Word {
    w.pow(k)
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use proptest::prelude::*;

    const X: Gen = Gen(0);
    const Y: Gen = Gen(1);

    fn w(s: &[(Gen, i64)]) -> Word {
        Word::from_syllables(s.iter().copied())
    }

    #[test]
    fn reduction_examples() {
        assert!(free_reduce([(X, 1), (Y, 1), (Y, -1), (X, -1)]).is_identity());
        assert_eq!(free_reduce([(X, 2), (X, 3)]).syllables(), &[(X, 5)]);
        let raw = [(X, -1), (Y, -1), (X, 1), (Y, 1)];
        assert_eq!(free_reduce(raw).syllables(), &raw);
    }

    #[test]
    fn algebra_examples() {
        let xy = w(&[(X, 1), (Y, 1)]);
        assert_eq!(xy.inverse(), w(&[(Y, -1), (X, -1)]));
        assert!(Word::identity().inverse().is_identity());
        let x = Word::generator(X);
        let y = Word::generator(Y);
        assert!(x.mul(&x.inverse()).is_identity());
        assert_eq!(x.pow(2).mul(&y), w(&[(X, 2), (Y, 1)]));
        assert_eq!(x.conjugate(&Word::identity()), x);
        assert!(Word::identity().conjugate(&y).is_identity());
        assert!(Word::commutator(&x, &x).is_identity());
        assert_eq!(Word::commutator(&x, &y), w(&[(X, -1), (Y, -1), (X, 1), (Y, 1)]));
        assert!(Word::commutator(&x, &Word::identity()).is_identity());
        assert!(x.pow(0).is_identity());
        assert_eq!(xy.pow(2), w(&[(X, 1), (Y, 1), (X, 1), (Y, 1)]));
    }

    #[test]
    fn split_and_prefix() {
        let word = w(&[(X, 3), (Y, -2)]);
        let (a, b) = word.split_at_letter(2);
        assert_eq!(a, w(&[(X, 2)]));
        assert_eq!(b, w(&[(X, 1), (Y, -2)]));
        let (a, b) = word.split_at_letter(5);
        assert_eq!(a, word);
        assert!(b.is_identity());
        let (a, b) = word.split_at_letter(0);
        assert!(a.is_identity());
        assert_eq!(b, word);
        assert_eq!(word.common_prefix_len(&w(&[(X, 3), (Y, -1), (X, 1)])), 4);
        assert_eq!(word.common_prefix_len(&w(&[(X, 2)])), 2);
        assert_eq!(word.common_prefix_len(&w(&[(X, -2)])), 0);
    }

    #[test]
    fn cyclic_reduction_cases() {
        let c = w(&[(Y, 2)]);
        let core = w(&[(X, 1), (Y, 1), (X, 2)]);
        let word = core.conjugate(&c);
        let (cc, cr) = word.cyclic_reduction();
        assert_eq!(cr.conjugate(&cc), word);
        assert_eq!(cr.len(), 4);
        // x^3 y x^-1 partially cancels
        let word = w(&[(X, 3), (Y, 1), (X, -1)]);
        let (cc, cr) = word.cyclic_reduction();
        assert_eq!(cr.conjugate(&cc), word);
        assert_eq!(cr, w(&[(X, 2), (Y, 1)]));
    }

    #[test]
    fn alphabet_round_trip() {
        let a = Alphabet::new(["a", "b", "t"]).unwrap();
        let word = a.parse_word("a^3 t^-1 b").unwrap();
        assert_eq!(a.format_word(&word), "a^3 t^-1 b");
        let pairs = a.word_to_pairs(&word);
        assert_eq!(pairs, vec![("a".into(), 3), ("t".into(), -1), ("b".into(), 1)]);
        assert_eq!(a.word_from_pairs(&pairs).unwrap(), word);
        assert!(a.parse_word("1").unwrap().is_identity());
        assert!(matches!(a.parse_word("z"), Err(WordError::UnknownSymbol(_))));
        assert!(Alphabet::new(["a b"]).is_err());
        assert!(Alphabet::new(["a^"]).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        let big = Word::generator(Gen(7));
        assert!(matches!(a.check(&big), Err(WordError::AlphabetMismatch { .. })));
    }

    proptest! {
        #[test]
        fn inverse_is_involution(word in word(3, 12)) {
            prop_assert_eq!(word.inverse().inverse(), word.clone());
            prop_assert!(word.mul(&word.inverse()).is_identity());
        }

        #[test]
        fn concat_is_associative(a in word(3, 8), b in word(3, 8), c in word(3, 8)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn conjugation_composes(g in word(3, 8), x in word(3, 6), y in word(3, 6)) {
            prop_assert_eq!(g.conjugate(&x).conjugate(&y), g.conjugate(&y.mul(&x)));
        }

        #[test]
        fn commutator_inverse_swaps(g in word(3, 6), h in word(3, 6)) {
            prop_assert_eq!(Word::commutator(&g, &h).inverse(), Word::commutator(&h, &g));
        }

        #[test]
        fn negative_power_is_inverse(word in word(3, 8)) {
            prop_assert_eq!(word.pow(-1), word.inverse());
            prop_assert_eq!(word.pow(3), word.mul(&word).mul(&word));
        }

        #[test]
        fn reduction_is_idempotent_and_shrinks(raw in raw_syllables(3, 16)) {
            let raw_len: u64 = raw.iter().map(|s| s.1.unsigned_abs()).sum();
            let once = Word::from_syllables(raw.clone());
            let twice = Word::from_syllables(once.syllables().iter().copied());
            prop_assert!(once.len() <= raw_len);
            prop_assert_eq!(&once, &twice);
            // normal form: no zero exponents, no repeated adjacent generator
            for pair in once.syllables().windows(2) {
                prop_assert_ne!(pair[0].0, pair[1].0);
            }
            prop_assert!(once.syllables().iter().all(|s| s.1 != 0));
        }

        #[test]
        fn insert_cancel_round_trip(base in word(3, 10), extra in word(3, 6), cut in 0u64..40) {
            // Inserting u u^-1 anywhere does not change the normal form.
            let pos = cut.min(base.len());
            let (l, r) = base.split_at_letter(pos);
            let raw: Vec<(Gen, i64)> = l.syllables().iter()
                .chain(extra.syllables())
                .chain(extra.inverse().syllables())
                .chain(r.syllables())
                .copied()
                .collect();
            prop_assert_eq!(Word::from_syllables(raw), base);
        }

        #[test]
        fn split_concat_round_trip(base in word(3, 10), cut in 0u64..40) {
            let pos = cut.min(base.len());
            let (l, r) = base.split_at_letter(pos);
            prop_assert_eq!(l.len(), pos);
            prop_assert_eq!(l.mul(&r), base);
        }

        #[test]
        fn cyclic_reduction_is_conjugation(word in word(3, 10)) {
            let (c, core) = word.cyclic_reduction();
            prop_assert_eq!(core.conjugate(&c), word);
            let s = core.syllables();
            if s.len() >= 2 {
                let (first, last) = (s[0], s[s.len() - 1]);
                prop_assert!(first.0 != last.0 || first.1.signum() == last.1.signum());
            }
        }
    }
}
