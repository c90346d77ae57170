//! Letters, words and the word literal grammar.
//!
//! Words are stored flat. The literal grammar is a sequence of tokens
//! `letter` or `letter^n` (n >= 1) with optional whitespace between tokens,
//! e.g. `a^2 b a^3` or `ab^2ab^2`. The canonical printed form uses one
//! token per maximal block, separated by single spaces.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
}

impl Letter {
    pub const ALL: [Letter; 5] = [Letter::A, Letter::B, Letter::X, Letter::Y, Letter::Z];
    pub const BASE: [Letter; 2] = [Letter::A, Letter::B];

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'x' => Some(Letter::X),
            'y' => Some(Letter::Y),
            'z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::X => 'x',
            Letter::Y => 'y',
            Letter::Z => 'z',
        }
    }

    /// Auxiliary generators are everything except `a` and `b`.
    pub fn is_auxiliary(self) -> bool {
        !matches!(self, Letter::A | Letter::B)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseWordError {
    #[error("unknown letter {0:?} at byte {1}")]
    UnknownLetter(char, usize),
    #[error("letter {0:?} at byte {1} is not in the active alphabet")]
    LetterNotInAlphabet(char, usize),
    #[error("exponent must be a positive integer (byte {0})")]
    NonPositiveExponent(usize),
    #[error("malformed token at byte {0}")]
    Malformed(usize),
}

/// A finite word over [`Letter`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn power(l: Letter, n: usize) -> Self {
        Word(vec![l; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn push_power(&mut self, l: Letter, n: usize) {
        self.0.extend(std::iter::repeat_n(l, n));
    }

    pub fn extend_from(&mut self, other: &[Letter]) {
        self.0.extend_from_slice(other);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    /// Maximal runs of equal letters as `(letter, exponent)` pairs.
    pub fn blocks(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((last, n)) if *last == l => *n += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    pub fn from_blocks(blocks: &[(Letter, usize)]) -> Word {
        let mut w = Word::empty();
        for &(l, n) in blocks {
            w.push_power(l, n);
        }
        w
    }

    /// Byte offsets of every occurrence of `pattern` (naive scan).
    pub fn occurrences<'a>(&'a self, pattern: &'a [Letter]) -> impl Iterator<Item = usize> + 'a {
        let n = pattern.len();
        let end = if n == 0 || n > self.0.len() { 0 } else { self.0.len() - n + 1 };
        (0..end).filter(move |&i| &self.0[i..i + n] == pattern)
    }

    /// Replaces `len` letters at `pos` by `with`.
    pub fn splice(&self, pos: usize, len: usize, with: &[Letter]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() - len + with.len());
        v.extend_from_slice(&self.0[..pos]);
        v.extend_from_slice(with);
        v.extend_from_slice(&self.0[pos + len..]);
        Word(v)
    }

    pub fn uses_only(&self, alphabet: &[Letter]) -> bool {
        self.0.iter().all(|l| alphabet.contains(l))
    }

    /// Parses a literal restricted to `alphabet`.
    pub fn parse_in(text: &str, alphabet: &[Letter]) -> Result<Word, ParseWordError> {
        let w = parse_word(text)?;
        if let Some(pos) = w.0.iter().position(|l| !alphabet.contains(l)) {
            // report the offending letter; offsets are best-effort for the restricted parse
            let c = w.0[pos].as_char();
            let at = text.find(c).unwrap_or(0);
            return Err(ParseWordError::LetterNotInAlphabet(c, at));
        }
        Ok(w)
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, n)) in self.blocks().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if n == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{n}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_word(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a word literal over the full letter set `{a, b, x, y, z}`.
pub fn parse_word(text: &str) -> Result<Word, ParseWordError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Word::empty();
    let mut i = 0;
    while i < bytes.len() {
        let (at, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let letter = match Letter::from_char(c) {
            Some(l) => l,
            None if c.is_ascii_alphabetic() => return Err(ParseWordError::UnknownLetter(c, at)),
            None => return Err(ParseWordError::Malformed(at)),
        };
        i += 1;
        let mut exponent = 1usize;
        if i < bytes.len() && bytes[i].1 == '^' {
            let caret = bytes[i].0;
            i += 1;
            if i < bytes.len() && bytes[i].1 == '-' {
                return Err(ParseWordError::NonPositiveExponent(caret));
            }
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(ParseWordError::Malformed(caret));
            }
            let digits: String = bytes[start..i].iter().map(|&(_, c)| c).collect();
            exponent = digits.parse().map_err(|_| ParseWordError::Malformed(caret))?;
            if exponent == 0 {
                return Err(ParseWordError::NonPositiveExponent(caret));
            }
        }
        out.push_power(letter, exponent);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relator exponents must all be >= 1, got {0:?}")]
pub struct InvalidExponents(pub [usize; 6]);

/// The exponent six-tuple (alpha, beta, gamma, delta, epsilon, phi) of the
/// relator `a^alpha b^beta a^gamma b^delta a^epsilon b^phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelatorExponents {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    pub epsilon: usize,
    pub phi: usize,
}

impl RelatorExponents {
    pub fn new(e: [usize; 6]) -> Result<Self, InvalidExponents> {
        if e.contains(&0) {
            return Err(InvalidExponents(e));
        }
        Ok(RelatorExponents { alpha: e[0], beta: e[1], gamma: e[2], delta: e[3], epsilon: e[4], phi: e[5] })
    }

    pub fn as_array(&self) -> [usize; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.phi]
    }

    /// Every tuple with all entries in `1..=max`, in lexicographic order.
    pub fn grid(max: usize) -> impl Iterator<Item = RelatorExponents> {
        let n = max.pow(6);
        (0..n).map(move |mut idx| {
            let mut e = [0usize; 6];
            for slot in e.iter_mut().rev() {
                *slot = idx % max + 1;
                idx /= max;
            }
            RelatorExponents::new(e).expect("grid entries are positive")
        })
    }
}

impl fmt::Display for RelatorExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e, g] = self.as_array();
        write!(f, "({a},{b},{c},{d},{e},{g})")
    }
}

/// `a^alpha b^beta a^gamma b^delta a^epsilon b^phi` as a flat word.
pub fn relator_word(e: &RelatorExponents) -> Word {
    let ab = [Letter::A, Letter::B];
    let blocks: Vec<(Letter, usize)> = e.as_array().iter().enumerate().map(|(i, &n)| (ab[i % 2], n)).collect();
    Word::from_blocks(&blocks)
}

/// Failure function: `fail[i]` is the length of the longest proper border
/// of `w[..=i]`.
fn failure_function(w: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0; w.len()];
    let mut matched = 0;
    for i in 1..w.len() {
        while matched > 0 && w[matched] != w[i] {
            matched = fail[matched - 1];
        }
        if w[matched] == w[i] {
            matched += 1;
        }
        fail[i] = matched;
    }
    fail
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("border lengths are undefined for the empty word")]
pub struct EmptyWord;

/// All lengths `0 < L < |w|` such that the prefix and suffix of length `L`
/// coincide, in increasing order.
pub fn border_lengths(w: &[Letter]) -> Result<Vec<usize>, EmptyWord> {
    if w.is_empty() {
        return Err(EmptyWord);
    }
    let fail = failure_function(w);
    let mut out = Vec::new();
    let mut len = fail[w.len() - 1];
    while len > 0 {
        out.push(len);
        len = fail[len - 1];
    }
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn brute_borders(w: &[Letter]) -> Vec<usize> {
        (1..w.len()).filter(|&l| w[..l] == w[w.len() - l..]).collect()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("b").letters(), &[Letter::B]);
        assert_eq!(w("a^2 b").letters(), &[Letter::A, Letter::A, Letter::B]);
        assert!(w("").is_empty());
        assert_eq!(w("ab^2ab^2"), w("a b b a b^2"));
        assert_eq!(w("a^2 b a^3").to_string(), "a^2 b a^3");
        assert_eq!(w("aab a aa").to_string(), "a^2 b a^3");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("c"), Err(ParseWordError::UnknownLetter('c', 0))));
        assert!(matches!(parse_word("a^0"), Err(ParseWordError::NonPositiveExponent(1))));
        assert!(matches!(parse_word("a^-2"), Err(ParseWordError::NonPositiveExponent(_))));
        assert!(matches!(parse_word("a^"), Err(ParseWordError::Malformed(_))));
        assert!(matches!(parse_word("^2"), Err(ParseWordError::Malformed(0))));
        assert!(matches!(parse_word("a2"), Err(ParseWordError::Malformed(1))));
        assert!(matches!(Word::parse_in("ax", &Letter::BASE), Err(ParseWordError::LetterNotInAlphabet('x', 1))));
    }

    #[test]
    fn relator_examples() {
        let r = |e: [usize; 6]| relator_word(&RelatorExponents::new(e).unwrap());
        assert_eq!(r([1, 1, 1, 1, 1, 1]), w("ababab"));
        assert_eq!(r([1, 2, 1, 2, 1, 2]), w("ab^2ab^2ab^2"));
        assert_eq!(r([2, 1, 1, 1, 3, 1]), w("a^2 b a b a^3 b"));
        assert_eq!(r([2, 1, 1, 1, 3, 1]).len(), 9);
        assert!(RelatorExponents::new([1, 1, 0, 1, 1, 1]).is_err());
    }

    #[test]
    fn border_examples() {
        assert_eq!(border_lengths(&w("ababab")).unwrap(), vec![2, 4]);
        assert_eq!(border_lengths(&w("aab")).unwrap(), Vec::<usize>::new());
        assert_eq!(border_lengths(&w("abbab")).unwrap(), vec![2]);
        assert_eq!(border_lengths(&w("aaaa")).unwrap(), vec![1, 2, 3]);
        assert_eq!(border_lengths(&Word::empty()), Err(EmptyWord));
    }

    #[test]
    fn grid_is_lexicographic_and_complete() {
        let all: Vec<_> = RelatorExponents::grid(3).collect();
        assert_eq!(all.len(), 729);
        assert_eq!(all[0].as_array(), [1; 6]);
        assert_eq!(all[1].as_array(), [1, 1, 1, 1, 1, 2]);
        assert_eq!(all[728].as_array(), [3; 6]);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn border_condition_matches_exponent_test() {
        // nonempty border <=> (phi <= beta and epsilon >= alpha), checked by brute force
        for e in RelatorExponents::grid(6) {
            let r = relator_word(&e);
            let has_border = !brute_borders(&r).is_empty();
            assert_eq!(has_border, e.phi <= e.beta && e.epsilon >= e.alpha, "{e}");
        }
    }

    fn arb_word(max: usize, alphabet: Vec<Letter>) -> impl Strategy<Value = Word> {
        proptest::collection::vec(proptest::sample::select(alphabet), 0..=max).prop_map(Word::from)
    }

    proptest! {
        #[test]
        fn borders_agree_with_brute_force(word in arb_word(20, vec![Letter::A, Letter::B])) {
            prop_assume!(!word.is_empty());
            prop_assert_eq!(border_lengths(&word).unwrap(), brute_borders(&word));
        }

        #[test]
        fn print_parse_round_trip(word in arb_word(16, Letter::ALL.to_vec())) {
            let printed = word.to_string();
            let reparsed = parse_word(&printed).unwrap();
            prop_assert_eq!(&reparsed, &word);
            prop_assert_eq!(reparsed.to_string(), printed);
        }

        #[test]
        fn blocks_round_trip(word in arb_word(16, Letter::ALL.to_vec())) {
            let blocks = word.blocks();
            prop_assert_eq!(blocks.iter().map(|b| b.1).sum::<usize>(), word.len());
            prop_assert!(blocks.windows(2).all(|p| p[0].0 != p[1].0));
            prop_assert_eq!(Word::from_blocks(&blocks), word);
        }
    }
}
