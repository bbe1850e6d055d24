//! Two-colour vertex sequences.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Vertex colour. `Blue < Red` fixes the canonical order of words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Blue,
    Red,
}

impl Colour {
    pub const ALL: [Colour; 2] = [Colour::Blue, Colour::Red];

    pub fn swap(self) -> Colour {
        match self {
            Colour::Blue => Colour::Red,
            Colour::Red => Colour::Blue,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Colour::Blue => 'b',
            Colour::Red => 'r',
        }
    }

    pub fn from_char(ch: char) -> Option<Colour> {
        match ch {
            'b' => Some(Colour::Blue),
            'r' => Some(Colour::Red),
            _ => None,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Colour {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Colour::Blue => "b",
            Colour::Red => "r",
        })
    }
}

impl<'de> Deserialize<'de> for Colour {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Colour::from_char), chars.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(serde::de::Error::custom(format!("invalid colour {s:?}"))),
        }
    }
}

/// A finite word over `{b, r}`; position `p` (1-based) is `letters[p - 1]`.
///
/// Words are ordered by length first and lexicographically within a length,
/// which is the canonical order for serialized series.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Colour>);

impl Word {
    pub fn new(letters: Vec<Colour>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(c: Colour) -> Self {
        Word(vec![c])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Colour] {
        &self.0
    }

    /// Colour at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> Option<Colour> {
        pos.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn first(&self) -> Option<Colour> {
        self.0.first().copied()
    }

    /// Exchanges blue and red letter by letter.
    pub fn swap(&self) -> Word {
        Word(self.0.iter().map(|c| c.swap()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, c: Colour) {
        self.0.push(c);
    }

    pub fn split_at(&self, mid: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(mid);
        (Word(a.to_vec()), Word(b.to_vec()))
    }

    pub fn starts_with(&self, prefix: &[Colour]) -> bool {
        self.0.starts_with(prefix)
    }

    /// All `2^n` words of length `n`, in lexicographic order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < 64, "word length {n} too large to enumerate");
        (0..1u64 << n).map(move |bits| Word::from_bits(bits, n))
    }

    /// Every word of length `1..=max_len`, length first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (1..=max_len).flat_map(Word::all_of_len)
    }

    /// Word whose letter `i` is red iff bit `n - 1 - i` of `bits` is set.
    pub fn from_bits(bits: u64, n: usize) -> Word {
        Word(
            (0..n)
                .map(|i| {
                    if bits >> (n - 1 - i) & 1 == 1 {
                        Colour::Red
                    } else {
                        Colour::Blue
                    }
                })
                .collect(),
        )
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Borrow<[Colour]> for Word {
    fn borrow(&self) -> &[Colour] {
        &self.0
    }
}

impl FromIterator<Colour> for Word {
    fn from_iter<I: IntoIterator<Item = Colour>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(offset, ch)| Colour::from_char(ch).ok_or(Error::InvalidLetter { ch, offset }))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples; panics on malformed input.
pub fn w(s: &str) -> Word {
    s.parse().expect("malformed word literal")
}
