//! Sound-class alphabets and the segments drawn from them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// The 41 ASJP sound classes: 34 consonants followed by 7 vowels.
pub const ASJP_SYMBOLS: [char; 41] = [
    'p', 'b', 'f', 'v', 'm', 'w', '8', 't', 'd', 's', 'z', 'c', 'n', 'r', 'l', 'S', 'Z', 'C', 'j',
    'T', '5', 'y', 'k', 'g', 'x', 'N', 'q', 'X', 'h', '7', 'L', '4', 'G', '!', 'i', 'e', 'E', '3',
    'a', 'u', 'o',
];

/// Symbol reserved for gap positions in aligned sequences. Never part of an alphabet.
pub const GAP: char = '-';

/// A single sound segment. Only obtainable through [`Alphabet::segment`], so a
/// segment always belongs to the alphabet that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment(char);

impl Segment {
    pub fn symbol(self) -> char {
        self.0
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered set of segment symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, usize>,
}

impl Alphabet {
    /// Builds an alphabet from distinct, non-whitespace symbols other than [`GAP`].
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, &c) in symbols.iter().enumerate() {
            if c == GAP || c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidParameter(format!(
                    "{c:?} cannot be an alphabet symbol"
                )));
            }
            if index.insert(c, i).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate alphabet symbol {c:?}"
                )));
            }
        }
        Ok(Self { symbols, index })
    }

    pub fn asjp() -> Self {
        Self::new(ASJP_SYMBOLS).expect("ASJP symbols are distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn contains(&self, c: char) -> bool {
        self.index.contains_key(&c)
    }

    /// Position of `c` in the alphabet.
    pub fn index_of(&self, c: char) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn segment(&self, c: char) -> Result<Segment> {
        if self.contains(c) {
            Ok(Segment(c))
        } else {
            Err(Error::InvalidSymbol {
                symbol: c,
                line: None,
            })
        }
    }

    /// Converts every character of `s` into a segment.
    pub fn segments(&self, s: &str) -> Result<Vec<Segment>> {
        s.chars().map(|c| self.segment(c)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Segment> + '_ {
        self.symbols.iter().map(|&c| Segment(c))
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::asjp()
    }
}

/// Renders segments back into a transcription string.
pub fn transcription(segments: &[Segment]) -> String {
    segments.iter().map(|s| s.symbol()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asjp_has_41_distinct_symbols() {
        let a = Alphabet::asjp();
        assert_eq!(a.len(), 41);
        assert!(a.contains('3') && a.contains('!') && a.contains('8'));
        assert!(!a.contains('9'));
    }

    #[test]
    fn rejects_foreign_symbol() {
        let a = Alphabet::asjp();
        match a.segment('9') {
            Err(Error::InvalidSymbol { symbol: '9', .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_gap_and_duplicates() {
        assert!(Alphabet::new(['a', '-']).is_err());
        assert!(Alphabet::new(['a', 'a']).is_err());
        assert!(Alphabet::new(['a', ' ']).is_err());
    }

    #[test]
    fn transcription_round_trip() {
        let a = Alphabet::asjp();
        let segs = a.segments("to8o").unwrap();
        assert_eq!(transcription(&segs), "to8o");
    }
}
