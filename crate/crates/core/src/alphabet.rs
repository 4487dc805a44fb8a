use std::fmt;

use crate::tolerance::MAX_INPUT_LEN;
use crate::{Error, Result};

/// Ordered set of single-character input symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("alphabet must not be empty".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidArgument(format!("duplicate symbol '{c}'")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn unary() -> Self {
        Self { symbols: vec!['a'] }
    }

    pub fn binary() -> Self {
        Self { symbols: vec!['a', 'b'] }
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

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    /// Maps a word to symbol indices, rejecting unknown symbols and words
    /// longer than [`MAX_INPUT_LEN`].
    pub fn encode(&self, word: &str) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(word.len());
        for c in word.chars() {
            if out.len() == MAX_INPUT_LEN {
                return Err(Error::InvalidInput(format!(
                    "input longer than {MAX_INPUT_LEN} symbols"
                )));
            }
            let idx = self
                .index_of(c)
                .ok_or_else(|| Error::InvalidInput(format!("symbol '{c}' not in alphabet {self}")))?;
            out.push(idx);
        }
        Ok(out)
    }

    /// All words of length `0..=max_len` in length-lexicographic order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut frontier = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(frontier.len() * self.symbols.len());
            for w in &frontier {
                for &c in &self.symbols {
                    let mut s = w.clone();
                    s.push(c);
                    next.push(s);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
