//! Binary strings as `(length, code)` pairs.
//!
//! The first symbol is the most significant bit of `code`, so for a fixed length
//! the numeric order of codes is the lexicographic order with `'0' < '1'`. The
//! derived `Ord` compares length first, giving the canonical shorter-first
//! enumeration `ε, 0, 1, 00, 01, …`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Longest supported string.
pub const MAX_WORD_LEN: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: usize,
    code: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, code: 0 };

    pub fn new(len: usize, code: u64) -> Self {
        assert!(len <= MAX_WORD_LEN, "word length {len} exceeds {MAX_WORD_LEN}");
        assert!(code < (1u64 << len), "code {code} does not fit in {len} symbols");
        Word { len, code }
    }

    pub fn symbol(a: u8) -> Self {
        assert!(a < 2);
        Word { len: 1, code: a as u64 }
    }

    /// All strings `0^len`.
    pub fn zeros(len: usize) -> Self {
        Word::new(len, 0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Index of this word among the strings of its own length.
    pub fn index(&self) -> usize {
        self.code as usize
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.len + other.len, (self.code << other.len) | other.code)
    }

    /// Symbols from left to right.
    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).rev().map(move |i| ((self.code >> i) & 1) as u8)
    }

    /// All strings of exactly `len` symbols in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len <= MAX_WORD_LEN);
        (0..(1u64 << len)).map(move |code| Word { len, code })
    }

    /// All strings of length at most `max_len`, shorter first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_length)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("ε");
        }
        for s in self.symbols() {
            f.write_str(if s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl Word {
    /// Text form without the `ε` marker (empty string for the empty word).
    pub fn to_key(&self) -> String {
        self.symbols().map(|s| if s == 0 { '0' } else { '1' }).collect()
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(Word::EMPTY);
        }
        let mut code = 0u64;
        let mut len = 0usize;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::Alphabet(other)),
            };
            len += 1;
            if len > MAX_WORD_LEN {
                return Err(Error::Length(format!("string longer than {MAX_WORD_LEN} symbols")));
            }
            code = (code << 1) | bit;
        }
        Ok(Word { len, code })
    }
}
