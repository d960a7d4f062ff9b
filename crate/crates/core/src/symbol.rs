//! Tape alphabet Γ = {0, 1, △} and the input alphabet Σ = {0, 1}.

use std::fmt;

use crate::error::Error;

/// A tape symbol. `Blank` is rendered as `_` in text formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            '_' | '△' => Some(Symbol::Blank),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '_',
        }
    }

    pub fn bit(self) -> Option<Bit> {
        match self {
            Symbol::Zero => Some(Bit::Zero),
            Symbol::One => Some(Bit::One),
            Symbol::Blank => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An input symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Bit::Zero => '0',
            Bit::One => '1',
        }
    }
}

impl From<Bit> for Symbol {
    fn from(b: Bit) -> Symbol {
        match b {
            Bit::Zero => Symbol::Zero,
            Bit::One => Symbol::One,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parses a string over {0,1}.
pub fn parse_bits(input: &str) -> Result<Vec<Bit>, Error> {
    input
        .chars()
        .map(|c| match c {
            '0' => Ok(Bit::Zero),
            '1' => Ok(Bit::One),
            other => Err(Error::InvalidSymbol {
                symbol: other,
                input: input.to_string(),
            }),
        })
        .collect()
}

pub fn bits_to_string(bits: &[Bit]) -> String {
    bits.iter().map(|b| b.as_char()).collect()
}

/// Every string over {0,1} of exactly `len` symbols, in lexicographic order.
pub fn strings_of_length(len: usize) -> impl Iterator<Item = String> {
    assert!(len < 64, "string length {len} too large to enumerate");
    (0..1u64 << len).map(move |n| {
        (0..len)
            .rev()
            .map(|i| if n >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    })
}
