//! Fixed-width bit strings used as vertex payloads (identifiers, random
//! bits, sequence windows).

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of bits a [`BitString`] can hold.
pub const MAX_BITS: usize = 128;

/// A bit string of length at most [`MAX_BITS`].
///
/// Bit `i` is the coefficient of `2^i` in the backing word, so
/// `BitString::from_value(v, len)` encodes the `len` low bits of `v`.
/// Strings of different lengths are never equal, even when their numeric
/// values coincide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: u128,
    len: u8,
}

impl BitString {
    /// The empty bit string.
    pub fn empty() -> Self {
        BitString { bits: 0, len: 0 }
    }

    /// Encodes the `len` low bits of `value`.
    ///
    /// Panics if `len` exceeds [`MAX_BITS`] or `value` does not fit.
    pub fn from_value(value: u128, len: usize) -> Self {
        assert!(len <= MAX_BITS, "bit string too long: {len}");
        if len < MAX_BITS {
            assert!(
                value >> len == 0,
                "value {value} does not fit in {len} bits"
            );
        }
        BitString {
            bits: value,
            len: len as u8,
        }
    }

    /// Builds a string from individual bits, index 0 first.
    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(
            bits.len() <= MAX_BITS,
            "bit string too long: {}",
            bits.len()
        );
        let mut word = 0u128;
        for (i, &b) in bits.iter().enumerate() {
            debug_assert!(b <= 1);
            word |= u128::from(b & 1) << i;
        }
        BitString {
            bits: word,
            len: bits.len() as u8,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The bit at index `i` (0 or 1). Panics if out of range.
    pub fn bit(&self, i: usize) -> u8 {
        assert!(
            i < self.len(),
            "bit index {i} out of range for length {}",
            self.len()
        );
        ((self.bits >> i) & 1) as u8
    }

    /// Numeric value of the string.
    pub fn value(&self) -> u128 {
        self.bits
    }

    /// Parses a string of `0`/`1` characters written most-significant first,
    /// as produced by `Display`.
    pub fn parse(s: &str) -> Option<Self> {
        if s.len() > MAX_BITS {
            return None;
        }
        let mut word = 0u128;
        for (i, c) in s.chars().rev().enumerate() {
            match c {
                '0' => {}
                '1' => word |= 1u128 << i,
                _ => return None,
            }
        }
        Some(BitString {
            bits: word,
            len: s.len() as u8,
        })
    }
}

impl fmt::Display for BitString {
    /// Most-significant bit first, so `from_value(1, 2)` prints as `01`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len()).rev() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitString::parse(&s).ok_or_else(|| D::Error::custom(format!("invalid bit string {s:?}")))
    }
}
