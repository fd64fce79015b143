//! Finite binary strings with shortlex ordering.
//!
//! Every object in the lab (programs, inputs, outputs, compressed forms) is a
//! [`BitString`]. The total order used everywhere is shortlex: shorter strings
//! first, equal lengths compared bitwise with `0 < 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::LabError;

/// A finite sequence of bits. The empty string is valid.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn with_capacity(cap: usize) -> Self {
        Self {
            bits: Vec::with_capacity(cap),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// `count` copies of `bit`.
    pub fn repeat_bit(bit: bool, count: usize) -> Self {
        Self {
            bits: vec![bit; count],
        }
    }

    /// The `len`-bit string spelling `value` in binary, most significant bit first.
    pub fn from_value(value: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        Self { bits }
    }

    /// The string at position `index` of the shortlex enumeration
    /// (`0 -> ε, 1 -> "0", 2 -> "1", 3 -> "00", ...`).
    pub fn from_shortlex_index(index: u64) -> Self {
        let len = 63 - (index + 1).leading_zeros() as usize;
        let value = index + 1 - (1u64 << len);
        Self::from_value(value, len)
    }

    /// Inverse of [`BitString::from_shortlex_index`]. Only defined for strings shorter than 64 bits.
    pub fn shortlex_index(&self) -> u64 {
        assert!(self.len() < 64, "shortlex index overflows u64");
        (1u64 << self.len()) - 1 + self.value()
    }

    /// Binary value of the string, most significant bit first.
    pub fn value(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn extend_bits(&mut self, bits: &[bool]) {
        self.bits.extend_from_slice(bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self::from_bits(self.bits[start..end].to_vec())
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    /// All strings of length `len`, in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64);
        (0..1u64 << len).map(move |v| BitString::from_value(v, len))
    }

    /// ASCII rendering using `_` for ε.
    pub fn to_token(&self) -> String {
        if self.is_empty() {
            "_".to_string()
        } else {
            self.to_string()
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = LabError;

    /// Accepts `0`/`1` characters; the lone token `_` denotes ε.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "_" {
            return Ok(BitString::new());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(LabError::Parse(format!(
                    "invalid bit {other:?} in {s:?} (expected 0, 1, or _ for the empty string)"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        Self::from_bits(bits.to_vec())
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s.is_empty() {
            return Ok(BitString::new());
        }
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for tests and examples: `bits("0101")`. Panics on bad input.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shortlex_order_basics() {
        let mut v = [
            bits("1"),
            bits("00"),
            bits("_"),
            bits("0"),
            bits("11"),
            bits("01"),
        ];
        v.sort();
        let shown: Vec<_> = v.iter().map(|b| b.to_token()).collect();
        assert_eq!(shown, ["_", "0", "1", "00", "01", "11"]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("012".parse::<BitString>().is_err());
        assert!("".parse::<BitString>().unwrap().is_empty());
        assert!("_".parse::<BitString>().unwrap().is_empty());
    }

    #[test]
    fn shortlex_index_first_entries() {
        let first: Vec<_> = (0..7)
            .map(|i| BitString::from_shortlex_index(i).to_token())
            .collect();
        assert_eq!(first, ["_", "0", "1", "00", "01", "10", "11"]);
    }

    proptest! {
        #[test]
        fn shortlex_index_roundtrip(i in 0u64..(1 << 40)) {
            let s = BitString::from_shortlex_index(i);
            prop_assert_eq!(s.shortlex_index(), i);
        }

        #[test]
        fn index_order_matches_shortlex(a in 0u64..100_000, b in 0u64..100_000) {
            let (sa, sb) = (BitString::from_shortlex_index(a), BitString::from_shortlex_index(b));
            prop_assert_eq!(a.cmp(&b), sa.cmp(&sb));
        }
    }
}
