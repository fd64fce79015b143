//! Elias gamma code: `n >= 1` is written as `b - 1` zeros followed by the
//! `b`-bit binary form of `n` (which starts with its leading 1).

use crate::bits::BitString;

/// Why a gamma code could not be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaError {
    /// The code runs past the end of the readable region.
    Truncated,
    /// More than 63 leading zeros: the value does not fit in a `u64`.
    Overflow,
}

/// Appends the gamma code of `n` to `out`.
pub fn gamma_encode_into(n: u64, out: &mut BitString) {
    assert!(n >= 1, "gamma code is defined for n >= 1");
    let width = 64 - n.leading_zeros() as usize;
    for _ in 1..width {
        out.push(false);
    }
    for i in (0..width).rev() {
        out.push((n >> i) & 1 == 1);
    }
}

pub fn gamma_code(n: u64) -> BitString {
    let mut out = BitString::new();
    gamma_encode_into(n, &mut out);
    out
}

/// Bit length of `gamma_code(n)`.
pub fn gamma_len(n: u64) -> usize {
    assert!(n >= 1);
    2 * (64 - n.leading_zeros() as usize) - 1
}

/// Decodes a gamma code starting at `pos`; returns the value and the position after it.
pub fn gamma_decode(s: &BitString, pos: usize) -> Result<(u64, usize), GammaError> {
    gamma_decode_in(s.bits(), pos, s.len())
}

/// Like [`gamma_decode`] but never reads at or beyond `end`.
pub(crate) fn gamma_decode_in(
    bits: &[bool],
    pos: usize,
    end: usize,
) -> Result<(u64, usize), GammaError> {
    let mut zeros = 0usize;
    let mut p = pos;
    loop {
        if p >= end {
            return Err(GammaError::Truncated);
        }
        if bits[p] {
            break;
        }
        zeros += 1;
        p += 1;
    }
    if zeros > 63 {
        return Err(GammaError::Overflow);
    }
    if p + zeros + 1 > end {
        return Err(GammaError::Truncated);
    }
    let value = bits[p..=p + zeros]
        .iter()
        .fold(0u64, |acc, &b| (acc << 1) | b as u64);
    Ok((value, p + zeros + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    #[test]
    fn small_codes() {
        assert_eq!(gamma_code(1), bits("1"));
        assert_eq!(gamma_code(2), bits("010"));
        assert_eq!(gamma_code(50), bits("00000110010"));
        assert_eq!(gamma_code(50).len(), 11);
        assert_eq!(gamma_len(62), 11);
    }

    #[test]
    fn truncation_is_reported() {
        assert_eq!(gamma_decode(&bits("00"), 0), Err(GammaError::Truncated));
        assert_eq!(gamma_decode(&bits("0011"), 0), Err(GammaError::Truncated));
        assert_eq!(gamma_decode(&bits("_"), 0), Err(GammaError::Truncated));
        assert_eq!(gamma_decode(&bits("00110"), 0), Ok((6, 5)));
    }

    #[test]
    fn overflow_is_reported() {
        let mut s = BitString::repeat_bit(false, 64);
        s.extend_from(&BitString::repeat_bit(true, 65));
        assert_eq!(gamma_decode(&s, 0), Err(GammaError::Overflow));
        let big = gamma_code(u64::MAX);
        assert_eq!(gamma_decode(&big, 0), Ok((u64::MAX, 127)));
    }

    proptest! {
        #[test]
        fn roundtrip(n in 1u64.., pad in proptest::collection::vec(any::<bool>(), 0..8)) {
            let mut s = gamma_code(n);
            let len = s.len();
            prop_assert_eq!(len, gamma_len(n));
            s.extend_bits(&pad);
            prop_assert_eq!(gamma_decode(&s, 0), Ok((n, len)));
        }
    }
}
