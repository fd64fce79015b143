//! The pairing function `<x, y> = 1^|x| 0 x y`.

use crate::bits::BitString;

pub fn pair_encode(x: &BitString, y: &BitString) -> BitString {
    let mut out = BitString::with_capacity(2 * x.len() + 1 + y.len());
    for _ in 0..x.len() {
        out.push(true);
    }
    out.push(false);
    out.extend_from(x);
    out.extend_from(y);
    out
}

/// Splits `s` as `<p, x>`. Fails when `s` is empty, starts with 0, has no
/// separating 0, or is too short to hold `p`.
pub fn pair_parse(s: &BitString) -> Option<(BitString, BitString)> {
    let b = s.bits();
    let ones = b.iter().take_while(|&&bit| bit).count();
    if ones == 0 || ones == b.len() {
        return None;
    }
    let rest = ones + 1;
    if b.len() - rest < ones {
        return None;
    }
    Some((s.slice(rest, rest + ones), s.slice(rest + ones, s.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(pair_encode(&bits("01"), &bits("1")), bits("110011"));
        assert_eq!(pair_encode(&bits("_"), &bits("1")), bits("01"));
        // A pair needs at least one leading 1, so `<ε, y> = 0y` reads as a plain program.
        assert_eq!(pair_parse(&bits("01")), None);
        assert_eq!(pair_parse(&bits("0101")), None);
        assert_eq!(pair_parse(&bits("_")), None);
        assert_eq!(pair_parse(&bits("111")), None);
        assert_eq!(pair_parse(&bits("110")), None);
        assert_eq!(pair_parse(&bits("1100")), None);
        assert_eq!(pair_parse(&bits("11000")), Some((bits("00"), bits("_"))));
        assert_eq!(pair_parse(&bits("110011")), Some((bits("01"), bits("1"))));
    }

    fn bitstring() -> impl Strategy<Value = BitString> {
        proptest::collection::vec(any::<bool>(), 1..40).prop_map(BitString::from_bits)
    }

    proptest! {
        #[test]
        fn parse_inverts_encode_for_nonempty_program(x in bitstring(), y in proptest::collection::vec(any::<bool>(), 0..40)) {
            let y = BitString::from_bits(y);
            prop_assert_eq!(pair_parse(&pair_encode(&x, &y)), Some((x, y)));
        }
    }
}
