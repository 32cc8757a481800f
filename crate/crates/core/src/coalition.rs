//! Finite 0/1 strings and coalitions over a bounded universe.
//!
//! A [`BitString`] is an initial segment `S[k]` of a coalition's
//! characteristic function: position `i` holds 1 iff player `i` is a member.
//! A [`Coalition`] is a set of players `0..n` stored as a bitmask, with bit
//! `i` standing for player `i`. The two are kept apart on purpose; use
//! [`ones_coalition`] to convert.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported universe: a coalition must fit in one machine word.
pub const MAX_UNIVERSE: usize = 63;

/// Largest supported string length.
pub const MAX_BITSTRING_LEN: usize = 64;

/// A finite string over `{0,1}` of length at most [`MAX_BITSTRING_LEN`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: u64,
    len: u8,
}

impl BitString {
    pub const fn empty() -> Self {
        BitString { bits: 0, len: 0 }
    }

    /// Builds a string from packed bits; bits at positions `>= len` are cleared.
    pub fn from_bits(bits: u64, len: usize) -> Result<Self> {
        if len > MAX_BITSTRING_LEN {
            return Err(Error::StringTooLong(len));
        }
        Ok(BitString {
            bits: bits & low_mask(len),
            len: len as u8,
        })
    }

    pub fn from_slice(bits: &[bool]) -> Result<Self> {
        if bits.len() > MAX_BITSTRING_LEN {
            return Err(Error::StringTooLong(bits.len()));
        }
        let mut packed = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                packed |= 1 << i;
            }
        }
        Ok(BitString {
            bits: packed,
            len: bits.len() as u8,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed representation; bit `i` is position `i`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len(), "index {i} out of range for string of length {}", self.len);
        self.bits >> i & 1 == 1
    }

    /// Appends one bit. Panics when the string is already at maximum length.
    pub fn push(&mut self, bit: bool) {
        assert!(self.len() < MAX_BITSTRING_LEN, "bit string overflow");
        if bit {
            self.bits |= 1 << self.len;
        }
        self.len += 1;
    }

    pub fn with(mut self, bit: bool) -> Self {
        self.push(bit);
        self
    }

    /// The initial segment of length `k` (or the whole string if shorter).
    pub fn prefix(&self, k: usize) -> Self {
        let k = k.min(self.len());
        BitString {
            bits: self.bits & low_mask(k),
            len: k as u8,
        }
    }

    /// Concatenation `self * other`.
    pub fn concat(&self, other: &BitString) -> Result<Self> {
        let len = self.len() + other.len();
        if len > MAX_BITSTRING_LEN {
            return Err(Error::StringTooLong(len));
        }
        Ok(BitString {
            bits: self.bits | other.bits.checked_shl(self.len as u32).unwrap_or(0),
            len: len as u8,
        })
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Every string of length exactly `len`, in increasing packed order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "refusing to enumerate 2^{len} strings");
        (0..1u64 << len).map(move |bits| BitString { bits, len: len as u8 })
    }

    /// Every string of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_len)
    }
}

fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Bitwise complement of a string, keeping its length.
pub fn string_complement(s: &BitString) -> BitString {
    BitString {
        bits: !s.bits & low_mask(s.len()),
        len: s.len,
    }
}

/// `a ⊆ b` in the initial-segment order: `b` extends `a`.
pub fn is_initial_segment(a: &BitString, b: &BitString) -> bool {
    a.len <= b.len && b.bits & low_mask(a.len()) == a.bits
}

/// Neither string is an initial segment of the other.
pub fn incompatible(a: &BitString, b: &BitString) -> bool {
    !is_initial_segment(a, b) && !is_initial_segment(b, a)
}

/// The coalition `{i < |s| : s(i) = 1}` inside a universe of `universe` players.
pub fn ones_coalition(s: &BitString, universe: usize) -> Result<Coalition> {
    if universe < s.len() {
        return Err(Error::StringExceedsUniverse {
            len: s.len(),
            universe,
        });
    }
    Coalition::from_mask(s.bits, universe)
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = BitString::empty();
        for c in s.chars() {
            let bit = match c {
                '0' => false,
                '1' => true,
                _ => return Err(Error::InvalidBitString(s.to_string())),
            };
            if out.len() == MAX_BITSTRING_LEN {
                return Err(Error::StringTooLong(s.chars().count()));
            }
            out.push(bit);
        }
        Ok(out)
    }
}

/// Shorter strings first, then lexicographic in reading order.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.bits.reverse_bits().cmp(&other.bits.reverse_bits()))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of players drawn from `0..universe`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coalition {
    mask: u64,
    universe: u8,
}

impl Coalition {
    pub fn empty(universe: usize) -> Result<Self> {
        Self::from_mask(0, universe)
    }

    pub fn grand(universe: usize) -> Result<Self> {
        Self::from_mask(universe_mask(universe), universe)
    }

    pub fn from_mask(mask: u64, universe: usize) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        if mask & !universe_mask(universe) != 0 {
            return Err(Error::PlayerOutOfRange {
                player: 63 - mask.leading_zeros() as usize,
                universe,
            });
        }
        Ok(Coalition {
            mask,
            universe: universe as u8,
        })
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I, universe: usize) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        let mut mask = 0u64;
        for p in members {
            if p >= universe {
                return Err(Error::PlayerOutOfRange {
                    player: p,
                    universe,
                });
            }
            mask |= 1 << p;
        }
        Ok(Coalition {
            mask,
            universe: universe as u8,
        })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    pub fn contains(&self, player: usize) -> bool {
        player < 64 && self.mask >> player & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        mask_members(self.mask).collect()
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Coalition {
        Coalition {
            mask: !self.mask & universe_mask(self.universe()),
            universe: self.universe,
        }
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersection(&self, other: &Coalition) -> Coalition {
        Coalition {
            mask: self.mask & other.mask,
            universe: self.universe.max(other.universe),
        }
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition {
            mask: self.mask | other.mask,
            universe: self.universe.max(other.universe),
        }
    }

    /// The initial segment `S[len]` as a string.
    pub fn to_bitstring(&self, len: usize) -> Result<BitString> {
        BitString::from_bits(self.mask, len)
    }
}

/// Bitmask with the low `universe` bits set.
pub fn universe_mask(universe: usize) -> u64 {
    low_mask(universe)
}

/// Iterates the set bits of a mask in increasing order.
pub fn mask_members(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(mask_members(self.mask)).finish()
    }
}

/// Binary literal, bit `i` = player `i` (so `{0,2,3}` prints as `0b1101`).
impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.mask)
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mask
            .cmp(&other.mask)
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized as the sorted list of member ids.
impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(mask_members(self.mask))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(string_complement(&bs("0110100100")), bs("1001011011"));
        assert_eq!(string_complement(&bs("")), bs(""));
        assert_eq!(string_complement(&bs("11")), bs("00"));
    }

    #[test]
    fn initial_segment_examples() {
        assert!(is_initial_segment(&bs("10"), &bs("100")));
        assert!(!is_initial_segment(&bs("10"), &bs("11")));
        assert!(is_initial_segment(&bs(""), &bs("0101")));
        assert!(is_initial_segment(&bs(""), &bs("")));
        assert!(!is_initial_segment(&bs("100"), &bs("10")));
    }

    #[test]
    fn incompatible_examples() {
        assert!(incompatible(&bs("10"), &bs("11")));
        assert!(!incompatible(&bs("10"), &bs("100")));
        assert!(!incompatible(&bs("100"), &bs("10")));
    }

    #[test]
    fn ones_coalition_examples() {
        assert_eq!(ones_coalition(&bs("0110"), 6).unwrap().members(), vec![1, 2]);
        assert!(ones_coalition(&bs("0000"), 4).unwrap().is_empty());
        assert_eq!(ones_coalition(&bs("11"), 3).unwrap().members(), vec![0, 1]);
        assert_eq!(
            ones_coalition(&bs("0110"), 3),
            Err(Error::StringExceedsUniverse { len: 4, universe: 3 })
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("0110").to_string(), "0110");
        assert!("012".parse::<BitString>().is_err());
        let long = "1".repeat(65);
        assert_eq!(long.parse::<BitString>(), Err(Error::StringTooLong(65)));
        assert_eq!(BitString::from_bits(u64::MAX, 64).unwrap().count_ones(), 64);
    }

    #[test]
    fn coalition_formatting() {
        let c = Coalition::from_members([0, 2, 3], 5).unwrap();
        assert_eq!(c.to_string(), "0b1101");
        assert_eq!(serde_json::to_string(&c).unwrap(), "[0,2,3]");
        assert_eq!(Coalition::empty(3).unwrap().to_string(), "0b0");
    }

    #[test]
    fn coalition_bounds() {
        assert_eq!(Coalition::empty(64), Err(Error::UniverseTooLarge(64)));
        assert!(Coalition::grand(63).is_ok());
        assert_eq!(
            Coalition::from_members([4], 4),
            Err(Error::PlayerOutOfRange { player: 4, universe: 4 })
        );
        assert_eq!(Coalition::grand(3).unwrap().complement(), Coalition::empty(3).unwrap());
    }

    #[test]
    fn string_order_is_by_length_then_reading_order() {
        let mut v = vec![bs("1"), bs("01"), bs("0"), bs("10"), bs("")];
        v.sort();
        assert_eq!(v, vec![bs(""), bs("0"), bs("1"), bs("01"), bs("10")]);
    }

    #[test]
    fn concat_and_prefix() {
        let s = bs("10").concat(&bs("011")).unwrap();
        assert_eq!(s, bs("10011"));
        assert_eq!(s.prefix(3), bs("100"));
        assert_eq!(s.prefix(9), s);
    }
}
