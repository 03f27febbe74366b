use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bits::Bits;
use crate::error::{domain, Error, Result};

/// Widest window we are willing to back with a dense bit-vector.
pub const MAX_WINDOW_BITS: i64 = 1 << 32;

/// A finite set of integers, stored both as a strictly increasing list and as
/// a bit-vector over an inclusive window `[lo, hi]` containing every element.
#[derive(Clone)]
pub struct IntegerSet {
    elements: Vec<i64>,
    lo: i64,
    hi: i64,
    bits: Bits,
}

impl IntegerSet {
    pub fn empty() -> Self {
        IntegerSet {
            elements: Vec::new(),
            lo: 0,
            hi: -1,
            bits: Bits::zeros(0),
        }
    }

    /// Builds the set from arbitrary integers (sorted and deduplicated); the
    /// window is the tight interval `[min, max]`.
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        match (elements.first(), elements.last()) {
            (Some(&lo), Some(&hi)) => Self::from_sorted(elements, lo, hi)
                .expect("tight window always fits its own elements"),
            _ => Self::empty(),
        }
    }

    /// Builds the set with an explicit window. Fails if an element falls
    /// outside `[lo, hi]`.
    pub fn with_window(elements: impl IntoIterator<Item = i64>, lo: i64, hi: i64) -> Result<Self> {
        let mut elements: Vec<i64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x < lo || x > hi) {
            return domain(format!("element {x} lies outside the window [{lo}, {hi}]"));
        }
        Self::from_sorted(elements, lo, hi)
    }

    /// Subset of `{lo, ..., lo+63}` encoded as a 64-bit mask.
    pub fn from_mask(mask: u64, lo: i64) -> Self {
        let elements: Vec<i64> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| lo + i).collect();
        Self::new(elements)
    }

    fn from_sorted(elements: Vec<i64>, lo: i64, hi: i64) -> Result<Self> {
        let width = hi
            .checked_sub(lo)
            .and_then(|w| w.checked_add(1))
            .ok_or_else(|| Error::Storage(format!("window [{lo}, {hi}] overflows")))?;
        if width < 0 {
            return Err(Error::Storage(format!("window [{lo}, {hi}] is reversed")));
        }
        if width > MAX_WINDOW_BITS {
            return Err(Error::Storage(format!(
                "window [{lo}, {hi}] is wider than {MAX_WINDOW_BITS} bits"
            )));
        }
        let mut bits = Bits::zeros(width as usize);
        for &x in &elements {
            bits.set((x - lo) as usize);
        }
        Ok(IntegerSet { elements, lo, hi, bits })
    }

    /// Rebuilds a set from a bit-vector whose bit `i` means `lo + i`.
    pub(crate) fn from_bits(bits: Bits, lo: i64) -> Self {
        let hi = lo + bits.len() as i64 - 1;
        let elements = bits.iter_ones().map(|i| lo + i as i64).collect();
        IntegerSet { elements, lo, hi, bits }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elements.iter().copied()
    }

    pub fn min(&self) -> Option<i64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elements.last().copied()
    }

    /// The inclusive storage window `(lo, hi)`.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.lo && x <= self.hi && self.bits.get((x - self.lo) as usize)
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &IntegerSet) -> bool {
        self.elements.iter().all(|&x| !other.contains(x))
    }

    pub fn union(&self, other: &IntegerSet) -> IntegerSet {
        IntegerSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &IntegerSet) -> IntegerSet {
        IntegerSet::new(self.iter().filter(|&x| other.contains(x)))
    }

    pub fn difference(&self, other: &IntegerSet) -> IntegerSet {
        IntegerSet::new(self.iter().filter(|&x| !other.contains(x)))
    }

    /// Elements satisfying `pred`, tight window.
    pub fn filter(&self, pred: impl Fn(i64) -> bool) -> IntegerSet {
        IntegerSet::new(self.iter().filter(|&x| pred(x)))
    }

    /// `{-x : x in self}`.
    pub fn negated(&self) -> IntegerSet {
        let elements = self.elements.iter().rev().map(|&x| -x).collect();
        IntegerSet::from_sorted(elements, -self.hi, -self.lo)
            .expect("negated window has the same width")
    }

    /// `{x + t : x in self}`.
    pub fn translated(&self, t: i64) -> IntegerSet {
        let elements = self.elements.iter().map(|&x| x + t).collect();
        IntegerSet {
            elements,
            lo: self.lo + t,
            hi: self.hi + t,
            bits: self.bits.clone(),
        }
    }
}

impl PartialEq for IntegerSet {
    /// Sets compare by their elements; the storage window is not part of identity.
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for IntegerSet {}

impl std::hash::Hash for IntegerSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements.iter()).finish()
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<i64> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        IntegerSet::new(iter)
    }
}

impl Serialize for IntegerSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<i64>::deserialize(d)?;
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom(
                "set must be a strictly increasing array of integers",
            ));
        }
        Ok(IntegerSet::new(elements))
    }
}

/// The progression `{start + j*step : 0 <= j < length}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub start: i64,
    pub step: i64,
    pub length: i64,
}

impl Progression {
    pub fn new(start: i64, step: i64, length: i64) -> Result<Self> {
        if step < 1 || length < 1 {
            return domain(format!(
                "progression needs step >= 1 and length >= 1 (got step {step}, length {length})"
            ));
        }
        Ok(Progression { start, step, length })
    }

    pub fn last(&self) -> i64 {
        self.start + (self.length - 1) * self.step
    }

    pub fn contains(&self, x: i64) -> bool {
        let off = x - self.start;
        off >= 0 && off % self.step == 0 && off / self.step < self.length
    }

    pub fn members(&self) -> IntegerSet {
        IntegerSet::new((0..self.length).map(|j| self.start + j * self.step))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_window() {
        let s = IntegerSet::new([5, -2, 5, 3]);
        assert_eq!(s.elements(), &[-2, 3, 5]);
        assert_eq!(s.window(), (-2, 5));
        assert!(s.contains(3) && !s.contains(4));
    }

    #[test]
    fn explicit_window_rejects_outsiders() {
        assert!(IntegerSet::with_window([1, 9], 0, 8).is_err());
        let s = IntegerSet::with_window([1, 8], -4, 8).unwrap();
        assert_eq!(s.window(), (-4, 8));
    }

    #[test]
    fn json_is_an_ascending_array() {
        let s = IntegerSet::new([3, 1, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,2,3]");
        assert!(serde_json::from_str::<IntegerSet>("[2,1]").is_err());
        let p = Progression::new(3, 4, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"start":3,"step":4,"length":3}"#
        );
    }

    #[test]
    fn progression_rejects_degenerate_steps() {
        assert!(Progression::new(0, 0, 3).is_err());
        assert!(Progression::new(0, 1, 0).is_err());
        assert!(Progression::new(3, 4, 3).unwrap().members() == IntegerSet::new([3, 7, 11]));
    }
}
