//! Truth valuations and the modal operators on them.
//!
//! A valuation assigns 0 or 1 to every world. The necessity operator sends a
//! valuation `a` to the valuation that is true at `w` exactly when `a` is true
//! on the whole neighborhood `N(w)`; on empty neighborhoods the empty product
//! makes it true. Possibility is its De Morgan dual. Both are evaluated with
//! bit arithmetic, and the range of necessity is enumerated by brute force
//! over all `2^K` inputs, which keeps it usable as an oracle for the
//! ideal-theoretic route in [`crate::ideal`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::KripkeFrame;
use crate::Caps;

/// An element of `{0,1}^K`: the indicator of the set of worlds where a
/// proposition holds. World 1 is the leftmost position in the string form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Valuation {
    bits: u64,
    len: usize,
}

impl Valuation {
    pub fn all_false(len: usize) -> Self {
        assert!((1..=64).contains(&len), "valuation length out of range");
        Valuation { bits: 0, len }
    }

    pub fn all_true(len: usize) -> Self {
        assert!((1..=64).contains(&len), "valuation length out of range");
        let full = if len == 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        };
        Valuation { bits: full, len }
    }

    /// Builds a valuation from the worlds where it is true.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Valuation::all_false(len);
        for &w in support {
            if w == 0 || w > len {
                return Err(Error::WorldOutOfRange {
                    world: w,
                    world_count: len,
                });
            }
            v.bits |= 1 << (w - 1);
        }
        Ok(v)
    }

    pub(crate) fn from_mask(bits: u64, len: usize) -> Self {
        debug_assert!((1..=64).contains(&len));
        debug_assert!(len == 64 || bits < (1u64 << len));
        Valuation { bits, len }
    }

    pub(crate) fn mask(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: a valuation covers at least one world.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Truth value at world `w` (1-based).
    pub fn get(&self, w: usize) -> Result<bool> {
        if w == 0 || w > self.len {
            return Err(Error::WorldOutOfRange {
                world: w,
                world_count: self.len,
            });
        }
        Ok(self.bits & (1 << (w - 1)) != 0)
    }

    /// Worlds where the valuation is true, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut mask = self.bits;
        while mask != 0 {
            out.push(mask.trailing_zeros() as usize + 1);
            mask &= mask - 1;
        }
        out
    }

    pub fn count_true(&self) -> usize {
        self.bits.count_ones() as usize
    }

    fn full(&self) -> u64 {
        if self.len == 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        }
    }

    fn check(&self, other: &Valuation) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        Ok(())
    }

    /// Pointwise `1 - a`.
    pub fn complement(&self) -> Valuation {
        Valuation {
            bits: !self.bits & self.full(),
            len: self.len,
        }
    }

    /// Pointwise product `a * b`.
    pub fn and(&self, other: &Valuation) -> Result<Valuation> {
        self.check(other)?;
        Ok(Valuation {
            bits: self.bits & other.bits,
            len: self.len,
        })
    }

    /// Pointwise `a + b - a*b`.
    pub fn or(&self, other: &Valuation) -> Result<Valuation> {
        self.check(other)?;
        Ok(Valuation {
            bits: self.bits | other.bits,
            len: self.len,
        })
    }

    /// Pointwise `1 - a + a*b`.
    pub fn implies(&self, other: &Valuation) -> Result<Valuation> {
        self.check(other)?;
        Ok(Valuation {
            bits: (!self.bits | other.bits) & self.full(),
            len: self.len,
        })
    }

    /// Pointwise `1 - a - b + 2*a*b`.
    pub fn iff(&self, other: &Valuation) -> Result<Valuation> {
        self.check(other)?;
        Ok(Valuation {
            bits: !(self.bits ^ other.bits) & self.full(),
            len: self.len,
        })
    }

    /// Pointwise order: true iff `a(w) <= b(w)` everywhere.
    pub fn leq(&self, other: &Valuation) -> Result<bool> {
        self.check(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// Key whose numeric order is the lexicographic order on bit strings.
    fn lex_key(&self) -> u64 {
        self.bits.reverse_bits() >> (64 - self.len)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in 1..=self.len {
            let bit = u8::from(self.bits & (1 << (w - 1)) != 0);
            write!(f, "{bit}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Valuation({self})")
    }
}

impl FromStr for Valuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: s.len(),
            });
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => {
                    return Err(Error::Parse(crate::error::ParseError::other(format!(
                        "expected a 0/1 string, found {c:?}"
                    ))))
                }
            }
        }
        Ok(Valuation { bits, len: s.len() })
    }
}

// Machine form: a JSON array of 0/1 numbers, world 1 first.
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for w in 1..=self.len {
            seq.serialize_element(&u8::from(self.bits & (1 << (w - 1)) != 0))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct BitsVisitor;

        impl<'de> Visitor<'de> for BitsVisitor {
            type Value = Valuation;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of 0/1 values")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Valuation, A::Error> {
                let mut bits = 0u64;
                let mut len = 0usize;
                while let Some(value) = seq.next_element::<u8>()? {
                    if len == 64 {
                        return Err(de::Error::custom("valuation longer than 64 worlds"));
                    }
                    match value {
                        1 => bits |= 1 << len,
                        0 => {}
                        other => {
                            return Err(de::Error::custom(format!(
                                "expected 0 or 1, found {other}"
                            )))
                        }
                    }
                    len += 1;
                }
                if len == 0 {
                    return Err(de::Error::custom("empty valuation"));
                }
                Ok(Valuation { bits, len })
            }
        }

        deserializer.deserialize_seq(BitsVisitor)
    }
}

/// The propositional connectives, evaluated pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
    Iff,
}

/// Applies a connective; `Not` is unary, the rest take two operands.
pub fn connective(op: Connective, a: &Valuation, b: Option<&Valuation>) -> Result<Valuation> {
    let arity = |expected: usize, name: &'static str| -> Result<()> {
        let got = 1 + usize::from(b.is_some());
        if got != expected {
            return Err(Error::ArityMismatch {
                operation: name,
                expected,
                got,
            });
        }
        Ok(())
    };
    match op {
        Connective::Not => {
            arity(1, "not")?;
            Ok(a.complement())
        }
        Connective::And => {
            arity(2, "and")?;
            a.and(b.unwrap())
        }
        Connective::Or => {
            arity(2, "or")?;
            a.or(b.unwrap())
        }
        Connective::Implies => {
            arity(2, "implies")?;
            a.implies(b.unwrap())
        }
        Connective::Iff => {
            arity(2, "iff")?;
            a.iff(b.unwrap())
        }
    }
}

/// Pointwise minimum of a non-empty family of equal-length valuations.
pub fn meet<'a>(valuations: impl IntoIterator<Item = &'a Valuation>) -> Result<Valuation> {
    let mut iter = valuations.into_iter();
    let first = iter.next().ok_or(Error::EmptyMeet)?;
    let mut acc = *first;
    for v in iter {
        acc = acc.and(v)?;
    }
    Ok(acc)
}

/// A deduplicated, lexicographically ordered set of valuations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RangeSet {
    points: BTreeSet<Valuation>,
}

impl FromIterator<Valuation> for RangeSet {
    fn from_iter<I: IntoIterator<Item = Valuation>>(points: I) -> Self {
        RangeSet {
            points: points.into_iter().collect(),
        }
    }
}

impl RangeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, v: &Valuation) -> bool {
        self.points.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Valuation> {
        self.points.iter()
    }

    /// The image of the set under pointwise complement.
    pub fn complemented(&self) -> RangeSet {
        RangeSet::from_iter(self.points.iter().map(Valuation::complement))
    }

    pub fn is_subset(&self, other: &RangeSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn bit_strings(&self) -> Vec<String> {
        self.points.iter().map(|v| v.to_string()).collect()
    }
}

impl Serialize for RangeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.points.len()))?;
        for v in &self.points {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl KripkeFrame {
    fn check_valuation(&self, a: &Valuation) -> Result<()> {
        if a.len() != self.world_count() {
            return Err(Error::LengthMismatch {
                expected: self.world_count(),
                got: a.len(),
            });
        }
        Ok(())
    }

    /// The necessity operator: `(□a)(w) = 1` iff `a` holds on all of `N(w)`.
    pub fn necessity(&self, a: &Valuation) -> Result<Valuation> {
        self.check_valuation(a)?;
        let mut bits = 0u64;
        for w in self.worlds() {
            let n = self.successor_mask(w);
            if a.mask() & n == n {
                bits |= 1 << (w - 1);
            }
        }
        Ok(Valuation::from_mask(bits, self.world_count()))
    }

    /// The possibility operator: `(◇a)(w) = 1` iff `a` holds somewhere on
    /// `N(w)`. Equals `1 - □(1 - a)` pointwise.
    pub fn possibility(&self, a: &Valuation) -> Result<Valuation> {
        self.check_valuation(a)?;
        let mut bits = 0u64;
        for w in self.worlds() {
            if a.mask() & self.successor_mask(w) != 0 {
                bits |= 1 << (w - 1);
            }
        }
        Ok(Valuation::from_mask(bits, self.world_count()))
    }

    /// Enumerates `{ □a : a ∈ {0,1}^K }` by brute force, with the default
    /// point cap.
    pub fn necessity_range(&self) -> Result<RangeSet> {
        self.necessity_range_with(&Caps::default())
    }

    /// Brute-force range enumeration with an explicit cap.
    pub fn necessity_range_with(&self, caps: &Caps) -> Result<RangeSet> {
        let k = self.world_count();
        caps.check_points("necessity range", k)?;
        let mut points = BTreeSet::new();
        for a in 0..(1u64 << k) {
            let val = Valuation::from_mask(a, k);
            points.insert(self.necessity(&val).expect("length matches"));
        }
        Ok(RangeSet { points })
    }

    /// The range of possibility: the pointwise complement of the necessity
    /// range.
    pub fn possibility_range(&self) -> Result<RangeSet> {
        self.possibility_range_with(&Caps::default())
    }

    pub fn possibility_range_with(&self, caps: &Caps) -> Result<RangeSet> {
        Ok(self.necessity_range_with(caps)?.complemented())
    }

    /// The least preimage of `b` under necessity, if `b` is in the range.
    ///
    /// Necessity preserves meets, so when any preimage exists the meet of all
    /// preimages is one; it equals the union of the neighborhoods of the
    /// worlds where `b` is true. That candidate is computed directly and
    /// checked, no enumeration involved.
    pub fn minimal_preimage(&self, b: &Valuation) -> Result<Option<Valuation>> {
        self.check_valuation(b)?;
        let mut candidate = 0u64;
        for w in self.worlds() {
            if b.mask() & (1 << (w - 1)) != 0 {
                candidate |= self.successor_mask(w);
            }
        }
        let a = Valuation::from_mask(candidate, self.world_count());
        Ok((self.necessity(&a)? == *b).then_some(a))
    }

    /// Injectivity of necessity, decided by the single-flip test: the
    /// operator is injective iff it separates every pair of valuations that
    /// differ in exactly one world. Runs in `O(K · 2^K)` pair checks, capped.
    pub fn necessity_injective(&self) -> Result<bool> {
        self.necessity_injective_with(&Caps::default())
    }

    pub fn necessity_injective_with(&self, caps: &Caps) -> Result<bool> {
        caps.check_points("injectivity test", self.world_count())?;
        Ok(self.injective_by_single_flips())
    }

    fn injective_by_single_flips(&self) -> bool {
        let k = self.world_count();
        for a in 0..(1u64 << k) {
            let val = Valuation::from_mask(a, k);
            let image = self.necessity(&val).expect("length matches");
            for w in 0..k {
                if a & (1 << w) != 0 {
                    continue;
                }
                let flipped = Valuation::from_mask(a | (1 << w), k);
                if self.necessity(&flipped).expect("length matches") == image {
                    return false;
                }
            }
        }
        true
    }

    /// Surjectivity of necessity, decided on the co-atoms: the operator is
    /// surjective iff every valuation that is false at exactly one world has
    /// a preimage. Each membership check goes through
    /// [`KripkeFrame::minimal_preimage`], so no cap is needed.
    pub fn necessity_surjective(&self) -> Result<bool> {
        let k = self.world_count();
        for w in 1..=k {
            let coatom =
                Valuation::all_true(k).and(&Valuation::from_support(k, &[w])?.complement())?;
            if self.minimal_preimage(&coatom)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether necessity is an isomorphism of `{0,1}^K`.
    ///
    /// Uses the structural criterion: necessity is an isomorphism exactly when
    /// the adjacency matrix is a permutation matrix. Debug builds re-check the
    /// answer semantically on small frames.
    pub fn necessity_isomorphism(&self) -> bool {
        let structural = self.is_disjoint_union_of_cycles();
        #[cfg(debug_assertions)]
        if self.world_count() <= 10 {
            debug_assert_eq!(
                structural,
                self.injective_by_single_flips(),
                "structural and semantic isomorphism tests disagree"
            );
        }
        structural
    }
}
