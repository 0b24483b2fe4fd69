//! Binomial descriptions of the necessity range.
//!
//! The range of necessity, viewed inside `{0,1}^K`, is cut out by binomial
//! equations in the output coordinates `z_w`. Two families matter here:
//!
//! * lattice-basis binomials `z^{α⁺} − z^{α⁻}` for `α` in the integer kernel
//!   of the transposed adjacency matrix (the toric part), and
//! * square-free binomials `z^u − z^v` for exponent vectors `u, v ∈ {0,1}^K`
//!   whose supports pull back to the same neighborhood union (the support
//!   classes).
//!
//! The second family, together with the 0/1 relations `z_w² − z_w`, describes
//! the range exactly; the toric part alone describes the generally larger
//! point set `V(J)`, and the frame is *tame* when the two coincide. All point
//! sets are compared against the brute-force range from [`crate::semantics`],
//! which serves as the independent oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::KripkeFrame;
use crate::lattice::{kernel_basis, nonpositive_nonzero_on, IntegerMatrix, LatticeBasis};
use crate::semantics::{RangeSet, Valuation};
use crate::Caps;

/// The polynomial `z^u − z^v` with natural-number exponent vectors.
///
/// `z^0` renders as `1`, so binomials like `z3 − 1` are first-class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binomial {
    u: Vec<u64>,
    v: Vec<u64>,
}

impl Binomial {
    pub fn new(u: Vec<u64>, v: Vec<u64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch {
                expected: u.len(),
                got: v.len(),
            });
        }
        if u == v {
            return Err(Error::ZeroBinomial);
        }
        Ok(Binomial { u, v })
    }

    /// Splits a kernel vector into its positive and negative parts.
    pub fn from_kernel_vector(alpha: &[BigInt]) -> Result<Self> {
        let mut u = Vec::with_capacity(alpha.len());
        let mut v = Vec::with_capacity(alpha.len());
        for entry in alpha {
            let magnitude = u64::try_from(entry.abs()).map_err(|_| Error::Overflow {
                what: "binomial exponent",
            })?;
            if entry.is_negative() {
                u.push(0);
                v.push(magnitude);
            } else {
                u.push(magnitude);
                v.push(0);
            }
        }
        Binomial::new(u, v)
    }

    fn from_masks(len: usize, u_mask: u64, v_mask: u64) -> Self {
        let bit = |mask: u64, w: usize| u64::from(mask & (1 << w) != 0);
        Binomial {
            u: (0..len).map(|w| bit(u_mask, w)).collect(),
            v: (0..len).map(|w| bit(v_mask, w)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn exponents(&self) -> (&[u64], &[u64]) {
        (&self.u, &self.v)
    }

    pub fn is_square_free(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&e| e <= 1)
    }

    fn support_mask(exps: &[u64]) -> u64 {
        exps.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (w, _)| m | (1 << w))
    }

    pub(crate) fn u_support(&self) -> u64 {
        Self::support_mask(&self.u)
    }

    pub(crate) fn v_support(&self) -> u64 {
        Self::support_mask(&self.v)
    }

    /// Evaluates the binomial at a 0/1 point: a monomial is 1 exactly when
    /// the point is true on its whole support.
    pub fn vanishes_at(&self, point: &Valuation) -> Result<bool> {
        if point.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: point.len(),
            });
        }
        let p = point.mask();
        let u_one = self.u_support() & !p == 0;
        let v_one = self.v_support() & !p == 0;
        Ok(u_one == v_one)
    }

    fn total_degree(&self) -> u64 {
        self.u.iter().chain(&self.v).sum()
    }

    /// True if `other` equals `self` multiplied by a monomial (up to sign).
    fn shifts_to(&self, other: &Binomial) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let shift = |a: &[u64], b: &[u64], c: &[u64], d: &[u64]| {
            // other = z^m * self with m = a - c = b - d, entrywise >= 0.
            let mut m = Vec::with_capacity(a.len());
            for (x, y) in a.iter().zip(c) {
                if x < y {
                    return false;
                }
                m.push(x - y);
            }
            b.iter()
                .zip(d)
                .zip(&m)
                .all(|((x, y), mi)| x >= y && x - y == *mi)
        };
        shift(&other.u, &other.v, &self.u, &self.v) || shift(&other.u, &other.v, &self.v, &self.u)
    }

    fn monomial(exps: &[u64]) -> String {
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(w, &e)| {
                if e == 1 {
                    format!("z{}", w + 1)
                } else {
                    format!("z{}^{}", w + 1, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} - {}",
            Self::monomial(&self.u),
            Self::monomial(&self.v)
        )
    }
}

/// All square-free exponent vectors sharing one neighborhood union.
///
/// The key is `⋃_{u(w)=1} N(w)`, which is exactly the support of `Eᵗu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportClass {
    pub key: Vec<usize>,
    pub members: Vec<Valuation>,
}

/// The generating data reported for a frame's range ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    /// Number of implicit 0/1 relations `z_w² − z_w` (one per world).
    pub boolean_count: usize,
    /// Binomials from the canonical kernel basis.
    pub toric_basis: Vec<Binomial>,
    /// Square-free binomials tying each support class to its representative,
    /// reduced by dropping monomial multiples of smaller kept binomials.
    pub class_part: Vec<Binomial>,
}

/// Outcome of the tameness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamenessVerdict {
    pub is_tame: bool,
    pub range_points: RangeSet,
    pub j_points: RangeSet,
    /// A point satisfying the toric constraints but outside the range, when
    /// the frame is not tame.
    pub witness: Option<Valuation>,
}

/// The canonical kernel lattice of the transposed adjacency matrix.
pub fn frame_kernel(frame: &KripkeFrame) -> LatticeBasis {
    kernel_basis(&IntegerMatrix::transposed_adjacency_of(frame))
}

/// One binomial `z^{α⁺} − z^{α⁻}` per canonical kernel-basis vector.
///
/// These generate the toric part; they are in general not enough to cut out
/// the range, see [`ideal_generators`].
pub fn toric_basis_binomials(frame: &KripkeFrame) -> Vec<Binomial> {
    frame_kernel(frame)
        .vectors()
        .iter()
        .map(|alpha| Binomial::from_kernel_vector(alpha).expect("kernel basis rows are non-zero"))
        .collect()
}

fn support_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// Groups all `u ∈ {0,1}^K` by the union of the neighborhoods of their
/// support. Classes come out sorted by (key size, key, member), the zero
/// vector included with key `∅`.
pub fn support_classes(frame: &KripkeFrame) -> Result<Vec<SupportClass>> {
    support_classes_with(frame, &Caps::default())
}

pub fn support_classes_with(frame: &KripkeFrame, caps: &Caps) -> Result<Vec<SupportClass>> {
    let k = frame.world_count();
    caps.check_squarefree("support classes", k)?;
    let mut groups: BTreeMap<(usize, Vec<usize>), Vec<u64>> = BTreeMap::new();
    for u in 0..(1u64 << k) {
        let mut key_mask = 0u64;
        let mut m = u;
        while m != 0 {
            let w = m.trailing_zeros() as usize + 1;
            m &= m - 1;
            key_mask |= frame.successor_mask(w);
        }
        let key = support_indices(key_mask);
        groups.entry((key.len(), key)).or_default().push(u);
    }
    Ok(groups
        .into_iter()
        .map(|((_, key), mut members)| {
            members.sort_by_key(|&m| support_indices(m));
            SupportClass {
                key,
                members: members
                    .into_iter()
                    .map(|m| Valuation::from_mask(m, k))
                    .collect(),
            }
        })
        .collect())
}

/// Keeps only binomials that are not monomial multiples of a kept binomial of
/// smaller degree; the dropped ones vanish wherever the kept factor does, so
/// the cut-out point set is unchanged.
fn prune_monomial_multiples(binomials: Vec<Binomial>) -> Vec<Binomial> {
    let mut order: Vec<usize> = (0..binomials.len()).collect();
    order.sort_by_key(|&i| (binomials[i].total_degree(), i));
    let mut keep = vec![false; binomials.len()];
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&j| binomials[j].shifts_to(&binomials[i])) {
            keep[i] = true;
            kept.push(i);
        }
    }
    binomials
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect()
}

/// The reported generating data: implicit 0/1 relations, the toric basis, and
/// one square-free binomial per non-representative support-class member.
pub fn ideal_generators(frame: &KripkeFrame) -> Result<GeneratorSet> {
    ideal_generators_with(frame, &Caps::default())
}

pub fn ideal_generators_with(frame: &KripkeFrame, caps: &Caps) -> Result<GeneratorSet> {
    let k = frame.world_count();
    let classes = support_classes_with(frame, caps)?;
    let mut class_part = Vec::new();
    for class in &classes {
        if class.members.len() < 2 {
            continue;
        }
        // Members are sorted by support, so the representative comes first.
        let rep = class.members[0].mask();
        for member in &class.members[1..] {
            class_part.push(Binomial::from_masks(k, member.mask(), rep));
        }
    }
    Ok(GeneratorSet {
        boolean_count: k,
        toric_basis: toric_basis_binomials(frame),
        class_part: prune_monomial_multiples(class_part),
    })
}

/// The 0/1 points where every support-class binomial vanishes: those on which
/// the predicate `supp(u) ⊆ supp(b)` is constant within each class.
///
/// Must coincide with the brute-force necessity range; that equality is the
/// central cross-check of the whole construction.
pub fn points_of_ideal(frame: &KripkeFrame) -> Result<RangeSet> {
    points_of_ideal_with(frame, &Caps::default())
}

pub fn points_of_ideal_with(frame: &KripkeFrame, caps: &Caps) -> Result<RangeSet> {
    let k = frame.world_count();
    caps.check_squarefree("ideal point enumeration", k)?;
    let classes: Vec<Vec<u64>> = support_classes_with(frame, caps)?
        .into_iter()
        .filter(|c| c.members.len() >= 2)
        .map(|c| c.members.iter().map(Valuation::mask).collect())
        .collect();
    let mut points = Vec::new();
    'points: for b in 0..(1u64 << k) {
        for class in &classes {
            let first = class[0] & !b == 0;
            for &member in &class[1..] {
                if (member & !b == 0) != first {
                    continue 'points;
                }
            }
        }
        points.push(Valuation::from_mask(b, k));
    }
    Ok(RangeSet::from_iter(points))
}

/// The 0/1 points satisfying every toric binomial: those whose support no
/// kernel vector separates (no `α` in the kernel has exactly one of
/// `supp(α⁺)`, `supp(α⁻)` inside the support).
pub fn points_of_j(frame: &KripkeFrame) -> Result<RangeSet> {
    points_of_j_with(frame, &Caps::default())
}

pub fn points_of_j_with(frame: &KripkeFrame, caps: &Caps) -> Result<RangeSet> {
    let k = frame.world_count();
    caps.check_feasibility("toric point enumeration", k)?;
    let basis = frame_kernel(frame);
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    if basis.is_trivial() {
        return Ok(RangeSet::from_iter(
            (0..(1u64 << k)).map(|b| Valuation::from_mask(b, k)),
        ));
    }
    // Per-vector sign supports give a cheap violation test before the full
    // feasibility query runs.
    let vector_signs: Vec<(u64, u64)> = basis
        .vectors()
        .iter()
        .map(|v| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for (w, entry) in v.iter().enumerate() {
                if entry.is_positive() {
                    pos |= 1 << w;
                } else if entry.is_negative() {
                    neg |= 1 << w;
                }
            }
            (pos, neg)
        })
        .collect();
    let coverage = vector_signs.iter().fold(0u64, |m, (p, n)| m | p | n);

    let mut points = Vec::new();
    for b in 0..(1u64 << k) {
        let t = full & !b;
        let violated = if t & coverage == 0 {
            false
        } else if vector_signs
            .iter()
            .any(|&(pos, neg)| (pos & t == 0 && neg & t != 0) || (neg & t == 0 && pos & t != 0))
        {
            true
        } else {
            nonpositive_nonzero_on(&basis, t)
        };
        if !violated {
            points.push(Valuation::from_mask(b, k));
        }
    }
    Ok(RangeSet::from_iter(points))
}

/// Compares the toric description with the actual range.
pub fn is_tame(frame: &KripkeFrame) -> Result<TamenessVerdict> {
    is_tame_with(frame, &Caps::default())
}

pub fn is_tame_with(frame: &KripkeFrame, caps: &Caps) -> Result<TamenessVerdict> {
    let range_points = frame.necessity_range_with(caps)?;
    let j_points = points_of_j_with(frame, caps)?;
    debug_assert!(range_points.is_subset(&j_points));
    let witness = j_points.iter().find(|p| !range_points.contains(p)).copied();
    Ok(TamenessVerdict {
        is_tame: witness.is_none(),
        range_points,
        j_points,
        witness,
    })
}

/// True iff the binomial evaluates to zero at every point of the set.
pub fn binomial_vanishes_on(binomial: &Binomial, points: &RangeSet) -> Result<bool> {
    for p in points.iter() {
        if !binomial.vanishes_at(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
