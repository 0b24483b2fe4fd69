//! Property suites for the algebraic invariants of every module.

mod common;

use std::collections::BTreeSet;

use common::*;
use kripke_toric::ideal;
use kripke_toric::lattice::{
    hermite_normal_form, kernel_basis, sign_feasible, IntegerMatrix, SignPattern,
};
use kripke_toric::report::{analyze, AnalyzeOptions};
use kripke_toric::semantics::meet;
use kripke_toric::{KripkeFrame, RangeSet, Valuation};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

// ---------------------------------------------------------------------------
// Frames

#[test]
fn reverse_is_an_involution() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..200 {
        let k = rng.random_range(1..=10usize);
        let frame = random_frame(&mut rng, k);
        assert_eq!(frame.reverse().reverse(), frame);
    }
}

#[test]
fn inducing_on_all_worlds_is_the_identity() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..200 {
        let k = rng.random_range(1..=10usize);
        let frame = random_frame(&mut rng, k);
        let all: Vec<usize> = frame.worlds().collect();
        assert_eq!(frame.induced_subframe(&all).unwrap(), frame);
    }
}

/// The permutation-matrix test agrees with the cycles literally partitioning
/// the worlds and the edges.
#[test]
fn cycle_partition_characterizes_permutation_frames() {
    let check = |frame: &KripkeFrame| {
        let k = frame.world_count();
        let cycles = frame.find_cycles(k).unwrap();
        let mut world_cover = BTreeSet::new();
        let mut worlds_disjoint = true;
        let mut edge_cover = BTreeSet::new();
        let mut edges_disjoint = true;
        for cycle in &cycles {
            for &w in &cycle.vertices {
                worlds_disjoint &= world_cover.insert(w);
            }
            for i in 0..cycle.vertices.len() {
                let from = cycle.vertices[i];
                let to = cycle.vertices[(i + 1) % cycle.vertices.len()];
                edges_disjoint &= edge_cover.insert((from, to));
            }
        }
        let partitions = worlds_disjoint
            && edges_disjoint
            && world_cover.len() == k
            && edge_cover == frame.edges().into_iter().collect();
        assert_eq!(frame.is_disjoint_union_of_cycles(), partitions, "{frame:?}");
    };
    for k in 1..=3usize {
        for mask in 0..(1u64 << (k * k)) {
            check(&frame_from_mask(k, mask));
        }
    }
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..150 {
        let k = rng.random_range(4..=8usize);
        check(&random_frame(&mut rng, k));
    }
}

#[test]
fn partitioning_is_invariant_under_relabeling() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..300 {
        let k = rng.random_range(1..=9usize);
        let frame = random_frame(&mut rng, k);
        let mut relabel: Vec<usize> = (1..=k).collect();
        relabel.shuffle(&mut rng);
        let edges = frame
            .edges()
            .into_iter()
            .map(|(w, x)| (relabel[w - 1], relabel[x - 1]));
        let permuted = KripkeFrame::new(k, edges).unwrap();
        assert_eq!(frame.is_partitioning(), permuted.is_partitioning());
    }
}

// ---------------------------------------------------------------------------
// Modal semantics

proptest! {
    /// Bit strings round-trip through parsing and display.
    #[test]
    fn valuation_string_roundtrip(bits in prop::collection::vec(any::<bool>(), 1..=24)) {
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let v: Valuation = s.parse().unwrap();
        prop_assert_eq!(v.to_string(), s);
    }

    /// The bit implementations match the polynomial translation table when
    /// evaluated with plain integer arithmetic.
    #[test]
    fn connectives_match_integer_polynomials(
        pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..=16)
    ) {
        let a_str: String = pairs.iter().map(|&(x, _)| if x { '1' } else { '0' }).collect();
        let b_str: String = pairs.iter().map(|&(_, y)| if y { '1' } else { '0' }).collect();
        let a: Valuation = a_str.parse().unwrap();
        let b: Valuation = b_str.parse().unwrap();
        for (w, &(x, y)) in pairs.iter().enumerate() {
            let (x, y) = (i32::from(x), i32::from(y));
            let world = w + 1;
            prop_assert_eq!(i32::from(a.complement().get(world).unwrap()), 1 - x);
            prop_assert_eq!(i32::from(a.and(&b).unwrap().get(world).unwrap()), x * y);
            prop_assert_eq!(i32::from(a.or(&b).unwrap().get(world).unwrap()), x + y - x * y);
            prop_assert_eq!(
                i32::from(a.implies(&b).unwrap().get(world).unwrap()),
                1 - x + x * y
            );
            prop_assert_eq!(
                i32::from(a.iff(&b).unwrap().get(world).unwrap()),
                1 - x - y + 2 * x * y
            );
        }
    }

    /// Meet is the pointwise minimum of the whole family.
    #[test]
    fn meet_is_a_pointwise_minimum(
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 1..=5)
    ) {
        let vals: Vec<Valuation> = rows
            .iter()
            .map(|r| {
                let s: String = r.iter().map(|&b| if b { '1' } else { '0' }).collect();
                s.parse().unwrap()
            })
            .collect();
        let m = meet(vals.iter()).unwrap();
        for w in 1..=6 {
            let expected = vals.iter().all(|v| v.get(w).unwrap());
            prop_assert_eq!(m.get(w).unwrap(), expected);
        }
    }
}

/// Necessity distributes over arbitrary meets.
#[test]
fn necessity_distributes_over_meets() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..300 {
        let k = rng.random_range(1..=8usize);
        let frame = random_frame(&mut rng, k);
        let family: Vec<Valuation> = (0..rng.random_range(1..=5))
            .map(|_| random_valuation(&mut rng, k))
            .collect();
        let left = frame.necessity(&meet(family.iter()).unwrap()).unwrap();
        let images: Vec<Valuation> = family.iter().map(|a| frame.necessity(a).unwrap()).collect();
        assert_eq!(left, meet(images.iter()).unwrap());
    }
}

/// The range contains the all-ones point and is closed under meets.
#[test]
fn range_is_meet_closed_and_contains_one() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..100 {
        let k = rng.random_range(1..=7usize);
        let frame = random_frame(&mut rng, k);
        let range = frame.necessity_range().unwrap();
        assert!(range.contains(&Valuation::all_true(k)));
        for p in range.iter() {
            for q in range.iter() {
                assert!(range.contains(&p.and(q).unwrap()));
            }
        }
    }
}

/// When defined, the minimal preimage maps back onto its target and sits
/// below every preimage.
#[test]
fn minimal_preimage_is_least() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let k = rng.random_range(1..=6usize);
        let frame = random_frame(&mut rng, k);
        for target in range_by_enumeration(&frame).iter() {
            let least = frame
                .minimal_preimage(target)
                .unwrap()
                .expect("target is in the range");
            assert_eq!(frame.necessity(&least).unwrap(), *target);
            for a in 0..(1u64 << k) {
                let bits: String = (0..k)
                    .map(|w| if a & (1 << w) != 0 { '1' } else { '0' })
                    .collect();
                let candidate = val(&bits);
                if frame.necessity(&candidate).unwrap() == *target {
                    assert!(least.leq(&candidate).unwrap());
                }
            }
        }
    }
}

/// Isomorphism, injectivity, surjectivity, and the permutation-matrix shape
/// coincide on every frame with up to four worlds.
#[test]
fn structure_equivalences_hold_exhaustively_up_to_four_worlds() {
    for k in 1..=4usize {
        for mask in 0..(1u64 << (k * k)) {
            let frame = frame_from_mask(k, mask);
            let iso = frame.necessity_isomorphism();
            assert_eq!(iso, frame.is_disjoint_union_of_cycles());
            assert_eq!(iso, frame.necessity_injective().unwrap(), "{frame:?}");
            assert_eq!(iso, frame.necessity_surjective().unwrap(), "{frame:?}");
            assert_eq!(
                iso,
                frame.necessity_range().unwrap().len() == 1 << k,
                "{frame:?}"
            );
        }
    }
}

/// The single-flip and co-atom criteria agree with direct enumeration.
#[test]
fn criteria_match_direct_enumeration_on_small_frames() {
    for k in 1..=3usize {
        for mask in 0..(1u64 << (k * k)) {
            let frame = frame_from_mask(k, mask);
            assert_eq!(
                frame.necessity_injective().unwrap(),
                injective_by_enumeration(&frame)
            );
            assert_eq!(
                frame.necessity_surjective().unwrap(),
                surjective_by_enumeration(&frame)
            );
        }
    }
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..300 {
        let frame = random_frame(&mut rng, 4);
        assert_eq!(
            frame.necessity_injective().unwrap(),
            injective_by_enumeration(&frame)
        );
        assert_eq!(
            frame.necessity_surjective().unwrap(),
            surjective_by_enumeration(&frame)
        );
    }
}

// ---------------------------------------------------------------------------
// Integer lattice

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> IntegerMatrix {
    IntegerMatrix::from_rows((0..rows).map(|_| {
        (0..cols)
            .map(|_| rng.random_range(-9i64..=9))
            .collect::<Vec<_>>()
    }))
}

#[test]
fn hnf_transform_is_unimodular_and_echelon() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..200 {
        let rows = rng.random_range(1..=5usize);
        let cols = rng.random_range(1..=5usize);
        let m = random_matrix(&mut rng, rows, cols);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(u.mul(&m), h);
        assert_eq!(u.determinant().abs(), BigInt::from(1));
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for r in 0..h.row_count() {
            match h.row(r).iter().position(|e| !e.is_zero()) {
                Some(p) => {
                    assert!(!seen_zero_row, "zero rows must come last");
                    if let Some(prev) = last_pivot {
                        assert!(p > prev, "pivots must move right");
                    }
                    assert!(h.get(r, p) > &BigInt::zero(), "pivots are positive");
                    last_pivot = Some(p);
                }
                None => seen_zero_row = true,
            }
        }
    }
}

#[test]
fn kernel_vectors_solve_and_saturate() {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..150 {
        let rows = rng.random_range(1..=4usize);
        let cols = rng.random_range(1..=4usize);
        let m = random_matrix(&mut rng, rows, cols);
        let basis = kernel_basis(&m);
        assert_eq!(basis.dim(), cols);
        for v in basis.vectors() {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // Rank-nullity against the HNF rank.
        let (h, _) = hermite_normal_form(&m);
        let rank = (0..h.row_count())
            .filter(|&r| h.row(r).iter().any(|e| !e.is_zero()))
            .count();
        assert_eq!(rank + basis.rank(), cols);
        // Random integer combinations stay inside.
        if !basis.is_trivial() {
            let mut combo = vec![BigInt::zero(); cols];
            for v in basis.vectors() {
                let c = BigInt::from(rng.random_range(-4i64..=4));
                for (acc, entry) in combo.iter_mut().zip(v) {
                    *acc += &c * entry;
                }
            }
            assert!(basis.contains(&combo).unwrap());
        }
        // Saturation, brute force: every bounded integer solution of M x = 0
        // is an integer combination of the basis.
        if cols <= 3 {
            let bound = 3i64;
            let width = (2 * bound + 1) as u64;
            for code in 0..width.pow(cols as u32) {
                let mut x = Vec::with_capacity(cols);
                let mut rest = code;
                for _ in 0..cols {
                    x.push(BigInt::from((rest % width) as i64 - bound));
                    rest /= width;
                }
                if m.mul_vec(&x).iter().all(Zero::is_zero) {
                    assert!(basis.contains(&x).unwrap(), "{x:?}");
                }
            }
        }
    }
}

/// Bounded-witness oracle for the sign query, enumerated over all integer
/// kernel vectors with entries in [-5, 5].
#[test]
fn sign_feasibility_agrees_with_bounded_witness_search() {
    let mut rng = StdRng::seed_from_u64(11);
    let bound = 5i64;
    for _ in 0..25 {
        let k = rng.random_range(1..=5usize);
        let frame = random_frame(&mut rng, k);
        let m = IntegerMatrix::transposed_adjacency_of(&frame);
        let basis = kernel_basis(&m);

        // Sign supports (positive mask, negative mask) of all bounded kernel
        // vectors.
        let width = (2 * bound + 1) as u64;
        let mut signs = BTreeSet::new();
        for code in 0..width.pow(k as u32) {
            let mut x = Vec::with_capacity(k);
            let mut rest = code;
            for _ in 0..k {
                x.push(BigInt::from((rest % width) as i64 - bound));
                rest /= width;
            }
            if !m.mul_vec(&x).iter().all(Zero::is_zero) {
                continue;
            }
            let mut pos = 0u64;
            let mut neg = 0u64;
            for (i, e) in x.iter().enumerate() {
                if e > &BigInt::zero() {
                    pos |= 1 << i;
                } else if e < &BigInt::zero() {
                    neg |= 1 << i;
                }
            }
            signs.insert((pos, neg));
        }

        for support_mask in 0..(1u64 << k) {
            for j in 1..=k {
                if support_mask & (1 << (j - 1)) != 0 {
                    continue;
                }
                let support: Vec<usize> = (1..=k)
                    .filter(|&w| support_mask & (1 << (w - 1)) != 0)
                    .collect();
                let pattern = SignPattern::separating(k, &support, j).unwrap();
                let feasible = sign_feasible(&basis, &pattern);
                let witness = signs
                    .iter()
                    .any(|&(pos, neg)| pos & !support_mask == 0 && neg & (1 << (j - 1)) != 0);
                // The witness search is bounded, but at these sizes it is
                // exhaustive enough to match exactly; a mismatch in either
                // direction is a bug.
                assert_eq!(feasible, witness, "k={k} S={support_mask:b} j={j}");
            }
        }
    }
}

#[test]
fn sign_feasibility_is_monotone_in_the_support() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..150 {
        let k = rng.random_range(2..=6usize);
        let frame = random_frame(&mut rng, k);
        let basis = ideal::frame_kernel(&frame);
        let support_mask = rng.random_range(0..(1u64 << k));
        let outside: Vec<usize> = (1..=k)
            .filter(|&w| support_mask & (1 << (w - 1)) == 0)
            .collect();
        if outside.len() < 2 {
            continue;
        }
        let j = outside[rng.random_range(0..outside.len())];
        let grow = *outside.iter().find(|&&w| w != j).unwrap();
        let small: Vec<usize> = (1..=k)
            .filter(|&w| support_mask & (1 << (w - 1)) != 0)
            .collect();
        let mut large = small.clone();
        large.push(grow);
        let small_pattern = SignPattern::separating(k, &small, j).unwrap();
        let large_pattern = SignPattern::separating(k, &large, j).unwrap();
        if sign_feasible(&basis, &small_pattern) {
            assert!(sign_feasible(&basis, &large_pattern));
        }
    }
}

// ---------------------------------------------------------------------------
// Binomial ideals

#[test]
fn range_is_contained_in_the_toric_points() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..150 {
        let k = rng.random_range(1..=8usize);
        let frame = random_frame(&mut rng, k);
        let range = frame.necessity_range().unwrap();
        let j_points = ideal::points_of_j(&frame).unwrap();
        assert!(range.is_subset(&j_points), "{frame:?}");
    }
}

#[test]
fn reported_generators_vanish_on_the_range() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..100 {
        let k = rng.random_range(1..=7usize);
        let frame = random_frame(&mut rng, k);
        let range = frame.necessity_range().unwrap();
        let generators = ideal::ideal_generators(&frame).unwrap();
        for b in generators.toric_basis.iter().chain(&generators.class_part) {
            assert!(
                ideal::binomial_vanishes_on(b, &range).unwrap(),
                "{b} on {frame:?}"
            );
        }
    }
}

/// Collapsing a toric basis binomial to its square-free support vectors lands
/// both sides in the same support class.
#[test]
fn square_free_collapse_stays_in_one_class() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..100 {
        let k = rng.random_range(1..=7usize);
        let frame = random_frame(&mut rng, k);
        let classes = ideal::support_classes(&frame).unwrap();
        for binomial in ideal::toric_basis_binomials(&frame) {
            let (u, v) = binomial.exponents();
            let collapse = |exps: &[u64]| -> Valuation {
                let s: String = exps
                    .iter()
                    .map(|&e| if e > 0 { '1' } else { '0' })
                    .collect();
                val(&s)
            };
            let cu = collapse(u);
            let cv = collapse(v);
            let class_of = |x: &Valuation| {
                classes
                    .iter()
                    .position(|c| c.members.contains(x))
                    .expect("all square-free vectors are classified")
            };
            assert_eq!(class_of(&cu), class_of(&cv));
        }
    }
}

/// The batched feasibility route inside points_of_j matches the literal
/// per-index queries through the public sign_feasible.
#[test]
fn toric_points_match_per_index_feasibility() {
    let mut rng = StdRng::seed_from_u64(16);
    for _ in 0..60 {
        let k = rng.random_range(1..=6usize);
        let frame = random_frame(&mut rng, k);
        let basis = ideal::frame_kernel(&frame);
        let by_library = ideal::points_of_j(&frame).unwrap();
        let mut literal = Vec::new();
        for b in 0..(1u64 << k) {
            let support: Vec<usize> = (1..=k).filter(|&w| b & (1 << (w - 1)) != 0).collect();
            let violated = (1..=k).filter(|&j| b & (1 << (j - 1)) == 0).any(|j| {
                let pattern = SignPattern::separating(k, &support, j).unwrap();
                sign_feasible(&basis, &pattern)
            });
            if !violated {
                let bits: String = (0..k)
                    .map(|w| if b & (1 << w) != 0 { '1' } else { '0' })
                    .collect();
                literal.push(val(&bits));
            }
        }
        assert_eq!(by_library, RangeSet::from_iter(literal), "{frame:?}");
    }
}

#[test]
fn possibility_range_is_the_complemented_brute_force_image() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..100 {
        let k = rng.random_range(1..=8usize);
        let frame = random_frame(&mut rng, k);
        let by_library = frame.possibility_range().unwrap();
        let mut brute = Vec::new();
        for a in 0..(1u64 << k) {
            let bits: String = (0..k)
                .map(|w| if a & (1 << w) != 0 { '1' } else { '0' })
                .collect();
            brute.push(frame.possibility(&val(&bits)).unwrap());
        }
        assert_eq!(by_library, RangeSet::from_iter(brute));
        assert_eq!(by_library.len(), frame.necessity_range().unwrap().len());
    }
}

// ---------------------------------------------------------------------------
// Reports

/// Cross-field consistency of the aggregated report.
#[test]
fn reports_are_internally_consistent() {
    let mut rng = StdRng::seed_from_u64(18);
    for _ in 0..100 {
        let k = rng.random_range(1..=7usize);
        let frame = random_frame(&mut rng, k);
        let report = analyze(&frame, &AnalyzeOptions::default()).unwrap();
        let range = report.range.as_ref().unwrap();
        let tame = report.tame.as_ref().unwrap();
        if report.necessity_isomorphism {
            assert_eq!(range.size, 1 << k);
        }
        if report.partitioning {
            assert!(tame.tame);
        }
        assert_eq!(tame.tame, range.size == tame.toric_point_count);
        assert_eq!(report.kernel_basis.len() + rank_of(&frame), k);
    }
}

fn rank_of(frame: &KripkeFrame) -> usize {
    let (h, _) = hermite_normal_form(&IntegerMatrix::transposed_adjacency_of(frame));
    (0..h.row_count())
        .filter(|&r| h.row(r).iter().any(|e| !e.is_zero()))
        .count()
}
