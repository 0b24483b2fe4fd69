//! Helpers shared by the integration suites.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use kripke_toric::{KripkeFrame, RangeSet, Valuation};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load_fixture(name: &str) -> KripkeFrame {
    kripke_toric::cli::load_frame(&fixture_path(name)).expect("fixture parses")
}

pub fn val(s: &str) -> Valuation {
    s.parse().expect("valid 0/1 string")
}

/// Decodes an edge-set bitmask into a frame: bit `(w-1)*k + (x-1)` is the
/// edge `(w, x)`. Enumerating all masks enumerates all frames on `k` worlds.
pub fn frame_from_mask(k: usize, mask: u64) -> KripkeFrame {
    let edges = (0..k * k)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i / k + 1, i % k + 1));
    KripkeFrame::new(k, edges).expect("mask encodes a valid frame")
}

pub fn random_frame(rng: &mut StdRng, k: usize) -> KripkeFrame {
    let density = rng.random_range(0.05..0.95);
    let mut edges = Vec::new();
    for w in 1..=k {
        for x in 1..=k {
            if rng.random_bool(density) {
                edges.push((w, x));
            }
        }
    }
    KripkeFrame::new(k, edges).expect("valid random frame")
}

pub fn random_valuation(rng: &mut StdRng, k: usize) -> Valuation {
    let bits: String = (0..k)
        .map(|_| if rng.random_bool(0.5) { '1' } else { '0' })
        .collect();
    val(&bits)
}

/// A random frame whose neighborhoods are blocks of a partition (or empty):
/// pick a covered subset of worlds, split it into blocks, then let every
/// world point at one block or at nothing.
pub fn random_partitioning_frame(rng: &mut StdRng, k: usize) -> KripkeFrame {
    let mut covered: Vec<usize> = (1..=k).filter(|_| rng.random_bool(0.7)).collect();
    covered.shuffle(rng);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut rest = covered.as_slice();
    while !rest.is_empty() {
        let take = rng.random_range(1..=rest.len());
        blocks.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    let mut edges = Vec::new();
    for w in 1..=k {
        if blocks.is_empty() || rng.random_bool(0.25) {
            continue;
        }
        let block = &blocks[rng.random_range(0..blocks.len())];
        for &x in block {
            edges.push((w, x));
        }
    }
    let frame = KripkeFrame::new(k, edges).expect("valid partitioning frame");
    assert!(
        frame.is_partitioning(),
        "generator must produce partitioning frames"
    );
    frame
}

/// Brute-force image of necessity, kept separate from the library's own
/// enumeration so the suites have an independent reference.
pub fn image_by_enumeration(frame: &KripkeFrame) -> Vec<Valuation> {
    let k = frame.world_count();
    let mut out = Vec::new();
    for a in 0..(1u64 << k) {
        let bits: String = (0..k)
            .map(|w| if a & (1 << w) != 0 { '1' } else { '0' })
            .collect();
        out.push(frame.necessity(&val(&bits)).unwrap());
    }
    out
}

pub fn range_by_enumeration(frame: &KripkeFrame) -> RangeSet {
    RangeSet::from_iter(image_by_enumeration(frame))
}

pub fn injective_by_enumeration(frame: &KripkeFrame) -> bool {
    let image = image_by_enumeration(frame);
    let mut seen = std::collections::HashSet::new();
    image.into_iter().all(|b| seen.insert(b))
}

pub fn surjective_by_enumeration(frame: &KripkeFrame) -> bool {
    range_by_enumeration(frame).len() == 1 << frame.world_count()
}
