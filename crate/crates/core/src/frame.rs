//! Finite Kripke frames and their purely graph-theoretic classifications.
//!
//! A frame is a set of worlds `1..=K` together with a directed accessibility
//! relation. Worlds are 1-based everywhere in the public API; internally each
//! world stores its successor set as a bitmask, and the adjacency-matrix view
//! (row `w` = neighborhood of `w`) is derived from those masks on demand.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Subset enumeration bound for [`KripkeFrame::find_cycles`].
pub const CYCLE_ENUMERATION_CAP: usize = 12;

/// A finite Kripke frame: worlds `1..=K` and a directed edge relation.
///
/// The relation is a set, so duplicate edges supplied to [`KripkeFrame::new`]
/// are collapsed. Frames are immutable after construction; every operation on
/// them is pure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KripkeFrame {
    worlds: usize,
    /// `succ[w - 1]` has bit `x - 1` set iff there is an edge `(w, x)`.
    succ: Vec<u64>,
}

/// A world together with its ordered successor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub world: usize,
    pub successors: Vec<usize>,
}

/// A set of worlds whose induced subframe is exactly one directed cycle.
///
/// Vertices are listed in traversal order starting from the smallest one; a
/// single vertex means a loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CycleSubframe {
    pub vertices: Vec<usize>,
}

impl CycleSubframe {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Serde view of the frame file format: `{"worlds": K, "edges": [[w, x], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameFile {
    pub worlds: usize,
    pub edges: Vec<(usize, usize)>,
}

impl KripkeFrame {
    /// Largest representable frame. Enumeration-based analyses cap out far
    /// earlier; this bound comes from the bitmask representation.
    pub const MAX_WORLDS: usize = 64;

    /// Builds a validated frame from a world count and an edge list.
    ///
    /// Rejects `world_count == 0` and edges with endpoints outside
    /// `1..=world_count`; duplicate edges are collapsed.
    pub fn new(
        world_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if world_count == 0 {
            return Err(Error::EmptyFrame);
        }
        if world_count > Self::MAX_WORLDS {
            return Err(Error::TooManyWorlds {
                requested: world_count,
                max: Self::MAX_WORLDS,
            });
        }
        let mut succ = vec![0u64; world_count];
        for (from, to) in edges {
            if from == 0 || from > world_count || to == 0 || to > world_count {
                return Err(Error::EdgeOutOfRange {
                    from,
                    to,
                    world_count,
                });
            }
            succ[from - 1] |= 1 << (to - 1);
        }
        Ok(KripkeFrame {
            worlds: world_count,
            succ,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds
    }

    /// Iterates the worlds `1..=K`.
    pub fn worlds(&self) -> impl Iterator<Item = usize> {
        1..=self.worlds
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// All edges in ascending `(from, to)` order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for w in self.worlds() {
            let mut mask = self.succ[w - 1];
            while mask != 0 {
                let x = mask.trailing_zeros() as usize + 1;
                out.push((w, x));
                mask &= mask - 1;
            }
        }
        out
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        from >= 1
            && from <= self.worlds
            && to >= 1
            && to <= self.worlds
            && self.succ[from - 1] & (1 << (to - 1)) != 0
    }

    /// Successor bitmask of `w` (bit `x - 1` set iff edge `(w, x)`).
    pub(crate) fn successor_mask(&self, w: usize) -> u64 {
        self.succ[w - 1]
    }

    /// The neighborhood `N(w)`: successors of `w` in ascending order.
    pub fn neighborhood(&self, w: usize) -> Result<Neighborhood> {
        self.check_world(w)?;
        let mut successors = Vec::new();
        let mut mask = self.succ[w - 1];
        while mask != 0 {
            successors.push(mask.trailing_zeros() as usize + 1);
            mask &= mask - 1;
        }
        Ok(Neighborhood {
            world: w,
            successors,
        })
    }

    fn check_world(&self, w: usize) -> Result<()> {
        if w == 0 || w > self.worlds {
            return Err(Error::WorldOutOfRange {
                world: w,
                world_count: self.worlds,
            });
        }
        Ok(())
    }

    /// The transposed frame: every edge `(w, x)` becomes `(x, w)`. Involutive.
    pub fn reverse(&self) -> KripkeFrame {
        let mut succ = vec![0u64; self.worlds];
        for w in 0..self.worlds {
            let mut mask = self.succ[w];
            while mask != 0 {
                let x = mask.trailing_zeros() as usize;
                succ[x] |= 1 << w;
                mask &= mask - 1;
            }
        }
        KripkeFrame {
            worlds: self.worlds,
            succ,
        }
    }

    /// Restricts the frame to `subset`, relabelling its worlds `1..=n` in
    /// ascending order of the original indices.
    pub fn induced_subframe(&self, subset: &[usize]) -> Result<KripkeFrame> {
        let picked: BTreeSet<usize> = subset.iter().copied().collect();
        if picked.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &w in &picked {
            self.check_world(w)?;
        }
        let order: Vec<usize> = picked.into_iter().collect();
        let mut edges = Vec::new();
        for (i, &w) in order.iter().enumerate() {
            for (j, &x) in order.iter().enumerate() {
                if self.has_edge(w, x) {
                    edges.push((i + 1, j + 1));
                }
            }
        }
        KripkeFrame::new(order.len(), edges)
    }

    /// The 0/1 adjacency matrix as rows of neighborhoods, `rows[w-1][x-1]`.
    pub fn adjacency_rows(&self) -> Vec<Vec<u8>> {
        (1..=self.worlds)
            .map(|w| {
                (1..=self.worlds)
                    .map(|x| u8::from(self.has_edge(w, x)))
                    .collect()
            })
            .collect()
    }

    /// All world subsets of size `<= max_size` whose induced subframe is
    /// exactly one directed cycle, in ascending vertex-list order.
    ///
    /// A cycle here is the restrictive notion: the induced subframe must
    /// contain the cycle edges and nothing else, so a loop inside a larger
    /// cycle disqualifies the larger subset. Subset enumeration is capped at
    /// [`CYCLE_ENUMERATION_CAP`] worlds; `max_size` larger than the world
    /// count is clamped.
    pub fn find_cycles(&self, max_size: usize) -> Result<Vec<CycleSubframe>> {
        let max_size = max_size.min(self.worlds);
        // Cycles are induced subframes, so even small cycles require scanning
        // every subset of the whole world set.
        if self.worlds > CYCLE_ENUMERATION_CAP {
            return Err(Error::CapExceeded {
                analysis: "cycle enumeration",
                cap: CYCLE_ENUMERATION_CAP,
                world_count: self.worlds,
            });
        }
        let mut cycles = Vec::new();
        for mask in 1u64..(1 << self.worlds) {
            if (mask.count_ones() as usize) > max_size {
                continue;
            }
            if let Some(cycle) = self.cycle_on(mask) {
                cycles.push(cycle);
            }
        }
        cycles.sort();
        Ok(cycles)
    }

    /// Checks whether the induced subframe on `mask` is exactly one directed
    /// cycle and returns it in canonical rotation (smallest vertex first).
    fn cycle_on(&self, mask: u64) -> Option<CycleSubframe> {
        let size = mask.count_ones() as usize;
        let mut next = [0usize; 64];
        for w in 1..=self.worlds {
            if mask & (1 << (w - 1)) == 0 {
                continue;
            }
            let inside = self.succ[w - 1] & mask;
            if inside.count_ones() != 1 {
                return None;
            }
            next[w - 1] = inside.trailing_zeros() as usize + 1;
        }
        // Out-degree one inside the subset; the cycle exists iff following the
        // successor map from the smallest vertex visits the whole subset.
        let start = mask.trailing_zeros() as usize + 1;
        let mut vertices = Vec::with_capacity(size);
        let mut w = start;
        for _ in 0..size {
            vertices.push(w);
            w = next[w - 1];
        }
        if w != start || vertices.len() != size {
            return None;
        }
        let mut seen = 0u64;
        for &v in &vertices {
            seen |= 1 << (v - 1);
        }
        (seen == mask).then_some(CycleSubframe { vertices })
    }

    /// True iff the adjacency matrix is a permutation matrix: every world has
    /// exactly one successor and exactly one predecessor. For finite frames
    /// this is exactly the condition that the cycles partition the worlds and
    /// the edges.
    pub fn is_disjoint_union_of_cycles(&self) -> bool {
        if self.succ.iter().any(|m| m.count_ones() != 1) {
            return false;
        }
        let mut indegree = vec![0usize; self.worlds];
        for &m in &self.succ {
            indegree[m.trailing_zeros() as usize] += 1;
        }
        indegree.iter().all(|&d| d == 1)
    }

    /// True iff any two neighborhoods are equal or disjoint.
    pub fn is_partitioning(&self) -> bool {
        for i in 0..self.worlds {
            for j in (i + 1)..self.worlds {
                let (a, b) = (self.succ[i], self.succ[j]);
                if a & b != 0 && a != b {
                    return false;
                }
            }
        }
        true
    }

    /// Parses the JSON frame format `{"worlds": K, "edges": [[w, x], ...]}`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: FrameFile = serde_json::from_str(text)
            .map_err(|e| ParseError::other(format!("invalid frame JSON: {e}")))?;
        KripkeFrame::new(file.worlds, file.edges)
    }

    /// Parses the plain-text edge list: first line is the world count, each
    /// following line one `w x` pair; `#` starts a comment, blank lines are
    /// skipped.
    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut world_count: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            if world_count.is_none() {
                let k = fields
                    .next()
                    .unwrap()
                    .parse::<usize>()
                    .map_err(|_| ParseError::at(line_no, "expected the world count"))?;
                if fields.next().is_some() {
                    return Err(ParseError::at(line_no, "expected only the world count").into());
                }
                world_count = Some(k);
                continue;
            }
            let parse = |field: Option<&str>| -> Result<usize> {
                field
                    .and_then(|f| f.parse::<usize>().ok())
                    .ok_or_else(|| ParseError::at(line_no, "expected an edge `w x`").into())
            };
            let from = parse(fields.next())?;
            let to = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(ParseError::at(line_no, "expected exactly two worlds").into());
            }
            edges.push((from, to));
        }
        let world_count = world_count.ok_or_else(|| ParseError::other("empty frame file"))?;
        KripkeFrame::new(world_count, edges)
    }

    /// The serde view of this frame, with edges in ascending order.
    pub fn to_file(&self) -> FrameFile {
        FrameFile {
            worlds: self.worlds,
            edges: self.edges(),
        }
    }
}

impl fmt::Debug for KripkeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KripkeFrame({} worlds, {:?})", self.worlds, self.edges())
    }
}

impl fmt::Display for KripkeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} worlds", self.worlds)?;
        for row in self.adjacency_rows() {
            for (i, bit) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{bit}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
