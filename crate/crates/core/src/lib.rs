//! Exact analysis of the necessity operator on finite Kripke frames.
//!
//! Given a finite frame, this crate evaluates the modal operators □ and ◇ on
//! 0/1 valuations, enumerates the range of □, derives a binomial description
//! of that range from the integer kernel of the transposed adjacency matrix,
//! and classifies the frame (isomorphic necessity, partitioning, tame). All
//! arithmetic is exact: bit operations for valuations, arbitrary-precision
//! integers for the lattice work.
//!
//! The accompanying guide in `book/` walks through the theory chapter by
//! chapter; its code snippets double as this workspace's doc-tests.

pub mod cli;
pub mod error;
pub mod frame;
pub mod ideal;
pub mod lattice;
pub mod report;
pub mod semantics;

pub use error::{Error, ParseError, Result};
pub use frame::{CycleSubframe, FrameFile, KripkeFrame, Neighborhood};
pub use ideal::{Binomial, GeneratorSet, SupportClass, TamenessVerdict};
pub use lattice::{IntegerMatrix, LatticeBasis, SignPattern};
pub use report::FrameReport;
pub use semantics::{connective, meet, Connective, RangeSet, Valuation};

/// World-count bounds for the enumeration-based analyses.
///
/// `points` gates the `2^K` loops (range enumeration, injectivity),
/// `squarefree` the square-free exponent enumeration behind the support
/// classes, and `feasibility` the per-point kernel feasibility queries behind
/// the tameness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub points: usize,
    pub squarefree: usize,
    pub feasibility: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            points: 20,
            squarefree: 14,
            feasibility: 12,
        }
    }
}

impl Caps {
    pub(crate) fn check_points(&self, analysis: &'static str, k: usize) -> Result<()> {
        Self::check(analysis, k, self.points)
    }

    pub(crate) fn check_squarefree(&self, analysis: &'static str, k: usize) -> Result<()> {
        Self::check(analysis, k, self.squarefree)
    }

    pub(crate) fn check_feasibility(&self, analysis: &'static str, k: usize) -> Result<()> {
        Self::check(analysis, k, self.feasibility)
    }

    fn check(analysis: &'static str, k: usize, cap: usize) -> Result<()> {
        if k > cap {
            return Err(Error::CapExceeded {
                analysis,
                cap,
                world_count: k,
            });
        }
        Ok(())
    }
}
