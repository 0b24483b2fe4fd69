//! Compiles the guide's chapters so `cargo test --doc` runs every code
//! snippet in them. One module per chapter keeps test failures traceable to
//! the markdown file they came from.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("src/frames.md")]
pub mod frames {}

#[doc = include_str!("src/modal-operators.md")]
pub mod modal_operators {}

#[doc = include_str!("src/range.md")]
pub mod range {}

#[doc = include_str!("src/kernel.md")]
pub mod kernel {}

#[doc = include_str!("src/ideals.md")]
pub mod ideals {}

#[doc = include_str!("src/cli.md")]
pub mod cli {}
