//! The user guide lives in `book/` as an mdbook; including the chapters
//! here makes every code block in the book a doctest of this crate, so the
//! narrative cannot drift from the implementation.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/generic-orders.md")]
pub mod generic_orders {}

#[doc = include_str!("../../../book/src/root-data.md")]
pub mod root_data {}

#[doc = include_str!("../../../book/src/esplit-levis.md")]
pub mod esplit_levis {}

#[doc = include_str!("../../../book/src/unipotent.md")]
pub mod unipotent_chapter {}

#[doc = include_str!("../../../book/src/reconstruction.md")]
pub mod reconstruction {}

#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}

#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
