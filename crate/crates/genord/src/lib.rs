//! Exact-arithmetic engine for the cyclotomic combinatorics behind
//! quasi-isolated block theory in finite reductive groups of exceptional
//! type.
//!
//! The crate does five jobs, one module each:
//!
//! * [`cyclo`] — integer polynomials, cyclotomic factorizations, generic
//!   orders, multiplicative orders and ell-adic ranks of torus orders;
//! * [`rootdata`] — root systems, Weyl groups as permutation groups on
//!   roots, diagram twists, characteristic polynomials of twisted elements,
//!   parabolic subsystem classification;
//! * [`unipotent`] — partitions, symbols, hook/cohook cores, counts and
//!   e-cuspidality classification of unipotent characters of classical
//!   components, plus orbit counting for disconnected centralizers;
//! * [`esplit`] — e-split Levi enumeration and testing, generic orders of
//!   centers, relative normalizer orders, relevant-integer sets;
//! * [`decompose`] — reconstruction of non-uniform Lusztig inductions from
//!   their uniform projections by bounded integral lattice search.
//!
//! On top of those sit [`dataset`] (a machine-readable embedding of the
//! block tables with schema validation and Ennola pairing), [`verify`]
//! (the cross-module consistency harness, including the Malle–Robinson
//! inequality scan) and [`cli`] (the batch front end).
//!
//! The user guide in `book/` walks through the same material chapter by
//! chapter; its code snippets compile and run as doctests of this crate.

pub mod cli;
pub mod cyclo;
pub mod dataset;
pub mod decompose;
pub mod error;
pub mod esplit;
pub mod frac;
pub mod lines;
pub mod perm;
pub mod rootdata;
pub mod unipotent;
pub mod verify;

pub use error::{Error, Result};

mod book;
