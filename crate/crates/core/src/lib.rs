//! Relative cyclic JSJ decompositions of multiwords in free groups.
//!
//! A multiword is a finite set of conjugacy classes of maximal cyclic
//! subgroups of a free group F. This crate computes the decomposition of F
//! as a graph of groups with cyclic edge groups relative to the multiword,
//! classifies the pieces as rigid or quadratically-hanging surface pieces,
//! and decides geometricity and virtual geometricity through planar
//! rotation-system certificates on Whitehead graphs.

pub mod error;
pub mod axes;
pub mod geometry;
pub mod rjsj;
pub mod subgroups;
pub mod whgraph;
pub mod words;

pub use error::{Error, Result};
pub use rjsj::{
    compute_rjsj, verify_rjsj, Classification, GraphOfGroups, RjsjConfig, RjsjOutcome, RjsjResult,
};
pub use words::{ConjClass, Letter, Multiword, WhMove, Word};
