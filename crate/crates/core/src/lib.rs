//! Combinatorics and Hodge polynomials of the polydiagonal compactification
//! `X⟨n⟩` of the configuration space of `n` points on a smooth variety.

pub mod cli;
pub mod counting;
pub mod error;
pub mod hodge;
pub mod limits;
pub mod partitions;
pub mod polyring;
mod serde_util;
pub mod strata;
pub mod trees;

pub use error::{Error, Result};
pub use partitions::{IntegerPartition, SetPartition};
pub use polyring::{UPoly, XPoly};
pub use trees::{Chain, LeveledTree, Nest, RootedTree};
