//! Sum choice numbers of graphs.
//!
//! Exact values by exhaustive search at small scale, closed forms and
//! bounds for complete bipartite graphs `K_{a,q}` and complete split graphs
//! `G_{a,q}`, explicit insufficient list assignments, and the limit
//! constant of the normalised type-II sum choice number.

pub mod choosability;
pub mod error;
pub mod graph;
pub mod kaq;
pub mod par;
pub mod sum;
pub mod turan;
pub mod type2;
pub mod verify;

pub use error::{Error, Result};
