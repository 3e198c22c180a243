//! Matching and flow algorithms used by the engine.

pub mod bipartite;
pub mod blossom;
pub mod flow;
