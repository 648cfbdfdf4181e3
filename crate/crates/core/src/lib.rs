//! Edge-degeneracy and edge-admissibility of multigraphs: layouts, hide-outs,
//! the edge-blocking pursuit game, and tree-partition decompositions of
//! graphs excluding a fat theta immersion.

pub mod carving;
pub mod cuts;
pub mod degeneracy;
pub mod error;
pub mod game;
pub mod multigraph;
pub mod speed;
pub mod structure;
pub mod testkit;

pub use error::{Error, Result};
pub use multigraph::{parse_graph, EdgeId, MultiGraph, VertexId};
pub use speed::Speed;
