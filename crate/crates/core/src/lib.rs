//! Vector-valued nowhere-zero flows on multigraphs and their relation to
//! (oriented) cycle double covers.

pub mod cdc;
pub mod constructions;
pub mod correspondence;
pub mod error;
pub mod flows;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod json;
pub mod phi;
pub mod polytope;
pub mod search;

pub use error::{Error, Result};
pub use graph::{DirectedEvenSubgraph, EdgeId, EvenSubgraph, Multigraph, Orientation, VertexId};
pub use search::{SearchOutcome, Verdict};
