//! Lifting graph maps to embeddings: configuration graphs, the Γ_f formula,
//! order liftings and the reverse reduction from formulas to maps.

pub mod analysis;
pub mod config;
pub mod corpus;
pub mod error;
pub mod gamma;
pub mod gmap;
pub mod graph;
pub mod lifting;
pub mod realize;
pub mod sat;

pub use config::{ComponentMap, ConfigGraph, Limits, ObstructorWitness, Permutation};
pub use error::{Error, Result};
pub use gmap::{parse_gmap, write_gmap};
pub use graph::{GraphMap, MultiGraph};
