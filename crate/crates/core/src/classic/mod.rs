//! Classical matching subroutines: Gale–Shapley, Irving's roommates
//! algorithm, maximum-cardinality and maximum-weight matching.

mod cardinality;
mod gale_shapley;
mod irving;
mod weighted;

pub use cardinality::max_cardinality_matching;
pub use gale_shapley::{gale_shapley, NotBipartite};
pub use irving::irving_sr;
pub use weighted::{max_weight_matching, GraphError, WeightedGraph};
