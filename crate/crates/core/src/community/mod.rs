//! Community structure: weighted modularity, greedy agglomerative
//! maximization, and adjusted mutual information between partitions.

mod ami;
mod greedy;
mod modularity;
mod partition;

pub use ami::{ami, ami_matrix, triangle_matrix, AmiMatrix};
pub use greedy::greedy_communities;
pub use modularity::{modularity, ModularityVariant};
pub use partition::Partition;
