//! Input-output network analysis.
//!
//! Reads national input-output tables, turns them into weighted directed
//! networks of inter-sector flows, and measures them: node strengths,
//! weighted directed assortativity with jackknife errors, extended PageRank
//! with auxiliary importance, weighted hubs and authorities, greedy
//! modularity communities, and adjusted mutual information between
//! partitions.

pub mod assort;
pub mod centrality;
pub mod cli;
pub mod community;
pub mod error;
pub mod iot;
pub mod network;
pub mod registry;
pub mod report;

pub use error::{Error, Result};
pub use iot::{parse_iot, to_network, validate_balance, BalanceReport, IOTable, ParseOptions, TableFormat};
pub use network::IONetwork;
pub use registry::SectorRegistry;
