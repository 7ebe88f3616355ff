pub mod cli;
pub mod cluster;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod partition;
pub mod paths;
pub mod persist;
pub mod query;

pub use error::{Error, Result};
