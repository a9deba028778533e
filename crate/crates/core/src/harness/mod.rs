//! Instance files, random instances, the reference oracle and batch runs.

pub mod batch;
pub mod format;
pub mod generate;
pub mod oracle;

pub use format::{parse_flow, parse_instance, write_flow, write_instance, FormatError, Instance, Regime};
pub use generate::{generate, GenParams, ParamError};
pub use oracle::{oracle_maxflow, OracleResult};
