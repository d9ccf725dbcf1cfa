//! Library side of the `modlat` command line tool.

pub mod curves;
pub mod geometry;
pub mod sim;
