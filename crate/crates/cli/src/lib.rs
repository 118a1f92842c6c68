//! Library side of the `casurf` binary: argument definitions, command
//! implementations and the report format.

pub mod commands;
pub mod report;
