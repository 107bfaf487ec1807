//! Command implementations behind the `detblow` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod examples;
pub mod matrix_io;
pub mod output;
pub mod scan;
