//! Command-line and HTTP front ends for `mal2sign-core`.

pub mod cli;
pub mod server;
