//! File formats, a threaded executor and the command line for `mordell-core`.

pub mod cli;
pub mod exec;
pub mod formats;
pub mod report;
