//! Persistence and command-line plumbing around the math core: text
//! caches for tables and fitted polynomials, one-line report records,
//! and the `scat2` subcommand dispatcher.

pub mod cache;
mod cli;

pub use cache::{decode, encode, encode_reports, report_record, write_atomic, Cache, SymbolicTable};
pub use cli::run_with;
