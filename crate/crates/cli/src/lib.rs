//! Library surface of the `qsd` command-line harness: run configuration,
//! serializable records, and the subcommand implementations. The binary in
//! `main.rs` is a thin argument-parsing shell over this.

pub mod commands;
pub mod config;
pub mod records;
