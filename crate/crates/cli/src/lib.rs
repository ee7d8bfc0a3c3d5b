//! Exports, configuration and verification reports for the `sylow-d4`
//! command-line tool.

pub mod config;
pub mod export;
pub mod verify;
