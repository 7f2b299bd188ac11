//! Config parsing, scenario registry and output writers behind the
//! `qdcavity` binary.

pub mod config;
pub mod output;
pub mod scenarios;
