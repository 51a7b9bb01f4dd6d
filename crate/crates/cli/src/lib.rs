//! Library side of the `deepwater` command-line tool.
//!
//! The binary in `main.rs` is a thin clap shim over these modules;
//! everything testable lives here. [`config`] resolves flags, config file,
//! and defaults into a [`config::RunConfig`]; [`commands`] implements the
//! five operations and their deterministic CSV/SVG artifacts;
//! [`validation`] holds the self-check suite behind `deepwater validate`.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod validation;
