//! Front end for `ncmorita`: problem files, command implementations and the
//! bundled worked examples.

pub mod commands;
pub mod format;

pub use commands::CliError;
pub use format::{format_entry, parse, print, ParseError, Problem};
