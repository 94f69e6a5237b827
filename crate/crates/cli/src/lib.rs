//! Library surface of the command-line tool: file formats and the command
//! implementations, so integration tests can call them without spawning
//! processes.

pub mod commands;
pub mod format;
