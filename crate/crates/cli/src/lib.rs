//! Command-line front end for the expoly toolkit.

pub mod commands;
pub mod parser;
