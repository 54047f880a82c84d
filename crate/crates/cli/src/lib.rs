//! Command-line front end: JSON artifacts, SVG rendering and subcommands.

pub mod commands;
pub mod io;
pub mod render;
