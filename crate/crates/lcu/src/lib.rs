//! Command-line front end: state files, CSV exports and the `lcu` commands.

pub mod cli;
pub mod error;
pub mod io;
