//! JSON formats and the command-line front end for `hspace-core`.

pub mod cli;
pub mod formats;

pub use cli::{run, Outcome};
