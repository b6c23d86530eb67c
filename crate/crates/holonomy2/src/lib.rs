//! File formats, run reports and the `holonomy2` command line front end for
//! [`holonomy2_core`].

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod report;
pub mod selftest;

pub use cli::{run, Outcome};
pub use error::CliError;
