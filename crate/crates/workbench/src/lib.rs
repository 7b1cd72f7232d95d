//! File formats, parallel drivers and the `pi` command-line tool for
//! [`pi_core`].

pub mod cli;
pub mod error;
pub mod matrix_file;
pub mod mdp_file;
pub mod search;
pub mod sweep;
pub mod trace_file;
pub mod verify;

pub use error::FormatError;
