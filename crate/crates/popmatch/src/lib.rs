//! Text formats, JSON reports and the command-line front end for
//! [`popmatch_core`].

pub mod cli;
pub mod format;
pub mod report;
