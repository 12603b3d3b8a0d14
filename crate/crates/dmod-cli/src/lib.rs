//! Problem files, result documents and command dispatch behind the `dmod`
//! binary.

pub mod doc;
pub mod problem;
pub mod run;

pub use doc::{Payload, ResultDocument, SCHEMA};
pub use problem::{parse, Localization, Module, ProblemFile};
pub use run::{execute, Cli, CliError, Command};
