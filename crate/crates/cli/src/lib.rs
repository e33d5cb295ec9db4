//! Scenario-file front end for the freechoice library: a small text
//! format describing variables, a causal order (explicit or via
//! spacetime coordinates) and a probability table, plus the commands the
//! `freechoice` binary exposes over it.

pub mod commands;
pub mod diag;
pub mod export;
pub mod lexer;
pub mod parser;
pub mod report;

pub use commands::{CliError, CommandOutput};
pub use diag::Diagnostic;
pub use export::export_scenario;
pub use parser::{parse_scenario, ScenarioFile};
