//! Library surface of the `diagon` command-line tool: subcommand
//! implementations and the JSON report schema, kept out of `main` so the
//! integration suites can drive them directly.

pub mod commands;
pub mod report;

pub use commands::{
    cmd_classify, cmd_count, cmd_diagonalize, cmd_fit, cmd_verify, exit_code, exit_code_for,
    read_equation, Region, DEFAULT_GRID, DEFAULT_TOLERANCE,
};
pub use report::RunReport;
