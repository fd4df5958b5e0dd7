//! Library side of the `flatband` command-line tool: potential input
//! parsing, deterministic CSV/JSON table output, the table-producing
//! commands, and the validation check suite.

pub mod checks;
pub mod commands;
pub mod potential_spec;
pub mod table;
