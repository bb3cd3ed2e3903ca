//! Input format, command dispatch and reports for the `lierine` binary.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{run, Command, GeneratorMode, Options, UsageError};
pub use format::{parse_instance, serialize_instance, InstanceSet, ParseError};
pub use report::Report;
