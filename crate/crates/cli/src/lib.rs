//! Spec files, reports and subcommand logic for the `ergochan` binary.
//!
//! All numbers in spec and report files use the encoding in [`json`]:
//! 17 significant digits, `[re, im]` pairs for complex values, `null` for
//! non-finite values.

pub mod commands;
pub mod error;
pub mod json;
pub mod report;
pub mod spec;

pub use commands::{analyze, catalog_spec, fixed_space_report, iterate, verify, AnalyzeOptions, Outcome};
pub use error::CliError;
pub use report::{AnalysisReport, FixedSpaceReport, IterateReport, VerifyReport};
pub use spec::{load_matrix, load_spec, parse_spec, ChannelSpecFile};
