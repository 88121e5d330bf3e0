//! Library side of the `qlab` command-line tool: suite configuration, the
//! verification suites, report serialization and the `eval`/`table`
//! function registry.

pub mod config;
pub mod error;
pub mod eval;
pub mod report;
pub mod suites;

pub use config::{max_terms_from_env, Suite, SuiteConfig, MAX_TERMS_ENV};
pub use error::{CliError, Result};
pub use eval::{eval, table, Args, EvalOutput, Sweep, TableFormat, REGISTRY};
pub use report::{verify, Summary, VerificationReport, TOOL_VERSION};
