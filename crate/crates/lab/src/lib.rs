//! Verification suites, derivation reports and text exports for
//! `cartan-ho-core`. The binary is a thin wrapper over [`cli::run`].

pub mod cli;
pub mod export;
pub mod report;
pub mod suites;

pub use export::{Document, ExportKind};
pub use report::Report;
pub use suites::{Lab, Suite, DEFAULT_SEED};
