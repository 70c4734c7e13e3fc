//! Batch experiments for [`viscofb_core`]: TOML run plans, CSV trajectories,
//! JSON summaries and seeded operator audits.
//!
//! ```no_run
//! let plan = viscofb::config::parse_config("[[cell]]\nalgorithm = [\"main\", \"three_map\"]\n")?;
//! let summary = viscofb::execute::execute(&plan, std::path::Path::new("out"))?;
//! assert_eq!(summary.cells.len(), 2);
//! # Ok::<(), viscofb::error::RunError>(())
//! ```
#![warn(missing_docs)]

pub mod audits;
pub mod config;
pub mod error;
pub mod execute;
pub mod output;

pub use viscofb_core as core;
