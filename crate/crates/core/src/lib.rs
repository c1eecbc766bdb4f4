//! Feasibility analysis of RAN function splits between LEO satellites and
//! ground stations, and a deterministic signaling model of conditional
//! handover over the resulting deployments.
//!
//! - [`geometry`]: slant ranges, ISL/IGSL distances and link delays.
//! - [`split_catalog`]: the ten function splits with their fronthaul budgets,
//!   bandwidth and compute figures, and the feasibility rule.
//! - [`topology`]: nodes, links and function placement per scenario and split.
//! - [`cho`]: handover procedures as message DAGs and their timelines.
//! - [`metrics`]: grid runs, ordering checks and JSON/CSV reports.
//! - [`cli`]: the `ntnsplit` command-line surface.

pub mod cho;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod split_catalog;
pub mod topology;

pub use error::{Error, Result};
