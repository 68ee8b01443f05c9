//! Deterministic discrete-event simulator for mobile ad-hoc networks running
//! DSR-style source routing, with an optional reputation layer (neighbor
//! observation -> grades -> bonus-point punishment) and a friendly-group
//! variant that scopes route-request floods to terrain partitions.
//!
//! The crate is organised around one [`sim::run`] entry point that turns a
//! [`config::SimConfig`] into a [`metrics::MetricsRecord`], plus a
//! [`sweep`] module that evaluates whole parameter sweeps (in parallel when
//! the `parallel` feature is enabled, the default).

pub mod config;
pub mod configtext;
pub mod dsr;
pub mod groups;
pub mod metrics;
pub mod mobility;
pub mod radio;
pub mod reputation;
pub mod sim;
pub mod sweep;

/// Identifier of a simulated node. Nodes are numbered densely from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub use config::{SimConfig, Variant};
pub use configtext::{apply_config, parse_config, render_config};
pub use metrics::{emit_csv, emit_plot_data, MetricsRecord};
pub use sim::{run, run_scenario, AuditReport, RunOutput, Scenario, SimError};
pub use sweep::{run_points, run_sweep, SweepAxis, SweepSpec};
