//! Run configuration: every knob a simulation run takes, with defaults
//! matching the reference scenario (121 nodes on a 1250 m square lattice,
//! 15-minute runs, 125.227 m radio range, random-waypoint mobility).

use std::fmt;
use std::str::FromStr;

use crate::reputation::{LbpFunction, PunishmentConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key {key}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value {value:?} for {key}")]
    MalformedValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid configuration: {what}")]
    Invalid { what: String },
}

/// Which protocol the run exercises: plain source routing, the monitored
/// variant with reputation-driven punishment, or the monitored variant with
/// group-scoped route discovery on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    Pdsr,
    Mdsr,
    Fgmdsr,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Pdsr => "PDSR",
            Variant::Mdsr => "MDSR",
            Variant::Fgmdsr => "FGMDSR",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PDSR" => Ok(Variant::Pdsr),
            "MDSR" => Ok(Variant::Mdsr),
            "FGMDSR" => Ok(Variant::Fgmdsr),
            other => Err(format!("unknown variant {other}")),
        }
    }
}

/// How traffic endpoints are drawn: anywhere on the terrain, or with both
/// ends inside the same group cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowLocality {
    Any,
    IntraGroup,
}

/// What a misbehaving node does with other people's data packets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorProfile {
    /// Probability of silently discarding a data packet it should forward.
    pub data_drop_prob: f64,
    /// Selfish nodes still originate their own traffic and participate in
    /// routing control; only forwarding is shirked.
    pub participates_in_control: bool,
}

impl Default for BehaviorProfile {
    fn default() -> Self {
        Self {
            data_drop_prob: 1.0,
            participates_in_control: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub sim_time_s: f64,
    pub terrain: (f64, f64),
    pub node_count: u32,
    pub pause_s: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub granularity_m: f64,
    pub promiscuous: bool,
    pub radio_range_m: f64,
    pub variant: Variant,
    /// Fraction of the population assigned the selfish profile.
    pub selfish_fraction: f64,
    pub selfish: BehaviorProfile,
    /// Minimum grade an intermediate hop needs for a cached route to be
    /// eligible at the source.
    pub grade_threshold: f64,
    pub punishment: PunishmentConfig,
    /// Length of each monitoring (protected) window.
    pub protected_window_s: f64,
    /// Length of each non-monitoring window between protected ones.
    pub normal_window_s: f64,
    pub group_count: u32,
    pub flow_count: u32,
    pub packet_interval_s: f64,
    pub packet_size_bytes: u32,
    pub flow_locality: FlowLocality,
    /// How long an overhearing node waits for its neighbor to retransmit
    /// before judging the packet dropped.
    pub forward_timeout_s: f64,
    pub seed: u64,
    /// Emit per-node reputation table rows alongside the metrics.
    pub debug_tables: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            sim_time_s: 900.0,
            terrain: (1250.0, 1250.0),
            node_count: 121,
            pause_s: 30.0,
            v_min: 0.0,
            v_max: 10.0,
            granularity_m: 0.5,
            promiscuous: true,
            radio_range_m: 125.227,
            variant: Variant::Mdsr,
            selfish_fraction: 0.0,
            selfish: BehaviorProfile::default(),
            grade_threshold: 0.5,
            punishment: PunishmentConfig::default(),
            protected_window_s: 60.0,
            normal_window_s: 120.0,
            group_count: 4,
            flow_count: 10,
            packet_interval_s: 0.25,
            packet_size_bytes: 512,
            flow_locality: FlowLocality::Any,
            forward_timeout_s: 0.1,
            seed: 1,
            debug_tables: false,
        }
    }
}

impl SimConfig {
    /// Check cross-field consistency. Placement and group errors surface
    /// later from their own constructors; this covers scalar ranges.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |what: &str| Err(ConfigError::Invalid { what: what.into() });
        if self.sim_time_s < 0.0 {
            return fail("simulation time must be non-negative");
        }
        if self.terrain.0 <= 0.0 || self.terrain.1 <= 0.0 {
            return fail("terrain dimensions must be positive");
        }
        if self.node_count == 0 {
            return fail("node count must be positive");
        }
        if !(0.0..=1.0).contains(&self.selfish_fraction) {
            return fail("selfish fraction must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.selfish.data_drop_prob) {
            return fail("selfish drop probability must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.grade_threshold) {
            return fail("grade threshold must lie in [0, 1]");
        }
        if self.v_min < 0.0 || self.v_max < self.v_min {
            return fail("waypoint speeds need 0 <= min <= max");
        }
        if self.granularity_m <= 0.0 {
            return fail("position granularity must be positive");
        }
        if self.pause_s < 0.0 {
            return fail("waypoint pause must be non-negative");
        }
        if self.radio_range_m <= 0.0 {
            return fail("radio range must be positive");
        }
        if self.packet_interval_s <= 0.0 {
            return fail("packet interval must be positive");
        }
        if self.forward_timeout_s <= 0.0 {
            return fail("forward timeout must be positive");
        }
        if self.variant != Variant::Pdsr {
            if !self.promiscuous {
                return fail("monitoring variants need promiscuous mode");
            }
            if self.protected_window_s < 0.1 || self.normal_window_s < 0.1 {
                return fail("mode windows must be at least 0.1 seconds");
            }
        }
        if self.flow_count > 0 && self.node_count < 2 {
            return fail("traffic needs at least two nodes");
        }
        Ok(())
    }

    /// Selfish node count implied by the fraction, rounded half-up.
    pub fn selfish_count(&self) -> u32 {
        (self.selfish_fraction * self.node_count as f64).round() as u32
    }

    /// Selfish fraction as a percentage, for reporting.
    pub fn selfish_pct(&self) -> f64 {
        self.selfish_fraction * 100.0
    }

    pub fn lbp_function(&self) -> LbpFunction {
        self.punishment.lbp_function
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_describe_the_reference_scenario() {
        let c = SimConfig::default();
        assert_eq!(c.sim_time_s, 900.0);
        assert_eq!(c.terrain, (1250.0, 1250.0));
        assert_eq!(c.node_count, 121);
        assert_eq!(c.radio_range_m, 125.227);
        assert_eq!(c.variant, Variant::Mdsr);
        assert_eq!(c.pause_s, 30.0);
        assert_eq!((c.v_min, c.v_max), (0.0, 10.0));
        assert_eq!(c.granularity_m, 0.5);
        assert_eq!(c.grade_threshold, 0.5);
        assert_eq!(c.protected_window_s, 60.0);
        assert_eq!(c.normal_window_s, 120.0);
        assert_eq!(c.flow_count, 10);
        assert_eq!(c.packet_interval_s, 0.25);
        assert_eq!(c.punishment.lbp_function, LbpFunction::Linear);
        assert!(c.promiscuous);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [Variant::Pdsr, Variant::Mdsr, Variant::Fgmdsr] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("DSDV".parse::<Variant>().is_err());
    }

    #[test]
    fn validation_rejects_out_of_range_scalars() {
        let c = SimConfig {
            selfish_fraction: 1.5,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());

        let c = SimConfig {
            v_min: 5.0,
            v_max: 1.0,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());

        let mut c = SimConfig {
            promiscuous: false,
            ..SimConfig::default()
        };
        assert!(c.validate().is_err());
        c.variant = Variant::Pdsr;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn selfish_count_rounds_half_up() {
        let mut c = SimConfig {
            selfish_fraction: 0.1,
            ..SimConfig::default()
        };
        assert_eq!(c.selfish_count(), 12); // 12.1 nodes
        c.selfish_fraction = 0.3;
        assert_eq!(c.selfish_count(), 36); // 36.3
        c.node_count = 10;
        c.selfish_fraction = 0.25;
        assert_eq!(c.selfish_count(), 3); // 2.5 rounds up
    }
}
