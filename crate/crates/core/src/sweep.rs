//! Batch execution of runs across an experiment axis.
//!
//! A single run is strictly sequential and deterministic; a batch is a
//! cartesian product of axis points, protocol variants, and seeds, where
//! every point owns its config and output row. That independence is what
//! lets the batch fan out across a thread pool: with the default
//! `parallel` feature the points run on rayon, and `run_batch_sequential`
//! remains available for comparison and for builds without the feature.
//! Either way the output rows come back in the same deterministic order
//! (axis value, then variant, then seed).

use crate::config::{SimConfig, Variant};
use crate::metrics::MetricsRecord;
use crate::sim::{self, SimError};

/// The swept dimension. Variants and seeds are separate, always-present
/// dimensions of [`SweepSpec`]; a variant-only comparison is a sweep whose
/// axis holds a single point.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Misbehaving-node fractions in `[0, 1]`.
    SelfishFraction(Vec<f64>),
    /// Network sizes. Terrain is rescaled to keep the lattice spacing of
    /// the base config, and the flow count is rescaled proportionally
    /// (half-up), so density and per-node load stay fixed along the axis.
    NodeCount(Vec<u32>),
}

/// A batch description: one base config, one axis, a variant list, and a
/// seed list.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub axis: SweepAxis,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    /// Expand into labelled per-run configs, sorted by (axis value,
    /// variant, seed). Labels name the axis point (`sf10`, `n49`).
    pub fn expand(&self) -> Vec<(String, SimConfig)> {
        let mut variants = self.variants.clone();
        variants.sort();
        let mut seeds = self.seeds.clone();
        seeds.sort_unstable();

        let mut points: Vec<(String, SimConfig)> = Vec::new();
        match &self.axis {
            SweepAxis::SelfishFraction(fractions) => {
                let mut fractions = fractions.clone();
                fractions.sort_by(f64::total_cmp);
                for &f in &fractions {
                    let mut cfg = self.base.clone();
                    cfg.selfish_fraction = f;
                    points.push((format!("sf{}", f * 100.0), cfg));
                }
            }
            SweepAxis::NodeCount(counts) => {
                let mut counts = counts.clone();
                counts.sort_unstable();
                for &n in &counts {
                    points.push((format!("n{n}"), scale_to(&self.base, n)));
                }
            }
        }

        let mut runs = Vec::with_capacity(points.len() * variants.len() * seeds.len());
        for (label, cfg) in points {
            for &variant in &variants {
                for &seed in &seeds {
                    let mut cfg = cfg.clone();
                    cfg.variant = variant;
                    cfg.seed = seed;
                    runs.push((label.clone(), cfg));
                }
            }
        }
        runs
    }
}

/// Rebase the config on `node_count` nodes at unchanged density and
/// per-node traffic load.
fn scale_to(base: &SimConfig, node_count: u32) -> SimConfig {
    let mut cfg = base.clone();
    cfg.node_count = node_count;
    let m_base = (base.node_count as f64).sqrt().round();
    let m_new = (node_count as f64).sqrt().round();
    if m_base > 1.0 && m_new > 1.0 {
        let stretch = (m_new - 1.0) / (m_base - 1.0);
        cfg.terrain = (base.terrain.0 * stretch, base.terrain.1 * stretch);
    }
    if base.node_count > 0 {
        let flows = base.flow_count as f64 * node_count as f64 / base.node_count as f64;
        cfg.flow_count = flows.round() as u32;
    }
    cfg
}

/// Run the whole batch and collect one metrics row per point, in the
/// expansion order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<(String, MetricsRecord)>, SimError> {
    run_points(spec.expand())
}

/// Run labelled configs on whatever schedule the build provides: the rayon
/// pool under the `parallel` feature (the default), the calling thread
/// otherwise. Results are identical either way, in input order.
pub fn run_points(
    points: Vec<(String, SimConfig)>,
) -> Result<Vec<(String, MetricsRecord)>, SimError> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(points)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(points)
    }
}

/// Execute labelled configs one after another on the calling thread.
pub fn run_batch_sequential(
    points: Vec<(String, SimConfig)>,
) -> Result<Vec<(String, MetricsRecord)>, SimError> {
    points
        .into_iter()
        .map(|(label, cfg)| sim::run(&cfg).map(|out| (label, out.metrics)))
        .collect()
}

/// Execute labelled configs across the rayon thread pool. Collection is
/// index-preserving, so the row order matches the input order exactly.
#[cfg(feature = "parallel")]
pub fn run_batch_parallel(
    points: Vec<(String, SimConfig)>,
) -> Result<Vec<(String, MetricsRecord)>, SimError> {
    use rayon::prelude::*;
    points
        .into_par_iter()
        .map(|(label, cfg)| sim::run(&cfg).map(|out| (label, out.metrics)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_base() -> SimConfig {
        SimConfig {
            node_count: 9,
            terrain: (250.0, 250.0),
            sim_time_s: 12.0,
            flow_count: 2,
            packet_interval_s: 0.5,
            v_max: 0.0,
            v_min: 0.0,
            protected_window_s: 3.0,
            normal_window_s: 3.0,
            ..SimConfig::default()
        }
    }

    #[test]
    fn five_fractions_two_variants_three_seeds_is_thirty_rows() {
        let spec = SweepSpec {
            base: desk_base(),
            axis: SweepAxis::SelfishFraction(vec![0.0, 0.1, 0.2, 0.3, 0.4]),
            variants: vec![Variant::Pdsr, Variant::Mdsr],
            seeds: vec![1, 2, 3],
        };
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 30);
        // sorted by axis value, then variant, then seed
        assert_eq!(rows[0].0, "sf0");
        assert_eq!(rows[0].1.variant, Variant::Pdsr);
        assert_eq!(rows[0].1.seed, 1);
        assert_eq!(rows[2].1.seed, 3);
        assert_eq!(rows[3].1.variant, Variant::Mdsr);
        assert_eq!(rows[6].0, "sf10");
        assert_eq!(rows[29].0, "sf40");
        assert_eq!(rows[29].1.variant, Variant::Mdsr);
        assert_eq!(rows[29].1.seed, 3);
        for (_, rec) in &rows {
            assert_eq!(rec.node_count, 9);
        }
    }

    #[test]
    fn node_axis_keeps_density_and_per_node_load() {
        let mut base = desk_base();
        base.node_count = 121;
        base.terrain = (1250.0, 1250.0);
        base.flow_count = 60;
        let spec = SweepSpec {
            base,
            axis: SweepAxis::NodeCount(vec![121, 49, 81]),
            variants: vec![Variant::Mdsr],
            seeds: vec![7],
        };
        let points = spec.expand();
        let dims: Vec<_> = points
            .iter()
            .map(|(label, cfg)| {
                (
                    label.as_str(),
                    cfg.node_count,
                    cfg.terrain.0,
                    cfg.flow_count,
                )
            })
            .collect();
        assert_eq!(
            dims,
            vec![
                ("n49", 49, 750.0, 24),
                ("n81", 81, 1000.0, 40),
                ("n121", 121, 1250.0, 60),
            ]
        );
    }

    #[test]
    fn repeat_invocations_and_both_schedules_agree() {
        let spec = SweepSpec {
            base: desk_base(),
            axis: SweepAxis::SelfishFraction(vec![0.0, 0.3]),
            variants: vec![Variant::Mdsr],
            seeds: vec![11, 12],
        };
        let first = run_sweep(&spec).unwrap();
        let second = run_sweep(&spec).unwrap();
        assert_eq!(first, second);
        let sequential = run_batch_sequential(spec.expand()).unwrap();
        assert_eq!(first, sequential);
    }

    #[test]
    fn bad_point_fails_the_batch() {
        let mut base = desk_base();
        base.node_count = 50; // not a lattice-shaped population
        let spec = SweepSpec {
            base,
            axis: SweepAxis::SelfishFraction(vec![0.0]),
            variants: vec![Variant::Pdsr],
            seeds: vec![1],
        };
        assert!(run_sweep(&spec).is_err());
    }
}
