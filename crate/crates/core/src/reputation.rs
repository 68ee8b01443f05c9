//! Neighbor-observation bookkeeping and the grade / bonus-point pipeline.
//!
//! Each node keeps one [`NiTable`] with an entry per known neighbor: two
//! observation counters (packets received for forwarding, packets actually
//! forwarded), the neighbor's current grade in `[0, 1]`, and its outstanding
//! bonus points (`bp`) — the number of that neighbor's packets the local node
//! is still entitled to drop. At the end of every protected window the
//! counters are condensed into forwarding-ratio samples, exchanged with
//! neighbors, aggregated into a fresh grade and bonus-point balance, and the
//! counters reset. While an entry's `bp` is positive its counters are frozen:
//! observed drops consume bonus points instead of producing new evidence.

use std::collections::BTreeMap;

use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ReputationError {
    /// A forward was recorded that had no matching receive-for-forwarding.
    #[error("forwarded count would exceed received-for-forwarding count")]
    CounterViolation,
    /// A sanctioned drop was observed for an entry with no bonus points left.
    #[error("no punishment pending for this entry")]
    NoPunishmentPending,
    /// An aggregate was requested over zero samples.
    #[error("cannot aggregate an empty sample set")]
    EmptySamples,
    /// A node was admitted twice.
    #[error("node already has an entry")]
    DuplicateNode,
}

/// How a grade is converted into local bonus points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbpFunction {
    /// `round((1 - grade) * 10)`, yielding 0..=10.
    Linear,
    /// `round(2^((1 - grade) * 10)) - 1`, yielding 0..=1023.
    Exponential,
}

/// Tunables for the grade / bonus-point pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PunishmentConfig {
    pub lbp_function: LbpFunction,
    /// Decimal places the aggregated grade is rounded (half-up) to.
    pub grade_decimals: u32,
}

impl Default for PunishmentConfig {
    fn default() -> Self {
        Self {
            lbp_function: LbpFunction::Linear,
            grade_decimals: 1,
        }
    }
}

/// Per-neighbor forwarding evidence gathered during one protected window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ObservationCounters {
    /// Packets seen handed to the neighbor for forwarding.
    pub nprf: u64,
    /// Packets the neighbor was then seen forwarding.
    pub npf: u64,
}

impl ObservationCounters {
    /// Packet forwarding ratio. With no evidence the neighbor is presumed
    /// cooperative, so `0/0` maps to `1.0`.
    pub fn pfr(&self) -> f64 {
        if self.nprf == 0 {
            1.0
        } else {
            self.npf as f64 / self.nprf as f64
        }
    }
}

/// One neighbor's row in the neighbor-information table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NiEntry {
    pub counters: ObservationCounters,
    pub grade: f64,
    pub bp: u32,
}

impl NiEntry {
    fn fresh() -> Self {
        Self {
            counters: ObservationCounters::default(),
            grade: 1.0,
            bp: 0,
        }
    }
}

/// Neighbor-information table: everything one node believes about the nodes
/// it has overheard.
#[derive(Debug, Clone, Default)]
pub struct NiTable {
    entries: BTreeMap<NodeId, NiEntry>,
}

impl NiTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a fresh entry (counters zero, grade 1.0, no bonus points).
    pub fn admit_new_node(&mut self, node: NodeId) -> Result<(), ReputationError> {
        if self.entries.contains_key(&node) {
            return Err(ReputationError::DuplicateNode);
        }
        self.entries.insert(node, NiEntry::fresh());
        Ok(())
    }

    /// Admit `node` unless it is already known.
    pub fn ensure_known(&mut self, node: NodeId) {
        self.entries.entry(node).or_insert_with(NiEntry::fresh);
    }

    pub fn get(&self, node: NodeId) -> Option<&NiEntry> {
        self.entries.get(&node)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.entries.contains_key(&node)
    }

    /// Grade of `node`, defaulting to fully cooperative for unknown nodes.
    pub fn grade_of(&self, node: NodeId) -> f64 {
        self.entries.get(&node).map_or(1.0, |e| e.grade)
    }

    /// Outstanding bonus points for `node` (zero when unknown).
    pub fn bp_of(&self, node: NodeId) -> u32 {
        self.entries.get(&node).map_or(0, |e| e.bp)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &NiEntry)> {
        self.entries.iter()
    }

    pub fn known_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The neighbor was seen accepting a packet it must forward onward.
    /// Frozen while punishment is pending: the subsequent drop observation
    /// consumes a bonus point instead of counting as evidence.
    pub fn record_received_for_forwarding(&mut self, node: NodeId) {
        let entry = self.entries.entry(node).or_insert_with(NiEntry::fresh);
        if entry.bp == 0 {
            entry.counters.nprf += 1;
        }
    }

    /// The neighbor was seen forwarding a packet previously counted by
    /// [`Self::record_received_for_forwarding`].
    pub fn record_forwarded(&mut self, node: NodeId) -> Result<(), ReputationError> {
        let entry = self.entries.entry(node).or_insert_with(NiEntry::fresh);
        if entry.bp > 0 {
            return Ok(());
        }
        if entry.counters.npf + 1 > entry.counters.nprf {
            return Err(ReputationError::CounterViolation);
        }
        entry.counters.npf += 1;
        Ok(())
    }

    /// A packet involving a punished node was dropped; one bonus point is
    /// consumed. Fails when no punishment is outstanding.
    pub fn observe_sanctioned_drop(&mut self, node: NodeId) -> Result<(), ReputationError> {
        let entry = self
            .entries
            .get_mut(&node)
            .ok_or(ReputationError::NoPunishmentPending)?;
        if entry.bp == 0 {
            return Err(ReputationError::NoPunishmentPending);
        }
        entry.bp -= 1;
        Ok(())
    }

    /// Forwarding-ratio samples for every known neighbor, in id order.
    /// This is the payload of the node's end-of-window ratio broadcast.
    pub fn pfr_reports(&self) -> Vec<(NodeId, f64)> {
        self.entries
            .iter()
            .map(|(node, entry)| (*node, entry.counters.pfr()))
            .collect()
    }

    /// Apply the end-of-window results: replace grade and bonus points for
    /// every subject in `temp`, zero all counters, and clear `temp`.
    /// Returns the `(subject, grade, bp)` rows that were written.
    pub fn apply_writeback(
        &mut self,
        temp: &mut TempTable,
    ) -> Result<Vec<(NodeId, f64, u32)>, ReputationError> {
        let mut written = Vec::with_capacity(temp.entries.len());
        for (subject, cell) in temp.entries.iter() {
            let grade = cell.grade.ok_or(ReputationError::EmptySamples)?;
            let bp = aggregate_bonus_points(&cell.lbp_samples)?;
            let entry = self.entries.entry(*subject).or_insert_with(NiEntry::fresh);
            entry.grade = grade;
            entry.bp = bp;
            written.push((*subject, grade, bp));
        }
        for entry in self.entries.values_mut() {
            entry.counters = ObservationCounters::default();
        }
        temp.entries.clear();
        Ok(written)
    }
}

/// One subject's cell in the per-window scratch table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TempCell {
    pub pfr_samples: Vec<f64>,
    pub grade: Option<f64>,
    pub lbp_samples: Vec<u32>,
}

/// Scratch table filled during the three end-of-window phases: ratio samples
/// (own first, then neighbors' reports), then grades and bonus-point samples.
#[derive(Debug, Clone, Default)]
pub struct TempTable {
    entries: BTreeMap<NodeId, TempCell>,
}

impl TempTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Phase-1 seed: the local node's own ratio observation for `subject`.
    /// Must precede any ingested report so the first sample is always local.
    pub fn seed_own_pfr(&mut self, subject: NodeId, pfr: f64) {
        self.entries
            .entry(subject)
            .or_default()
            .pfr_samples
            .push(pfr);
    }

    /// Append a neighbor's ratio report. Reports about nodes outside
    /// `neighbors` (or never seeded locally) are discarded; duplicates from
    /// the same reporter are kept as independent samples.
    pub fn ingest_pfr_report(
        &mut self,
        subject: NodeId,
        pfr: f64,
        neighbors: &std::collections::BTreeSet<NodeId>,
    ) {
        if !neighbors.contains(&subject) {
            return;
        }
        if let Some(cell) = self.entries.get_mut(&subject) {
            cell.pfr_samples.push(pfr);
        }
    }

    /// Append a neighbor's bonus-point report under the same filtering rules
    /// as [`Self::ingest_pfr_report`].
    pub fn ingest_lbp_report(
        &mut self,
        subject: NodeId,
        lbp: u32,
        neighbors: &std::collections::BTreeSet<NodeId>,
    ) {
        if !neighbors.contains(&subject) {
            return;
        }
        if let Some(cell) = self.entries.get_mut(&subject) {
            cell.lbp_samples.push(lbp);
        }
    }

    /// Phase 2: aggregate each subject's ratio samples into a grade, derive
    /// the local bonus-point sample from it (stored first), and return the
    /// `(subject, lbp)` payloads for the node's bonus-point broadcast.
    pub fn compute_grades(
        &mut self,
        cfg: &PunishmentConfig,
    ) -> Result<Vec<(NodeId, u32)>, ReputationError> {
        let mut reports = Vec::with_capacity(self.entries.len());
        for (subject, cell) in self.entries.iter_mut() {
            let grade = aggregate_grade(&cell.pfr_samples, cfg.grade_decimals)?;
            let lbp = local_bonus_points(grade, cfg);
            cell.grade = Some(grade);
            cell.lbp_samples.push(lbp);
            reports.push((*subject, lbp));
        }
        Ok(reports)
    }

    pub fn get(&self, subject: NodeId) -> Option<&TempCell> {
        self.entries.get(&subject)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Round `x` half-up (away from zero is identical for non-negative input)
/// to `decimals` decimal places.
fn round_half_up(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

/// Mean of the ratio samples, rounded half-up to `decimals` places.
pub fn aggregate_grade(samples: &[f64], decimals: u32) -> Result<f64, ReputationError> {
    if samples.is_empty() {
        return Err(ReputationError::EmptySamples);
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(round_half_up(mean, decimals))
}

/// Bonus points a node assigns locally for a given grade.
pub fn local_bonus_points(grade: f64, cfg: &PunishmentConfig) -> u32 {
    let mg = (1.0 - grade).max(0.0);
    match cfg.lbp_function {
        LbpFunction::Linear => (mg * 10.0).round() as u32,
        LbpFunction::Exponential => {
            let raw = 2f64.powf(mg * 10.0).round() - 1.0;
            raw.max(0.0) as u32
        }
    }
}

/// Mean of the bonus-point samples rounded half-up, in exact integer
/// arithmetic: `floor((2*sum + n) / (2*n))`.
pub fn aggregate_bonus_points(samples: &[u32]) -> Result<u32, ReputationError> {
    if samples.is_empty() {
        return Err(ReputationError::EmptySamples);
    }
    let sum: u64 = samples.iter().map(|&s| s as u64).sum();
    let n = samples.len() as u64;
    Ok(((2 * sum + n) / (2 * n)) as u32)
}
