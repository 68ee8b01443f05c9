//! Run metrics and their serialized forms: a fixed-schema CSV (one row per
//! run) and derived gnuplot-style series files, plus the optional
//! reputation-table debug dump.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::config::Variant;
use crate::NodeId;

pub const CSV_HEADER: &str = "label,variant,selfish_pct,node_count,seed,sent,received,pdr,\
rreq,rrep,rerr,pfr_reports,lbp_reports,total_overhead,\
drops_selfish,drops_punishment,drops_no_route";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("received {received} exceeds sent {sent}")]
    CountInversion { sent: u64, received: u64 },
    #[error("csv header does not match the expected schema")]
    MissingColumns,
    #[error("csv line {line} is malformed")]
    MalformedRow { line: usize },
}

/// Everything one run reports. Control transmissions are counted per
/// on-air transmission (every rebroadcast of a flood counts), data counts
/// are end-to-end except `data_forwards`, which tallies each relay hop.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub variant: Variant,
    /// Selfish share of the population, in percent (0..=100).
    pub selfish_pct: f64,
    pub node_count: u32,
    pub seed: u64,
    pub sent: u64,
    pub received: u64,
    /// Data transmissions made by intermediate hops (origin sends excluded).
    pub data_forwards: u64,
    pub rreq_tx: u64,
    pub rrep_tx: u64,
    pub rerr_tx: u64,
    pub pfr_report_tx: u64,
    pub lbp_report_tx: u64,
    pub drops_selfish: u64,
    pub drops_punishment: u64,
    pub drops_no_route: u64,
    /// Energy proxy: every on-air transmission, tallied per sender.
    pub per_node_transmissions: BTreeMap<NodeId, u64>,
}

impl MetricsRecord {
    pub fn pdr(&self) -> Result<f64, MetricsError> {
        compute_pdr(self.sent, self.received)
    }

    /// All control transmissions: routing plus reputation reports.
    pub fn total_overhead(&self) -> u64 {
        self.rreq_tx + self.rrep_tx + self.rerr_tx + self.pfr_report_tx + self.lbp_report_tx
    }
}

/// Delivered fraction of originated data packets; a run that sent nothing
/// delivered everything it sent.
pub fn compute_pdr(sent: u64, received: u64) -> Result<f64, MetricsError> {
    if received > sent {
        return Err(MetricsError::CountInversion { sent, received });
    }
    if sent == 0 {
        return Ok(1.0);
    }
    Ok(received as f64 / sent as f64)
}

/// Render labeled records as CSV, one row per record, fixed column order,
/// reals with six decimals.
pub fn emit_csv(rows: &[(String, MetricsRecord)]) -> Result<String, MetricsError> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (label, r) in rows {
        let pdr = r.pdr()?;
        writeln!(
            out,
            "{},{},{:.6},{},{},{},{},{:.6},{},{},{},{},{},{},{},{},{}",
            label,
            r.variant,
            r.selfish_pct,
            r.node_count,
            r.seed,
            r.sent,
            r.received,
            pdr,
            r.rreq_tx,
            r.rrep_tx,
            r.rerr_tx,
            r.pfr_report_tx,
            r.lbp_report_tx,
            r.total_overhead(),
            r.drops_selfish,
            r.drops_punishment,
            r.drops_no_route,
        )
        .expect("writing to a String cannot fail");
    }
    Ok(out)
}

/// Parse CSV produced by [`emit_csv`] back into labeled records. The CSV
/// schema does not carry `data_forwards` or the per-node transmission map,
/// so parsed records leave them empty.
pub fn parse_csv(text: &str) -> Result<Vec<(String, MetricsRecord)>, MetricsError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => return Err(MetricsError::MissingColumns),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let bad = MetricsError::MalformedRow { line: idx + 1 };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 17 {
            return Err(bad);
        }
        let record = MetricsRecord {
            variant: f[1].parse().map_err(|_| bad.clone())?,
            selfish_pct: f[2].parse().map_err(|_| bad.clone())?,
            node_count: f[3].parse().map_err(|_| bad.clone())?,
            seed: f[4].parse().map_err(|_| bad.clone())?,
            sent: f[5].parse().map_err(|_| bad.clone())?,
            received: f[6].parse().map_err(|_| bad.clone())?,
            data_forwards: 0,
            rreq_tx: f[8].parse().map_err(|_| bad.clone())?,
            rrep_tx: f[9].parse().map_err(|_| bad.clone())?,
            rerr_tx: f[10].parse().map_err(|_| bad.clone())?,
            pfr_report_tx: f[11].parse().map_err(|_| bad.clone())?,
            lbp_report_tx: f[12].parse().map_err(|_| bad.clone())?,
            drops_selfish: f[14].parse().map_err(|_| bad.clone())?,
            drops_punishment: f[15].parse().map_err(|_| bad.clone())?,
            drops_no_route: f[16].parse().map_err(|_| bad.clone())?,
            per_node_transmissions: BTreeMap::new(),
        };
        rows.push((f[0].to_string(), record));
    }
    Ok(rows)
}

/// Derive plot series from run CSV: delivery ratio against selfish share
/// and control overhead against network size, one file per variant, seeds
/// averaged per x value. Returns `(file_name, file_body)` pairs.
pub fn emit_plot_data(csv: &str) -> Result<Vec<(String, String)>, MetricsError> {
    let rows = parse_csv(csv)?;
    let mut pdr_series: BTreeMap<(Variant, i64), Vec<f64>> = BTreeMap::new();
    let mut overhead_series: BTreeMap<(Variant, u32), Vec<f64>> = BTreeMap::new();
    for (_, r) in &rows {
        // keyed on micro-percent so the float is usable as a map key
        let pct_key = (r.selfish_pct * 1_000_000.0).round() as i64;
        pdr_series
            .entry((r.variant, pct_key))
            .or_default()
            .push(r.pdr()?);
        overhead_series
            .entry((r.variant, r.node_count))
            .or_default()
            .push(r.total_overhead() as f64);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mut files = Vec::new();
    for variant in [Variant::Pdsr, Variant::Mdsr, Variant::Fgmdsr] {
        let mut body = String::new();
        for ((_, pct_key), ys) in pdr_series.iter().filter(|((v, _), _)| *v == variant) {
            let pct = *pct_key as f64 / 1_000_000.0;
            writeln!(body, "{:.6} {:.6}", pct, mean(ys)).unwrap();
        }
        if !body.is_empty() {
            files.push((format!("pdr_vs_selfish_{variant}.dat"), body));
        }
        let mut body = String::new();
        for ((_, n), ys) in overhead_series.iter().filter(|((v, _), _)| *v == variant) {
            writeln!(body, "{} {:.6}", n, mean(ys)).unwrap();
        }
        if !body.is_empty() {
            files.push((format!("overhead_vs_nodes_{variant}.dat"), body));
        }
    }
    Ok(files)
}

/// One reputation-table row in a debug dump: how `node` currently sees
/// `neighbor`.
#[derive(Debug, Clone, PartialEq)]
pub struct NiDebugRow {
    pub time_s: f64,
    pub node: NodeId,
    pub neighbor: NodeId,
    pub nprf: u64,
    pub npf: u64,
    pub grade: f64,
    pub bp: u32,
}

pub fn render_ni_rows(rows: &[NiDebugRow]) -> String {
    let mut out = String::from("time_s,node,neighbor,nprf,npf,grade,bp\n");
    for r in rows {
        writeln!(
            out,
            "{:.6},{},{},{},{},{:.1},{}",
            r.time_s, r.node, r.neighbor, r.nprf, r.npf, r.grade, r.bp
        )
        .unwrap();
    }
    out
}
