//! The discrete-event engine tying everything together: radio delivery,
//! mobility, source-routed forwarding, neighbor monitoring, end-of-window
//! reputation exchange, and bonus-point punishment.
//!
//! Time is `u64` microseconds. Every transmission reaches the transmitter's
//! current radio neighbors after one fixed hop latency; nodes in promiscuous
//! range overhear everything, which is what the monitoring machinery feeds
//! on. Runs are fully deterministic for a given configuration: all
//! randomness derives from split, seeded streams, and simultaneous events
//! execute in scheduling order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, FlowLocality, SimConfig, Variant};
use crate::dsr::{
    self, FilterOutcome, Packet, RerrOutcome, RouteCache, RrepOutcome, RreqOutcome, SourceRoute,
};
use crate::groups::{GroupAssignment, GroupError};
use crate::metrics::{MetricsRecord, NiDebugRow};
use crate::mobility::{Waypoint, WaypointParams, US_PER_S};
use crate::radio::{self, PlacementError};
use crate::reputation::{NiTable, TempTable};
use crate::NodeId;

/// One-hop transmission latency.
const LATENCY_US: u64 = 1_000;
/// Gap between the end-of-window bookkeeping phases.
const PHASE_GAP_US: u64 = 10_000;
/// How long a discovery origin waits for a reply before backing off.
const RREQ_TIMEOUT_US: u64 = 2_000_000;
/// First discovery backoff; doubles per consecutive failure.
const BACKOFF_BASE_US: u64 = 1_000_000;
/// Discovery backoff ceiling.
const BACKOFF_CAP_US: u64 = 8_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error(transparent)]
    Groups(#[from] GroupError),
}

/// Optional overrides for scripted experiments: pin the traffic endpoints
/// and/or the misbehaving nodes instead of drawing them from the seed.
#[derive(Debug, Clone, Copy, Default)]
pub struct Scenario<'a> {
    pub flows: Option<&'a [(NodeId, NodeId)]>,
    pub selfish: Option<&'a [NodeId]>,
}

/// Invariant bookkeeping accumulated during a run. `violations` must stay
/// empty; everything else is observability for tests and analysis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    /// Human-readable descriptions of any violated invariant.
    pub violations: Vec<String>,
    /// Bonus points consumed, over all observers and causes.
    pub bp_consumed: u64,
    /// Times a consumption drained a pair's bonus points to zero, re-admitting
    /// the subject to service until the next writeback.
    pub readmissions: u64,
    /// Count of end-of-window writes that assigned outstanding bonus points.
    pub sanctions_written: u64,
    /// Observer-subject pairs that were ever assigned bonus points.
    pub pairs_sanctioned: usize,
    /// Sanctioned pairs whose bonus points were fully consumed by the end.
    pub pairs_readmitted: usize,
    /// Sanctioned pairs with bonus points still outstanding at the end.
    pub pairs_pending: usize,
    /// Forwarding-evidence counter updates outside protected windows
    /// (must be zero).
    pub counter_updates_in_normal: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub metrics: MetricsRecord,
    pub audit: AuditReport,
    /// Final reputation tables, one row per (node, neighbor), when
    /// `debug_tables` is set.
    pub ni_rows: Vec<NiDebugRow>,
    /// Data packets neither delivered nor dropped when the clock ran out.
    pub in_flight_end: u64,
}

pub fn run(cfg: &SimConfig) -> Result<RunOutput, SimError> {
    run_scenario(cfg, Scenario::default())
}

pub fn run_scenario(cfg: &SimConfig, scenario: Scenario) -> Result<RunOutput, SimError> {
    cfg.validate()?;
    let mut engine = Engine::new(cfg, scenario)?;
    engine.run_loop();
    Ok(engine.finish())
}

/// Passive-acknowledgment watch: the sender listens for its next hop
/// retransmitting, and reports this link broken if it never does.
#[derive(Debug, Clone)]
struct MaintWatch {
    broken: (NodeId, NodeId),
    /// Transmission path for the link-break notice, from this node back to
    /// the data origin. A single entry means this node is the origin.
    path_to_origin: Vec<NodeId>,
}

/// Monitoring watch: an overhearing node waits for the subject to forward.
/// `counted` records whether the hand-off entered the evidence counters
/// (it does not while the subject is under punishment).
#[derive(Debug, Clone, Copy)]
struct RepWatch {
    counted: bool,
}

#[derive(Debug, Clone, Default)]
struct WatchEntry {
    maint: Option<MaintWatch>,
    rep: Option<RepWatch>,
}

#[derive(Debug, Clone, Default)]
struct DiscoveryState {
    outstanding: Option<u64>,
    queue: VecDeque<u64>,
    failures: u32,
    next_allowed_us: u64,
}

#[derive(Debug, Default)]
struct Node {
    selfish: bool,
    ni: NiTable,
    temp: TempTable,
    cache: RouteCache,
    seen_rreqs: BTreeSet<(NodeId, u64)>,
    next_request_id: u64,
    discovery: BTreeMap<NodeId, DiscoveryState>,
    /// Outstanding watches keyed by (subject, payload id).
    watches: BTreeMap<(NodeId, u64), WatchEntry>,
    /// Nodes this node wrote outstanding bonus points for at the last
    /// writeback. Packets whose parties appear here are expected to be
    /// punish-dropped by others, so their fate is not counted as evidence.
    sanctioned: BTreeSet<NodeId>,
}

#[derive(Debug, Clone)]
enum Event {
    Deliver {
        to: NodeId,
        from: NodeId,
        packet: Packet,
    },
    MobilityWake {
        node: NodeId,
    },
    ModeSwitch {
        to_protected: bool,
    },
    /// End-of-window bookkeeping: 1 = ratio broadcast, 2 = grade and
    /// bonus-point broadcast, 3 = table writeback.
    EpochPhase {
        phase: u8,
    },
    TrafficGen {
        flow: usize,
    },
    ForwardTimeout {
        observer: NodeId,
        subject: NodeId,
        payload_id: u64,
    },
    RreqTimeout {
        origin: NodeId,
        destination: NodeId,
        request_id: u64,
    },
}

#[derive(Debug, Default)]
struct Counts {
    sent: u64,
    received: u64,
    data_forwards: u64,
    rreq_tx: u64,
    rrep_tx: u64,
    rerr_tx: u64,
    pfr_report_tx: u64,
    lbp_report_tx: u64,
    drops_selfish: u64,
    drops_punishment: u64,
    drops_no_route: u64,
}

/// Per (observer, subject) punishment accounting. `window_budget` is the
/// bonus points outstanding after the last writeback; drops in the window
/// since then (`window_consumed`) must never exceed it.
#[derive(Debug, Default)]
struct PairLedger {
    writes: u32,
    consumed: u64,
    window_budget: u32,
    window_consumed: u64,
}

struct Engine {
    cfg: SimConfig,
    monitoring: bool,
    protected: bool,
    end_us: u64,
    now: u64,
    seq: u64,
    events: BTreeMap<(u64, u64), Event>,
    pos: Vec<(f64, f64)>,
    nodes: Vec<Node>,
    waypoints: Vec<Option<Waypoint>>,
    mobility_rngs: Vec<ChaCha8Rng>,
    drop_rng: ChaCha8Rng,
    static_neighbors: Option<Vec<Vec<NodeId>>>,
    groups: Option<GroupAssignment>,
    flows: Vec<(NodeId, NodeId)>,
    selfish_pct: f64,
    next_payload_id: u64,
    /// Data packets generated but not yet delivered or dropped.
    live: BTreeSet<u64>,
    counts: Counts,
    /// On-air transmissions per node, all packet kinds (energy proxy).
    node_tx: Vec<u64>,
    audit: AuditReport,
    ledger: BTreeMap<(NodeId, NodeId), PairLedger>,
}

impl Engine {
    fn new(cfg: &SimConfig, scenario: Scenario) -> Result<Self, SimError> {
        let n = cfg.node_count;
        let pos = radio::place_grid(n, cfg.terrain)?;
        let monitoring = cfg.variant != Variant::Pdsr;

        let groups =
            if cfg.variant == Variant::Fgmdsr || cfg.flow_locality == FlowLocality::IntraGroup {
                Some(GroupAssignment::partition(
                    &pos,
                    cfg.terrain,
                    cfg.group_count,
                    cfg.radio_range_m,
                )?)
            } else {
                None
            };

        let stream_rng = |stream: u64| {
            let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
            r.set_stream(stream);
            r
        };

        let selfish_set: BTreeSet<NodeId> = match scenario.selfish {
            Some(list) => {
                for &s in list {
                    if s.index() >= n as usize {
                        return Err(ConfigError::Invalid {
                            what: format!("selfish node {s} out of range"),
                        }
                        .into());
                    }
                }
                list.iter().copied().collect()
            }
            None => {
                let mut order: Vec<NodeId> = (0..n).map(NodeId).collect();
                order.shuffle(&mut stream_rng(1));
                let count = cfg.selfish_count() as usize;
                order.into_iter().take(count).collect()
            }
        };
        let selfish_pct = selfish_set.len() as f64 / n as f64 * 100.0;
        let selfish_pct = match scenario.selfish {
            Some(_) => selfish_pct,
            None => cfg.selfish_fraction * 100.0,
        };

        let flows = match scenario.flows {
            Some(list) => {
                for &(s, d) in list {
                    if s.index() >= n as usize || d.index() >= n as usize || s == d {
                        return Err(ConfigError::Invalid {
                            what: format!("flow {s} -> {d} is not a valid node pair"),
                        }
                        .into());
                    }
                }
                list.to_vec()
            }
            None => {
                let mut rng = stream_rng(2);
                let mut flows = Vec::with_capacity(cfg.flow_count as usize);
                for _ in 0..cfg.flow_count {
                    let src = NodeId(rng.gen_range(0..n));
                    let mut dst;
                    let mut tries = 0u32;
                    loop {
                        dst = NodeId(rng.gen_range(0..n));
                        let same_group = match (&groups, cfg.flow_locality) {
                            (Some(g), FlowLocality::IntraGroup) => {
                                g.group_of(dst) == g.group_of(src)
                            }
                            _ => true,
                        };
                        if dst != src && same_group {
                            break;
                        }
                        tries += 1;
                        if tries > 10_000 {
                            return Err(ConfigError::Invalid {
                                what: "could not draw an intra-group flow".into(),
                            }
                            .into());
                        }
                    }
                    flows.push((src, dst));
                }
                flows
            }
        };

        let wp_params = WaypointParams {
            terrain: cfg.terrain,
            pause_s: cfg.pause_s,
            v_min: cfg.v_min,
            v_max: cfg.v_max,
            granularity_m: cfg.granularity_m,
        };
        let mut waypoints = Vec::with_capacity(n as usize);
        let mut first_wakes = Vec::new();
        for i in 0..n {
            let (wp, first) = Waypoint::new(wp_params);
            match first {
                Some(t) => {
                    waypoints.push(Some(wp));
                    first_wakes.push((t, NodeId(i)));
                }
                None => waypoints.push(None),
            }
        }
        let static_neighbors = if cfg.v_max == 0.0 {
            Some(
                (0..n)
                    .map(|i| radio::neighbors(&pos, NodeId(i), cfg.radio_range_m))
                    .collect(),
            )
        } else {
            None
        };

        let mut nodes = Vec::with_capacity(n as usize);
        for i in 0..n {
            nodes.push(Node {
                selfish: selfish_set.contains(&NodeId(i)),
                ..Node::default()
            });
        }

        let mut engine = Engine {
            cfg: cfg.clone(),
            monitoring,
            protected: monitoring,
            end_us: (cfg.sim_time_s * US_PER_S as f64).round() as u64,
            now: 0,
            seq: 0,
            events: BTreeMap::new(),
            pos,
            nodes,
            waypoints,
            mobility_rngs: (0..n).map(|i| stream_rng(1_000 + i as u64)).collect(),
            drop_rng: stream_rng(3),
            static_neighbors,
            groups,
            flows,
            selfish_pct,
            next_payload_id: 1,
            live: BTreeSet::new(),
            counts: Counts::default(),
            node_tx: vec![0; n as usize],
            audit: AuditReport::default(),
            ledger: BTreeMap::new(),
        };

        for (t, node) in first_wakes {
            engine.push(t, Event::MobilityWake { node });
        }
        let interval_us = ((cfg.packet_interval_s * US_PER_S as f64).round() as u64).max(1);
        let flow_count = engine.flows.len() as u64;
        for i in 0..engine.flows.len() {
            let offset = interval_us * (i as u64 + 1) / flow_count;
            engine.push(offset.max(1), Event::TrafficGen { flow: i });
        }
        if monitoring {
            engine.schedule_protected_window(0);
        }
        Ok(engine)
    }

    fn push(&mut self, t: u64, ev: Event) {
        self.events.insert((t, self.seq), ev);
        self.seq += 1;
    }

    fn protected_us(&self) -> u64 {
        (self.cfg.protected_window_s * US_PER_S as f64).round() as u64
    }

    fn normal_us(&self) -> u64 {
        (self.cfg.normal_window_s * US_PER_S as f64).round() as u64
    }

    fn interval_us(&self) -> u64 {
        ((self.cfg.packet_interval_s * US_PER_S as f64).round() as u64).max(1)
    }

    fn timeout_us(&self) -> u64 {
        ((self.cfg.forward_timeout_s * US_PER_S as f64).round() as u64).max(2 * LATENCY_US + 1)
    }

    fn schedule_protected_window(&mut self, start: u64) {
        let t_end = start + self.protected_us();
        self.push(t_end - 3 * PHASE_GAP_US, Event::EpochPhase { phase: 1 });
        self.push(t_end - 2 * PHASE_GAP_US, Event::EpochPhase { phase: 2 });
        self.push(t_end - PHASE_GAP_US, Event::EpochPhase { phase: 3 });
        self.push(
            t_end,
            Event::ModeSwitch {
                to_protected: false,
            },
        );
    }

    fn in_range(&self, a: NodeId, b: NodeId) -> bool {
        radio::within_range(
            self.pos[a.index()],
            self.pos[b.index()],
            self.cfg.radio_range_m,
        )
    }

    fn neighbors_of(&self, n: NodeId) -> Vec<NodeId> {
        match &self.static_neighbors {
            Some(table) => table[n.index()].clone(),
            None => radio::neighbors(&self.pos, n, self.cfg.radio_range_m),
        }
    }

    fn run_loop(&mut self) {
        while let Some((&(t, _), _)) = self.events.first_key_value() {
            if t > self.end_us {
                break;
            }
            let ((t, _), ev) = self.events.pop_first().expect("peeked entry exists");
            self.now = t;
            self.dispatch(ev);
        }
    }

    fn dispatch(&mut self, ev: Event) {
        match ev {
            Event::Deliver { to, from, packet } => self.on_deliver(to, from, packet),
            Event::MobilityWake { node } => self.on_mobility(node),
            Event::ModeSwitch { to_protected } => self.on_mode_switch(to_protected),
            Event::EpochPhase { phase } => self.on_phase(phase),
            Event::TrafficGen { flow } => self.on_traffic(flow),
            Event::ForwardTimeout {
                observer,
                subject,
                payload_id,
            } => self.on_forward_timeout(observer, subject, payload_id),
            Event::RreqTimeout {
                origin,
                destination,
                request_id,
            } => self.on_rreq_timeout(origin, destination, request_id),
        }
    }

    /// Put a packet on the air: it reaches every current radio neighbor
    /// after one hop latency. Control transmissions are tallied here.
    fn transmit(&mut self, from: NodeId, packet: Packet) {
        self.node_tx[from.index()] += 1;
        match &packet {
            Packet::Rreq { .. } => self.counts.rreq_tx += 1,
            Packet::Rrep { .. } => self.counts.rrep_tx += 1,
            Packet::Rerr { .. } => self.counts.rerr_tx += 1,
            Packet::PfrReport { .. } => self.counts.pfr_report_tx += 1,
            Packet::LbpReport { .. } => self.counts.lbp_report_tx += 1,
            // hop_index 1 is the origin's own send; beyond that it is a relay
            Packet::Data { hop_index, .. } if *hop_index >= 2 => self.counts.data_forwards += 1,
            Packet::Data { .. } => {}
        }
        let t = self.now + LATENCY_US;
        for to in self.neighbors_of(from) {
            self.push(
                t,
                Event::Deliver {
                    to,
                    from,
                    packet: packet.clone(),
                },
            );
        }
    }

    fn note_bp_consumed(&mut self, observer: NodeId, subject: NodeId) {
        self.audit.bp_consumed += 1;
        let entry = self.ledger.entry((observer, subject)).or_default();
        entry.consumed += 1;
        entry.window_consumed += 1;
        if self.nodes[observer.index()].ni.bp_of(subject) == 0 {
            self.audit.readmissions += 1;
        }
    }

    /// Whether none of `parties` is currently sanctioned by `observer`;
    /// watches are only armed for packets with a clean cast, because a
    /// sanctioned party makes a punishment drop the expected outcome.
    fn parties_clear(&self, observer: NodeId, parties: &[NodeId]) -> bool {
        let s = &self.nodes[observer.index()].sanctioned;
        parties.iter().all(|p| !s.contains(p))
    }

    /// Transmit a data packet addressed to `route[hop_index]`, arming the
    /// sender-side watches. An unreachable next hop becomes an immediate
    /// routing drop with local eviction and a link-break notice upstream.
    fn transmit_data(&mut self, me: NodeId, route: SourceRoute, hop_index: usize, pid: u64) {
        let next = route.0[hop_index];
        if !self.in_range(me, next) {
            self.counts.drops_no_route += 1;
            self.live.remove(&pid);
            self.nodes[me.index()].cache.evict_link(me, next);
            if hop_index >= 2 {
                let mut path: Vec<NodeId> = route.0[..hop_index].to_vec();
                path.reverse();
                self.transmit(
                    me,
                    Packet::Rerr {
                        broken: (me, next),
                        path,
                        hop_index: 1,
                    },
                );
            }
            return;
        }
        if hop_index + 1 < route.len() {
            let mut path_to_origin: Vec<NodeId> = route.0[..hop_index].to_vec();
            path_to_origin.reverse();
            let maint = MaintWatch {
                broken: (next, route.0[hop_index + 1]),
                path_to_origin,
            };
            let arm_rep = self.monitoring
                && self.protected
                && self.parties_clear(me, &[route.origin(), route.destination()]);
            let node = &mut self.nodes[me.index()];
            let rep = if arm_rep {
                let counted = node.ni.bp_of(next) == 0;
                if counted {
                    node.ni.record_received_for_forwarding(next);
                }
                Some(RepWatch { counted })
            } else {
                None
            };
            node.watches.insert(
                (next, pid),
                WatchEntry {
                    maint: Some(maint),
                    rep,
                },
            );
            let due = self.now + self.timeout_us();
            self.push(
                due,
                Event::ForwardTimeout {
                    observer: me,
                    subject: next,
                    payload_id: pid,
                },
            );
        }
        self.transmit(
            me,
            Packet::Data {
                route,
                hop_index,
                payload_id: pid,
            },
        );
    }

    /// Origin-side send: use a cached qualifying route, otherwise queue the
    /// packet behind a (possibly new) discovery, or drop it during backoff.
    fn try_send(&mut self, origin: NodeId, destination: NodeId, pid: u64) {
        let route = {
            let node = &self.nodes[origin.index()];
            node.cache
                .select_route(
                    destination,
                    |n| node.ni.grade_of(n),
                    self.cfg.grade_threshold,
                )
                .cloned()
        };
        if let Some(route) = route {
            self.transmit_data(origin, route, 1, pid);
            return;
        }
        let now = self.now;
        let node = &mut self.nodes[origin.index()];
        let disc = node.discovery.entry(destination).or_default();
        if disc.outstanding.is_some() {
            disc.queue.push_back(pid);
            return;
        }
        if now < disc.next_allowed_us {
            self.counts.drops_no_route += 1;
            self.live.remove(&pid);
            return;
        }
        node.next_request_id += 1;
        let rid = node.next_request_id;
        let disc = node.discovery.entry(destination).or_default();
        disc.outstanding = Some(rid);
        disc.queue.push_back(pid);
        node.seen_rreqs.insert((origin, rid));
        self.push(
            now + RREQ_TIMEOUT_US,
            Event::RreqTimeout {
                origin,
                destination,
                request_id: rid,
            },
        );
        self.transmit(origin, dsr::originate_rreq(origin, destination, rid));
    }

    fn on_traffic(&mut self, flow: usize) {
        let (src, dst) = self.flows[flow];
        let pid = self.next_payload_id;
        self.next_payload_id += 1;
        self.counts.sent += 1;
        self.live.insert(pid);
        let next_gen = self.now + self.interval_us();
        if next_gen <= self.end_us {
            self.push(next_gen, Event::TrafficGen { flow });
        }
        self.try_send(src, dst, pid);
    }

    fn on_mobility(&mut self, node: NodeId) {
        let i = node.index();
        let wp = self.waypoints[i]
            .as_mut()
            .expect("wakes only for mobile nodes");
        let next = wp.wake(&mut self.pos[i], self.now, &mut self.mobility_rngs[i]);
        self.push(next, Event::MobilityWake { node });
    }

    fn on_mode_switch(&mut self, to_protected: bool) {
        self.protected = to_protected;
        if to_protected {
            self.schedule_protected_window(self.now);
        } else {
            for node in &mut self.nodes {
                node.watches.retain(|_, entry| {
                    entry.rep = None;
                    entry.maint.is_some()
                });
            }
            let t = self.now + self.normal_us();
            self.push(t, Event::ModeSwitch { to_protected: true });
        }
    }

    fn on_phase(&mut self, phase: u8) {
        match phase {
            1 => self.phase_ratio_broadcast(),
            2 => self.phase_grade_broadcast(),
            3 => self.phase_writeback(),
            _ => unreachable!("phases are 1..=3"),
        }
    }

    /// Phase 1: every node seeds its scratch table with its own forwarding
    /// ratios for current, unsanctioned neighbors, then broadcasts them.
    /// Sanctioned neighbors keep their standing grade and remaining points.
    fn phase_ratio_broadcast(&mut self) {
        for i in 0..self.nodes.len() {
            let me = NodeId(i as u32);
            let neighbors = self.neighbors_of(me);
            let mut reports = Vec::new();
            let node = &mut self.nodes[i];
            for m in neighbors {
                if node.ni.bp_of(m) != 0 {
                    continue;
                }
                let pfr = node.ni.get(m).map(|e| e.counters.pfr()).unwrap_or(1.0);
                node.temp.seed_own_pfr(m, pfr);
                reports.push((m, pfr));
            }
            if !reports.is_empty() {
                self.transmit(me, Packet::PfrReport { reports });
            }
        }
    }

    /// Phase 2: aggregate ratio samples into grades, derive local
    /// bonus-point samples, broadcast them.
    fn phase_grade_broadcast(&mut self) {
        for i in 0..self.nodes.len() {
            let me = NodeId(i as u32);
            let node = &mut self.nodes[i];
            if node.temp.is_empty() {
                continue;
            }
            match node.temp.compute_grades(&self.cfg.punishment) {
                Ok(reports) if !reports.is_empty() => {
                    self.transmit(me, Packet::LbpReport { reports });
                }
                Ok(_) => {}
                Err(e) => self
                    .audit
                    .violations
                    .push(format!("grade aggregation failed at {me}: {e}")),
            }
        }
    }

    /// Phase 3: write grades and bonus points back into the live tables,
    /// refresh each node's sanctioned set, and drop all monitoring watches
    /// so stale observations cannot straddle the reset counters.
    fn phase_writeback(&mut self) {
        for i in 0..self.nodes.len() {
            let me = NodeId(i as u32);
            let node = &mut self.nodes[i];
            let written = match node.ni.apply_writeback(&mut node.temp) {
                Ok(rows) => rows,
                Err(e) => {
                    self.audit
                        .violations
                        .push(format!("writeback failed at {me}: {e}"));
                    continue;
                }
            };
            node.sanctioned = node
                .ni
                .iter()
                .filter(|(_, e)| e.bp > 0)
                .map(|(n, _)| *n)
                .collect();
            node.watches.retain(|_, entry| {
                entry.rep = None;
                entry.maint.is_some()
            });
            for (subject, _, bp) in written {
                if bp > 0 {
                    self.audit.sanctions_written += 1;
                    self.ledger.entry((me, subject)).or_default().writes += 1;
                }
            }
            // Close the pair windows: drops since the last writeback must fit
            // the budget it assigned, and the new budget is whatever remains
            // outstanding now.
            let node = &self.nodes[i];
            for ((observer, subject), entry) in self.ledger.iter_mut() {
                if *observer != me {
                    continue;
                }
                if entry.window_consumed > u64::from(entry.window_budget) {
                    self.audit.violations.push(format!(
                        "{observer} punished {subject} {} times on a budget of {}",
                        entry.window_consumed, entry.window_budget
                    ));
                }
                entry.window_budget = node.ni.bp_of(*subject);
                entry.window_consumed = 0;
            }
        }
    }

    fn on_forward_timeout(&mut self, observer: NodeId, subject: NodeId, pid: u64) {
        let Some(entry) = self.nodes[observer.index()].watches.remove(&(subject, pid)) else {
            return;
        };
        if let Some(rep) = entry.rep {
            // A counted hand-off that was never followed by a forward needs
            // no action: the missing count is the evidence. An uncounted one
            // consumes a bonus point, if any survive.
            if !rep.counted && self.nodes[observer.index()].ni.bp_of(subject) > 0 {
                self.nodes[observer.index()]
                    .ni
                    .observe_sanctioned_drop(subject)
                    .expect("bp checked above");
                self.note_bp_consumed(observer, subject);
            }
        }
        if let Some(maint) = entry.maint {
            self.nodes[observer.index()]
                .cache
                .evict_link(maint.broken.0, maint.broken.1);
            if maint.path_to_origin.len() > 1 {
                self.transmit(
                    observer,
                    Packet::Rerr {
                        broken: maint.broken,
                        path: maint.path_to_origin,
                        hop_index: 1,
                    },
                );
            }
        }
    }

    fn on_rreq_timeout(&mut self, origin: NodeId, destination: NodeId, rid: u64) {
        let node = &mut self.nodes[origin.index()];
        let Some(disc) = node.discovery.get_mut(&destination) else {
            return;
        };
        if disc.outstanding != Some(rid) {
            return;
        }
        disc.outstanding = None;
        disc.failures += 1;
        let backoff = (BACKOFF_BASE_US << (disc.failures - 1).min(31)).min(BACKOFF_CAP_US);
        disc.next_allowed_us = self.now + backoff;
        let dropped: Vec<u64> = disc.queue.drain(..).collect();
        for pid in dropped {
            self.counts.drops_no_route += 1;
            self.live.remove(&pid);
        }
    }

    fn on_route_installed(&mut self, origin: NodeId, destination: NodeId) {
        let node = &mut self.nodes[origin.index()];
        let Some(disc) = node.discovery.get_mut(&destination) else {
            return;
        };
        disc.outstanding = None;
        disc.failures = 0;
        disc.next_allowed_us = 0;
        let pending: Vec<u64> = disc.queue.drain(..).collect();
        for pid in pending {
            let route = {
                let node = &self.nodes[origin.index()];
                node.cache
                    .select_route(
                        destination,
                        |n| node.ni.grade_of(n),
                        self.cfg.grade_threshold,
                    )
                    .cloned()
            };
            match route {
                Some(route) => self.transmit_data(origin, route, 1, pid),
                None => {
                    self.counts.drops_no_route += 1;
                    self.live.remove(&pid);
                }
            }
        }
    }

    fn on_deliver(&mut self, to: NodeId, from: NodeId, packet: Packet) {
        match packet {
            Packet::Data {
                route,
                hop_index,
                payload_id,
            } => self.on_data(to, from, route, hop_index, payload_id),
            Packet::Rreq {
                origin,
                destination,
                request_id,
                accumulated_route,
            } => {
                if let Some(groups) = &self.groups {
                    if self.cfg.variant == Variant::Fgmdsr
                        && !groups.accepts_rreq(from, to, destination)
                    {
                        return;
                    }
                }
                let outcome = {
                    let node = &mut self.nodes[to.index()];
                    dsr::handle_rreq(
                        to,
                        from,
                        origin,
                        destination,
                        request_id,
                        &accumulated_route,
                        &mut node.ni,
                        &mut node.seen_rreqs,
                    )
                };
                match outcome {
                    RreqOutcome::Punished { consumed } => self.note_bp_consumed(to, consumed),
                    RreqOutcome::Duplicate => {}
                    RreqOutcome::Reply(reply) => self.transmit(to, reply),
                    RreqOutcome::Rebroadcast(flood) => self.transmit(to, flood),
                }
            }
            Packet::Rrep { route, hop_index } => {
                if route.0.get(hop_index) != Some(&to) {
                    return;
                }
                let outcome = {
                    let node = &mut self.nodes[to.index()];
                    dsr::handle_rrep(to, from, &route, hop_index, &mut node.ni, &mut node.cache)
                        .expect("addressed hop verified")
                };
                match outcome {
                    RrepOutcome::Installed { destination } => {
                        self.on_route_installed(to, destination)
                    }
                    RrepOutcome::Forward(pkt) => self.transmit(to, pkt),
                    RrepOutcome::Punished { consumed } => self.note_bp_consumed(to, consumed),
                }
            }
            Packet::Rerr {
                broken,
                path,
                hop_index,
            } => {
                if path.get(hop_index) != Some(&to) {
                    return;
                }
                let outcome = {
                    let node = &mut self.nodes[to.index()];
                    dsr::handle_rerr(
                        to,
                        from,
                        broken,
                        &path,
                        hop_index,
                        &mut node.ni,
                        &mut node.cache,
                    )
                    .expect("addressed hop verified")
                };
                match outcome {
                    RerrOutcome::Consumed => {}
                    RerrOutcome::Forward(pkt) => self.transmit(to, pkt),
                    RerrOutcome::Punished { consumed } => self.note_bp_consumed(to, consumed),
                }
            }
            Packet::PfrReport { reports } => {
                if !self.monitoring || self.punish_report(to, from) {
                    return;
                }
                let neighbors: BTreeSet<NodeId> = self.neighbors_of(to).into_iter().collect();
                let node = &mut self.nodes[to.index()];
                for (subject, pfr) in reports {
                    node.temp.ingest_pfr_report(subject, pfr, &neighbors);
                }
            }
            Packet::LbpReport { reports } => {
                if !self.monitoring || self.punish_report(to, from) {
                    return;
                }
                let neighbors: BTreeSet<NodeId> = self.neighbors_of(to).into_iter().collect();
                let node = &mut self.nodes[to.index()];
                for (subject, lbp) in reports {
                    node.temp.ingest_lbp_report(subject, lbp, &neighbors);
                }
            }
        }
    }

    /// Refuse a grade report whose sender is under punishment here, so a
    /// punished node cannot talk its way around the sanction (or slander
    /// the nodes enforcing it). Returns true when the report was dropped.
    fn punish_report(&mut self, to: NodeId, from: NodeId) -> bool {
        if self.nodes[to.index()].ni.bp_of(from) == 0 {
            return false;
        }
        self.nodes[to.index()]
            .ni
            .observe_sanctioned_drop(from)
            .expect("bp checked above");
        self.note_bp_consumed(to, from);
        true
    }

    fn on_data(
        &mut self,
        to: NodeId,
        from: NodeId,
        route: SourceRoute,
        hop_index: usize,
        pid: u64,
    ) {
        self.resolve_watch(to, from, pid);
        if route.0.get(hop_index) != Some(&to) {
            self.maybe_arm_observer_watch(to, from, &route, hop_index, pid);
            return;
        }
        if hop_index + 1 == route.len() {
            self.counts.received += 1;
            self.live.remove(&pid);
            return;
        }
        // Intermediate hop: punishment filter first, then behavior.
        let filter = {
            let node = &mut self.nodes[to.index()];
            dsr::retaliation_filter(&route, hop_index, &mut node.ni)
        };
        if let FilterOutcome::Punish { consumed } = filter {
            self.counts.drops_punishment += 1;
            self.note_bp_consumed(to, consumed);
            self.live.remove(&pid);
            return;
        }
        if self.nodes[to.index()].selfish {
            let p = self.cfg.selfish.data_drop_prob;
            let drop = p >= 1.0 || (p > 0.0 && self.drop_rng.gen_bool(p));
            if drop {
                self.counts.drops_selfish += 1;
                self.live.remove(&pid);
                return;
            }
        }
        match dsr::advance_data(to, &route, hop_index, pid) {
            Ok(Packet::Data {
                route, hop_index, ..
            }) => self.transmit_data(to, route, hop_index, pid),
            Ok(_) => unreachable!("advance_data returns data packets"),
            Err(e) => self
                .audit
                .violations
                .push(format!("data advance failed at {to}: {e}")),
        }
    }

    /// Overhearing `from` retransmit payload `pid` settles any watch on it:
    /// the maintenance part is satisfied silently, the monitoring part
    /// records the forward if the hand-off was counted.
    fn resolve_watch(&mut self, observer: NodeId, from: NodeId, pid: u64) {
        let node = &mut self.nodes[observer.index()];
        let Some(entry) = node.watches.remove(&(from, pid)) else {
            return;
        };
        if let Some(rep) = entry.rep {
            if rep.counted {
                if !self.protected {
                    self.audit.counter_updates_in_normal += 1;
                }
                if let Err(e) = node.ni.record_forwarded(from) {
                    self.audit
                        .violations
                        .push(format!("forward record failed at {observer}: {e}"));
                }
            }
        }
    }

    /// A bystander heard `from` hand a data packet to `route[hop_index]`:
    /// during protected windows it watches whether the hop forwards it.
    fn maybe_arm_observer_watch(
        &mut self,
        observer: NodeId,
        from: NodeId,
        route: &SourceRoute,
        hop_index: usize,
        pid: u64,
    ) {
        if !self.monitoring || !self.protected {
            return;
        }
        if hop_index + 1 >= route.len() {
            return; // the addressed hop is the destination; nothing to forward
        }
        let subject = route.0[hop_index];
        if subject == observer || !self.in_range(observer, subject) {
            return;
        }
        if !self.parties_clear(observer, &[from, route.origin(), route.destination()]) {
            return;
        }
        let node = &mut self.nodes[observer.index()];
        if node.watches.contains_key(&(subject, pid)) {
            return;
        }
        let counted = node.ni.bp_of(subject) == 0;
        if counted {
            node.ni.record_received_for_forwarding(subject);
        }
        node.watches.insert(
            (subject, pid),
            WatchEntry {
                maint: None,
                rep: Some(RepWatch { counted }),
            },
        );
        let due = self.now + self.timeout_us();
        self.push(
            due,
            Event::ForwardTimeout {
                observer,
                subject,
                payload_id: pid,
            },
        );
    }

    fn finish(mut self) -> RunOutput {
        // Conservation: every generated packet must sit in exactly one
        // terminal bucket or still be moving.
        let c = &self.counts;
        let accounted = c.received
            + c.drops_selfish
            + c.drops_punishment
            + c.drops_no_route
            + self.live.len() as u64;
        if accounted != c.sent {
            self.audit.violations.push(format!(
                "packet conservation broken: sent {} != accounted {accounted}",
                c.sent
            ));
        }
        // Independent recount of what "still moving" means: payloads inside
        // undelivered transmissions plus payloads queued behind discoveries.
        let mut moving: BTreeSet<u64> = BTreeSet::new();
        for ev in self.events.values() {
            if let Event::Deliver {
                packet: Packet::Data { payload_id, .. },
                ..
            } = ev
            {
                moving.insert(*payload_id);
            }
        }
        for node in &self.nodes {
            for disc in node.discovery.values() {
                moving.extend(disc.queue.iter().copied());
            }
        }
        if moving != self.live {
            self.audit.violations.push(format!(
                "in-flight recount mismatch: {} live vs {} recounted",
                self.live.len(),
                moving.len()
            ));
        }
        if self.audit.counter_updates_in_normal > 0 {
            self.audit.violations.push(format!(
                "{} evidence updates outside protected windows",
                self.audit.counter_updates_in_normal
            ));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            for (subject, entry) in node.ni.iter() {
                if entry.counters.npf > entry.counters.nprf {
                    self.audit.violations.push(format!(
                        "node {i} counts {subject} forwarding more than received",
                    ));
                }
            }
        }
        self.audit.pairs_sanctioned = self.ledger.len();
        for ((observer, subject), entry) in self.ledger.iter() {
            if entry.window_consumed > u64::from(entry.window_budget) {
                self.audit.violations.push(format!(
                    "{observer} punished {subject} {} times on a budget of {}",
                    entry.window_consumed, entry.window_budget
                ));
            }
            if self.nodes[observer.index()].ni.bp_of(*subject) > 0 {
                self.audit.pairs_pending += 1;
            } else {
                self.audit.pairs_readmitted += 1;
            }
        }

        let ni_rows = if self.cfg.debug_tables {
            let mut rows = Vec::new();
            for (i, node) in self.nodes.iter().enumerate() {
                for (subject, entry) in node.ni.iter() {
                    rows.push(NiDebugRow {
                        time_s: self.cfg.sim_time_s,
                        node: NodeId(i as u32),
                        neighbor: *subject,
                        nprf: entry.counters.nprf,
                        npf: entry.counters.npf,
                        grade: entry.grade,
                        bp: entry.bp,
                    });
                }
            }
            rows
        } else {
            Vec::new()
        };

        let metrics = MetricsRecord {
            variant: self.cfg.variant,
            selfish_pct: self.selfish_pct,
            node_count: self.cfg.node_count,
            seed: self.cfg.seed,
            sent: c.sent,
            received: c.received,
            data_forwards: c.data_forwards,
            rreq_tx: c.rreq_tx,
            rrep_tx: c.rrep_tx,
            rerr_tx: c.rerr_tx,
            pfr_report_tx: c.pfr_report_tx,
            lbp_report_tx: c.lbp_report_tx,
            drops_selfish: c.drops_selfish,
            drops_punishment: c.drops_punishment,
            drops_no_route: c.drops_no_route,
            per_node_transmissions: self
                .node_tx
                .iter()
                .enumerate()
                .map(|(i, &tx)| (NodeId(i as u32), tx))
                .collect(),
        };
        RunOutput {
            metrics,
            audit: self.audit,
            ni_rows,
            in_flight_end: self.live.len() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg() -> SimConfig {
        SimConfig {
            sim_time_s: 20.0,
            terrain: (250.0, 250.0),
            node_count: 9,
            v_min: 0.0,
            v_max: 0.0,
            flow_count: 1,
            ..SimConfig::default()
        }
    }

    fn n(id: u32) -> NodeId {
        NodeId(id)
    }

    #[test]
    fn honest_static_run_delivers_everything_it_finished() {
        let mut cfg = base_cfg();
        cfg.variant = Variant::Pdsr;
        cfg.node_count = 4;
        cfg.terrain = (100.0, 100.0);
        let out = run_scenario(
            &cfg,
            Scenario {
                flows: Some(&[(n(0), n(3))]),
                selfish: Some(&[]),
            },
        )
        .unwrap();
        let m = &out.metrics;
        assert!(
            out.audit.violations.is_empty(),
            "{:?}",
            out.audit.violations
        );
        assert!(m.sent > 50);
        assert_eq!(m.drops_selfish + m.drops_punishment + m.drops_no_route, 0);
        assert_eq!(m.received + out.in_flight_end, m.sent);
        assert_eq!(m.pfr_report_tx + m.lbp_report_tx, 0);
        assert!(m.rreq_tx >= 1 && m.rrep_tx >= 1);
    }

    #[test]
    fn same_seed_reproduces_identical_runs() {
        let mut cfg = base_cfg();
        cfg.node_count = 25;
        cfg.terrain = (500.0, 500.0);
        cfg.v_max = 10.0;
        cfg.sim_time_s = 40.0;
        cfg.flow_count = 4;
        cfg.selfish_fraction = 0.2;
        cfg.protected_window_s = 10.0;
        cfg.normal_window_s = 10.0;
        cfg.seed = 99;
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.metrics, b.metrics);
        assert_eq!(a.audit, b.audit);
        assert!(a.audit.violations.is_empty(), "{:?}", a.audit.violations);
        cfg.seed = 100;
        let c = run(&cfg).unwrap();
        assert_ne!(a.metrics, c.metrics);
    }

    #[test]
    fn monitoring_changes_nothing_for_honest_traffic() {
        for v_max in [0.0, 10.0] {
            let mut cfg = base_cfg();
            cfg.node_count = 25;
            cfg.terrain = (500.0, 500.0);
            cfg.sim_time_s = 45.0;
            cfg.v_max = v_max;
            cfg.flow_count = 4;
            cfg.protected_window_s = 10.0;
            cfg.normal_window_s = 10.0;
            cfg.seed = 5;
            cfg.variant = Variant::Pdsr;
            let plain = run(&cfg).unwrap();
            cfg.variant = Variant::Mdsr;
            let monitored = run(&cfg).unwrap();
            for out in [&plain, &monitored] {
                assert!(
                    out.audit.violations.is_empty(),
                    "{:?}",
                    out.audit.violations
                );
            }
            let (p, m) = (&plain.metrics, &monitored.metrics);
            assert_eq!(p.sent, m.sent);
            assert_eq!(p.received, m.received);
            assert_eq!(p.rreq_tx, m.rreq_tx);
            assert_eq!(p.rrep_tx, m.rrep_tx);
            assert_eq!(p.rerr_tx, m.rerr_tx);
            assert_eq!(p.pfr_report_tx + p.lbp_report_tx, 0);
            assert!(m.pfr_report_tx > 0 && m.lbp_report_tx > 0);
            assert_eq!(m.drops_punishment, 0);
            assert_eq!(monitored.audit.bp_consumed, 0);
        }
    }

    #[test]
    fn black_hole_neighbor_is_graded_sanctioned_and_routed_around_or_starved() {
        // 3x3 lattice, flow across the middle row: 3 -> 4 -> 5 is the only
        // two-hop route, and node 4 swallows every data packet.
        let mut cfg = base_cfg();
        cfg.sim_time_s = 150.0;
        cfg.protected_window_s = 30.0;
        cfg.normal_window_s = 30.0;
        cfg.debug_tables = true;
        let out = run_scenario(
            &cfg,
            Scenario {
                flows: Some(&[(n(3), n(5))]),
                selfish: Some(&[n(4)]),
            },
        )
        .unwrap();
        let m = &out.metrics;
        assert!(
            out.audit.violations.is_empty(),
            "{:?}",
            out.audit.violations
        );
        assert!(m.drops_selfish > 0, "early packets die in the black hole");
        assert!(
            m.drops_no_route > 0,
            "after grading, the only route is disqualified"
        );
        assert!(out.audit.pairs_sanctioned >= 1);
        assert_eq!(
            out.audit.pairs_readmitted + out.audit.pairs_pending,
            out.audit.pairs_sanctioned
        );
        let row = out
            .ni_rows
            .iter()
            .find(|r| r.node == n(3) && r.neighbor == n(4))
            .expect("origin graded its next hop");
        assert_eq!(row.grade, 0.0);
        assert!(row.bp > 0, "punishment never drains without traffic");
    }

    #[test]
    fn partial_dropper_keeps_route_and_cycles_through_readmission() {
        let mut cfg = base_cfg();
        cfg.sim_time_s = 120.0;
        cfg.protected_window_s = 10.0;
        cfg.normal_window_s = 10.0;
        cfg.selfish.data_drop_prob = 0.4;
        let out = run_scenario(
            &cfg,
            Scenario {
                flows: Some(&[(n(3), n(5))]),
                selfish: Some(&[n(4)]),
            },
        )
        .unwrap();
        let m = &out.metrics;
        assert!(
            out.audit.violations.is_empty(),
            "{:?}",
            out.audit.violations
        );
        assert!(
            m.received > 0,
            "a 0.6 forwarding ratio keeps the route eligible"
        );
        assert!(m.drops_selfish > 0);
        assert!(
            out.audit.sanctions_written >= 2,
            "re-sanctioned across windows"
        );
        assert!(
            out.audit.bp_consumed > 0,
            "observed drops consume bonus points"
        );
        assert!(
            out.audit.readmissions >= 2,
            "sanctions are served in full and re-imposed across windows"
        );
    }

    #[test]
    fn group_scoping_shrinks_discovery_floods() {
        let mut cfg = base_cfg();
        cfg.node_count = 16;
        cfg.terrain = (375.0, 375.0);
        cfg.sim_time_s = 30.0;
        cfg.group_count = 4;
        let scenario = Scenario {
            flows: Some(&[(n(0), n(5))]), // both in the north-west quadrant
            selfish: Some(&[]),
        };
        cfg.variant = Variant::Mdsr;
        let wide = run_scenario(&cfg, scenario).unwrap();
        cfg.variant = Variant::Fgmdsr;
        let scoped = run_scenario(&cfg, scenario).unwrap();
        assert!(wide.audit.violations.is_empty());
        assert!(scoped.audit.violations.is_empty());
        assert_eq!(wide.metrics.received, scoped.metrics.received);
        assert!(
            scoped.metrics.rreq_tx < wide.metrics.rreq_tx,
            "scoped {} vs wide {}",
            scoped.metrics.rreq_tx,
            wide.metrics.rreq_tx
        );
    }

    #[test]
    fn unreachable_destination_backs_off_exponentially() {
        let mut cfg = base_cfg();
        cfg.variant = Variant::Pdsr;
        cfg.node_count = 4;
        cfg.terrain = (3000.0, 3000.0); // every node isolated
        let out = run_scenario(
            &cfg,
            Scenario {
                flows: Some(&[(n(0), n(3))]),
                selfish: Some(&[]),
            },
        )
        .unwrap();
        let m = &out.metrics;
        assert!(
            out.audit.violations.is_empty(),
            "{:?}",
            out.audit.violations
        );
        assert_eq!(m.received, 0);
        assert_eq!(m.drops_no_route + out.in_flight_end, m.sent);
        // discoveries at ~0.25s, 3.25s, 7.25s, 13.25s within a 20s run:
        // timeouts 2s after each start, backoffs 1, 2, 4, 8 seconds
        assert_eq!(m.rreq_tx, 4);
    }

    #[test]
    fn plain_routing_never_touches_reputation_state() {
        let mut cfg = base_cfg();
        cfg.variant = Variant::Pdsr;
        cfg.node_count = 25;
        cfg.terrain = (500.0, 500.0);
        cfg.selfish_fraction = 0.4;
        cfg.flow_count = 5;
        cfg.sim_time_s = 30.0;
        let out = run(&cfg).unwrap();
        assert!(
            out.audit.violations.is_empty(),
            "{:?}",
            out.audit.violations
        );
        assert!(out.metrics.drops_selfish > 0, "selfishness still hurts");
        assert_eq!(out.metrics.drops_punishment, 0);
        assert_eq!(out.metrics.pfr_report_tx + out.metrics.lbp_report_tx, 0);
        assert_eq!(out.audit.bp_consumed, 0);
        assert_eq!(out.audit.pairs_sanctioned, 0);
    }

    #[test]
    fn conservation_holds_under_mobility_and_random_selfishness() {
        for seed in [7, 8] {
            let mut cfg = base_cfg();
            cfg.node_count = 49;
            cfg.terrain = (750.0, 750.0);
            cfg.v_max = 10.0;
            cfg.sim_time_s = 60.0;
            cfg.flow_count = 8;
            cfg.selfish_fraction = 0.3;
            cfg.protected_window_s = 15.0;
            cfg.normal_window_s = 15.0;
            cfg.seed = seed;
            let out = run(&cfg).unwrap();
            assert!(
                out.audit.violations.is_empty(),
                "{:?}",
                out.audit.violations
            );
            let m = &out.metrics;
            assert_eq!(
                m.received
                    + m.drops_selfish
                    + m.drops_punishment
                    + m.drops_no_route
                    + out.in_flight_end,
                m.sent
            );
            assert_eq!(m.per_node_transmissions.len(), cfg.node_count as usize);
            let on_air: u64 = m.per_node_transmissions.values().sum();
            assert!(on_air >= m.total_overhead() + m.data_forwards);
        }
    }

    #[test]
    fn scripted_scenarios_are_validated() {
        let cfg = base_cfg();
        let same = [(n(1), n(1))];
        assert!(run_scenario(
            &cfg,
            Scenario {
                flows: Some(&same),
                selfish: None
            }
        )
        .is_err());
        let oob = [(n(0), n(9))];
        assert!(run_scenario(
            &cfg,
            Scenario {
                flows: Some(&oob),
                selfish: None
            }
        )
        .is_err());
        let bad_selfish = [n(9)];
        assert!(run_scenario(
            &cfg,
            Scenario {
                flows: None,
                selfish: Some(&bad_selfish)
            }
        )
        .is_err());
    }
}
