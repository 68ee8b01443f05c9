//! Source-routed packet handling: route discovery by flooded route requests,
//! replies along the reverse path, error propagation on broken links, and the
//! punishment filter that refuses service to nodes with outstanding bonus
//! points.
//!
//! Handlers here are pure with respect to the radio: they mutate the caller's
//! tables and return an outcome describing what (if anything) should be
//! transmitted. The simulation engine owns delivery and timing.

use std::collections::{BTreeMap, BTreeSet};

use crate::reputation::NiTable;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RouteError {
    /// A reply was handed to a node that is not the addressed reverse hop.
    #[error("node is not the addressed hop on the reverse path")]
    BrokenReversePath,
    /// A data packet was handed to a node that is not its addressed hop.
    #[error("node is not the addressed hop on the source route")]
    NotOnRoute,
}

/// A complete hop sequence from origin to destination.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceRoute(pub Vec<NodeId>);

impl SourceRoute {
    pub fn origin(&self) -> NodeId {
        self.0[0]
    }

    pub fn destination(&self) -> NodeId {
        *self.0.last().expect("route has at least two hops")
    }

    pub fn intermediates(&self) -> &[NodeId] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether the route traverses the directed link `a -> b`.
    pub fn contains_link(&self, a: NodeId, b: NodeId) -> bool {
        self.0.windows(2).any(|w| w[0] == a && w[1] == b)
    }
}

/// Everything a node can put on the air.
#[derive(Debug, Clone, PartialEq)]
pub enum Packet {
    /// Flooded discovery request, growing its route as it spreads.
    Rreq {
        origin: NodeId,
        destination: NodeId,
        request_id: u64,
        accumulated_route: Vec<NodeId>,
    },
    /// Discovery reply retracing the found route; `hop_index` is the hop
    /// currently addressed, walking from `route.len() - 2` down to zero.
    Rrep {
        route: SourceRoute,
        hop_index: usize,
    },
    /// Link-break notice travelling `path` (detector back to data origin);
    /// `hop_index` is the hop currently addressed, walking up the path.
    Rerr {
        broken: (NodeId, NodeId),
        path: Vec<NodeId>,
        hop_index: usize,
    },
    /// Payload packet following its source route; `hop_index` addresses the
    /// hop the packet is currently travelling to.
    Data {
        route: SourceRoute,
        hop_index: usize,
        payload_id: u64,
    },
    /// End-of-window broadcast of forwarding-ratio samples.
    PfrReport { reports: Vec<(NodeId, f64)> },
    /// End-of-window broadcast of bonus-point samples.
    LbpReport { reports: Vec<(NodeId, u32)> },
}

/// Cache of discovered routes, keyed by destination.
#[derive(Debug, Clone, Default)]
pub struct RouteCache {
    routes: BTreeMap<NodeId, BTreeSet<SourceRoute>>,
}

impl RouteCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, route: SourceRoute) {
        self.routes
            .entry(route.destination())
            .or_default()
            .insert(route);
    }

    /// Drop every cached route that uses the directed link `a -> b`.
    pub fn evict_link(&mut self, a: NodeId, b: NodeId) {
        for set in self.routes.values_mut() {
            set.retain(|r| !r.contains_link(a, b));
        }
        self.routes.retain(|_, set| !set.is_empty());
    }

    pub fn routes_to(&self, destination: NodeId) -> impl Iterator<Item = &SourceRoute> {
        self.routes.get(&destination).into_iter().flatten()
    }

    /// Cheapest acceptable route: every intermediate hop must grade at or
    /// above `threshold`; among survivors the shortest wins, ties broken by
    /// lexicographic hop order.
    pub fn select_route(
        &self,
        destination: NodeId,
        grade_of: impl Fn(NodeId) -> f64,
        threshold: f64,
    ) -> Option<&SourceRoute> {
        self.routes_to(destination)
            .filter(|r| r.intermediates().iter().all(|&n| grade_of(n) >= threshold))
            .min_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)))
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }
}

/// Start a discovery for `destination`. The accumulated route begins with
/// the origin itself.
pub fn originate_rreq(origin: NodeId, destination: NodeId, request_id: u64) -> Packet {
    Packet::Rreq {
        origin,
        destination,
        request_id,
        accumulated_route: vec![origin],
    }
}

/// First entry in `candidates` with outstanding bonus points, if any.
/// The order of `candidates` is the fixed punishment precedence.
fn punishable(ni: &NiTable, candidates: &[NodeId]) -> Option<NodeId> {
    candidates.iter().copied().find(|&n| ni.bp_of(n) > 0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RreqOutcome {
    /// Dropped as punishment; one bonus point consumed from `consumed`.
    Punished { consumed: NodeId },
    /// Flood copy already handled.
    Duplicate,
    /// This node is the destination: send the reply back along the route.
    Reply(Packet),
    /// Keep flooding with this node appended.
    Rebroadcast(Packet),
}

/// Process a received route request. Checks run in fixed order: punishment
/// (previous hop, then origin), duplicate suppression, destination reply,
/// otherwise rebroadcast.
///
/// A punished copy is NOT marked as seen — the same flood arriving later
/// over a clean path must still be serviced, or every neighbor of a
/// punished node would go deaf to discovery.
#[allow(clippy::too_many_arguments)] // one parameter per field of the request
pub fn handle_rreq(
    me: NodeId,
    prev: NodeId,
    origin: NodeId,
    destination: NodeId,
    request_id: u64,
    accumulated_route: &[NodeId],
    ni: &mut NiTable,
    seen: &mut BTreeSet<(NodeId, u64)>,
) -> RreqOutcome {
    if let Some(target) = punishable(ni, &[prev, origin]) {
        ni.observe_sanctioned_drop(target)
            .expect("punishable() guarantees bp > 0");
        return RreqOutcome::Punished { consumed: target };
    }
    if seen.contains(&(origin, request_id)) {
        return RreqOutcome::Duplicate;
    }
    seen.insert((origin, request_id));
    if me == destination {
        let mut hops = accumulated_route.to_vec();
        hops.push(me);
        let hop_index = hops.len() - 2;
        return RreqOutcome::Reply(Packet::Rrep {
            route: SourceRoute(hops),
            hop_index,
        });
    }
    let mut hops = accumulated_route.to_vec();
    hops.push(me);
    RreqOutcome::Rebroadcast(Packet::Rreq {
        origin,
        destination,
        request_id,
        accumulated_route: hops,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RrepOutcome {
    /// The reply reached the discovery origin; the route is now cached.
    Installed { destination: NodeId },
    /// Relay the reply one hop further back.
    Forward(Packet),
    /// Dropped as punishment; one bonus point consumed from `consumed`.
    Punished { consumed: NodeId },
}

/// Process a received route reply at the addressed reverse hop.
pub fn handle_rrep(
    me: NodeId,
    prev: NodeId,
    route: &SourceRoute,
    hop_index: usize,
    ni: &mut NiTable,
    cache: &mut RouteCache,
) -> Result<RrepOutcome, RouteError> {
    if hop_index >= route.len() || route.0[hop_index] != me {
        return Err(RouteError::BrokenReversePath);
    }
    if hop_index == 0 {
        cache.insert(route.clone());
        return Ok(RrepOutcome::Installed {
            destination: route.destination(),
        });
    }
    // Punishment precedence: who handed it to us, who originated the reply,
    // who receives it next, who it is ultimately for.
    let next = route.0[hop_index - 1];
    if let Some(target) = punishable(ni, &[prev, route.destination(), next, route.origin()]) {
        ni.observe_sanctioned_drop(target)
            .expect("punishable() guarantees bp > 0");
        return Ok(RrepOutcome::Punished { consumed: target });
    }
    Ok(RrepOutcome::Forward(Packet::Rrep {
        route: route.clone(),
        hop_index: hop_index - 1,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub enum RerrOutcome {
    /// The notice reached the origin of the affected traffic.
    Consumed,
    /// Relay the notice one hop further toward the origin.
    Forward(Packet),
    /// Relay dropped as punishment (local eviction already applied).
    Punished { consumed: NodeId },
}

/// Process a received link-break notice at the addressed hop. The matching
/// routes are evicted locally even when the relay itself is punished.
pub fn handle_rerr(
    me: NodeId,
    prev: NodeId,
    broken: (NodeId, NodeId),
    path: &[NodeId],
    hop_index: usize,
    ni: &mut NiTable,
    cache: &mut RouteCache,
) -> Result<RerrOutcome, RouteError> {
    if hop_index >= path.len() || path[hop_index] != me {
        return Err(RouteError::NotOnRoute);
    }
    cache.evict_link(broken.0, broken.1);
    if hop_index + 1 == path.len() {
        return Ok(RerrOutcome::Consumed);
    }
    let next = path[hop_index + 1];
    if let Some(target) = punishable(ni, &[prev, path[0], next, *path.last().unwrap()]) {
        ni.observe_sanctioned_drop(target)
            .expect("punishable() guarantees bp > 0");
        return Ok(RerrOutcome::Punished { consumed: target });
    }
    Ok(RerrOutcome::Forward(Packet::Rerr {
        broken,
        path: path.to_vec(),
        hop_index: hop_index + 1,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterOutcome {
    Forward,
    /// Drop the packet; one bonus point consumed from `consumed`.
    Punish {
        consumed: NodeId,
    },
}

/// Decide whether an intermediate hop serves a data packet: refuse it when
/// the previous hop, the origin, or the final destination has outstanding
/// bonus points, consuming one point from the first such entry in that
/// fixed order. Service is denied both to traffic a sanctioned node hands
/// over and to traffic addressed to or sent by one.
pub fn retaliation_filter(
    route: &SourceRoute,
    hop_index: usize,
    ni: &mut NiTable,
) -> FilterOutcome {
    match punishable(ni, &data_filter_parties(route, hop_index)) {
        Some(target) => {
            ni.observe_sanctioned_drop(target)
                .expect("punishable() guarantees bp > 0");
            FilterOutcome::Punish { consumed: target }
        }
        None => FilterOutcome::Forward,
    }
}

/// The parties a data packet answers for at an intermediate hop, in
/// punishment precedence order: previous hop, origin, final destination.
pub fn data_filter_parties(route: &SourceRoute, hop_index: usize) -> [NodeId; 3] {
    [route.0[hop_index - 1], route.origin(), route.destination()]
}

/// Step a data packet to its next hop: the caller must be the currently
/// addressed hop, and the result is the packet addressed one hop onward.
pub fn advance_data(
    me: NodeId,
    route: &SourceRoute,
    hop_index: usize,
    payload_id: u64,
) -> Result<Packet, RouteError> {
    if hop_index >= route.len() || route.0[hop_index] != me || hop_index + 1 >= route.len() {
        return Err(RouteError::NotOnRoute);
    }
    Ok(Packet::Data {
        route: route.clone(),
        hop_index: hop_index + 1,
        payload_id,
    })
}
