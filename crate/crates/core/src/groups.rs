//! Friendly groups: a static √k-by-√k partition of the terrain into
//! rectangular cells, fixed from the nodes' initial positions. Route
//! discovery floods stay inside the origin's group; only border nodes
//! (nodes with a radio neighbor in a foreign group) relay a flood across
//! a group boundary, and only when the destination is not in the
//! origin's group.

use crate::radio::within_range;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group count must be a positive perfect square, got {k}")]
    UnsupportedK { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupId(pub u16);

#[derive(Debug, Clone)]
pub struct GroupAssignment {
    group_of: Vec<GroupId>,
    border: Vec<bool>,
    k: u32,
}

impl GroupAssignment {
    /// Partition the terrain into k cells and assign every node by position.
    /// Border flags are computed against the same positions: a node is a
    /// border node iff some radio neighbor belongs to a different group.
    pub fn partition(
        positions: &[(f64, f64)],
        terrain: (f64, f64),
        k: u32,
        radio_range: f64,
    ) -> Result<Self, GroupError> {
        let side = (k as f64).sqrt().round() as u32;
        if k == 0 || (side as u64) * (side as u64) != k as u64 {
            return Err(GroupError::UnsupportedK { k });
        }
        let cell_w = terrain.0 / side as f64;
        let cell_h = terrain.1 / side as f64;
        let group_of: Vec<GroupId> = positions
            .iter()
            .map(|&(x, y)| {
                let gx = ((x / cell_w) as u32).min(side - 1);
                let gy = ((y / cell_h) as u32).min(side - 1);
                GroupId((gy * side + gx) as u16)
            })
            .collect();
        let border = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                positions.iter().enumerate().any(|(j, &q)| {
                    i != j && group_of[i] != group_of[j] && within_range(p, q, radio_range)
                })
            })
            .collect();
        Ok(Self {
            group_of,
            border,
            k,
        })
    }

    pub fn group_of(&self, node: NodeId) -> GroupId {
        self.group_of[node.index()]
    }

    pub fn is_border(&self, node: NodeId) -> bool {
        self.border[node.index()]
    }

    pub fn group_count(&self) -> u32 {
        self.k
    }

    /// Members of one group, ascending by id.
    pub fn members(&self, group: GroupId) -> Vec<NodeId> {
        self.group_of
            .iter()
            .enumerate()
            .filter(|&(_, &g)| g == group)
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }

    /// Whether `receiver` should process a route-request flood heard from
    /// `sender` while discovering a route to `destination`: same-group
    /// traffic always passes; a boundary crossing needs border nodes on
    /// both ends and a destination outside the sender's group.
    pub fn accepts_rreq(&self, sender: NodeId, receiver: NodeId, destination: NodeId) -> bool {
        let sg = self.group_of(sender);
        if self.group_of(receiver) == sg {
            return true;
        }
        self.is_border(sender) && self.is_border(receiver) && self.group_of(destination) != sg
    }
}

/// Modeled ratio of route-discovery overhead with k groups relative to an
/// unpartitioned flood of the same network: each discovery touches one
/// group's share of the nodes instead of all of them.
pub fn overhead_ratio_model(_node_count: u32, k: u32) -> f64 {
    1.0 / k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radio::place_grid;

    const RANGE: f64 = 125.227;

    fn default_partition(k: u32) -> GroupAssignment {
        let positions = place_grid(121, (1250.0, 1250.0)).unwrap();
        GroupAssignment::partition(&positions, (1250.0, 1250.0), k, RANGE).unwrap()
    }

    #[test]
    fn single_group_covers_everyone_with_no_borders() {
        let ga = default_partition(1);
        for i in 0..121 {
            assert_eq!(ga.group_of(NodeId(i)), GroupId(0));
            assert!(!ga.is_border(NodeId(i)));
        }
    }

    #[test]
    fn non_square_group_counts_are_rejected() {
        let positions = place_grid(4, (100.0, 100.0)).unwrap();
        for k in [0, 3, 5, 8] {
            assert_eq!(
                GroupAssignment::partition(&positions, (100.0, 100.0), k, RANGE).unwrap_err(),
                GroupError::UnsupportedK { k }
            );
        }
    }

    #[test]
    fn quadrants_split_the_default_lattice_unevenly_but_completely() {
        let ga = default_partition(4);
        let mut sizes: Vec<usize> = (0..4).map(|g| ga.members(GroupId(g)).len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 121);
        sizes.sort_unstable();
        // 11 columns split 5/6 at the midline, same for rows
        assert_eq!(sizes, vec![25, 30, 30, 36]);
    }

    #[test]
    fn border_flags_match_a_brute_force_scan() {
        let positions = place_grid(121, (1250.0, 1250.0)).unwrap();
        let ga = default_partition(4);
        let mut expected = 0;
        for i in 0..121usize {
            let brute = (0..121usize).any(|j| {
                j != i
                    && ga.group_of(NodeId(j as u32)) != ga.group_of(NodeId(i as u32))
                    && within_range(positions[i], positions[j], RANGE)
            });
            assert_eq!(ga.is_border(NodeId(i as u32)), brute, "node {i}");
            expected += brute as usize;
        }
        // columns 4 and 5 plus rows 4 and 5 of the 11x11 lattice
        assert_eq!(expected, 40);
    }

    #[test]
    fn flood_scope_rules() {
        let ga = default_partition(4);
        // node ids on the 11x11 lattice: id = row * 11 + col
        let inner_a = NodeId(0); // group 0, not border
        let same_group = NodeId(1);
        let border_a = NodeId(4); // col 4 → border of group 0
        let border_b = NodeId(5); // col 5 → border of group 1
        let dest_in_b = NodeId(10); // col 10 → group 1
        let dest_in_a = NodeId(2);

        let inner_b = NodeId(7); // col 7 → group 1, not border

        // same group: always accepted, border or not
        assert!(ga.accepts_rreq(inner_a, same_group, dest_in_b));
        // cross-group via two borders hunting a foreign destination
        assert!(ga.accepts_rreq(border_a, border_b, dest_in_b));
        // cross-group refused when the destination is already in the
        // sender's own group
        assert!(!ga.accepts_rreq(border_a, border_b, dest_in_a));
        // cross-group refused when the receiver is not a border node
        assert!(!ga.accepts_rreq(border_a, inner_b, dest_in_b));
        // cross-group refused when the sender is not a border node
        assert!(!ga.accepts_rreq(inner_a, border_b, dest_in_b));
    }

    #[test]
    fn overhead_model_is_the_group_share() {
        assert_eq!(overhead_ratio_model(121, 4), 0.25);
        assert_eq!(overhead_ratio_model(49, 1), 1.0);
    }
}
