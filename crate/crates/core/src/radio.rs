//! Node placement and the unit-disk radio model: two nodes hear each other
//! exactly when their distance is at most the radio range. There is no MAC
//! contention and no loss other than range.

use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("grid placement needs a perfect-square node count, got {node_count}")]
    NotASquare { node_count: u32 },
}

/// Lay `node_count` nodes out on an m-by-m lattice spanning the terrain,
/// corner at the origin, spacing `side / (m - 1)` per axis.
pub fn place_grid(node_count: u32, terrain: (f64, f64)) -> Result<Vec<(f64, f64)>, PlacementError> {
    let m = (node_count as f64).sqrt().round() as u32;
    if node_count == 0 || (m as u64) * (m as u64) != node_count as u64 {
        return Err(PlacementError::NotASquare { node_count });
    }
    if m == 1 {
        return Ok(vec![(0.0, 0.0)]);
    }
    let sx = terrain.0 / (m - 1) as f64;
    let sy = terrain.1 / (m - 1) as f64;
    Ok((0..node_count)
        .map(|i| {
            let col = (i % m) as f64;
            let row = (i / m) as f64;
            (col * sx, row * sy)
        })
        .collect())
}

/// Whether two positions are within radio range of each other.
pub fn within_range(a: (f64, f64), b: (f64, f64), range: f64) -> bool {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy <= range * range
}

/// Ids of every node within range of `me` (excluding itself), ascending.
pub fn neighbors(positions: &[(f64, f64)], me: NodeId, range: f64) -> Vec<NodeId> {
    let my_pos = positions[me.index()];
    positions
        .iter()
        .enumerate()
        .filter(|&(i, &p)| i != me.index() && within_range(my_pos, p, range))
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_nodes_sit_on_the_corners() {
        let got = place_grid(4, (100.0, 100.0)).unwrap();
        assert_eq!(
            got,
            vec![(0.0, 0.0), (100.0, 0.0), (0.0, 100.0), (100.0, 100.0)]
        );
    }

    #[test]
    fn default_lattice_has_even_spacing() {
        let got = place_grid(121, (1250.0, 1250.0)).unwrap();
        assert_eq!(got.len(), 121);
        assert_eq!(got[0], (0.0, 0.0));
        assert_eq!(got[1], (125.0, 0.0));
        assert_eq!(got[11], (0.0, 125.0));
        assert_eq!(got[12], (125.0, 125.0));
        assert_eq!(got[120], (1250.0, 1250.0));
    }

    #[test]
    fn non_square_counts_are_rejected() {
        assert_eq!(
            place_grid(5, (100.0, 100.0)),
            Err(PlacementError::NotASquare { node_count: 5 })
        );
        assert_eq!(
            place_grid(0, (100.0, 100.0)),
            Err(PlacementError::NotASquare { node_count: 0 })
        );
    }

    #[test]
    fn range_boundary_is_inclusive() {
        let range = 125.227;
        assert!(within_range((0.0, 0.0), (125.0, 0.0), range));
        assert!(!within_range((0.0, 0.0), (126.0, 0.0), range));
        assert!(within_range((0.0, 0.0), (0.0, 125.227), range));
    }

    #[test]
    fn interior_lattice_nodes_have_exactly_four_neighbors() {
        let positions = place_grid(121, (1250.0, 1250.0)).unwrap();
        let range = 125.227;
        // brute-force oracle: count by pairwise distance per node class
        for i in 0..121u32 {
            let (col, row) = (i % 11, i / 11);
            let expected = match (col == 0 || col == 10, row == 0 || row == 10) {
                (true, true) => 2,                  // corner
                (true, false) | (false, true) => 3, // edge
                (false, false) => 4,                // interior: diagonals are out of range
            };
            let got = neighbors(&positions, NodeId(i), range);
            assert_eq!(got.len(), expected, "node {i}");
        }
    }
}
