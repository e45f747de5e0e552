use crate::error::{Error, Result};

/// A finite lattice domain: nodes with integer coordinates, nearest-neighbor
/// edges, and an interior/boundary partition.
#[derive(Clone, Debug)]
pub struct GridDomain {
    h: f64,
    nodes: Vec<(i64, i64)>,
    edges: Vec<(usize, usize)>,
    boundary: Vec<bool>,
}

impl GridDomain {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[(i64, i64)] {
        &self.nodes
    }

    /// Physical position of a node, `(i h, j h)`.
    pub fn position(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.nodes[node];
        (i as f64 * self.h, j as f64 * self.h)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary[node]
    }

    pub fn interior_indices(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| !self.boundary[i]).collect()
    }

    pub fn boundary_indices(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.boundary[i]).collect()
    }

    fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Reject degenerate geometries: the interior must be nonempty and
    /// connected, the boundary nonempty, and no node may be isolated.
    /// (Rectangle corners have only boundary neighbors, so requiring an
    /// interior neighbor for every boundary node would reject every
    /// rectangle; isolation is the defect that actually breaks the maps.)
    fn validate(self) -> Result<Self> {
        if self.h <= 0.0 || !self.h.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "grid spacing must be positive, got {}",
                self.h
            )));
        }
        let interior = self.interior_indices();
        if interior.is_empty() {
            return Err(Error::InvalidDomain("no interior node".into()));
        }
        if interior.len() == self.nodes.len() {
            return Err(Error::InvalidDomain("no boundary node".into()));
        }
        let adj = self.neighbor_lists();

        // interior subgraph connected
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![interior[0]];
        seen[interior[0]] = true;
        let mut count = 1;
        while let Some(n) = stack.pop() {
            for &m in &adj[n] {
                if !self.boundary[m] && !seen[m] {
                    seen[m] = true;
                    count += 1;
                    stack.push(m);
                }
            }
        }
        if count != interior.len() {
            return Err(Error::InvalidDomain("interior is not connected".into()));
        }

        for b in 0..self.nodes.len() {
            if adj[b].is_empty() {
                return Err(Error::InvalidDomain(format!("node {b} is isolated")));
            }
        }
        Ok(self)
    }
}

/// Rectangle of `nx x ny` cells: an `(nx+1) x (ny+1)` node lattice with the
/// perimeter flagged as boundary.
pub fn build_rectangle(nx: usize, ny: usize, h: f64) -> Result<GridDomain> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidDomain(format!(
            "rectangle needs at least 2x2 cells, got {nx}x{ny}"
        )));
    }
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut boundary = Vec::with_capacity((nx + 1) * (ny + 1));
    let idx = |i: usize, j: usize| i * (ny + 1) + j;
    for i in 0..=nx {
        for j in 0..=ny {
            nodes.push((i as i64, j as i64));
            boundary.push(i == 0 || i == nx || j == 0 || j == ny);
        }
    }
    let mut edges = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            if i + 1 <= nx {
                edges.push((idx(i, j), idx(i + 1, j)));
            }
            if j + 1 <= ny {
                edges.push((idx(i, j), idx(i, j + 1)));
            }
        }
    }
    GridDomain {
        h,
        nodes,
        edges,
        boundary,
    }
    .validate()
}

/// Path of `n_nodes` nodes; the two endpoints are boundary.
pub fn build_chain(n_nodes: usize, h: f64) -> Result<GridDomain> {
    if n_nodes < 4 {
        return Err(Error::InvalidDomain(format!(
            "chain needs at least 4 nodes, got {n_nodes}"
        )));
    }
    let nodes: Vec<(i64, i64)> = (0..n_nodes).map(|i| (i as i64, 0)).collect();
    let edges: Vec<(usize, usize)> = (0..n_nodes - 1).map(|i| (i, i + 1)).collect();
    let boundary: Vec<bool> = (0..n_nodes).map(|i| i == 0 || i == n_nodes - 1).collect();
    GridDomain {
        h,
        nodes,
        edges,
        boundary,
    }
    .validate()
}

/// Polyomino domain from a boolean cell mask (`mask[row][col]`). Nodes are
/// the corners of true cells; a node is boundary unless all four cells
/// around it are true.
pub fn build_masked(mask: &[Vec<bool>], h: f64) -> Result<GridDomain> {
    let rows = mask.len();
    let cols = mask.iter().map(|r| r.len()).max().unwrap_or(0);
    let cell = |r: i64, c: i64| -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < rows
            && mask[r as usize].get(c as usize).copied().unwrap_or(false)
    };
    let true_cells: Vec<(i64, i64)> = (0..rows as i64)
        .flat_map(|r| (0..cols as i64).map(move |c| (r, c)))
        .filter(|&(r, c)| cell(r, c))
        .collect();
    if true_cells.is_empty() {
        return Err(Error::InvalidDomain("empty mask".into()));
    }

    // cells must be edge-connected
    {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![true_cells[0]];
        seen.insert(true_cells[0]);
        while let Some((r, c)) = stack.pop() {
            for (dr, dc) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let nb = (r + dr, c + dc);
                if cell(nb.0, nb.1) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        if seen.len() != true_cells.len() {
            return Err(Error::InvalidDomain("mask cells are not edge-connected".into()));
        }
    }

    // corners of true cells, in lexicographic order
    let mut corner_set = std::collections::BTreeSet::new();
    for &(r, c) in &true_cells {
        for (dr, dc) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            corner_set.insert((r + dr, c + dc));
        }
    }
    let nodes: Vec<(i64, i64)> = corner_set.iter().cloned().collect();
    let index: std::collections::BTreeMap<(i64, i64), usize> = nodes
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();

    let mut edges = Vec::new();
    for (&(r, c), &a) in &index {
        // edge to (r+1, c) exists if one of the two cells sharing it is true
        if index.contains_key(&(r + 1, c)) && (cell(r, c - 1) || cell(r, c)) {
            edges.push((a, index[&(r + 1, c)]));
        }
        if index.contains_key(&(r, c + 1)) && (cell(r - 1, c) || cell(r, c)) {
            edges.push((a, index[&(r, c + 1)]));
        }
    }

    let boundary: Vec<bool> = nodes
        .iter()
        .map(|&(r, c)| {
            !(cell(r - 1, c - 1) && cell(r - 1, c) && cell(r, c - 1) && cell(r, c))
        })
        .collect();

    GridDomain {
        h,
        nodes,
        edges,
        boundary,
    }
    .validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_2x2_counts() {
        let d = build_rectangle(2, 2, 0.5).unwrap();
        assert_eq!(d.node_count(), 9);
        assert_eq!(d.interior_indices().len(), 1);
        assert_eq!(d.boundary_indices().len(), 8);
    }

    #[test]
    fn rectangle_3x2_counts() {
        let d = build_rectangle(3, 2, 1.0).unwrap();
        assert_eq!(d.node_count(), 12);
        assert_eq!(d.interior_indices().len(), 2);
    }

    #[test]
    fn rectangle_32x32_interior() {
        let d = build_rectangle(32, 32, 1.0 / 32.0).unwrap();
        assert_eq!(d.interior_indices().len(), 31 * 31);
    }

    #[test]
    fn rectangle_rejects_small() {
        assert!(build_rectangle(1, 5, 1.0).is_err());
    }

    #[test]
    fn chain_counts() {
        let d = build_chain(5, 1.0).unwrap();
        assert_eq!(d.interior_indices().len(), 3);
        assert!(build_chain(3, 1.0).is_err());
    }

    #[test]
    fn masked_full_square_matches_rectangle() {
        let mask = vec![vec![true, true], vec![true, true]];
        let d = build_masked(&mask, 0.25).unwrap();
        let r = build_rectangle(2, 2, 0.25).unwrap();
        assert_eq!(d.node_count(), r.node_count());
        assert_eq!(d.interior_indices().len(), 1);
        assert_eq!(d.edges().len(), r.edges().len());
    }

    #[test]
    fn masked_single_cell_is_degenerate() {
        let mask = vec![vec![true]];
        assert!(build_masked(&mask, 1.0).is_err());
    }

    #[test]
    fn masked_l_shape_hand_count() {
        // 2x2 block plus one cell below: 11 corner nodes, one interior
        let mask = vec![
            vec![true, true],
            vec![true, true],
            vec![true, false],
        ];
        let d = build_masked(&mask, 1.0).unwrap();
        assert_eq!(d.node_count(), 11);
        let interior = d.interior_indices();
        assert_eq!(interior.len(), 1);
        assert_eq!(d.nodes()[interior[0]], (1, 1));
    }

    #[test]
    fn masked_disconnected_rejected() {
        let mask = vec![vec![true, false, true]];
        assert!(build_masked(&mask, 1.0).is_err());
    }
}
