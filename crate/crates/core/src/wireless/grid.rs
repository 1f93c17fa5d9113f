use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::NodeId;

/// `side × side` lattice of static nodes with `spacing_m` metres between neighbours.
///
/// Node `i` sits at lattice column `i % side`, row `i / side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNetwork {
    side: usize,
    spacing_m: f64,
}

/// Where the proposer sits on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProposerPosition {
    Corner,
    Center,
    Index(NodeId),
}

impl GridNetwork {
    pub fn new(side: usize, spacing_m: f64) -> Result<Self> {
        if side < 2 {
            return Err(invalid(format!("grid side must be at least 2, got {side}")));
        }
        if !(spacing_m.is_finite() && spacing_m > 0.0) {
            return Err(invalid(format!("spacing must be positive, got {spacing_m}")));
        }
        Ok(Self { side, spacing_m })
    }

    /// Build from a total node count `N + 1`, which must be a perfect square.
    pub fn from_node_count(node_count: usize, spacing_m: f64) -> Result<Self> {
        let side = exact_sqrt(node_count).ok_or_else(|| {
            invalid(format!("node count {node_count} is not a perfect square"))
        })?;
        Self::new(side, spacing_m)
    }

    /// Build a grid of `side × side` nodes spread over a square of `area_m2`,
    /// with the outermost nodes on the boundary.
    pub fn with_area(side: usize, area_m2: f64) -> Result<Self> {
        if side < 2 {
            return Err(invalid(format!("grid side must be at least 2, got {side}")));
        }
        Self::new(side, area_m2.sqrt() / (side - 1) as f64)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    /// `N + 1`.
    pub fn node_count(&self) -> usize {
        self.side * self.side
    }

    /// `N`, the number of non-proposer nodes.
    pub fn validator_count(&self) -> usize {
        self.node_count() - 1
    }

    pub fn lattice(&self, i: NodeId) -> (usize, usize) {
        debug_assert!(i < self.node_count());
        (i % self.side, i / self.side)
    }

    pub fn index(&self, col: usize, row: usize) -> NodeId {
        debug_assert!(col < self.side && row < self.side);
        row * self.side + col
    }

    pub fn coords(&self, i: NodeId) -> (f64, f64) {
        let (c, r) = self.lattice(i);
        (c as f64 * self.spacing_m, r as f64 * self.spacing_m)
    }

    pub fn distance(&self, i: NodeId, k: NodeId) -> f64 {
        let (xi, yi) = self.coords(i);
        let (xk, yk) = self.coords(k);
        (xi - xk).hypot(yi - yk)
    }

    /// Manhattan distance in lattice steps.
    pub fn hops(&self, i: NodeId, k: NodeId) -> usize {
        let (ci, ri) = self.lattice(i);
        let (ck, rk) = self.lattice(k);
        ci.abs_diff(ck) + ri.abs_diff(rk)
    }

    /// `max_k e_ik`: hop distance to the farthest node.
    pub fn max_hops(&self, i: NodeId) -> usize {
        let (c, r) = self.lattice(i);
        let far = |v: usize| v.max(self.side - 1 - v);
        far(c) + far(r)
    }

    /// Euclidean distance to the farthest node.
    pub fn max_distance(&self, i: NodeId) -> f64 {
        let (c, r) = self.lattice(i);
        let far = |v: usize| v.max(self.side - 1 - v) as f64;
        far(c).hypot(far(r)) * self.spacing_m
    }

    /// 4-neighbourhood of `i`.
    pub fn neighbors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let (c, r) = self.lattice(i);
        let s = self.side;
        [
            (c > 0).then(|| i - 1),
            (c + 1 < s).then(|| i + 1),
            (r > 0).then(|| i - s),
            (r + 1 < s).then(|| i + s),
        ]
        .into_iter()
        .flatten()
    }

    pub fn corner(&self) -> NodeId {
        0
    }

    /// Middle node; for even sides the lower-left of the four central nodes.
    pub fn center(&self) -> NodeId {
        let m = (self.side - 1) / 2;
        self.index(m, m)
    }

    pub fn resolve(&self, pos: ProposerPosition) -> Result<NodeId> {
        match pos {
            ProposerPosition::Corner => Ok(self.corner()),
            ProposerPosition::Center => Ok(self.center()),
            ProposerPosition::Index(i) if i < self.node_count() => Ok(i),
            ProposerPosition::Index(i) => Err(invalid(format!(
                "node {i} outside a {}-node grid",
                self.node_count()
            ))),
        }
    }
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}
