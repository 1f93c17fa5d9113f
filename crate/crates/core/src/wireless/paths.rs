use super::GridNetwork;
use crate::error::{invalid, Result};
use crate::NodeId;

/// Shortest-path statistics between two lattice nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStats {
    /// `e_ik`: hops on every shortest path.
    pub edges: usize,
    /// `s_ik`: number of distinct shortest paths.
    pub count: u128,
}

/// `e_ik = x̃ + ỹ` and `s_ik = C(x̃ + ỹ, x̃)` for a source/destination pair.
pub fn shortest_paths(net: &GridNetwork, i: NodeId, k: NodeId) -> Result<PathStats> {
    if i == k {
        return Err(invalid("shortest paths need distinct endpoints"));
    }
    let (ci, ri) = net.lattice(i);
    let (ck, rk) = net.lattice(k);
    let dx = ci.abs_diff(ck);
    let dy = ri.abs_diff(rk);
    let count = binomial(dx + dy, dx.min(dy))
        .ok_or_else(|| invalid(format!("path count C({}, {}) overflows u128", dx + dy, dx)))?;
    Ok(PathStats { edges: dx + dy, count })
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    // Running product stays integral: acc = C(n - k + j, j) after step j.
    (1..=k).try_fold(1u128, |acc, j| {
        acc.checked_mul((n - k + j) as u128).map(|v| v / j as u128)
    })
}
