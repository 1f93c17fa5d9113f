//! Lattice topology, link outages, slot timing and dissemination windows.

mod channel;
mod grid;
mod paths;

pub use channel::{epsilon_gossip, epsilon_link, epsilon_max, ChannelParams};
pub use grid::{exact_sqrt, GridNetwork, ProposerPosition};
pub use paths::{shortest_paths, PathStats};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::NodeId;

/// How a source spreads one message to every other node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dissemination {
    /// Multi-hop flooding between lattice neighbours at gossip power.
    Gossip,
    /// Single-hop transmission to every node at broadcast power.
    Broadcast,
}

impl Dissemination {
    pub fn transmit_power_mw(self, ch: &ChannelParams) -> f64 {
        match self {
            Dissemination::Gossip => ch.pt_gossip_mw,
            Dissemination::Broadcast => ch.pt_broadcast_mw,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Dissemination::Gossip => "gossip",
            Dissemination::Broadcast => "broadcast",
        }
    }
}

/// Broadcast window `w_i = ⌈log(1 − ζ^{1/N}) / log ε_{i,max}⌉` in slots.
///
/// Sized so that all `N` destinations hear node `i` within the window with
/// probability at least `ζ`. Never shorter than one slot.
pub fn broadcast_window(ch: &ChannelParams, net: &GridNetwork, i: NodeId, zeta: f64) -> Result<u32> {
    window_for(epsilon_max(ch, net, i), net.validator_count(), zeta)
}

/// Window for `n` destinations whose worst link outage is `eps_max`.
pub fn window_for(eps_max: f64, n: usize, zeta: f64) -> Result<u32> {
    if !(0.0..=1.0).contains(&zeta) {
        return Err(invalid(format!("zeta must lie in [0, 1), got {zeta}")));
    }
    if zeta == 1.0 {
        return Err(Error::UnattainableTarget(
            "dissemination success probability 1 needs an unbounded window".into(),
        ));
    }
    if zeta == 0.0 || eps_max <= 0.0 {
        return Ok(1);
    }
    // 1 - ζ^{1/N} without cancellation near ζ = 1.
    let miss = -(zeta.ln() / n as f64).exp_m1();
    // Absorb rounding when the ratio is an exact integer.
    let w = (miss.ln() / eps_max.ln() - 1e-9).ceil();
    Ok((w as u32).max(1))
}

/// Broadcast windows for every node, indexed by node id.
pub fn broadcast_windows(ch: &ChannelParams, net: &GridNetwork, zeta: f64) -> Result<Vec<u32>> {
    (0..net.node_count()).map(|i| broadcast_window(ch, net, i, zeta)).collect()
}
