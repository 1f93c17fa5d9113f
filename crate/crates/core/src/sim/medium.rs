use std::sync::OnceLock;

use rand_distr::Geometric;

use crate::error::{invalid, Result};
use crate::wireless::{epsilon_gossip, epsilon_link, ChannelParams, GridNetwork};
use crate::NodeId;

/// Shared radio environment for a simulated grid: link outages and slot
/// length, with per-source broadcast delay distributions built on demand.
#[derive(Debug)]
pub struct Medium {
    net: GridNetwork,
    ch: ChannelParams,
    tau_s: f64,
    eps_g: f64,
    broadcast: Vec<OnceLock<Vec<Geometric>>>,
}

impl Medium {
    pub fn new(net: GridNetwork, ch: ChannelParams) -> Result<Self> {
        ch.validate()?;
        let tau_s = ch.slot_duration()?;
        let eps_g = epsilon_gossip(&ch, &net);
        let broadcast = (0..net.node_count()).map(|_| OnceLock::new()).collect();
        Ok(Self { net, ch, tau_s, eps_g, broadcast })
    }

    /// Same grid and power budget, but every gossip hop fails with `eps_g`.
    pub fn with_gossip_outage(mut self, eps_g: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps_g) {
            return Err(invalid(format!("gossip outage must lie in [0, 1), got {eps_g}")));
        }
        self.eps_g = eps_g;
        Ok(self)
    }

    pub fn net(&self) -> &GridNetwork {
        &self.net
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.ch
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }

    pub fn eps_gossip(&self) -> f64 {
        self.eps_g
    }

    /// Number of failures before the first success from `src` to each node
    /// (self entry unused).
    pub(crate) fn broadcast_delays(&self, src: NodeId) -> &[Geometric] {
        self.broadcast[src].get_or_init(|| {
            (0..self.net.node_count())
                .map(|k| {
                    let eps = if k == src { 0.0 } else { epsilon_link(&self.ch, &self.net, src, k).unwrap() };
                    Geometric::new(1.0 - eps).expect("outage below one")
                })
                .collect()
        })
    }
}
