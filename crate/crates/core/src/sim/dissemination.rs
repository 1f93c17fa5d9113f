use rand::Rng;
use rand_distr::Distribution;
use serde::Serialize;

use super::medium::Medium;
use crate::error::{invalid, Result};
use crate::wireless::{Dissemination, GridNetwork};
use crate::NodeId;

/// One node spreading one message to the whole grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisseminationTrace {
    pub kind: Dissemination,
    pub source: NodeId,
    /// Slot in which each node first holds the message; `None` if it never
    /// did within the window. The source holds it at slot 0.
    pub delivery_slot: Vec<Option<u32>>,
    /// Node-slots spent transmitting.
    pub transmissions: u64,
    pub window: u32,
}

impl DisseminationTrace {
    pub fn complete(&self) -> bool {
        self.delivery_slot.iter().all(Option::is_some)
    }

    /// Slot of the last delivery, or the full window when something was missed.
    pub fn completion_slot(&self) -> u32 {
        if !self.complete() {
            return self.window;
        }
        self.delivery_slot.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Synchronised flooding over the 4-neighbourhood.
///
/// Every slot, each holder transmits once; an uninformed node with `m`
/// informed neighbours hears at least one of them with probability `1 − ε^m`
/// (independent links). Holders go quiet once all their neighbours are
/// informed.
pub fn disseminate_gossip<R: Rng + ?Sized>(
    medium: &Medium,
    source: NodeId,
    window: u32,
    rng: &mut R,
) -> Result<DisseminationTrace> {
    let net = medium.net();
    let total = net.node_count();
    check(total, source, window)?;
    let eps = medium.eps_gossip();
    let reach: [f64; 5] = std::array::from_fn(|m| 1.0 - eps.powi(m as i32));

    let mut st = Flood {
        delivery: vec![None; total],
        informed_nbrs: vec![0; total],
        uninformed_nbrs: (0..total).map(|i| net.neighbors(i).count() as u8).collect(),
        on_boundary: vec![false; total],
        boundary: Vec::new(),
        active: 0,
    };
    st.inform(net, source, 0);
    let mut informed = 1;
    let mut transmissions = 0;
    let mut reached = Vec::new();
    let mut t = 0;
    while informed < total && t < window {
        t += 1;
        transmissions += st.active;
        reached.clear();
        let nbrs = &st.informed_nbrs;
        st.boundary.retain(|&u| {
            let hit = rng.random::<f64>() < reach[nbrs[u] as usize];
            if hit {
                reached.push(u);
            }
            !hit
        });
        for &u in &reached {
            st.inform(net, u, t);
        }
        informed += reached.len();
    }
    let delivery = st.delivery;
    Ok(DisseminationTrace { kind: Dissemination::Gossip, source, delivery_slot: delivery, transmissions, window })
}

struct Flood {
    delivery: Vec<Option<u32>>,
    informed_nbrs: Vec<u8>,
    uninformed_nbrs: Vec<u8>,
    on_boundary: Vec<bool>,
    /// Uninformed nodes with at least one informed neighbour.
    boundary: Vec<NodeId>,
    /// Holders that still have an uninformed neighbour.
    active: u64,
}

impl Flood {
    fn inform(&mut self, net: &GridNetwork, x: NodeId, t: u32) {
        self.delivery[x] = Some(t);
        if self.uninformed_nbrs[x] > 0 {
            self.active += 1;
        }
        for y in net.neighbors(x) {
            self.uninformed_nbrs[y] -= 1;
            if self.delivery[y].is_some() {
                if self.uninformed_nbrs[y] == 0 {
                    self.active -= 1;
                }
            } else {
                self.informed_nbrs[y] += 1;
                if !self.on_boundary[y] {
                    self.on_boundary[y] = true;
                    self.boundary.push(y);
                }
            }
        }
    }
}

/// Single-hop broadcast with type-I HARQ: the source repeats every slot and
/// each destination's first success is geometric in its link outage.
pub fn disseminate_broadcast<R: Rng + ?Sized>(
    medium: &Medium,
    source: NodeId,
    window: u32,
    rng: &mut R,
) -> Result<DisseminationTrace> {
    let total = medium.net().node_count();
    check(total, source, window)?;
    let dists = medium.broadcast_delays(source);
    let mut last = 0u64;
    let delivery = (0..total)
        .map(|k| {
            if k == source {
                return Some(0);
            }
            let z = 1 + dists[k].sample(rng);
            last = last.max(z);
            (z <= window as u64).then_some(z as u32)
        })
        .collect();
    Ok(DisseminationTrace {
        kind: Dissemination::Broadcast,
        source,
        delivery_slot: delivery,
        transmissions: last.min(window as u64),
        window,
    })
}

pub fn disseminate<R: Rng + ?Sized>(
    medium: &Medium,
    kind: Dissemination,
    source: NodeId,
    window: u32,
    rng: &mut R,
) -> Result<DisseminationTrace> {
    match kind {
        Dissemination::Gossip => disseminate_gossip(medium, source, window, rng),
        Dissemination::Broadcast => disseminate_broadcast(medium, source, window, rng),
    }
}

fn check(total: usize, source: NodeId, window: u32) -> Result<()> {
    if source >= total {
        return Err(invalid(format!("source {source} outside a {total}-node grid")));
    }
    if window == 0 {
        return Err(invalid("dissemination window must be at least one slot"));
    }
    Ok(())
}

/// Energy in millijoules: every transmitting node-slot costs `P_t · τ`.
pub fn energy_account(traces: &[DisseminationTrace], medium: &Medium) -> f64 {
    let ch = medium.channel();
    traces
        .iter()
        .map(|t| t.transmissions as f64 * t.kind.transmit_power_mw(ch) * medium.tau_s())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wireless::{ChannelParams, GridNetwork};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn medium(side: usize) -> Medium {
        Medium::new(GridNetwork::new(side, 10.0).unwrap(), ChannelParams::default()).unwrap()
    }

    #[test]
    fn lossless_gossip_follows_hop_counts() {
        let m = medium(9).with_gossip_outage(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for src in [0, 40, 13] {
            let t = disseminate_gossip(&m, src, 100, &mut rng).unwrap();
            for k in 0..81 {
                assert_eq!(t.delivery_slot[k], Some(m.net().hops(src, k) as u32));
            }
            assert_eq!(t.completion_slot() as usize, m.net().max_hops(src));
        }
    }

    #[test]
    fn gossip_never_beats_hop_count() {
        let m = medium(5).with_gossip_outage(0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let t = disseminate_gossip(&m, 0, 12, &mut rng).unwrap();
            for (k, d) in t.delivery_slot.iter().enumerate() {
                if let Some(d) = d {
                    assert!(*d as usize >= m.net().hops(0, k));
                }
            }
            assert!(t.transmissions <= 12 * 25);
        }
    }

    #[test]
    fn lossless_gossip_transmissions() {
        // 2x2 from a corner: slot 1 the source sends, slot 2 both middles do.
        let m = medium(2).with_gossip_outage(0.0).unwrap();
        let t = disseminate_gossip(&m, 0, 5, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(t.transmissions, 3);
        assert!(t.complete());
    }

    #[test]
    fn gossip_window_truncates() {
        let m = medium(9).with_gossip_outage(0.0).unwrap();
        let t = disseminate_gossip(&m, 0, 10, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(!t.complete());
        assert_eq!(t.completion_slot(), 10);
        assert!(t.delivery_slot[80].is_none());
        assert!(disseminate_gossip(&m, 0, 0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn lossless_broadcast_is_one_slot() {
        let ch = ChannelParams { pn_mw: 1e-300, ..Default::default() };
        let m = Medium::new(GridNetwork::new(9, 10.0).unwrap(), ch).unwrap();
        let t = disseminate_broadcast(&m, 0, 7, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(t.delivery_slot.iter().skip(1).all(|d| *d == Some(1)));
        assert_eq!(t.transmissions, 1);
    }

    #[test]
    fn broadcast_mean_delay() {
        let m = medium(9);
        let eps = crate::wireless::epsilon_link(m.channel(), m.net(), 0, 80).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let t = disseminate_broadcast(&m, 0, u32::MAX, &mut rng).unwrap();
            sum += t.delivery_slot[80].unwrap() as f64;
        }
        let mean = sum / n as f64;
        let expect = 1.0 / (1.0 - eps);
        let sd = eps.sqrt() / (1.0 - eps);
        assert!((mean - expect).abs() < 3.0 * sd / (n as f64).sqrt(), "{mean} vs {expect}");
    }

    #[test]
    fn energy_arithmetic() {
        let m = medium(9);
        assert_eq!(energy_account(&[], &m), 0.0);
        let t = DisseminationTrace {
            kind: Dissemination::Broadcast,
            source: 0,
            delivery_slot: vec![Some(0)],
            transmissions: 1,
            window: 1,
        };
        assert!((energy_account(&[t], &m) - 100.0 * m.tau_s()).abs() < 1e-15);
        assert!((100.0 * m.tau_s() - 2.96e-2).abs() < 1e-4);
    }
}
