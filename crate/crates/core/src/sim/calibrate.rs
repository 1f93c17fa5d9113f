use rayon::prelude::*;

use super::dissemination::disseminate_gossip;
use super::medium::Medium;
use super::montecarlo::trial_rng;
use crate::error::{invalid, Result};
use crate::NodeId;

/// Gossip window for every node: the empirical `ζ`-quantile of the time to
/// reach the whole grid, never below the hop distance to the farthest node.
pub fn calibrate_gossip_windows(medium: &Medium, zeta: f64, trials: u64, seed: u64) -> Result<Vec<u32>> {
    if !(0.0..1.0).contains(&zeta) {
        return Err(invalid(format!("ζ must lie in [0, 1), got {zeta}")));
    }
    (0..medium.net().node_count())
        .into_par_iter()
        .map(|src| calibrate_node(medium, src, zeta, trials, seed))
        .collect()
}

pub fn calibrate_node(medium: &Medium, src: NodeId, zeta: f64, trials: u64, seed: u64) -> Result<u32> {
    let floor = medium.net().max_hops(src) as u32;
    if zeta == 0.0 || trials == 0 || medium.eps_gossip() == 0.0 {
        return Ok(floor.max(1));
    }
    // Source and trial index both feed the stream so nodes are independent.
    let stream = |t: u64| ((src as u64) << 40) | t;
    let mut times = (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, stream(t));
            disseminate_gossip(medium, src, u32::MAX, &mut rng).map(|tr| tr.completion_slot())
        })
        .collect::<Result<Vec<_>>>()?;
    times.sort_unstable();
    let rank = ((zeta * trials as f64).ceil() as usize).clamp(1, times.len());
    Ok(times[rank - 1].max(floor).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wireless::{ChannelParams, GridNetwork};

    fn medium() -> Medium {
        Medium::new(GridNetwork::new(9, 10.0).unwrap(), ChannelParams::default()).unwrap()
    }

    #[test]
    fn lossless_windows_are_hop_bounds() {
        let m = medium().with_gossip_outage(0.0).unwrap();
        let w = calibrate_gossip_windows(&m, 0.9999, 50, 1).unwrap();
        for (i, wi) in w.iter().enumerate() {
            assert_eq!(*wi as usize, m.net().max_hops(i));
        }
    }

    #[test]
    fn zero_target_gives_floor() {
        let m = medium();
        assert_eq!(calibrate_node(&m, 0, 0.0, 100, 1).unwrap(), 16);
    }

    #[test]
    fn default_corner_window() {
        let w = calibrate_node(&medium(), 0, 0.9999, 5000, 7).unwrap();
        assert!((16..=18).contains(&w), "{w}");
    }
}
