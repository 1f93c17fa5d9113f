//! Simulate consensus rounds with faulty nodes and summarise them.

use std::sync::Arc;

use r2c::analytics::{required_validators, ReliabilityTargets, SizingOptions};
use r2c::consensus::{ConsensusMode, FaultyPolicy};
use r2c::sim::{monte_carlo, plan_windows, Medium, RoundPlan};
use r2c::wireless::{ChannelParams, Dissemination, GridNetwork};

fn main() -> r2c::Result<()> {
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let medium = Arc::new(Medium::new(net, ch)?);
    let targets = ReliabilityTargets { f_faulty: 15, ..Default::default() };

    for d in [Dissemination::Gossip, Dissemination::Broadcast] {
        let windows = plan_windows(&medium, d, targets.zeta, 2000, 1)?;
        let sized = required_validators(&net, &ch, net.corner(), d, &targets, SizingOptions::default())?;
        for mode in [ConsensusMode::Rc, ConsensusMode::R2c] {
            let plan = RoundPlan {
                medium: medium.clone(),
                mode,
                dissemination: d,
                proposer: net.corner(),
                n_tilde: sized.n_required,
                windows: windows.clone(),
                f_faulty: targets.f_faulty,
                policy: FaultyPolicy::VoteInvert,
            };
            let (_, r) = monte_carlo(&plan, 500, 1, 0)?;
            println!(
                "{:<3} {:<9} latency {:7.1} ± {:.1} slots, energy {:.3} mJ, resilient {:.3}, valid {:.3}, D sd {:.3}",
                mode.label(),
                d.label(),
                r.latency_slots.mean,
                1.96 * r.latency_slots.std_err,
                r.energy_mj.mean,
                r.resilient.p,
                r.globally_valid.p,
                r.distortion_slots.variance.sqrt()
            );
        }
    }
    Ok(())
}
