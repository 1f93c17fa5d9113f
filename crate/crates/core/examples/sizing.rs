//! How many representatives a round needs for given reliability targets.

use r2c::analytics::{
    required_validators, resiliency_exact, resiliency_normal, ReliabilityTargets, SizingOptions,
};
use r2c::wireless::{ChannelParams, Dissemination, GridNetwork};

fn main() -> r2c::Result<()> {
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let n = net.validator_count();

    println!("F   Ñ   exact   normal");
    for f in [5, 15, 25] {
        for m in [20, 40, 60] {
            println!(
                "{f:<3} {m:<3} {:.4}  {:.4}",
                resiliency_exact(n, f, m)?,
                resiliency_normal(n, f, m, 0.5)?
            );
        }
    }

    for f in [0, 5, 10, 20] {
        let t = ReliabilityTargets { f_faulty: f, ..Default::default() };
        for d in [Dissemination::Gossip, Dissemination::Broadcast] {
            let r = required_validators(&net, &ch, net.corner(), d, &t, SizingOptions::default())?;
            println!(
                "F={f:<2} {:<9} N_alpha={:6.2} N_beta_gamma={:6.2} -> Ñ={}",
                d.label(),
                r.n_alpha,
                r.n_beta_gamma,
                r.n_required
            );
        }
    }
    Ok(())
}
