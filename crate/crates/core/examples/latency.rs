//! Analytic round latency of RC and R2C over gossip and broadcast.

use r2c::analytics::{ReliabilityTargets, SizingOptions};
use r2c::experiments::{analytic_latency, NTilde, Protocol};
use r2c::wireless::{ChannelParams, GridNetwork};

fn main() -> r2c::Result<()> {
    let ch = ChannelParams::default();
    let targets = ReliabilityTargets::default();
    for side in [5, 9, 13] {
        let net = GridNetwork::new(side, 10.0)?;
        println!("{side}×{side} grid, N = {}", net.validator_count());
        for proto in Protocol::ALL {
            let a = analytic_latency(
                &net,
                &ch,
                net.corner(),
                proto,
                &targets,
                SizingOptions::default(),
                NTilde::Auto,
            )?;
            println!(
                "  {:<14} Ñ={:<4} {:>8.1} slots  {:>8.2} ms",
                proto.label(),
                a.n_tilde,
                a.latency_slots,
                a.latency_s * 1e3
            );
        }
    }
    Ok(())
}
