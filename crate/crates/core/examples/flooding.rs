//! One gossip flood and one broadcast from the corner, slot by slot.

use r2c::sim::{calibrate_node, disseminate_broadcast, disseminate_gossip, energy_account, trial_rng, Medium};
use r2c::wireless::{ChannelParams, GridNetwork};

fn main() -> r2c::Result<()> {
    let net = GridNetwork::new(9, 10.0)?;
    let medium = Medium::new(net, ChannelParams::default())?.with_gossip_outage(0.2)?;
    let mut rng = trial_rng(7, 0);

    let window = calibrate_node(&medium, net.corner(), 0.99, 2000, 7)?;
    println!("gossip window at 99% (outage 0.2): {window} slots");
    let g = disseminate_gossip(&medium, net.corner(), window, &mut rng)?;
    let mut reached = vec![0usize; window as usize + 1];
    for t in g.delivery_slot.iter().flatten() {
        reached[*t as usize] += 1;
    }
    let mut total = 0;
    for (t, k) in reached.iter().enumerate().skip(1) {
        total += k;
        println!("  slot {t:>2}: +{k:<2} informed {total}");
    }
    println!("  complete {} after {} slots, {} node-slots", g.complete(), g.completion_slot(), g.transmissions);

    let b = disseminate_broadcast(&medium, net.corner(), 5, &mut rng)?;
    println!("broadcast: complete {} after {} slots", b.complete(), b.completion_slot());
    println!(
        "energy: gossip {:.4} mJ, broadcast {:.4} mJ",
        energy_account(&[g], &medium),
        energy_account(&[b], &medium)
    );
    Ok(())
}
