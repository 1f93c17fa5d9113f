//! Slot length and outage probabilities on the default 9×9 grid.

use r2c::wireless::{broadcast_window, epsilon_gossip, epsilon_max, shortest_paths, ChannelParams, GridNetwork};

fn main() -> r2c::Result<()> {
    let ch = ChannelParams::default();
    let net = GridNetwork::new(9, 10.0)?;
    println!("slot            {:.4e} s", ch.slot_duration()?);
    println!("gossip outage   {:.6}", epsilon_gossip(&ch, &net));
    for (name, p) in [("corner", net.corner()), ("center", net.center())] {
        println!(
            "{name:<7} broadcast outage to farthest {:.4}, window {} slots",
            epsilon_max(&ch, &net, p),
            broadcast_window(&ch, &net, p, 0.9999)?
        );
    }
    let far = shortest_paths(&net, net.corner(), net.node_count() - 1)?;
    println!("corner to corner: {} hops over {} shortest paths", far.edges, far.count);
    Ok(())
}
