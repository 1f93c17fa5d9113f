//! Timestamp distortion: ψ for both sign conventions and the resulting
//! variance as the representative set grows.

use r2c::analytics::{psi_broadcast, psi_gossip, sigma_d_squared, PsiSign};
use r2c::wireless::{ChannelParams, GridNetwork};

fn main() -> r2c::Result<()> {
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let n = net.validator_count();
    let p = net.corner();

    for sign in [PsiSign::PaperPlus, PsiSign::CorrectedMinus] {
        let g = psi_gossip(&net, p, sign)?.value;
        let b = psi_broadcast(&ch, &net, p, sign)?.value;
        println!("{sign:?}: gossip psi {g:.2}, broadcast psi {b:.2}");
        for m in [10, 20, 40, 80] {
            println!(
                "  Ñ={m:<3} Var(D) gossip {:.4} slot², broadcast {:.5} slot²",
                sigma_d_squared(n, m, 1.0, g)?,
                sigma_d_squared(n, m, 1.0, b)?
            );
        }
    }
    Ok(())
}
