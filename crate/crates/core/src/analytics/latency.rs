//! End-to-end latency in slots. Multiply by `τ` for seconds.
//!
//! A round is a TDMA schedule: the proposer's window followed by one commit
//! window per validator, so latency is a sum of windows.

use super::super::wireless::{broadcast_windows, exact_sqrt, ChannelParams, GridNetwork, ProposerPosition};
use crate::error::{invalid, Result};
use crate::NodeId;

fn grid_side(n: usize) -> Result<usize> {
    exact_sqrt(n + 1)
        .filter(|&s| s >= 2)
        .ok_or_else(|| invalid(format!("N + 1 = {} is not a square of side >= 2", n + 1)))
}

/// Lower bound on RC latency with gossip, from `w_i ≥ max_k e_ik`.
pub fn rc_latency_gossip_lb(n: usize) -> Result<u64> {
    let s = grid_side(n)? as u64;
    let nodes = s * s;
    Ok(if s % 2 == 1 {
        ((3 * s - 2) * nodes - s) / 2
    } else {
        (3 * s - 2) * nodes / 2
    })
}

/// `Σ_i max_k e_ik` summed over the lattice directly.
pub fn rc_latency_gossip_lattice(net: &GridNetwork) -> u64 {
    (0..net.node_count()).map(|i| net.max_hops(i) as u64).sum()
}

/// RC latency with broadcast: every node's window summed.
pub fn rc_latency_broadcast(ch: &ChannelParams, net: &GridNetwork, zeta: f64) -> Result<u64> {
    Ok(broadcast_windows(ch, net, zeta)?.iter().map(|&w| w as u64).sum())
}

/// Expected R2C latency `w_p + (Ñ/N) Σ_v w_v`, averaged over representative draws.
pub fn r2c_latency_expected(w_p: f64, w_v: &[f64], n: usize, n_tilde: usize) -> Result<f64> {
    if w_v.len() != n {
        return Err(invalid(format!("expected {n} validator windows, got {}", w_v.len())));
    }
    if n_tilde > n {
        return Err(invalid(format!("Ñ = {n_tilde} exceeds N = {n}")));
    }
    Ok(w_p + n_tilde as f64 / n as f64 * w_v.iter().sum::<f64>())
}

/// Closed-form R2C gossip lower bound for a corner or centre proposer.
pub fn r2c_latency_gossip_lb(n: usize, n_tilde: usize, pos: ProposerPosition) -> Result<f64> {
    let s = grid_side(n)? as f64;
    if n_tilde > n {
        return Err(invalid(format!("Ñ = {n_tilde} exceeds N = {n}")));
    }
    let (nf, m) = (n as f64, n_tilde as f64);
    match pos {
        ProposerPosition::Corner => {
            let slope = if s as usize % 2 == 1 {
                1.5 * s - (s - 1.0) / nf - 1.0
            } else {
                1.5 * s - (s - 2.0) / (2.0 * nf) - 1.0
            };
            Ok(slope * m + 2.0 * (s - 1.0))
        }
        ProposerPosition::Center => Ok((1.5 * s - 1.0) * m + s - 1.0),
        ProposerPosition::Index(_) => Err(invalid(
            "closed form covers corner and centre proposers; use r2c_latency_gossip_lattice",
        )),
    }
}

/// R2C gossip lower bound for any proposer, with windows at `max_k e_ik`.
pub fn r2c_latency_gossip_lattice(net: &GridNetwork, proposer: NodeId, n_tilde: usize) -> Result<f64> {
    let w: Vec<f64> = (0..net.node_count())
        .filter(|&v| v != proposer)
        .map(|v| net.max_hops(v) as f64)
        .collect();
    r2c_latency_expected(net.max_hops(proposer) as f64, &w, net.validator_count(), n_tilde)
}

/// R2C latency with broadcast windows.
pub fn r2c_latency_broadcast(
    ch: &ChannelParams,
    net: &GridNetwork,
    proposer: NodeId,
    n_tilde: usize,
    zeta: f64,
) -> Result<f64> {
    if proposer >= net.node_count() {
        return Err(invalid(format!("proposer {proposer} outside the grid")));
    }
    let windows = broadcast_windows(ch, net, zeta)?;
    let w_v: Vec<f64> = windows
        .iter()
        .enumerate()
        .filter(|&(v, _)| v != proposer)
        .map(|(_, &w)| w as f64)
        .collect();
    r2c_latency_expected(windows[proposer] as f64, &w_v, net.validator_count(), n_tilde)
}
