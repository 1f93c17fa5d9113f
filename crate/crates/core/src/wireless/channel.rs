use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::GridNetwork;
use crate::error::{invalid, Error, Result};
use crate::NodeId;

/// Radio constants shared by every link.
///
/// Defaults are the 2.4 GHz ISM setup: `η = 3`, `λ = 0.125 m`, `R₀ = 1 m`,
/// `Pₙ = 10⁻¹⁰ mW`, `ρ = 10 dB`, gossip at 2.5 mW and broadcast at 100 mW.
/// Message size and bandwidth default to 1024 bits over 1 MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    pub eta: f64,
    pub lambda_m: f64,
    pub r0_m: f64,
    pub pn_mw: f64,
    pub rho_db: f64,
    pub bandwidth_hz: f64,
    pub msg_bits: f64,
    pub pt_gossip_mw: f64,
    pub pt_broadcast_mw: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            eta: 3.0,
            lambda_m: 0.125,
            r0_m: 1.0,
            pn_mw: 1e-10,
            rho_db: 10.0,
            bandwidth_hz: 1e6,
            msg_bits: 1024.0,
            pt_gossip_mw: 2.5,
            pt_broadcast_mw: 100.0,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_m", self.lambda_m),
            ("r0_m", self.r0_m),
            ("pn_mw", self.pn_mw),
            ("bandwidth_hz", self.bandwidth_hz),
            ("msg_bits", self.msg_bits),
            ("pt_gossip_mw", self.pt_gossip_mw),
            ("pt_broadcast_mw", self.pt_broadcast_mw),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.eta.is_finite() && self.eta >= 2.0) {
            return Err(invalid(format!("path-loss exponent must be >= 2, got {}", self.eta)));
        }
        if !self.rho_db.is_finite() {
            return Err(invalid("target SNR must be finite"));
        }
        if self.pt_broadcast_mw < self.pt_gossip_mw {
            return Err(invalid("broadcast power must be at least the gossip power"));
        }
        Ok(())
    }

    pub fn rho_linear(&self) -> f64 {
        10f64.powf(self.rho_db / 10.0)
    }

    /// Free-space power gain at the reference distance, `(λ / 4πR₀)²`.
    pub fn reference_gain(&self) -> f64 {
        (self.lambda_m / (4.0 * PI * self.r0_m)).powi(2)
    }

    /// Slot length `τ = M / (B log₂(1 + ρ))` in seconds.
    pub fn slot_duration(&self) -> Result<f64> {
        if !(self.bandwidth_hz > 0.0) || !(self.msg_bits > 0.0) {
            return Err(invalid("bandwidth and message size must be positive"));
        }
        if !self.rho_db.is_finite() {
            return Err(invalid("target SNR must be finite"));
        }
        Ok(self.msg_bits / (self.bandwidth_hz * self.rho_linear().ln_1p() / 2f64.ln()))
    }

    /// Rayleigh SNR-outage probability of a single transmission over `dist_m`
    /// at transmit power `pt_mw`.
    pub fn outage_prob(&self, dist_m: f64, pt_mw: f64) -> Result<f64> {
        if !(pt_mw > 0.0) {
            return Err(invalid(format!("transmit power must be positive, got {pt_mw}")));
        }
        if !(dist_m >= 0.0) {
            return Err(invalid(format!("distance must be non-negative, got {dist_m}")));
        }
        if dist_m == 0.0 {
            return Err(invalid("zero distance: a node has no link to itself"));
        }
        let x = self.rho_linear() * self.pn_mw * (dist_m / self.r0_m).powf(self.eta)
            / (self.reference_gain() * pt_mw);
        Ok(-(-x).exp_m1())
    }
}

/// Outage of one hop between lattice neighbours at gossip power.
pub fn epsilon_gossip(ch: &ChannelParams, net: &GridNetwork) -> f64 {
    ch.outage_prob(net.spacing_m(), ch.pt_gossip_mw)
        .expect("grid spacing and gossip power are validated positive")
}

/// Broadcast outage between `i` and `k`.
pub fn epsilon_link(ch: &ChannelParams, net: &GridNetwork, i: NodeId, k: NodeId) -> Result<f64> {
    if i == k {
        return Err(Error::SelfLink(i));
    }
    ch.outage_prob(net.distance(i, k), ch.pt_broadcast_mw)
}

/// Broadcast outage from `i` to the farthest node, `ε_{i,max}`.
pub fn epsilon_max(ch: &ChannelParams, net: &GridNetwork, i: NodeId) -> f64 {
    ch.outage_prob(net.max_distance(i), ch.pt_broadcast_mw)
        .expect("grid has at least two nodes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        ((a - b) / b).abs() < rel
    }

    #[test]
    fn slot_duration_values() {
        let ch = ChannelParams::default();
        // 1024 / (1e6 * log2 11)
        assert!(close(ch.slot_duration().unwrap(), 2.960_023_821_495e-4, 1e-9));

        let unit = ChannelParams { rho_db: 0.0, msg_bits: 1000.0, bandwidth_hz: 1000.0, ..ch };
        assert!((unit.slot_duration().unwrap() - 1.0).abs() < 1e-12);

        let matched = ChannelParams { msg_bits: 1e6 * 11f64.log2(), ..ch };
        assert!((matched.slot_duration().unwrap() - 1.0).abs() < 1e-12);

        assert!(ChannelParams { bandwidth_hz: 0.0, ..ch }.slot_duration().is_err());
        assert!(ChannelParams { msg_bits: -1.0, ..ch }.slot_duration().is_err());
    }

    #[test]
    fn outage_values() {
        let ch = ChannelParams::default();
        assert!(close(ch.reference_gain(), 9.894_6e-5, 1e-4));
        assert!(close(ch.outage_prob(10.0, 2.5).unwrap(), 4.034_429_695_79e-3, 1e-9));
        let corner = 80.0 * 2f64.sqrt();
        assert!(close(ch.outage_prob(corner, 100.0).unwrap(), 0.136_151_083_076, 1e-9));
        assert!(ch.outage_prob(10.0, 1e30).unwrap() < 1e-25);
        assert!(ch.outage_prob(0.0, 1.0).is_err());
    }

    #[test]
    fn epsilons_on_grid() {
        let ch = ChannelParams::default();
        let net = GridNetwork::new(9, 10.0).unwrap();
        assert!(close(epsilon_gossip(&ch, &net), 4.034_429_695_79e-3, 1e-9));
        assert!(close(epsilon_max(&ch, &net, net.corner()), 0.136_151_083_076, 1e-9));
        let center = ch.outage_prob(40.0 * 2f64.sqrt(), 100.0).unwrap();
        assert!(close(epsilon_max(&ch, &net, net.center()), center, 1e-12));
        assert!(matches!(epsilon_link(&ch, &net, 3, 3), Err(Error::SelfLink(3))));

        let pair = GridNetwork::new(2, 10.0).unwrap();
        assert!(close(
            epsilon_max(&ch, &pair, 0),
            epsilon_link(&ch, &pair, 0, 3).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn gossip_beats_longer_links_at_equal_power() {
        let ch = ChannelParams { pt_gossip_mw: 100.0, ..Default::default() };
        let net = GridNetwork::new(4, 10.0).unwrap();
        let g = epsilon_gossip(&ch, &net);
        for k in 1..16 {
            if net.distance(0, k) > 10.0 {
                assert!(g < epsilon_link(&ch, &net, 0, k).unwrap());
            }
        }
        let tiny = GridNetwork::new(4, 1e-6).unwrap();
        assert!(epsilon_gossip(&ch, &tiny) < 1e-20);
    }

    #[test]
    fn validation() {
        assert!(ChannelParams::default().validate().is_ok());
        let bad = ChannelParams { pt_broadcast_mw: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(ChannelParams { eta: 1.5, ..Default::default() }.validate().is_err());
    }
}
