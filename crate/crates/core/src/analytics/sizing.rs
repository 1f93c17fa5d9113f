//! Minimum representative count for joint resiliency and robustness targets.

use serde::{Deserialize, Serialize};

use super::resiliency::n_alpha;
use super::robustness::{n_beta_gamma, psi_broadcast, psi_gossip, PsiSign};
use crate::error::{invalid, Result};
use crate::wireless::{ChannelParams, Dissemination, GridNetwork};
use crate::NodeId;

/// Reliability targets for one round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReliabilityTargets {
    /// Target `Pr[Ñ > 3F̃]`.
    pub alpha: f64,
    /// Acceptable timestamp distortion, in slots.
    pub beta_slots: f64,
    /// Target `Pr[|D| ≤ β]`.
    pub gamma: f64,
    /// Target per-window dissemination success probability.
    pub zeta: f64,
    /// Assumed number of faulty nodes `F`.
    pub f_faulty: usize,
}

impl Default for ReliabilityTargets {
    fn default() -> Self {
        Self { alpha: 0.99, beta_slots: 1.0, gamma: 0.9, zeta: 0.9999, f_faulty: 5 }
    }
}

impl ReliabilityTargets {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid(format!("α must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.beta_slots >= 0.0) {
            return Err(invalid(format!("β must be non-negative, got {}", self.beta_slots)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(invalid(format!("γ must lie in [0, 1], got {}", self.gamma)));
        }
        if !(self.zeta >= 0.0 && self.zeta < 1.0) {
            return Err(invalid(format!("ζ must lie in [0, 1), got {}", self.zeta)));
        }
        if self.f_faulty > n {
            return Err(invalid(format!("F = {} exceeds N = {n}", self.f_faulty)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingOptions {
    /// Continuity correction for the normal approximation of `F̃`.
    pub phi: f64,
    pub psi_sign: PsiSign,
}

impl Default for SizingOptions {
    fn default() -> Self {
        Self { phi: 0.5, psi_sign: PsiSign::PaperPlus }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizingResult {
    pub n_alpha: f64,
    pub n_beta_gamma: f64,
    /// `⌈max(N_α, N_(β,γ))⌉`, clamped to `[1, N]`.
    pub n_required: usize,
}

pub fn required_validators(
    net: &GridNetwork,
    ch: &ChannelParams,
    proposer: NodeId,
    dissemination: Dissemination,
    targets: &ReliabilityTargets,
    opts: SizingOptions,
) -> Result<SizingResult> {
    let n = net.validator_count();
    targets.validate(n)?;
    let na = n_alpha(n, targets.f_faulty, targets.alpha, opts.phi)?;
    let psi = match dissemination {
        Dissemination::Gossip => psi_gossip(net, proposer, opts.psi_sign)?,
        Dissemination::Broadcast => psi_broadcast(ch, net, proposer, opts.psi_sign)?,
    };
    let nbg = n_beta_gamma(n, targets.beta_slots, targets.gamma, 1.0, psi.value)?;
    let n_required = (na.max(nbg).ceil() as usize).clamp(1, n);
    Ok(SizingResult { n_alpha: na, n_beta_gamma: nbg, n_required })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net81() -> GridNetwork {
        GridNetwork::new(9, 10.0).unwrap()
    }

    #[test]
    fn no_faults_loose_distortion() {
        let t = ReliabilityTargets { f_faulty: 0, beta_slots: 1e9, ..Default::default() };
        let ch = ChannelParams::default();
        for d in [Dissemination::Gossip, Dissemination::Broadcast] {
            let r = required_validators(&net81(), &ch, 0, d, &t, SizingOptions::default()).unwrap();
            assert_eq!(r.n_required, 2);
        }
    }

    #[test]
    fn certain_resiliency_needs_everyone() {
        let t = ReliabilityTargets { alpha: 1.0, ..Default::default() };
        let ch = ChannelParams::default();
        let r = required_validators(&net81(), &ch, 0, Dissemination::Broadcast, &t, SizingOptions::default())
            .unwrap();
        assert_eq!(r.n_required, 80, "{r:?}");
    }

    #[test]
    fn monotone_in_targets() {
        let ch = ChannelParams::default();
        let opts = SizingOptions::default();
        let size = |t: ReliabilityTargets| {
            required_validators(&net81(), &ch, 0, Dissemination::Gossip, &t, opts).unwrap().n_required
        };
        let base = ReliabilityTargets::default();
        let mut prev = 0;
        for gamma in [0.1, 0.5, 0.9, 0.99] {
            let n = size(ReliabilityTargets { gamma, ..base });
            assert!(n >= prev);
            prev = n;
        }
        let mut prev = usize::MAX;
        for beta_slots in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let n = size(ReliabilityTargets { beta_slots, ..base });
            assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn infeasible_fault_share() {
        let t = ReliabilityTargets { f_faulty: 27, ..Default::default() };
        let ch = ChannelParams::default();
        let err = required_validators(&net81(), &ch, 0, Dissemination::Gossip, &t, SizingOptions::default())
            .unwrap_err();
        assert!(err.is_infeasible());
    }
}
