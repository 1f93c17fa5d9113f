//! Consensual-timestamp distortion between the full validator set and a
//! random representative subset.
//!
//! The distortion variance is `σ_D² = τ² (N − Ñ) ψ / (Ñ N²)`, where `ψ`
//! aggregates the first two moments of each validator's delivery delay.
//! Two sign conventions for the cross term are carried side by side.

use serde::{Deserialize, Serialize};

use super::erf::erf_approx_inv;
use crate::error::{invalid, Result};
use crate::wireless::{epsilon_link, ChannelParams, GridNetwork};
use crate::NodeId;

/// Sign of the cross-moment term in `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiSign {
    /// `Σ (E[Z²] + (1/(N−1)) Σ_{j≠v} E[Z_v]E[Z_j])`. Matches the corner and
    /// centre closed forms; conservative.
    PaperPlus,
    /// `Σ (E[Z²] − (1/(N−1)) Σ_{j≠v} E[Z_v]E[Z_j])`. The law-of-total-variance
    /// value; matches sampled distortion.
    CorrectedMinus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiVariant {
    pub tag: PsiSign,
    pub value: f64,
}

/// First and second moment of one validator's delivery delay, in slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayMoments {
    pub mean: f64,
    pub second: f64,
}

impl DelayMoments {
    pub fn deterministic(v: f64) -> Self {
        Self { mean: v, second: v * v }
    }

    /// Geometric delay on `{1, 2, …}` with per-slot failure probability `eps`.
    pub fn geometric(eps: f64) -> Self {
        let q = 1.0 - eps;
        Self { mean: 1.0 / q, second: (1.0 + eps) / (q * q) }
    }

    pub fn variance(&self) -> f64 {
        self.second - self.mean * self.mean
    }
}

pub fn psi_from_moments(moments: &[DelayMoments], sign: PsiSign) -> Result<PsiVariant> {
    let n = moments.len();
    if n < 2 {
        return Err(invalid("ψ needs at least two validators"));
    }
    let second: f64 = moments.iter().map(|m| m.second).sum();
    let s: f64 = moments.iter().map(|m| m.mean).sum();
    let s2: f64 = moments.iter().map(|m| m.mean * m.mean).sum();
    let cross = (s * s - s2) / (n - 1) as f64;
    let value = match sign {
        PsiSign::PaperPlus => second + cross,
        PsiSign::CorrectedMinus => second - cross,
    };
    Ok(PsiVariant { tag: sign, value })
}

/// Gossip delay moments from `proposer`: deterministic hop counts.
pub fn gossip_moments(net: &GridNetwork, proposer: NodeId) -> Vec<DelayMoments> {
    (0..net.node_count())
        .filter(|&v| v != proposer)
        .map(|v| DelayMoments::deterministic(net.hops(proposer, v) as f64))
        .collect()
}

/// Broadcast delay moments from `proposer`: geometric in the link outage.
pub fn broadcast_moments(ch: &ChannelParams, net: &GridNetwork, proposer: NodeId) -> Vec<DelayMoments> {
    (0..net.node_count())
        .filter(|&v| v != proposer)
        .map(|v| DelayMoments::geometric(epsilon_link(ch, net, proposer, v).expect("v != proposer")))
        .collect()
}

pub fn psi_gossip(net: &GridNetwork, proposer: NodeId, sign: PsiSign) -> Result<PsiVariant> {
    check_member(net, proposer)?;
    psi_from_moments(&gossip_moments(net, proposer), sign)
}

pub fn psi_broadcast(
    ch: &ChannelParams,
    net: &GridNetwork,
    proposer: NodeId,
    sign: PsiSign,
) -> Result<PsiVariant> {
    check_member(net, proposer)?;
    psi_from_moments(&broadcast_moments(ch, net, proposer), sign)
}

fn check_member(net: &GridNetwork, p: NodeId) -> Result<()> {
    if p >= net.node_count() {
        return Err(invalid(format!("proposer {p} outside the grid")));
    }
    Ok(())
}

/// Closed-form gossip `ψ` (plus sign) for a corner proposer.
pub fn psi_gossip_corner_closed(n: usize) -> f64 {
    let nf = n as f64;
    let r = (nf + 1.0).sqrt();
    (nf + 1.0) * ((13.0 * nf - 24.0 * r + 16.0) * nf + 12.0 * (r - 1.0)) / (6.0 * (nf - 1.0))
}

/// Closed-form gossip `ψ` (plus sign) for the centre of an odd-sided grid.
pub fn psi_gossip_center_closed(n: usize) -> f64 {
    let nf = n as f64;
    (13.0 * nf * nf - 4.0 * nf - 8.0) * nf / (24.0 * (nf - 1.0))
}

/// `σ_D² = τ² (N − Ñ) ψ / (Ñ N²)`.
pub fn sigma_d_squared(n: usize, n_tilde: usize, tau: f64, psi: f64) -> Result<f64> {
    if n_tilde == 0 || n_tilde > n {
        return Err(invalid(format!("Ñ = {n_tilde} outside [1, {n}]")));
    }
    let (nf, m) = (n as f64, n_tilde as f64);
    Ok(tau * tau * (nf - m) * psi / (m * nf * nf))
}

/// Representatives needed so that `Pr[|D| ≤ β] ≥ γ` under the normal model:
/// `N_(β,γ) = [1/N + β²N / (2τ² g⁻¹(γ)² ψ)]⁻¹`.
///
/// `beta` and `tau` must share a unit; pass `tau = 1` for β in slots.
pub fn n_beta_gamma(n: usize, beta: f64, gamma: f64, tau: f64, psi: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("need at least one candidate validator"));
    }
    if !(beta >= 0.0) {
        return Err(invalid(format!("β must be non-negative, got {beta}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("γ must lie in [0, 1], got {gamma}")));
    }
    if !(tau > 0.0) {
        return Err(invalid(format!("τ must be positive, got {tau}")));
    }
    if psi <= 0.0 {
        return Ok(1.0);
    }
    if gamma == 1.0 {
        return Ok(n as f64);
    }
    let c = erf_approx_inv(gamma)?;
    if c == 0.0 || beta.is_infinite() {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(1.0 / (1.0 / nf + beta * beta * nf / (2.0 * tau * tau * c * c * psi)))
}

/// Chebyshev bound `Pr[|D| ≥ β] ≤ Var(D)/β²`, clipped to 1. Diagnostic only.
pub fn chebyshev_outage_bound(var_d: f64, beta: f64) -> f64 {
    if beta <= 0.0 {
        return 1.0;
    }
    (var_d / (beta * beta)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lattice_matches_spot_values() {
        let net = GridNetwork::new(3, 10.0).unwrap();
        let cor = psi_gossip(&net, net.corner(), PsiSign::PaperPlus).unwrap().value;
        let cen = psi_gossip(&net, net.center(), PsiSign::PaperPlus).unwrap().value;
        assert!((cor - 87.428_571_428_571).abs() < 1e-9);
        assert!((cen - 37.714_285_714_286).abs() < 1e-9);
    }

    #[test]
    fn lattice_matches_closed_forms() {
        for side in [3usize, 5, 9] {
            let net = GridNetwork::new(side, 10.0).unwrap();
            let n = net.validator_count();
            let cor = psi_gossip(&net, net.corner(), PsiSign::PaperPlus).unwrap().value;
            let cen = psi_gossip(&net, net.center(), PsiSign::PaperPlus).unwrap().value;
            assert!(rel(cor, psi_gossip_corner_closed(n)) < 1e-9);
            assert!(rel(cen, psi_gossip_center_closed(n)) < 1e-9);
        }
    }

    #[test]
    fn corrected_minus_decomposition() {
        let ch = ChannelParams::default();
        let net = GridNetwork::new(9, 10.0).unwrap();
        for p in [0, 40, 17] {
            for moments in [gossip_moments(&net, p), broadcast_moments(&ch, &net, p)] {
                let n = moments.len() as f64;
                let mbar = moments.iter().map(|m| m.mean).sum::<f64>() / n;
                let spread: f64 = moments.iter().map(|m| (m.mean - mbar).powi(2)).sum();
                let var: f64 = moments.iter().map(DelayMoments::variance).sum();
                let expect = n / (n - 1.0) * spread + var;
                let minus = psi_from_moments(&moments, PsiSign::CorrectedMinus).unwrap().value;
                let plus = psi_from_moments(&moments, PsiSign::PaperPlus).unwrap().value;
                assert!(rel(minus, expect) < 1e-9);
                assert!(minus <= plus);
            }
        }
    }

    #[test]
    fn identical_deterministic_delays_vanish() {
        let m = vec![DelayMoments::deterministic(4.0); 20];
        let v = psi_from_moments(&m, PsiSign::CorrectedMinus).unwrap().value;
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn sigma_d_values() {
        assert_eq!(sigma_d_squared(80, 80, 1.0, 123.0).unwrap(), 0.0);
        let psi = psi_gossip_center_closed(80);
        assert!((psi - 3496.708_860_759).abs() < 1e-6);
        let v = sigma_d_squared(80, 20, 1.0, 3496.71).unwrap();
        assert!((v - 1.639_082_812_5).abs() < 1e-9);
        let half = sigma_d_squared(80, 40, 1.0, psi).unwrap();
        let quarter = sigma_d_squared(80, 20, 1.0, psi).unwrap();
        assert!((quarter / half - 3.0).abs() < 1e-12);
    }

    #[test]
    fn n_beta_gamma_limits() {
        let psi = psi_gossip_center_closed(80);
        assert!(n_beta_gamma(80, 1e9, 0.9, 1.0, psi).unwrap() < 1e-9);
        assert!(n_beta_gamma(80, 1.0, 1e-12, 1.0, psi).unwrap() < 1e-9);
        assert_eq!(n_beta_gamma(80, 1.0, 0.9, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(n_beta_gamma(80, 1.0, 1.0, 1.0, psi).unwrap(), 80.0);
        assert!(n_beta_gamma(80, -1.0, 0.9, 1.0, psi).is_err());
    }

    #[test]
    fn n_beta_gamma_inverts_normal_model() {
        // Bisection on Pr[|D| ≤ β] = g(β / (σ_D(x) √2)) ≥ γ over real x.
        use crate::analytics::erf::erf_approx;
        let (n, beta, gamma) = (80usize, 1.0, 0.9);
        let psi = psi_gossip_center_closed(n);
        let prob = |x: f64| {
            let nf = n as f64;
            let var = (nf - x) * psi / (x * nf * nf);
            erf_approx(beta / (var.sqrt() * std::f64::consts::SQRT_2))
        };
        let (mut lo, mut hi) = (1e-6, n as f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if prob(mid) >= gamma {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let closed = n_beta_gamma(n, beta, gamma, 1.0, psi).unwrap();
        assert!(rel(closed, hi) < 1e-9, "{closed} vs {hi}");
    }

    #[test]
    fn chebyshev() {
        assert_eq!(chebyshev_outage_bound(4.0, 1.0), 1.0);
        assert_eq!(chebyshev_outage_bound(1.0, 2.0), 0.25);
    }
}
