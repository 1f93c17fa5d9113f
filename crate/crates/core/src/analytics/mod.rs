//! Closed-form latency, resiliency and robustness expressions.

pub mod erf;
pub mod latency;
pub mod resiliency;
pub mod robustness;
pub mod sizing;

pub use erf::{erf_approx, erf_approx_inv, WINITZKI_A};
pub use latency::{
    r2c_latency_broadcast, r2c_latency_expected, r2c_latency_gossip_lattice, r2c_latency_gossip_lb,
    rc_latency_broadcast, rc_latency_gossip_lattice, rc_latency_gossip_lb,
};
pub use resiliency::{faulty_pmf, n_alpha, resiliency_exact, resiliency_normal};
pub use robustness::{
    n_beta_gamma, psi_broadcast, psi_gossip, psi_gossip_center_closed, psi_gossip_corner_closed,
    sigma_d_squared, DelayMoments, PsiSign, PsiVariant,
};
pub use sizing::{required_validators, ReliabilityTargets, SizingOptions, SizingResult};
