use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::validate::{FaultyPolicy, NodeBehavior};
use crate::error::{invalid, Result};
use crate::wireless::GridNetwork;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsensusMode {
    /// Every non-proposer validates.
    Rc,
    /// A random subset of `Ñ` representatives validates.
    R2c,
}

impl ConsensusMode {
    pub fn label(self) -> &'static str {
        match self {
            ConsensusMode::Rc => "rc",
            ConsensusMode::R2c => "r2c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Proposer,
    Validator,
    Acceptor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleMap {
    pub proposer: NodeId,
    pub roles: Vec<Role>,
    /// Validators in commit order, `S(·)`.
    pub commit_order: Vec<NodeId>,
}

impl RoleMap {
    pub fn validators(&self) -> &[NodeId] {
        &self.commit_order
    }

    pub fn is_validator(&self, v: NodeId) -> bool {
        self.roles[v] == Role::Validator
    }
}

/// Pick validators and their commit order.
///
/// RC and R2C share one code path (RC is R2C with `Ñ = N`), so the two
/// consume the rng identically and agree draw-for-draw when `Ñ = N`.
pub fn assign_roles<R: Rng + ?Sized>(
    net: &GridNetwork,
    proposer: NodeId,
    mode: ConsensusMode,
    n_tilde: usize,
    rng: &mut R,
) -> Result<RoleMap> {
    let total = net.node_count();
    if proposer >= total {
        return Err(invalid(format!("proposer {proposer} outside the grid")));
    }
    let n = total - 1;
    let n_tilde = match mode {
        ConsensusMode::Rc => n,
        ConsensusMode::R2c if (1..=n).contains(&n_tilde) => n_tilde,
        ConsensusMode::R2c => return Err(invalid(format!("Ñ = {n_tilde} outside [1, {n}]"))),
    };
    let skip = |i: usize| if i >= proposer { i + 1 } else { i };
    let mut order: Vec<NodeId> = index::sample(rng, n, n_tilde).into_iter().map(skip).collect();
    order.shuffle(rng);

    let mut roles = vec![Role::Acceptor; total];
    roles[proposer] = Role::Proposer;
    for &v in &order {
        roles[v] = Role::Validator;
    }
    Ok(RoleMap { proposer, roles, commit_order: order })
}

/// Mark `f` uniformly chosen non-proposer nodes faulty.
pub fn assign_behaviors<R: Rng + ?Sized>(
    net: &GridNetwork,
    proposer: NodeId,
    f: usize,
    policy: FaultyPolicy,
    rng: &mut R,
) -> Result<Vec<NodeBehavior>> {
    let n = net.validator_count();
    if f > n {
        return Err(invalid(format!("F = {f} exceeds N = {n}")));
    }
    let mut out = vec![NodeBehavior::Honest; net.node_count()];
    for i in index::sample(rng, n, f) {
        let v = if i >= proposer { i + 1 } else { i };
        out[v] = NodeBehavior::Faulty(policy);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rc_uses_everyone() {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let roles = assign_roles(&net, 40, ConsensusMode::Rc, 0, &mut rng).unwrap();
        assert_eq!(roles.validators().len(), 80);
        assert!(!roles.validators().contains(&40));
        assert_eq!(roles.roles[40], Role::Proposer);
    }

    #[test]
    fn r2c_full_equals_rc() {
        let net = GridNetwork::new(5, 10.0).unwrap();
        let a = assign_roles(&net, 3, ConsensusMode::Rc, 0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = assign_roles(&net, 3, ConsensusMode::R2c, 24, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn r2c_subset_is_distinct_and_excludes_proposer() {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = assign_roles(&net, 0, ConsensusMode::R2c, 20, &mut rng).unwrap();
            let mut v = r.validators().to_vec();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 20);
            assert!(!v.contains(&0));
            assert_eq!(r.roles.iter().filter(|&&x| x == Role::Acceptor).count(), 60);
        }
    }

    #[test]
    fn r2c_range_errors() {
        let net = GridNetwork::new(3, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(assign_roles(&net, 0, ConsensusMode::R2c, 0, &mut rng).is_err());
        assert!(assign_roles(&net, 0, ConsensusMode::R2c, 9, &mut rng).is_err());
        assert!(assign_roles(&net, 9, ConsensusMode::Rc, 0, &mut rng).is_err());
    }

    #[test]
    fn inclusion_frequency_is_uniform() {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2020);
        let trials = 100_000;
        let mut hits = vec![0u32; 81];
        for _ in 0..trials {
            for &v in assign_roles(&net, 0, ConsensusMode::R2c, 20, &mut rng).unwrap().validators() {
                hits[v] += 1;
            }
        }
        let p: f64 = 0.25;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for (v, &h) in hits.iter().enumerate().skip(1) {
            let z = (h as f64 - trials as f64 * p) / sd;
            assert!(z.abs() < 3.0, "node {v}: z = {z}");
        }
        assert_eq!(hits[0], 0);
    }

    #[test]
    fn faulty_count_exact() {
        let net = GridNetwork::new(9, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = assign_behaviors(&net, 0, 25, FaultyPolicy::VoteInvert, &mut rng).unwrap();
        assert_eq!(b.iter().filter(|x| x.is_faulty()).count(), 25);
        assert!(!b[0].is_faulty());
        assert!(assign_behaviors(&net, 0, 81, FaultyPolicy::VoteInvert, &mut rng).is_err());
    }
}
