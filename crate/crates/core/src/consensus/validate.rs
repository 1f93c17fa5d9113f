use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ledger::Ledger;
use super::message::{Action, CommitMessage};
use crate::error::{invalid, Result};

/// What a faulty node does with its vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultyPolicy {
    /// Report the opposite of the honest verdict.
    VoteInvert,
    /// Report a coin flip.
    VoteRandom,
    /// Vote honestly but push the timestamp up to `max_slots` later.
    TimestampPerturb { max_slots: u64 },
}

impl Default for FaultyPolicy {
    fn default() -> Self {
        FaultyPolicy::VoteInvert
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeBehavior {
    Honest,
    Faulty(FaultyPolicy),
}

impl NodeBehavior {
    pub fn is_faulty(&self) -> bool {
        matches!(self, NodeBehavior::Faulty(_))
    }
}

/// Local verdict and timestamp for one validator.
///
/// Validation is instantaneous, so an honest node stamps the slot in which the
/// proposal reached it.
pub fn local_validate<R: Rng + ?Sized>(
    ledger: &Ledger,
    action: &Action,
    behavior: NodeBehavior,
    received_at: u64,
    rng: &mut R,
) -> (bool, u64) {
    let honest = !ledger.conflicts(action);
    match behavior {
        NodeBehavior::Honest => (honest, received_at),
        NodeBehavior::Faulty(FaultyPolicy::VoteInvert) => (!honest, received_at),
        NodeBehavior::Faulty(FaultyPolicy::VoteRandom) => (rng.random_bool(0.5), received_at),
        NodeBehavior::Faulty(FaultyPolicy::TimestampPerturb { max_slots }) => {
            (honest, received_at + rng.random_range(0..=max_slots))
        }
    }
}

/// Aggregate result of one consensus round as seen by one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundOutcome {
    pub globally_valid: bool,
    pub quorum_met: bool,
    /// Mean of every received commit timestamp, in slots.
    pub consensual_timestamp: f64,
    pub votes_received: usize,
    /// Full-set minus representative consensual timestamp (R2C only).
    pub distortion_vs_full: Option<f64>,
}

/// Majority rule over received commits.
///
/// Fewer than `quorum` commits is a failed round (`quorum_met = false`,
/// not valid), not an error. Ties reject.
pub fn global_validate(commits: &[CommitMessage], quorum: usize) -> Result<RoundOutcome> {
    if commits.is_empty() {
        return Err(invalid("global validation needs at least one commit"));
    }
    let valid = commits.iter().filter(|c| c.validity).count();
    let invalid_votes = commits.len() - valid;
    let quorum_met = commits.len() >= quorum;
    let mean = commits.iter().map(|c| c.timestamp as f64).sum::<f64>() / commits.len() as f64;
    Ok(RoundOutcome {
        globally_valid: quorum_met && valid > invalid_votes,
        quorum_met,
        consensual_timestamp: mean,
        votes_received: commits.len(),
        distortion_vs_full: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn commits(votes: &[(bool, u64)]) -> Vec<CommitMessage> {
        votes.iter().enumerate().map(|(i, &(v, t))| CommitMessage::new(i + 1, v, t)).collect()
    }

    #[test]
    fn local_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ledger = Ledger::default();
        let a = Action::new("a", b"pay 1".to_vec(), 0);
        assert_eq!(local_validate(&ledger, &a, NodeBehavior::Honest, 4, &mut rng), (true, 4));
        let faulty = NodeBehavior::Faulty(FaultyPolicy::VoteInvert);
        assert_eq!(local_validate(&ledger, &a, faulty, 4, &mut rng), (false, 4));

        let mut ledger = Ledger::default();
        ledger.append(a.clone(), 4.0);
        let dup = Action::new("a", b"pay 2".to_vec(), 3);
        assert!(!local_validate(&ledger, &dup, NodeBehavior::Honest, 9, &mut rng).0);

        let perturb = NodeBehavior::Faulty(FaultyPolicy::TimestampPerturb { max_slots: 3 });
        for _ in 0..50 {
            let (v, t) = local_validate(&Ledger::default(), &a, perturb, 10, &mut rng);
            assert!(v && (10..=13).contains(&t));
        }
    }

    #[test]
    fn unanimous() {
        let c = commits(&[(true, 7); 80]);
        let o = global_validate(&c, 80).unwrap();
        assert!(o.globally_valid && o.quorum_met);
        assert_eq!(o.consensual_timestamp, 7.0);
        assert_eq!(o.votes_received, 80);
    }

    #[test]
    fn simple_majority() {
        let c = commits(&[(true, 1), (true, 2), (true, 3), (false, 4), (false, 5)]);
        let o = global_validate(&c, 5).unwrap();
        assert!(o.globally_valid);
        assert_eq!(o.consensual_timestamp, 3.0);
        let tie = commits(&[(true, 1), (false, 1)]);
        assert!(!global_validate(&tie, 1).unwrap().globally_valid);
    }

    #[test]
    fn tolerates_under_a_third() {
        let mut v = vec![(true, 3); 54];
        v.extend(vec![(false, 3); 26]);
        let o = global_validate(&commits(&v), 80 - 25).unwrap();
        assert!(o.globally_valid);
    }

    #[test]
    fn quorum_failure_is_an_outcome() {
        let o = global_validate(&commits(&[(true, 1); 10]), 55).unwrap();
        assert!(!o.quorum_met && !o.globally_valid);
        assert!(global_validate(&[], 1).is_err());
    }
}
