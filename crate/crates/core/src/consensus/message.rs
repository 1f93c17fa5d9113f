use std::fmt;

use serde::{Deserialize, Serialize};

use crate::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionId(pub String);

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ActionId {
    fn from(s: &str) -> Self {
        ActionId(s.to_owned())
    }
}

/// A proposed control action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub id: ActionId,
    pub payload: Vec<u8>,
    pub proposer: NodeId,
    /// An action that must already be ordered before this one.
    pub depends_on: Option<ActionId>,
}

impl Action {
    pub fn new(id: impl Into<ActionId>, payload: impl Into<Vec<u8>>, proposer: NodeId) -> Self {
        Self { id: id.into(), payload: payload.into(), proposer, depends_on: None }
    }

    pub fn after(mut self, dep: impl Into<ActionId>) -> Self {
        self.depends_on = Some(dep.into());
        self
    }

    /// Same id, different content: a double spend.
    pub fn conflicts_with(&self, other: &Action) -> bool {
        self.id == other.id && self.payload != other.payload
    }
}

/// Non-cryptographic FNV-1a digest standing in for a signature.
pub fn integrity_tag<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for part in parts {
        for &b in (part.len() as u64).to_le_bytes().iter().chain(part) {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// `[A_p, T(A_p)_p, S(V)]` signed by the proposer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposalMessage {
    pub action: Action,
    /// Absolute proposal time in slots.
    pub proposed_at: u64,
    /// Validators in the order they take their commit windows.
    pub commit_order: Vec<NodeId>,
    pub integrity_tag: u64,
}

impl ProposalMessage {
    pub fn new(action: Action, proposed_at: u64, commit_order: Vec<NodeId>) -> Self {
        let tag = Self::digest(&action, proposed_at, &commit_order);
        Self { action, proposed_at, commit_order, integrity_tag: tag }
    }

    fn digest(action: &Action, proposed_at: u64, order: &[NodeId]) -> u64 {
        let order: Vec<u8> = order.iter().flat_map(|v| (*v as u64).to_le_bytes()).collect();
        let dep = action.depends_on.as_ref().map(|d| d.0.as_bytes()).unwrap_or_default();
        integrity_tag([
            action.id.0.as_bytes(),
            &action.payload,
            &(action.proposer as u64).to_le_bytes(),
            dep,
            &proposed_at.to_le_bytes(),
            &order,
        ])
    }

    pub fn verify(&self) -> bool {
        self.integrity_tag == Self::digest(&self.action, self.proposed_at, &self.commit_order)
    }
}

/// `[V(A_p)_v, T(A_p)_v]` signed by validator `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitMessage {
    pub validator: NodeId,
    pub validity: bool,
    /// Local validation time in slots.
    pub timestamp: u64,
    pub integrity_tag: u64,
}

impl CommitMessage {
    pub fn new(validator: NodeId, validity: bool, timestamp: u64) -> Self {
        let tag = Self::digest(validator, validity, timestamp);
        Self { validator, validity, timestamp, integrity_tag: tag }
    }

    fn digest(validator: NodeId, validity: bool, timestamp: u64) -> u64 {
        integrity_tag([
            &(validator as u64).to_le_bytes()[..],
            &[validity as u8],
            &timestamp.to_le_bytes(),
        ])
    }

    pub fn verify(&self) -> bool {
        self.integrity_tag == Self::digest(self.validator, self.validity, self.timestamp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_detect_tampering() {
        let p = ProposalMessage::new(Action::new("a", b"x".to_vec(), 0), 3, vec![1, 2, 3]);
        assert!(p.verify());
        let mut forged = p.clone();
        forged.commit_order.swap(0, 1);
        assert!(!forged.verify());

        let c = CommitMessage::new(4, true, 9);
        assert!(c.verify());
        assert!(!CommitMessage { validity: false, ..c }.verify());
    }

    #[test]
    fn field_boundaries_matter() {
        assert_ne!(integrity_tag([&b"ab"[..], b"c"]), integrity_tag([&b"a"[..], b"bc"]));
    }

    #[test]
    fn conflicts() {
        let a = Action::new("x", b"1".to_vec(), 0);
        assert!(a.conflicts_with(&Action::new("x", b"2".to_vec(), 1)));
        assert!(!a.conflicts_with(&Action::new("x", b"1".to_vec(), 1)));
        assert!(!a.conflicts_with(&Action::new("y", b"2".to_vec(), 1)));
    }
}
