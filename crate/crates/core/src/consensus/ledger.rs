use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use super::message::{Action, ActionId};
use super::validate::RoundOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntryStatus {
    Accepted,
    /// Ordered before something it depends on, or conflicting with an
    /// earlier accepted action; to be proposed again later.
    RejectedForRetry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub action: Action,
    pub consensual_timestamp: f64,
    pub status: EntryStatus,
}

/// Replicated sequence of globally valid actions ordered by consensual timestamp.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn accepted(&self) -> impl Iterator<Item = &Action> {
        self.entries.iter().filter(|e| e.status == EntryStatus::Accepted).map(|e| &e.action)
    }

    pub fn rejected(&self) -> impl Iterator<Item = &Action> {
        self.entries
            .iter()
            .filter(|e| e.status == EntryStatus::RejectedForRetry)
            .map(|e| &e.action)
    }

    /// Whether `action` contradicts something already accepted.
    pub fn conflicts(&self, action: &Action) -> bool {
        self.accepted().any(|a| a.conflicts_with(action))
    }

    /// Record an already-ordered action at the end of the ledger.
    pub fn append(&mut self, action: Action, consensual_timestamp: f64) {
        self.entries.push(LedgerEntry { action, consensual_timestamp, status: EntryStatus::Accepted });
    }
}

fn entry_order(a: &LedgerEntry, b: &LedgerEntry) -> Ordering {
    a.consensual_timestamp
        .total_cmp(&b.consensual_timestamp)
        .then_with(|| a.action.id.cmp(&b.action.id))
        .then_with(|| a.action.payload.cmp(&b.action.payload))
}

/// Merge the globally valid outcomes of finished rounds into `ledger`.
///
/// Entries are sorted by consensual timestamp (ties by action id) and then
/// replayed: an action whose dependency is not already accepted earlier in
/// the sequence, or that conflicts with an earlier accepted one, is marked
/// rejected-for-retry.
pub fn order_actions(ledger: &Ledger, outcomes: &[(Action, RoundOutcome)]) -> Ledger {
    let mut entries: Vec<LedgerEntry> = ledger.entries.clone();
    entries.extend(outcomes.iter().filter(|(_, o)| o.globally_valid).map(|(a, o)| LedgerEntry {
        action: a.clone(),
        consensual_timestamp: o.consensual_timestamp,
        status: EntryStatus::Accepted,
    }));
    entries.sort_by(entry_order);

    let mut seen: BTreeMap<ActionId, Vec<u8>> = BTreeMap::new();
    for e in &mut entries {
        let dep_ok = e.action.depends_on.as_ref().is_none_or(|d| seen.contains_key(d));
        let clash = seen.get(&e.action.id).is_some_and(|p| *p != e.action.payload);
        e.status = if dep_ok && !clash {
            seen.insert(e.action.id.clone(), e.action.payload.clone());
            EntryStatus::Accepted
        } else {
            EntryStatus::RejectedForRetry
        };
    }
    Ledger { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid_at(t: f64) -> RoundOutcome {
        RoundOutcome {
            globally_valid: true,
            quorum_met: true,
            consensual_timestamp: t,
            votes_received: 1,
            distortion_vs_full: None,
        }
    }

    fn ids(l: &Ledger) -> Vec<&str> {
        l.accepted().map(|a| a.id.0.as_str()).collect()
    }

    #[test]
    fn orders_by_timestamp() {
        let a = Action::new("a", b"1".to_vec(), 0);
        let b = Action::new("b", b"1".to_vec(), 1);
        let l = order_actions(&Ledger::default(), &[(b, valid_at(7.0)), (a, valid_at(5.0))]);
        assert_eq!(ids(&l), ["a", "b"]);
    }

    #[test]
    fn ties_break_on_id() {
        let a = Action::new("zeta", b"1".to_vec(), 0);
        let b = Action::new("alpha", b"1".to_vec(), 1);
        let l = order_actions(&Ledger::default(), &[(a, valid_at(5.0)), (b, valid_at(5.0))]);
        assert_eq!(ids(&l), ["alpha", "zeta"]);
    }

    #[test]
    fn singleton_and_invalid_dropped() {
        let a = Action::new("a", b"1".to_vec(), 0);
        let b = Action::new("b", b"1".to_vec(), 0);
        let mut bad = valid_at(1.0);
        bad.globally_valid = false;
        let l = order_actions(&Ledger::default(), &[(a, valid_at(3.0)), (b, bad)]);
        assert_eq!(ids(&l), ["a"]);
        assert_eq!(l.entries().len(), 1);
    }

    #[test]
    fn causal_violations_rejected() {
        let base = Action::new("deposit", b"+5".to_vec(), 0);
        let spend = Action::new("spend", b"-5".to_vec(), 1).after("deposit");
        let l = order_actions(
            &Ledger::default(),
            &[(spend.clone(), valid_at(2.0)), (base.clone(), valid_at(4.0))],
        );
        assert_eq!(ids(&l), ["deposit"]);
        assert_eq!(l.rejected().map(|a| a.id.0.as_str()).collect::<Vec<_>>(), ["spend"]);

        let l = order_actions(&Ledger::default(), &[(spend, valid_at(6.0)), (base, valid_at(4.0))]);
        assert_eq!(ids(&l), ["deposit", "spend"]);
    }

    #[test]
    fn double_spend_loses_to_earlier() {
        let first = Action::new("coin", b"to alice".to_vec(), 0);
        let second = Action::new("coin", b"to bob".to_vec(), 1);
        let l = order_actions(&Ledger::default(), &[(second, valid_at(9.0)), (first, valid_at(3.0))]);
        assert_eq!(l.accepted().next().unwrap().payload, b"to alice");
        assert_eq!(l.rejected().count(), 1);
    }

    #[test]
    fn replay_stable() {
        let outs: Vec<_> = (0..20)
            .map(|i| (Action::new(format!("a{i}").as_str(), vec![i as u8], 0), valid_at((i * 7 % 5) as f64)))
            .collect();
        let once = order_actions(&Ledger::default(), &outs);
        let mut rev = outs.clone();
        rev.reverse();
        assert_eq!(once, order_actions(&Ledger::default(), &rev));
        assert_eq!(once, order_actions(&once, &[]));
    }
}
