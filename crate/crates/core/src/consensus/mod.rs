//! Protocol state for a single proposed action: messages, roles, local and
//! global validation, and timestamp ordering of the ledger.

mod ledger;
mod message;
mod roles;
mod validate;

pub use ledger::{order_actions, EntryStatus, Ledger, LedgerEntry};
pub use message::{integrity_tag, Action, ActionId, CommitMessage, ProposalMessage};
pub use roles::{assign_behaviors, assign_roles, ConsensusMode, Role, RoleMap};
pub use validate::{global_validate, local_validate, FaultyPolicy, NodeBehavior, RoundOutcome};
