//! Consensus and communication co-design for slotted wireless grids.
//!
//! Two consensus protocols run over a square lattice of `N + 1` static radio
//! nodes:
//!
//! * **RC** (referendum consensus): every non-proposer validates and commits.
//! * **R2C** (random representative consensus): a uniformly random subset of
//!   `Ñ` representatives validates; everyone else only aggregates.
//!
//! Messages are spread either by neighbour gossip (multi-hop, low power) or by
//! single-hop broadcast (high power), in TDMA windows of `τ`-second slots with
//! type-I HARQ over Rayleigh-faded links.
//!
//! The crate is split the same way the problem is:
//!
//! * [`wireless`]: lattice geometry, outage probabilities, slot timing, windows.
//! * [`analytics`]: closed-form latency, resiliency and robustness expressions.
//! * [`consensus`]: messages, roles, local/global validation, ledger ordering.
//! * [`sim`]: slotted dissemination, full rounds, and the Monte Carlo harness.
//! * [`experiments`]: scenario files, figure sweeps and the CSV result schema.
//! * [`selftest`]: the acceptance matrix, runnable from the CLI.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod analytics;
pub mod consensus;
pub mod error;
pub mod experiments;
pub mod selftest;
pub mod sim;
pub mod wireless;

pub use error::{Error, Result};

/// Node index into a [`wireless::GridNetwork`], row-major over the lattice.
pub type NodeId = usize;
