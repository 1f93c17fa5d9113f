//! Slotted simulation of dissemination and whole consensus rounds, plus the
//! seeded Monte Carlo harness.

mod calibrate;
mod dissemination;
mod medium;
mod montecarlo;
mod round;

pub use calibrate::{calibrate_gossip_windows, calibrate_node};
pub use dissemination::{
    disseminate, disseminate_broadcast, disseminate_gossip, energy_account, DisseminationTrace,
};
pub use medium::Medium;
pub use montecarlo::{run_trials, trial_rng, Proportion, Summary};
pub use round::{
    monte_carlo, plan_windows, run_round, sample_distortion, sample_f_tilde, McReport, RoundPlan, TrialRecord,
};
