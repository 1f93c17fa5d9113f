use std::sync::Arc;

use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use super::calibrate::calibrate_gossip_windows;
use super::dissemination::{disseminate, energy_account};
use super::medium::Medium;
use super::montecarlo::{run_trials, Proportion, Summary};
use crate::consensus::{
    assign_behaviors, assign_roles, global_validate, local_validate, Action, CommitMessage,
    ConsensusMode, FaultyPolicy, Ledger, ProposalMessage, RoundOutcome,
};
use crate::error::{invalid, Result};
use crate::wireless::{broadcast_windows, Dissemination};
use crate::NodeId;

/// Everything needed to simulate one round, fully resolved.
#[derive(Debug, Clone)]
pub struct RoundPlan {
    pub medium: Arc<Medium>,
    pub mode: ConsensusMode,
    pub dissemination: Dissemination,
    pub proposer: NodeId,
    /// Representatives per round; ignored for RC.
    pub n_tilde: usize,
    /// TDMA window of every node, in slots.
    pub windows: Vec<u32>,
    pub f_faulty: usize,
    pub policy: FaultyPolicy,
}

impl RoundPlan {
    pub fn validate(&self) -> Result<()> {
        let net = self.medium.net();
        let n = net.validator_count();
        if self.proposer >= net.node_count() {
            return Err(invalid(format!("proposer {} outside the grid", self.proposer)));
        }
        if self.windows.len() != net.node_count() || self.windows.contains(&0) {
            return Err(invalid("need a positive window for every node"));
        }
        if self.mode == ConsensusMode::R2c && !(1..=n).contains(&self.n_tilde) {
            return Err(invalid(format!("Ñ = {} outside [1, {n}]", self.n_tilde)));
        }
        if self.f_faulty > n {
            return Err(invalid(format!("F = {} exceeds N = {n}", self.f_faulty)));
        }
        Ok(())
    }

    pub fn validator_count(&self) -> usize {
        match self.mode {
            ConsensusMode::Rc => self.medium.net().validator_count(),
            ConsensusMode::R2c => self.n_tilde,
        }
    }

    /// Commits the observer waits for: `N − F` for RC. R2C waits out every
    /// window anyway, so it asks for `Ñ` minus the expected faulty share.
    pub fn quorum(&self) -> usize {
        let n = self.medium.net().validator_count();
        match self.mode {
            ConsensusMode::Rc => (n - self.f_faulty).max(1),
            ConsensusMode::R2c => (self.n_tilde - self.f_faulty * self.n_tilde / n).max(1),
        }
    }
}

/// Windows for every node: closed form for broadcast, calibrated for gossip.
pub fn plan_windows(
    medium: &Medium,
    kind: Dissemination,
    zeta: f64,
    calibration_trials: u64,
    seed: u64,
) -> Result<Vec<u32>> {
    match kind {
        Dissemination::Broadcast => broadcast_windows(medium.channel(), medium.net(), zeta),
        Dissemination::Gossip => calibrate_gossip_windows(medium, zeta, calibration_trials, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Sum of all elapsed TDMA windows.
    pub latency_slots: u64,
    pub latency_s: f64,
    /// Sum over disseminations of the slot in which each actually finished.
    pub completion_slots: u64,
    pub proposal_completion_slots: u32,
    pub energy_mj: f64,
    pub resilient: bool,
    /// Full-set minus representative consensual timestamp, in slots.
    pub distortion_slots: f64,
    pub dissemination_success: bool,
    pub f_tilde: usize,
    pub globally_valid: bool,
    pub quorum_met: bool,
    pub consensual_timestamp: f64,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

/// Simulate one round. Proposal time is slot 0; the proposer's view of
/// the commits decides the outcome.
pub fn run_round<R: Rng + ?Sized>(plan: &RoundPlan, rng: &mut R) -> Result<TrialRecord> {
    plan.validate()?;
    let medium = &*plan.medium;
    let net = medium.net();
    let p = plan.proposer;
    let kind = plan.dissemination;

    // Phase 1: roles, fault placement and the proposal itself.
    let roles = assign_roles(net, p, plan.mode, plan.n_tilde, rng)?;
    let behaviors = assign_behaviors(net, p, plan.f_faulty, plan.policy, rng)?;
    let proposal = ProposalMessage::new(Action::new("a0", b"set 1".to_vec(), p), 0, roles.commit_order.clone());
    let prop = disseminate(medium, kind, p, plan.windows[p], rng)?;

    // Phase 2: every node that heard the proposal forms a verdict, so the
    // full-set timestamp is available as a counterfactual.
    let ledger = Ledger::default();
    let local: Vec<Option<(bool, u64)>> = (0..net.node_count())
        .map(|v| {
            let z = prop.delivery_slot[v].filter(|_| v != p)?;
            Some(local_validate(&ledger, &proposal.action, behaviors[v], z as u64, rng))
        })
        .collect();

    // Phase 3: commit windows in the announced order.
    let mut latency = plan.windows[p] as u64;
    let mut completion = prop.completion_slot() as u64;
    let proposal_completion = prop.completion_slot();
    let mut success = prop.complete();
    let mut traces = vec![prop];
    let mut commits = Vec::with_capacity(roles.commit_order.len());
    for &v in &roles.commit_order {
        latency += plan.windows[v] as u64;
        let Some((valid, ts)) = local[v] else {
            continue;
        };
        let tr = disseminate(medium, kind, v, plan.windows[v], rng)?;
        completion += tr.completion_slot() as u64;
        success &= tr.complete();
        if tr.delivery_slot[p].is_some() {
            commits.push(CommitMessage::new(v, valid, ts));
        }
        traces.push(tr);
    }

    // Phase 4.
    let mut outcome = if commits.is_empty() {
        RoundOutcome {
            globally_valid: false,
            quorum_met: false,
            consensual_timestamp: f64::NAN,
            votes_received: 0,
            distortion_vs_full: None,
        }
    } else {
        global_validate(&commits, plan.quorum())?
    };
    let stamp = |v: usize| local[v].map(|(_, t)| t as f64);
    let full = mean((0..net.node_count()).filter_map(stamp));
    let reps = mean((0..net.node_count()).filter(|&v| roles.is_validator(v)).filter_map(stamp));
    let distortion = full - reps;
    if plan.mode == ConsensusMode::R2c {
        outcome.distortion_vs_full = Some(distortion);
    }

    let f_tilde = roles.validators().iter().filter(|&&v| behaviors[v].is_faulty()).count();
    Ok(TrialRecord {
        latency_slots: latency,
        latency_s: latency as f64 * medium.tau_s(),
        completion_slots: completion,
        proposal_completion_slots: proposal_completion,
        energy_mj: energy_account(&traces, medium),
        resilient: 3 * f_tilde < roles.validators().len(),
        distortion_slots: distortion,
        dissemination_success: success,
        f_tilde,
        globally_valid: outcome.globally_valid,
        quorum_met: outcome.quorum_met,
        consensual_timestamp: outcome.consensual_timestamp,
    })
}

/// Per-round statistics over a Monte Carlo run.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub trials: u64,
    pub seed: u64,
    pub latency_slots: Summary,
    pub latency_s: Summary,
    pub completion_slots: Summary,
    pub energy_mj: Summary,
    pub distortion_slots: Summary,
    pub f_tilde: Summary,
    pub resilient: Proportion,
    pub dissemination_success: Proportion,
    pub globally_valid: Proportion,
}

impl McReport {
    pub fn from_records(records: &[TrialRecord], seed: u64) -> McReport {
        let col = |f: fn(&TrialRecord) -> f64| Summary::from_samples(&records.iter().map(f).collect::<Vec<_>>());
        let flag = |f: fn(&TrialRecord) -> bool| Proportion::from_flags(records.iter().map(f));
        McReport {
            trials: records.len() as u64,
            seed,
            latency_slots: col(|r| r.latency_slots as f64),
            latency_s: col(|r| r.latency_s),
            completion_slots: col(|r| r.completion_slots as f64),
            energy_mj: col(|r| r.energy_mj),
            distortion_slots: col(|r| r.distortion_slots),
            f_tilde: col(|r| r.f_tilde as f64),
            resilient: flag(|r| r.resilient),
            dissemination_success: flag(|r| r.dissemination_success),
            globally_valid: flag(|r| r.globally_valid),
        }
    }
}

/// Run `trials` rounds of `plan` and summarise them.
pub fn monte_carlo(plan: &RoundPlan, trials: u64, seed: u64, workers: usize) -> Result<(Vec<TrialRecord>, McReport)> {
    plan.validate()?;
    let records = run_trials(seed, trials, workers, |_, rng| run_round(plan, rng))?;
    let report = McReport::from_records(&records, seed);
    Ok((records, report))
}

/// Faulty representatives in one draw: `f` faulty among `n`, `n_tilde` sampled.
pub fn sample_f_tilde<R: Rng + ?Sized>(n: usize, f: usize, n_tilde: usize, rng: &mut R) -> Result<usize> {
    if f > n || n_tilde > n {
        return Err(invalid(format!("need F, Ñ <= N = {n}, got {f}, {n_tilde}")));
    }
    let mut faulty = vec![false; n];
    for i in index::sample(rng, n, f) {
        faulty[i] = true;
    }
    Ok(index::sample(rng, n, n_tilde).into_iter().filter(|&i| faulty[i]).count())
}

/// Distortion of one draw: disseminate the proposal, pick `n_tilde`
/// representatives, and compare consensual timestamps of honest nodes.
pub fn sample_distortion<R: Rng + ?Sized>(
    medium: &Medium,
    kind: Dissemination,
    proposer: NodeId,
    window: u32,
    n_tilde: usize,
    rng: &mut R,
) -> Result<f64> {
    let net = medium.net();
    let n = net.validator_count();
    if !(1..=n).contains(&n_tilde) {
        return Err(invalid(format!("Ñ = {n_tilde} outside [1, {n}]")));
    }
    let tr = disseminate(medium, kind, proposer, window, rng)?;
    let skip = |i: usize| if i >= proposer { i + 1 } else { i };
    let mut reps = vec![false; net.node_count()];
    for i in index::sample(rng, n, n_tilde) {
        reps[skip(i)] = true;
    }
    let stamp = |v: usize| tr.delivery_slot[v].filter(|_| v != proposer).map(f64::from);
    let full = mean((0..net.node_count()).filter_map(stamp));
    let sub = mean((0..net.node_count()).filter(|&v| reps[v]).filter_map(stamp));
    Ok(full - sub)
}
