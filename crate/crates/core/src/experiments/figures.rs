use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::output::{ResultRow, RowSink};
use super::scenario::{FigureKind, NTilde, Scenario};
use crate::analytics::{
    erf_approx, psi_broadcast, psi_gossip, r2c_latency_broadcast, r2c_latency_gossip_lattice,
    rc_latency_broadcast, rc_latency_gossip_lattice, required_validators, resiliency_exact,
    resiliency_normal, sigma_d_squared, PsiSign, ReliabilityTargets, SizingOptions,
};
use crate::consensus::ConsensusMode;
use crate::error::{invalid, Result};
use crate::sim::{
    monte_carlo, plan_windows, run_trials, sample_distortion, sample_f_tilde, McReport, Medium,
    Proportion, RoundPlan, Summary,
};
use crate::wireless::{ChannelParams, Dissemination, GridNetwork};
use crate::NodeId;

/// A consensus protocol paired with a dissemination method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Protocol {
    pub mode: ConsensusMode,
    pub dissemination: Dissemination,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [
        Protocol { mode: ConsensusMode::Rc, dissemination: Dissemination::Gossip },
        Protocol { mode: ConsensusMode::Rc, dissemination: Dissemination::Broadcast },
        Protocol { mode: ConsensusMode::R2c, dissemination: Dissemination::Gossip },
        Protocol { mode: ConsensusMode::R2c, dissemination: Dissemination::Broadcast },
    ];

    pub fn label(&self) -> String {
        format!("{}-{}", self.mode.label(), self.dissemination.label())
    }
}

/// Closed-form latency of one protocol at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticPoint {
    pub n_tilde: usize,
    pub latency_slots: f64,
    pub latency_s: f64,
}

/// Latency with gossip windows at their hop-count floor and broadcast
/// windows from the closed form. R2C sizes `Ñ` from `targets` unless fixed.
pub fn analytic_latency(
    net: &GridNetwork,
    ch: &ChannelParams,
    proposer: NodeId,
    proto: Protocol,
    targets: &ReliabilityTargets,
    opts: SizingOptions,
    n_tilde: NTilde,
) -> Result<AnalyticPoint> {
    let n = net.validator_count();
    let m = match (proto.mode, n_tilde) {
        (ConsensusMode::Rc, _) => n,
        (ConsensusMode::R2c, NTilde::Explicit(m)) => m,
        (ConsensusMode::R2c, NTilde::Auto) => {
            required_validators(net, ch, proposer, proto.dissemination, targets, opts)?.n_required
        }
    };
    let slots = match (proto.mode, proto.dissemination) {
        (ConsensusMode::Rc, Dissemination::Gossip) => rc_latency_gossip_lattice(net) as f64,
        (ConsensusMode::Rc, Dissemination::Broadcast) => rc_latency_broadcast(ch, net, targets.zeta)? as f64,
        (ConsensusMode::R2c, Dissemination::Gossip) => r2c_latency_gossip_lattice(net, proposer, m)?,
        (ConsensusMode::R2c, Dissemination::Broadcast) => {
            r2c_latency_broadcast(ch, net, proposer, m, targets.zeta)?
        }
    };
    Ok(AnalyticPoint { n_tilde: m, latency_slots: slots, latency_s: slots * ch.slot_duration()? })
}

// Keeps calibration draws apart from trial draws under the same seed.
const CALIBRATION_SALT: u64 = 0x5eed_ca1b_0000_0001;

/// Simulation state shared across the points of one scenario.
struct SimContext<'a> {
    sc: &'a Scenario,
    medium: Arc<Medium>,
    workers: usize,
    windows: BTreeMap<(&'static str, u64), Vec<u32>>,
}

impl<'a> SimContext<'a> {
    fn new(sc: &'a Scenario, workers: usize) -> Result<Self> {
        let medium = Arc::new(Medium::new(sc.network()?, sc.channel)?);
        Ok(Self { sc, medium, workers, windows: BTreeMap::new() })
    }

    fn windows(&mut self, kind: Dissemination, zeta: f64) -> Result<Vec<u32>> {
        let key = (kind.label(), zeta.to_bits());
        if let Some(w) = self.windows.get(&key) {
            return Ok(w.clone());
        }
        let w = plan_windows(
            &self.medium,
            kind,
            zeta,
            self.sc.calibration_trials,
            self.sc.seed ^ CALIBRATION_SALT,
        )?;
        self.windows.insert(key, w.clone());
        Ok(w)
    }

    fn simulate(&mut self, proto: Protocol, n_tilde: usize, targets: &ReliabilityTargets) -> Result<McReport> {
        let plan = RoundPlan {
            medium: Arc::clone(&self.medium),
            mode: proto.mode,
            dissemination: proto.dissemination,
            proposer: self.medium.net().resolve(self.sc.proposer)?,
            n_tilde,
            windows: self.windows(proto.dissemination, targets.zeta)?,
            f_faulty: targets.f_faulty,
            policy: self.sc.policy,
        };
        Ok(monte_carlo(&plan, self.sc.trials, self.sc.seed, self.workers)?.1)
    }
}

/// Run every sweep point of a scenario. Identical for any `workers`.
pub fn run_scenario(sc: &Scenario, workers: usize) -> Result<Vec<ResultRow>> {
    let mut out = RowSink::new(&sc.name, sc.seed);
    match sc.kind {
        FigureKind::Fig3 => fig3(sc, workers, &mut out)?,
        FigureKind::Fig4 => fig4(sc, workers, &mut out)?,
        FigureKind::Fig5 => {
            let series: Vec<Option<usize>> = sc.series_values().iter().map(|&f| Some(f as usize)).collect();
            latency_sweep(sc, workers, "alpha", &series, |t, x| t.alpha = x, Outputs::LATENCY, &mut out)?
        }
        FigureKind::Fig6a => {
            latency_sweep(sc, workers, "beta_slots", &[None], |t, x| t.beta_slots = x, Outputs::LATENCY, &mut out)?
        }
        FigureKind::Fig6b => {
            latency_sweep(sc, workers, "gamma", &[None], |t, x| t.gamma = x, Outputs::LATENCY, &mut out)?
        }
        FigureKind::Fig7a => {
            latency_sweep(sc, workers, "f", &[None], set_f, Outputs::LATENCY, &mut out)?
        }
        FigureKind::Fig7b => latency_sweep(sc, workers, "f", &[None], set_f, Outputs::ENERGY, &mut out)?,
        FigureKind::Fig7 => latency_sweep(sc, workers, "f", &[None], set_f, Outputs::BOTH, &mut out)?,
        FigureKind::Fig8 => fig8(sc, &mut out)?,
        FigureKind::Single => single(sc, workers, &mut out)?,
    }
    Ok(out.finish())
}

fn set_f(t: &mut ReliabilityTargets, x: f64) {
    t.f_faulty = x as usize;
}

fn fig3(sc: &Scenario, workers: usize, out: &mut RowSink) -> Result<()> {
    let n = sc.network()?.validator_count();
    for f in sc.series_values() {
        let f = f as usize;
        for m in sc.sweep_values() {
            let m = m as usize;
            out.exact("n_tilde", m as f64, format!("exact[F={f}]"), resiliency_exact(n, f, m)?);
            out.exact("n_tilde", m as f64, format!("normal[F={f}]"), resiliency_normal(n, f, m, sc.phi)?);
            if sc.trials > 0 {
                let hits = run_trials(sc.seed, sc.trials, workers, |_, rng| {
                    Ok(3 * sample_f_tilde(n, f, m, rng)? < m)
                })?;
                out.freq("n_tilde", m as f64, format!("monte_carlo[F={f}]"), &Proportion::from_flags(hits));
            }
        }
    }
    Ok(())
}

/// `Pr[|D| > β]` under the normal model.
pub fn distortion_outage(var_d: f64, beta: f64) -> f64 {
    if var_d <= 0.0 {
        return if beta >= 0.0 { 0.0 } else { 1.0 };
    }
    1.0 - erf_approx(beta / (var_d.sqrt() * std::f64::consts::SQRT_2))
}

fn fig4(sc: &Scenario, workers: usize, out: &mut RowSink) -> Result<()> {
    let mut ctx = SimContext::new(sc, workers)?;
    let net = *ctx.medium.net();
    let n = net.validator_count();
    let p = net.resolve(sc.proposer)?;
    let kind = sc.dissemination;
    let psi = |sign| match kind {
        Dissemination::Gossip => psi_gossip(&net, p, sign),
        Dissemination::Broadcast => psi_broadcast(&sc.channel, &net, p, sign),
    };
    let (plus, minus) = (psi(PsiSign::PaperPlus)?.value, psi(PsiSign::CorrectedMinus)?.value);
    let window = ctx.windows(kind, sc.targets.zeta)?[p];
    let betas = sc.series_values();
    for m in sc.sweep_values() {
        let m = m as usize;
        let x = m as f64;
        let var_plus = sigma_d_squared(n, m, 1.0, plus)?;
        let var_minus = sigma_d_squared(n, m, 1.0, minus)?;
        out.exact("n_tilde", x, "var_d[paper-plus]".into(), var_plus);
        out.exact("n_tilde", x, "var_d[corrected-minus]".into(), var_minus);
        let samples = if sc.trials > 0 {
            let medium = &ctx.medium;
            let d = run_trials(sc.seed, sc.trials, workers, |_, rng| {
                sample_distortion(medium, kind, p, window, m, rng)
            })?;
            let s = Summary::from_samples(&d);
            out.exact("n_tilde", x, "var_d[monte-carlo]".into(), s.variance);
            out.mean("n_tilde", x, "mean_d[monte-carlo]".into(), &s);
            Some(d)
        } else {
            None
        };
        for &beta in &betas {
            out.exact("n_tilde", x, format!("outage_plus[beta={beta}]"), distortion_outage(var_plus, beta));
            out.exact("n_tilde", x, format!("outage_minus[beta={beta}]"), distortion_outage(var_minus, beta));
            if let Some(d) = &samples {
                let p = Proportion::from_flags(d.iter().map(|v| v.abs() > beta));
                out.freq("n_tilde", x, format!("outage_mc[beta={beta}]"), &p);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Outputs {
    latency: bool,
    energy: bool,
}

impl Outputs {
    const LATENCY: Outputs = Outputs { latency: true, energy: false };
    const ENERGY: Outputs = Outputs { latency: false, energy: true };
    const BOTH: Outputs = Outputs { latency: true, energy: true };
}

#[allow(clippy::too_many_arguments)]
fn latency_sweep(
    sc: &Scenario,
    workers: usize,
    var: &str,
    series: &[Option<usize>],
    set: fn(&mut ReliabilityTargets, f64),
    want: Outputs,
    out: &mut RowSink,
) -> Result<()> {
    let mut ctx = SimContext::new(sc, workers)?;
    let net = *ctx.medium.net();
    let p = net.resolve(sc.proposer)?;
    for x in sc.sweep_values() {
        for f in series {
            let mut targets = sc.targets;
            if let Some(f) = f {
                targets.f_faulty = *f;
            }
            set(&mut targets, x);
            let tag = |proto: &Protocol| match f {
                Some(f) => format!("{},F={f}", proto.label()),
                None => proto.label(),
            };
            let mut baseline = None;
            for proto in Protocol::ALL {
                let a = analytic_latency(&net, &sc.channel, p, proto, &targets, sc.sizing_options(), sc.n_tilde)?;
                let t = tag(&proto);
                out.exact(var, x, format!("n_tilde[{t}]"), a.n_tilde as f64);
                if want.latency {
                    out.exact(var, x, format!("latency_slots[{t}]"), a.latency_slots);
                    out.exact(var, x, format!("latency_s[{t}]"), a.latency_s);
                }
                if sc.trials == 0 {
                    continue;
                }
                let r = ctx.simulate(proto, a.n_tilde, &targets)?;
                if want.latency {
                    out.mean(var, x, format!("sim_latency_slots[{t}]"), &r.latency_slots);
                    out.freq(var, x, format!("sim_resilient[{t}]"), &r.resilient);
                }
                if want.energy {
                    let base = *baseline.get_or_insert(r.energy_mj.mean);
                    out.mean(var, x, format!("energy_mj[{t}]"), &r.energy_mj);
                    out.exact(var, x, format!("energy_norm[{t}]"), r.energy_mj.mean / base);
                }
            }
        }
    }
    Ok(())
}

fn fig8(sc: &Scenario, out: &mut RowSink) -> Result<()> {
    for side in sc.sweep_values() {
        let net = sc.network_with_side(side as usize)?;
        let n = net.validator_count();
        let p = net.resolve(sc.proposer)?;
        let targets = ReliabilityTargets { f_faulty: (0.1 * n as f64).round() as usize, ..sc.targets };
        let x = n as f64;
        for kind in [Dissemination::Gossip, Dissemination::Broadcast] {
            let r = required_validators(&net, &sc.channel, p, kind, &targets, sc.sizing_options())?;
            let k = kind.label();
            out.exact("n", x, format!("n_required[{k}]"), r.n_required as f64);
            out.exact("n", x, format!("n_beta_gamma[{k}]"), r.n_beta_gamma);
            if kind == Dissemination::Gossip {
                out.exact("n", x, "n_alpha".into(), r.n_alpha);
            }
        }
        out.exact("n", x, "f".into(), targets.f_faulty as f64);
    }
    Ok(())
}

fn single(sc: &Scenario, workers: usize, out: &mut RowSink) -> Result<()> {
    let mut ctx = SimContext::new(sc, workers)?;
    let net = *ctx.medium.net();
    let p = net.resolve(sc.proposer)?;
    let proto = Protocol { mode: sc.mode, dissemination: sc.dissemination };
    let a = analytic_latency(&net, &sc.channel, p, proto, &sc.targets, sc.sizing_options(), sc.n_tilde)?;
    out.exact("none", 0.0, "n_tilde".into(), a.n_tilde as f64);
    out.exact("none", 0.0, "latency_slots[analytic]".into(), a.latency_slots);
    if sc.trials == 0 {
        return Ok(());
    }
    if a.n_tilde == 0 {
        return Err(invalid("Ñ must be at least one"));
    }
    let r = ctx.simulate(proto, a.n_tilde, &sc.targets)?;
    out.mean("none", 0.0, "latency_slots".into(), &r.latency_slots);
    out.mean("none", 0.0, "latency_s".into(), &r.latency_s);
    out.mean("none", 0.0, "completion_slots".into(), &r.completion_slots);
    out.mean("none", 0.0, "energy_mj".into(), &r.energy_mj);
    out.mean("none", 0.0, "distortion_slots".into(), &r.distortion_slots);
    out.exact("none", 0.0, "distortion_var".into(), r.distortion_slots.variance);
    out.mean("none", 0.0, "f_tilde".into(), &r.f_tilde);
    out.freq("none", 0.0, "resilient".into(), &r.resilient);
    out.freq("none", 0.0, "dissemination_success".into(), &r.dissemination_success);
    out.freq("none", 0.0, "globally_valid".into(), &r.globally_valid);
    Ok(())
}
