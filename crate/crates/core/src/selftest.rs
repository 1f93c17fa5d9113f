//! Acceptance checks, each against an oracle that does not share code with
//! the routine under test.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::analytics::{
    erf_approx, erf_approx_inv, psi_broadcast, psi_gossip, psi_gossip_center_closed,
    psi_gossip_corner_closed, r2c_latency_broadcast, r2c_latency_gossip_lattice, rc_latency_broadcast,
    rc_latency_gossip_lattice, required_validators, resiliency_exact, resiliency_normal, PsiSign,
    ReliabilityTargets, SizingOptions,
};
use crate::consensus::{ConsensusMode, FaultyPolicy};
use crate::error::Result;
use crate::experiments::{run_scenario, write_csv, Scenario};
use crate::sim::{
    disseminate_broadcast, monte_carlo, plan_windows, run_trials, sample_f_tilde, Medium, Proportion,
    RoundPlan, Summary,
};
use crate::wireless::{broadcast_windows, ChannelParams, Dissemination, GridNetwork};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>7.2}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

pub type Check = fn(usize) -> Result<(bool, String)>;

/// `(id, name, runtime budget in seconds, check)`. Checks take a worker count.
pub const CRITERIA: [(u32, &str, u64, Check); 10] = [
    (1, "erf approximant", 1, erf_check),
    (2, "resiliency vs enumeration", 10, enumeration_check),
    (3, "resiliency curves", 60, resiliency_curves_check),
    (4, "psi closed forms", 1, psi_check),
    (5, "distortion variance sign", 90, distortion_check),
    (6, "latency bounds", 120, latency_bounds_check),
    (7, "broadcast window", 60, window_check),
    (8, "latency trends", 30, latency_trend_check),
    (9, "sizing vs network size", 60, scaling_check),
    (10, "determinism", 60, determinism_check),
];

pub fn run_criterion(id: u32, workers: usize) -> CriterionReport {
    let (id, name, budget, check) = CRITERIA[id as usize - 1];
    let budget = Duration::from_secs(budget);
    let start = Instant::now();
    let (ok, detail) = match check(workers) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = if ok && elapsed > budget {
        (false, format!("{detail}; over the runtime budget"))
    } else {
        (ok, detail)
    };
    CriterionReport { id, name, passed, detail, elapsed, budget }
}

pub fn run_all(workers: usize) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|c| run_criterion(c.0, workers)).collect()
}

fn erf_check(_: usize) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for i in 1..=6000 {
        let x = i as f64 * 1e-3;
        let exact = statrs::function::erf::erf(x);
        worst = worst.max(((erf_approx(x) - exact) / exact).abs());
    }
    let mut round = 0.0f64;
    for i in 0..=3000 {
        let x = i as f64 * 1e-3;
        round = round.max((erf_approx_inv(erf_approx(x))? - x).abs());
    }
    Ok((worst <= 0.004 && round <= 1e-6, format!("max rel err {worst:.5}, roundtrip {round:.1e}")))
}

fn enumeration_check(_: usize) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=12usize {
        for f in 0..=n {
            // Faulty nodes are the low `f` bits; count resilient subsets by size.
            let mut good = vec![0u64; n + 1];
            let mut all = vec![0u64; n + 1];
            for mask in 0u32..(1 << n) {
                let m = mask.count_ones() as usize;
                let bad = (mask & ((1u32 << f) - 1)).count_ones() as usize;
                all[m] += 1;
                good[m] += (3 * bad < m) as u64;
            }
            for m in 1..=n {
                let oracle = good[m] as f64 / all[m] as f64;
                worst = worst.max((resiliency_exact(n, f, m)? - oracle).abs());
                cases += 1;
            }
        }
    }
    Ok((worst <= 1e-12, format!("{cases} cases, max diff {worst:.1e}")))
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// Exact hypergeometric lower tail as a big rational.
fn resiliency_rational(n: usize, f: usize, m: usize) -> f64 {
    use num_traits::ToPrimitive;
    let tol = if m == 0 { 0 } else { (m - 1) / 3 + 1 };
    let num: BigUint = (0..tol.min(f + 1))
        .filter(|&k| m - k <= n - f)
        .map(|k| binomial(f, k) * binomial(n - f, m - k))
        .sum();
    BigRational::new(num.into(), binomial(n, m).into()).to_f64().unwrap()
}

fn resiliency_curves_check(workers: usize) -> Result<(bool, String)> {
    const N: usize = 80;
    const TRIALS: u64 = 100_000;
    let (mut approx_gap, mut exact_gap, mut gap_mult3) = (0.0f64, 0.0f64, 0.0f64);
    let mut worst_at = (0, 0);
    let mut misses = Vec::new();
    let mut points = 0;
    for f in [5usize, 15, 25] {
        for m in 10..=70usize {
            let exact = resiliency_exact(N, f, m)?;
            exact_gap = exact_gap.max((exact - resiliency_rational(N, f, m)).abs());
            let gap = (resiliency_normal(N, f, m, 0.5)? - exact).abs();
            if gap > approx_gap {
                approx_gap = gap;
                worst_at = (f, m);
            }
            if m % 3 == 0 {
                gap_mult3 = gap_mult3.max(gap);
            }
            let hits = run_trials(2020, TRIALS, workers, |_, rng| Ok(3 * sample_f_tilde(N, f, m, rng)? < m))?;
            let p = Proportion::from_flags(hits);
            if !p.within_sigmas(exact, 3.0) {
                misses.push(format!("F={f} Ñ={m}: {:.5} vs {exact:.5}", p.p));
            }
            points += 1;
        }
    }
    let ok = approx_gap <= 0.05 && exact_gap <= 1e-12 && misses.is_empty();
    Ok((
        ok,
        format!(
            "normal gap {approx_gap:.4} at F={} Ñ={} ({gap_mult3:.4} over Ñ divisible by 3), rational gap {exact_gap:.1e}, {}/{points} MC points outside 3σ{}",
            worst_at.0,
            worst_at.1,
            misses.len(),
            if misses.is_empty() { String::new() } else { format!(" ({})", misses.join("; ")) }
        ),
    ))
}

fn psi_check(_: usize) -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for side in [3usize, 5, 9] {
        let net = GridNetwork::new(side, 10.0)?;
        let n = net.validator_count();
        // Lattice oracle: sum over nodes directly, plus-sign aggregate.
        let lattice = |p: usize| {
            let e: Vec<f64> = (0..net.node_count()).filter(|&v| v != p).map(|v| net.hops(p, v) as f64).collect();
            let sum: f64 = e.iter().sum();
            e.iter().map(|x| x * x + x * (sum - x) / (n as f64 - 1.0)).sum::<f64>()
        };
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        worst = worst
            .max(rel(lattice(net.corner()), psi_gossip_corner_closed(n)))
            .max(rel(psi_gossip(&net, net.corner(), PsiSign::PaperPlus)?.value, psi_gossip_corner_closed(n)));
        if side % 2 == 1 {
            worst = worst
                .max(rel(lattice(net.center()), psi_gossip_center_closed(n)))
                .max(rel(psi_gossip(&net, net.center(), PsiSign::PaperPlus)?.value, psi_gossip_center_closed(n)));
        }
    }
    let net = GridNetwork::new(3, 10.0)?;
    let cor = psi_gossip(&net, net.corner(), PsiSign::PaperPlus)?.value;
    let cen = psi_gossip(&net, net.center(), PsiSign::PaperPlus)?.value;
    let spots = (cor - 87.4286).abs() < 5e-5 && (cen - 37.7143).abs() < 5e-5;
    Ok((worst <= 1e-9 && spots, format!("max rel err {worst:.1e}, N=8 corner {cor:.4}, centre {cen:.4}")))
}

fn distortion_check(workers: usize) -> Result<(bool, String)> {
    const TRIALS: u64 = 100_000;
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let (n, m) = (80.0, 20.0);
    let p = net.corner();
    let plan = RoundPlan {
        medium: Arc::new(Medium::new(net, ch)?),
        mode: ConsensusMode::R2c,
        dissemination: Dissemination::Broadcast,
        proposer: p,
        n_tilde: 20,
        windows: broadcast_windows(&ch, &net, 0.9999)?,
        f_faulty: 0,
        policy: FaultyPolicy::VoteInvert,
    };
    let (records, _) = monte_carlo(&plan, TRIALS, 2020, workers)?;
    let d: Vec<f64> = records.iter().map(|r| r.distortion_slots).collect();
    let s = Summary::from_samples(&d);
    let scale = (n - m) / (m * n * n);
    let minus = scale * psi_broadcast(&ch, &net, p, PsiSign::CorrectedMinus)?.value;
    let plus = scale * psi_broadcast(&ch, &net, p, PsiSign::PaperPlus)?.value;
    let rel = (s.variance - minus).abs() / minus;
    let mean_ok = s.mean.abs() <= 3.0 * s.std_err;
    Ok((
        rel <= 0.05 && s.variance < plus && mean_ok,
        format!(
            "Var(D) {:.5} vs minus {minus:.5} ({:.2}%), plus {plus:.5}; mean {:.5} ± {:.5}",
            s.variance,
            100.0 * rel,
            s.mean,
            3.0 * s.std_err
        ),
    ))
}

fn latency_bounds_check(workers: usize) -> Result<(bool, String)> {
    const TRIALS: u64 = 10_000;
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let medium = Arc::new(Medium::new(net, ch)?);
    let p = net.corner();
    let gossip = RoundPlan {
        medium: Arc::clone(&medium),
        mode: ConsensusMode::Rc,
        dissemination: Dissemination::Gossip,
        proposer: p,
        n_tilde: 80,
        windows: plan_windows(&medium, Dissemination::Gossip, 0.9999, 2000, 77)?,
        f_faulty: 5,
        policy: FaultyPolicy::VoteInvert,
    };
    let (g, _) = monte_carlo(&gossip, TRIALS, 2020, workers)?;
    let below = g.iter().filter(|r| r.latency_slots < 1008 || r.completion_slots < 1008).count();
    let tight = Proportion::from_flags(g.iter().map(|r| r.proposal_completion_slots as usize == net.max_hops(p)));

    let expected = rc_latency_broadcast(&ch, &net, 0.9999)?;
    let broadcast = RoundPlan {
        dissemination: Dissemination::Broadcast,
        windows: broadcast_windows(&ch, &net, 0.9999)?,
        ..gossip
    };
    let (b, _) = monte_carlo(&broadcast, TRIALS, 2020, workers)?;
    let off = b.iter().filter(|r| r.latency_slots != expected).count();
    Ok((
        below == 0 && tight.p >= 0.99 && off == 0,
        format!(
            "gossip: {below} rounds under 1008, proposal done in 16 slots {:.2}%; broadcast: {off} rounds off {expected}",
            100.0 * tight.p
        ),
    ))
}

fn window_check(workers: usize) -> Result<(bool, String)> {
    const TRIALS: u64 = 100_000;
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let medium = Medium::new(net, ch)?;
    let windows = broadcast_windows(&ch, &net, 0.99)?;
    let limit = 0.01 + 3.0 * (0.01f64 * 0.99 / TRIALS as f64).sqrt();
    let mut ok = true;
    let mut detail = Vec::new();
    for (label, src) in [("corner", net.corner()), ("centre", net.center())] {
        let fails = run_trials(2020, TRIALS, workers, |_, rng| {
            Ok(!disseminate_broadcast(&medium, src, windows[src], rng)?.complete())
        })?;
        let rate = Proportion::from_flags(fails).p;
        ok &= rate <= limit;
        detail.push(format!("{label} w={} fail {rate:.4}", windows[src]));
    }
    Ok((ok, format!("{} (limit {limit:.4})", detail.join(", "))))
}

fn analytic_latency(
    net: &GridNetwork,
    ch: &ChannelParams,
    mode: ConsensusMode,
    kind: Dissemination,
    t: &ReliabilityTargets,
) -> Result<f64> {
    let p = net.corner();
    Ok(match (mode, kind) {
        (ConsensusMode::Rc, Dissemination::Gossip) => rc_latency_gossip_lattice(net) as f64,
        (ConsensusMode::Rc, Dissemination::Broadcast) => rc_latency_broadcast(ch, net, t.zeta)? as f64,
        (ConsensusMode::R2c, _) => {
            let m = required_validators(net, ch, p, kind, t, SizingOptions::default())?.n_required;
            match kind {
                Dissemination::Gossip => r2c_latency_gossip_lattice(net, p, m)?,
                Dissemination::Broadcast => r2c_latency_broadcast(ch, net, p, m, t.zeta)?,
            }
        }
    })
}

fn latency_trend_check(_: usize) -> Result<(bool, String)> {
    let net = GridNetwork::new(9, 10.0)?;
    let ch = ChannelParams::default();
    let alphas = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999, 1.0];
    let mut ok = true;
    let mut notes = Vec::new();
    for f in [5usize, 25] {
        for kind in [Dissemination::Gossip, Dissemination::Broadcast] {
            let lat = |alpha| {
                let t = ReliabilityTargets { alpha, f_faulty: f, ..Default::default() };
                analytic_latency(&net, &ch, ConsensusMode::R2c, kind, &t)
            };
            let curve = alphas.iter().map(|&a| lat(a)).collect::<Result<Vec<_>>>()?;
            let rc = analytic_latency(&net, &ch, ConsensusMode::Rc, kind, &ReliabilityTargets::default())?;
            let monotone = curve.windows(2).all(|w| w[1] >= w[0]);
            let meets = (curve[curve.len() - 1] - rc).abs() < 1e-9;
            ok &= monotone && meets;
            if !(monotone && meets) {
                notes.push(format!("F={f} {}: {curve:?} vs RC {rc}", kind.label()));
            }
        }
    }
    let t = ReliabilityTargets::default();
    let l = |mode, kind| analytic_latency(&net, &ch, mode, kind, &t);
    let r2c_b = l(ConsensusMode::R2c, Dissemination::Broadcast)?;
    let r2c_g = l(ConsensusMode::R2c, Dissemination::Gossip)?;
    let rc_g = l(ConsensusMode::Rc, Dissemination::Gossip)?;
    let rc_b = l(ConsensusMode::Rc, Dissemination::Broadcast)?;
    let order = r2c_b < r2c_g && r2c_g < rc_g && r2c_b < rc_b;
    ok &= order;
    notes.insert(
        0,
        format!("F=5: R2C-b {r2c_b:.1} < R2C-g {r2c_g:.1} < RC-g {rc_g}; RC-b {rc_b}"),
    );
    Ok((ok, notes.join("; ")))
}

fn scaling_check(_: usize) -> Result<(bool, String)> {
    let ch = ChannelParams::default();
    let required = |side: usize, kind| -> Result<f64> {
        let net = GridNetwork::with_area(side, 10_000.0)?;
        let n = net.validator_count();
        let t = ReliabilityTargets { f_faulty: (0.1 * n as f64).round() as usize, ..Default::default() };
        Ok(required_validators(&net, &ch, net.corner(), kind, &t, SizingOptions::default())?.n_required as f64)
    };
    // 41² − 1 = 1680 validators against 29² − 1 = 840.
    let (bb, bh) = (required(41, Dissemination::Broadcast)?, required(29, Dissemination::Broadcast)?);
    let (gb, gh) = (required(41, Dissemination::Gossip)?, required(29, Dissemination::Gossip)?);
    let ok = bb - bh <= 0.1 * bh && gb - gh >= 0.5 * gh;
    Ok((ok, format!("broadcast {bh} -> {bb}, gossip {gh} -> {gb} (N 840 -> 1680)")))
}

fn determinism_check(_: usize) -> Result<(bool, String)> {
    let mut scenarios = Vec::new();
    let mut fig3 = Scenario::builtin("fig3")?;
    fig3.trials = 2000;
    fig3.sweep = vec![10.0, 30.0, 50.0];
    scenarios.push(fig3);
    let mut fig4 = Scenario::builtin("fig4")?;
    fig4.trials = 500;
    fig4.calibration_trials = 200;
    fig4.sweep = vec![5.0, 20.0, 60.0];
    scenarios.push(fig4);
    let mut fig7 = Scenario::builtin("fig7")?;
    fig7.trials = 20;
    fig7.calibration_trials = 200;
    fig7.sweep = vec![0.0, 10.0];
    scenarios.push(fig7);

    let csv = |sc: &Scenario, workers| -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_csv(&run_scenario(sc, workers)?, &mut buf)?;
        Ok(buf)
    };
    let mut same = true;
    let mut bytes = 0;
    for sc in &scenarios {
        let base = csv(sc, 1)?;
        bytes += base.len();
        for w in [1, 2, 4] {
            same &= csv(sc, w)? == base;
        }
    }
    Ok((same, format!("{} scenarios, {bytes} CSV bytes, workers 1/2/4", scenarios.len())))
}
