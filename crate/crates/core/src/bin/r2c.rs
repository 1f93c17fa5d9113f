use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use r2c::analytics::{
    n_alpha, n_beta_gamma, psi_broadcast, psi_gossip, resiliency_exact, resiliency_normal, PsiSign,
    ReliabilityTargets, SizingOptions,
};
use r2c::consensus::ConsensusMode;
use r2c::experiments::{analytic_latency, run_scenario, write_csv, NTilde, Protocol, Scenario};
use r2c::wireless::{ChannelParams, Dissemination, GridNetwork, ProposerPosition};
use r2c::{selftest, Error};

#[derive(Parser)]
#[command(name = "r2c", version, about = "RC/R2C consensus analytics and simulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a built-in scenario or a TOML scenario file and write its CSV.
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Worker threads; 0 uses every core. Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Evaluate one closed-form expression.
    Analytic {
        #[command(subcommand)]
        query: Query,
        /// Print JSON instead of a table.
        #[arg(long, global = true)]
        json: bool,
    },
    /// Run the acceptance checks and print a pass/fail matrix.
    Selftest {
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rc,
    R2c,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spread {
    Gossip,
    Broadcast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Normal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Paper,
    Corrected,
}

#[derive(Clone, Copy, ValueEnum)]
enum Position {
    Corner,
    Center,
}

#[derive(Args)]
struct Grid {
    /// Grid side; the network has side² nodes.
    #[arg(long, default_value_t = 9)]
    grid: usize,
    #[arg(long, default_value_t = 10.0)]
    spacing: f64,
    #[arg(long, value_enum, default_value_t = Position::Corner)]
    proposer: Position,
}

#[derive(Subcommand)]
enum Query {
    /// Representatives for α-resiliency.
    NAlpha {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
    },
    /// Representatives for (β, γ)-robustness.
    NBetaGamma {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Spread::Gossip)]
        dissemination: Spread,
        /// Distortion tolerance in slots.
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = Variant::Paper)]
        variant: Variant,
    },
    /// End-to-end latency in slots and seconds.
    Latency {
        #[arg(value_enum)]
        mode: Mode,
        #[arg(value_enum)]
        dissemination: Spread,
        /// Validators N; N + 1 must be a perfect square.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        spacing: f64,
        #[arg(long, value_enum, default_value_t = Position::Corner)]
        proposer: Position,
        /// Fixed representative count; sized from the targets when absent.
        #[arg(long)]
        n_tilde: Option<usize>,
        #[arg(long, default_value_t = 5)]
        f: usize,
        #[arg(long, default_value_t = 0.99)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.9)]
        gamma: f64,
        #[arg(long, default_value_t = 0.9999)]
        zeta: f64,
    },
    /// Probability that the representatives keep a BFT supermajority.
    Resiliency {
        #[arg(value_enum)]
        method: Method,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        n_tilde: usize,
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
    },
    /// Delay-moment aggregate entering the distortion variance.
    Psi {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = Spread::Gossip)]
        dissemination: Spread,
        #[arg(long, value_enum, default_value_t = Variant::Paper)]
        variant: Variant,
    },
}

impl From<Spread> for Dissemination {
    fn from(s: Spread) -> Self {
        match s {
            Spread::Gossip => Dissemination::Gossip,
            Spread::Broadcast => Dissemination::Broadcast,
        }
    }
}

impl From<Variant> for PsiSign {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Paper => PsiSign::PaperPlus,
            Variant::Corrected => PsiSign::CorrectedMinus,
        }
    }
}

impl From<Position> for ProposerPosition {
    fn from(p: Position) -> Self {
        match p {
            Position::Corner => ProposerPosition::Corner,
            Position::Center => ProposerPosition::Center,
        }
    }
}

fn psi_value(grid: &Grid, kind: Spread, variant: Variant) -> r2c::Result<(GridNetwork, f64)> {
    let net = GridNetwork::new(grid.grid, grid.spacing)?;
    let p = net.resolve(grid.proposer.into())?;
    let psi = match kind {
        Spread::Gossip => psi_gossip(&net, p, variant.into())?,
        Spread::Broadcast => psi_broadcast(&ChannelParams::default(), &net, p, variant.into())?,
    };
    Ok((net, psi.value))
}

fn analytic(query: Query) -> r2c::Result<serde_json::Value> {
    Ok(match query {
        Query::NAlpha { n, f, alpha, phi } => {
            let v = n_alpha(n, f, alpha, phi)?;
            json!({ "n_alpha": v, "n_tilde": v.ceil().clamp(1.0, n as f64) })
        }
        Query::NBetaGamma { grid, dissemination, beta, gamma, variant } => {
            let (net, psi) = psi_value(&grid, dissemination, variant)?;
            let n = net.validator_count();
            let v = n_beta_gamma(n, beta, gamma, 1.0, psi)?;
            json!({ "psi": psi, "n_beta_gamma": v, "n_tilde": v.ceil().clamp(1.0, n as f64) })
        }
        Query::Latency { mode, dissemination, n, spacing, proposer, n_tilde, f, alpha, beta, gamma, zeta } => {
            let net = GridNetwork::from_node_count(n + 1, spacing)?;
            let targets = ReliabilityTargets { alpha, beta_slots: beta, gamma, zeta, f_faulty: f };
            let proto = Protocol {
                mode: match mode {
                    Mode::Rc => ConsensusMode::Rc,
                    Mode::R2c => ConsensusMode::R2c,
                },
                dissemination: dissemination.into(),
            };
            let fixed = n_tilde.map_or(NTilde::Auto, NTilde::Explicit);
            let p = net.resolve(proposer.into())?;
            let a = analytic_latency(&net, &ChannelParams::default(), p, proto, &targets, SizingOptions::default(), fixed)?;
            json!({ "n_tilde": a.n_tilde, "latency_slots": a.latency_slots, "latency_s": a.latency_s })
        }
        Query::Resiliency { method, n, f, n_tilde, phi } => {
            let v = match method {
                Method::Exact => resiliency_exact(n, f, n_tilde)?,
                Method::Normal => resiliency_normal(n, f, n_tilde, phi)?,
            };
            json!({ "resiliency": v })
        }
        Query::Psi { grid, dissemination, variant } => {
            let (_, psi) = psi_value(&grid, dissemination, variant)?;
            json!({ "psi": psi })
        }
    })
}

fn print_table(v: &serde_json::Value) {
    if let Some(map) = v.as_object() {
        for (k, x) in map {
            match x.as_f64() {
                Some(f) if f.fract() == 0.0 => println!("{k:<16} {f}"),
                Some(f) => println!("{k:<16} {f:.6}"),
                None => println!("{k:<16} {x}"),
            }
        }
    }
}

fn run(scenario: &str, trials: Option<u64>, seed: Option<u64>, out: PathBuf, workers: usize) -> r2c::Result<()> {
    let mut sc = Scenario::load(scenario)?;
    if let Some(t) = trials {
        sc.trials = t;
    }
    if let Some(s) = seed {
        sc.seed = s;
    }
    let rows = run_scenario(&sc, workers)?;
    std::fs::create_dir_all(&out)?;
    let path = out.join(format!("{}.csv", sc.name));
    write_csv(&rows, BufWriter::new(File::create(&path)?))?;
    eprintln!("{} rows -> {}", rows.len(), path.display());
    Ok(())
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run { scenario, trials, seed, out, workers } => match run(&scenario, trials, seed, out, workers) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Cmd::Analytic { query, json } => match analytic(query) {
            Ok(v) if json => {
                println!("{v}");
                ExitCode::SUCCESS
            }
            Ok(v) => {
                print_table(&v);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Cmd::Selftest { workers, only } => {
            let mut all_ok = true;
            for (id, ..) in selftest::CRITERIA {
                if !only.is_empty() && !only.contains(&id) {
                    continue;
                }
                let r = selftest::run_criterion(id, workers);
                all_ok &= r.passed;
                println!("{r}");
            }
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
    }
}
