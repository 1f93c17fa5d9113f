use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{PsiSign, ReliabilityTargets, SizingOptions};
use crate::consensus::{ConsensusMode, FaultyPolicy};
use crate::error::{Error, Result};
use crate::wireless::{ChannelParams, Dissemination, GridNetwork, ProposerPosition};

/// What a scenario sweeps and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    /// Resiliency vs Ñ for each F in `series`: exact, normal, Monte Carlo.
    Fig3,
    /// Distortion outage `Pr[|D| > β]` vs Ñ for each β in `series`.
    Fig4,
    /// Latency vs α for each F in `series`.
    Fig5,
    /// Latency vs β.
    Fig6a,
    /// Latency vs γ.
    Fig6b,
    /// Latency vs F.
    Fig7a,
    /// Normalised energy vs F.
    Fig7b,
    /// Latency and normalised energy vs F.
    Fig7,
    /// Required representatives vs network size over a fixed area.
    Fig8,
    /// One simulated configuration, no sweep.
    Single,
}

/// Representative count: sized from the targets, or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NTildeRepr", into = "NTildeRepr")]
pub enum NTilde {
    Auto,
    Explicit(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NTildeRepr {
    Count(usize),
    Word(String),
}

impl TryFrom<NTildeRepr> for NTilde {
    type Error = String;
    fn try_from(r: NTildeRepr) -> std::result::Result<Self, String> {
        match r {
            NTildeRepr::Count(n) => Ok(NTilde::Explicit(n)),
            NTildeRepr::Word(w) if w == "auto" => Ok(NTilde::Auto),
            NTildeRepr::Word(w) => Err(format!("n_tilde must be \"auto\" or a count, got {w:?}")),
        }
    }
}

impl From<NTilde> for NTildeRepr {
    fn from(n: NTilde) -> Self {
        match n {
            NTilde::Auto => NTildeRepr::Word("auto".into()),
            NTilde::Explicit(n) => NTildeRepr::Count(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: FigureKind,
    pub mode: ConsensusMode,
    pub dissemination: Dissemination,
    pub grid_side: usize,
    pub spacing_m: f64,
    /// Square deployment area; when set, spacing follows from the grid side.
    pub area_m2: Option<f64>,
    pub proposer: ProposerPosition,
    pub n_tilde: NTilde,
    pub targets: ReliabilityTargets,
    pub phi: f64,
    pub psi_sign: PsiSign,
    pub policy: FaultyPolicy,
    pub channel: ChannelParams,
    /// Monte Carlo trials per sweep point; 0 skips simulation.
    pub trials: u64,
    pub seed: u64,
    /// Flooding runs per node when sizing gossip windows.
    pub calibration_trials: u64,
    /// Swept values; empty means the kind's default range.
    pub sweep: Vec<f64>,
    /// Second parameter drawn as separate curves (F or β, by kind).
    pub series: Vec<f64>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "custom".into(),
            kind: FigureKind::Single,
            mode: ConsensusMode::R2c,
            dissemination: Dissemination::Broadcast,
            grid_side: 9,
            spacing_m: 10.0,
            area_m2: None,
            proposer: ProposerPosition::Corner,
            n_tilde: NTilde::Auto,
            targets: ReliabilityTargets::default(),
            phi: 0.5,
            psi_sign: PsiSign::PaperPlus,
            policy: FaultyPolicy::VoteInvert,
            channel: ChannelParams::default(),
            trials: 1000,
            seed: 2020,
            calibration_trials: 2000,
            sweep: Vec::new(),
            series: Vec::new(),
        }
    }
}

pub const BUILTIN: [&str; 11] = [
    "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7a", "fig7b", "fig7-text", "fig7-caption", "fig7", "fig8",
];

impl Scenario {
    pub fn builtin(name: &str) -> Result<Scenario> {
        let base = |name: &str, kind| Scenario { name: name.into(), kind, ..Default::default() };
        let sc = match name {
            "fig3" => Scenario {
                trials: 100_000,
                series: vec![5.0, 15.0, 25.0],
                sweep: (1..=80).map(f64::from).collect(),
                ..base(name, FigureKind::Fig3)
            },
            "fig4" => Scenario {
                dissemination: Dissemination::Gossip,
                trials: 10_000,
                series: vec![0.5, 1.0, 2.0],
                sweep: (1..=80).map(f64::from).collect(),
                ..base(name, FigureKind::Fig4)
            },
            "fig5" => Scenario {
                trials: 200,
                series: vec![5.0, 25.0],
                sweep: vec![0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 0.99999, 1.0],
                ..base(name, FigureKind::Fig5)
            },
            "fig6a" => Scenario {
                trials: 200,
                sweep: vec![0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
                ..base(name, FigureKind::Fig6a)
            },
            "fig6b" => Scenario {
                trials: 200,
                sweep: vec![0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99],
                ..base(name, FigureKind::Fig6b)
            },
            "fig7a" => Scenario { trials: 200, ..base(name, FigureKind::Fig7a) },
            "fig7b" => Scenario { trials: 200, ..base(name, FigureKind::Fig7b) },
            "fig7-caption" | "fig7" => Scenario { trials: 200, ..base("fig7-caption", FigureKind::Fig7) },
            "fig7-text" => Scenario {
                trials: 200,
                targets: ReliabilityTargets { alpha: 0.01, beta_slots: 1.0, gamma: 0.1, ..Default::default() },
                ..base(name, FigureKind::Fig7)
            },
            "fig8" => Scenario {
                trials: 0,
                area_m2: Some(10_000.0),
                sweep: vec![5.0, 7.0, 9.0, 11.0, 15.0, 21.0, 29.0, 41.0],
                ..base(name, FigureKind::Fig8)
            },
            _ => return Err(Error::UnknownScenario(name.into())),
        };
        Ok(sc)
    }

    pub fn from_toml(text: &str) -> Result<Scenario> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    /// Built-in name, or a path to a TOML file.
    pub fn load(name_or_path: &str) -> Result<Scenario> {
        match Scenario::builtin(name_or_path) {
            Err(Error::UnknownScenario(_)) if Path::new(name_or_path).is_file() => {
                Scenario::from_toml(&std::fs::read_to_string(name_or_path)?)
            }
            other => other,
        }
    }

    pub fn network(&self) -> Result<GridNetwork> {
        self.network_with_side(self.grid_side)
    }

    pub fn network_with_side(&self, side: usize) -> Result<GridNetwork> {
        match self.area_m2 {
            Some(a) => GridNetwork::with_area(side, a),
            None => GridNetwork::new(side, self.spacing_m),
        }
    }

    pub fn sizing_options(&self) -> SizingOptions {
        SizingOptions { phi: self.phi, psi_sign: self.psi_sign }
    }

    /// Default sweep for the kind when none is given.
    pub fn sweep_values(&self) -> Vec<f64> {
        if !self.sweep.is_empty() {
            return self.sweep.clone();
        }
        let n = (self.grid_side * self.grid_side - 1) as f64;
        match self.kind {
            FigureKind::Fig3 | FigureKind::Fig4 => (1..=n as u32).map(f64::from).collect(),
            FigureKind::Fig5 => vec![0.5, 0.9, 0.99, 0.999, 1.0],
            FigureKind::Fig6a => vec![0.5, 1.0, 2.0],
            FigureKind::Fig6b => vec![0.5, 0.9, 0.99],
            FigureKind::Fig7a | FigureKind::Fig7b | FigureKind::Fig7 => {
                let fmax = ((n - 1.0) / 3.0).floor() as u32;
                (0..=fmax).step_by(5).map(f64::from).collect()
            }
            FigureKind::Fig8 => vec![5.0, 9.0, 15.0, 21.0, 29.0],
            FigureKind::Single => vec![0.0],
        }
    }

    pub fn series_values(&self) -> Vec<f64> {
        if !self.series.is_empty() {
            return self.series.clone();
        }
        match self.kind {
            FigureKind::Fig3 => vec![5.0, 15.0, 25.0],
            FigureKind::Fig4 => vec![0.5, 1.0, 2.0],
            FigureKind::Fig5 => vec![5.0, 25.0],
            _ => vec![],
        }
    }
}
