//! Named-state factories and the JSON state file.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use super::manifest::RunManifest;
use crate::hilbert::{bell, bell_pairs, ghz, w_state, PureState, C64, NORM_TOL};
use crate::phase_space::{coherent_state, PhasePoint};
use crate::random::{random_pure_state, stream_rng};

/// Files whose squared norm is off by less than this are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// Help text listing the accepted state specifications.
pub const STATE_SPEC_HELP: &str = "ghz:N | w:N | bell | bell-pairs:K | product:θ,φ/θ,φ/... | random:N:SEED";

/// Builds a state from a specification such as `ghz:8` or
/// `product:0,0/1.5708,0`.
pub fn parse_state_spec(spec: &str) -> anyhow::Result<PureState> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let count = |s: &str| -> anyhow::Result<usize> {
        s.trim().parse().with_context(|| format!("invalid spin count {s:?} in state {spec:?}"))
    };
    let state = match name.trim() {
        "ghz" => ghz(count(args)?)?,
        "w" => w_state(count(args)?)?,
        "bell" if args.is_empty() => bell(),
        "bell-pairs" => bell_pairs(count(args)?)?,
        "product" => {
            let angles = args
                .split('/')
                .map(|pair| {
                    let (t, p) = pair
                        .split_once(',')
                        .with_context(|| format!("expected θ,φ in {pair:?}"))?;
                    Ok((t.trim().parse::<f64>()?, p.trim().parse::<f64>()?))
                })
                .collect::<anyhow::Result<Vec<_>>>()
                .with_context(|| format!("invalid product state {spec:?}"))?;
            coherent_state(&PhasePoint::new(angles)?)
        }
        "random" => {
            let (n, seed) = args
                .split_once(':')
                .with_context(|| format!("expected random:N:SEED, got {spec:?}"))?;
            let seed: u64 = seed.trim().parse().with_context(|| format!("invalid seed in {spec:?}"))?;
            random_pure_state(count(n)?, &mut stream_rng(seed, 0))?
        }
        _ => bail!("unknown state {spec:?}; expected {STATE_SPEC_HELP}"),
    };
    Ok(state)
}

/// `{"manifest": …, "n_spins": N, "amplitudes": [[re, im], …]}` in the
/// basis order of [`crate::hilbert`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub n_spins: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureState, manifest: Option<RunManifest>) -> Self {
        StateFile {
            manifest,
            n_spins: state.n_spins(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    /// Normalized state; small norm deviations are corrected, larger ones
    /// rejected.
    pub fn to_state(&self) -> anyhow::Result<PureState> {
        let amps: Vec<C64> = self.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation >= RENORMALIZE_TOL {
            bail!("state file amplitudes have squared norm {norm_sqr}, too far from 1 to renormalize");
        }
        Ok(if deviation <= NORM_TOL {
            PureState::new(self.n_spins, amps)?
        } else {
            PureState::normalized(self.n_spins, amps)?
        })
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn load(path: &Path) -> anyhow::Result<PureState> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: StateFile =
            serde_json::from_str(&text).with_context(|| format!("parsing state file {}", path.display()))?;
        file.to_state()
    }
}
