//! Ising chain in a tilted magnetic field,
//! `H = −J Σ_i [σ_i^z σ_{i+1}^z + g(σ_i^z cos Θ + σ_i^x sin Θ)]`,
//! solved by dense exact diagonalization.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::entanglement::multipartite_concurrence;
use crate::hilbert::{PureState, C64};
use crate::phase_space::{second_moment_projector, second_moment_purity};
use crate::{Error, Result};

/// Dense storage of a `2^N × 2^N` real matrix.
pub const MAX_ISING_SPINS: usize = 12;

/// Relative gap below which the ground level is reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Relative spread below which eigenvalues are not resolved by the solver
/// and the ground vector is chosen by the canonical rule.
const RESOLUTION_TOL: f64 = 1e-13;

/// Relative eigen-residual `‖Hv − Ev‖ / ‖H‖` accepted from the solver.
const RESIDUAL_TOL: f64 = 1e-9;

/// Relative tie tolerance between basis weights.
const TIE_TOL: f64 = 1e-9;

/// Agreement required between the purity and projector routes in sweeps.
const SPOT_CHECK_TOL: f64 = 1e-9;

/// Angles are accepted up to this far beyond `[0, π/2]`.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingParams {
    pub n_spins: usize,
    pub j_coupling: f64,
    pub g: f64,
    pub theta: f64,
    pub boundary: Boundary,
}

impl IsingParams {
    /// Ferromagnetic chain with `J = 1`.
    pub fn new(n_spins: usize, g: f64, theta: f64, boundary: Boundary) -> Self {
        IsingParams {
            n_spins,
            j_coupling: 1.0,
            g,
            theta,
            boundary,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::WrongSystemSize {
                what: "Ising chain",
                required: "at least two spins",
                n_spins: self.n_spins,
            });
        }
        if self.n_spins > MAX_ISING_SPINS {
            return Err(Error::SizeCap {
                what: "dense Ising Hamiltonian",
                cap: MAX_ISING_SPINS,
                n_spins: self.n_spins,
            });
        }
        if !self.j_coupling.is_finite() {
            return Err(Error::InvalidParams(format!("coupling J = {}", self.j_coupling)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::InvalidParams(format!("field ratio g = {} must be finite and ≥ 0", self.g)));
        }
        if !(self.theta.is_finite() && (-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&self.theta)) {
            return Err(Error::InvalidAngle(format!("field angle {} outside [0, π/2]", self.theta)));
        }
        Ok(())
    }

    fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_spins;
        let mut bonds: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((n - 1, 0));
        }
        bonds
    }
}

/// Real symmetric Hamiltonian in the computational basis.
pub fn build_hamiltonian(params: &IsingParams) -> Result<DMatrix<f64>> {
    params.validate()?;
    let n = params.n_spins;
    let dim = 1usize << n;
    let j = params.j_coupling;
    let hz = params.g * params.theta.cos();
    let hx = params.g * params.theta.sin();
    let bonds = params.bonds();
    let sz = |x: usize, site: usize| if (x >> (n - 1 - site)) & 1 == 0 { 1.0 } else { -1.0 };
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for x in 0..dim {
        let coupling: f64 = bonds.iter().map(|&(a, b)| sz(x, a) * sz(x, b)).sum();
        let field: f64 = (0..n).map(|s| sz(x, s)).sum();
        h[(x, x)] = -j * (coupling + hz * field);
        if hx != 0.0 {
            for site in 0..n {
                h[(x ^ (1 << (n - 1 - site)), x)] = -j * hx;
            }
        }
    }
    debug_assert!(h.iter().zip(h.transpose().iter()).all(|(a, b)| a == b));
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    pub energy: f64,
    pub state: PureState,
    /// `E₁ − E₀`.
    pub gap: f64,
    /// `gap < 1e-10 · ‖H‖`.
    pub degenerate: bool,
}

/// Lowest eigenpair of a real symmetric matrix.
///
/// If the solver cannot resolve the lowest eigenvalues from each other the
/// state is the normalized projection of the basis vector with the largest
/// weight in that eigenspace (smallest index among ties). The amplitude of
/// largest magnitude is made real positive.
pub fn ground_state(h: &DMatrix<f64>) -> Result<GroundStateResult> {
    let dim = h.nrows();
    if dim != h.ncols() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian is {}×{}, expected a square matrix of size 2^N",
            h.nrows(),
            h.ncols()
        )));
    }
    let asym = (h - h.transpose()).amax();
    if asym > 1e-12 * h.amax().max(1.0) {
        return Err(Error::InvalidParams(format!("Hamiltonian not symmetric (deviation {asym:e})")));
    }
    let eig = nalgebra::SymmetricEigen::try_new(h.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigensolver("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energy = eig.eigenvalues[order[0]];
    let gap = eig.eigenvalues[order[1]] - energy;
    let h_norm = eig.eigenvalues.amax();
    let scale = if h_norm > 0.0 { h_norm } else { 1.0 };

    let cluster: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&k| eig.eigenvalues[k] - energy <= RESOLUTION_TOL * scale)
        .collect();
    let mut v: DVector<f64> = if cluster.len() == 1 {
        eig.eigenvectors.column(order[0]).into_owned()
    } else {
        let weights: Vec<f64> = (0..dim)
            .map(|x| cluster.iter().map(|&c| eig.eigenvectors[(x, c)].powi(2)).sum())
            .collect();
        let top = weights.iter().copied().fold(0.0, f64::max);
        let pick = weights.iter().position(|&w| w >= top * (1.0 - TIE_TOL)).expect("non-empty basis");
        let mut p = DVector::<f64>::zeros(dim);
        for &c in &cluster {
            let col = eig.eigenvectors.column(c);
            p.axpy(col[pick], &col, 1.0);
        }
        p
    };
    v /= v.norm();
    fix_phase(&mut v);

    let residual = (h * &v - &v * energy).norm();
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::Eigensolver(format!("eigen-residual {residual:e} exceeds tolerance")));
    }
    let amps = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    Ok(GroundStateResult {
        energy,
        state: PureState::normalized(dim.trailing_zeros() as usize, amps)?,
        gap,
        degenerate: gap < DEGENERACY_TOL * scale,
    })
}

/// Makes the largest-magnitude amplitude (smallest index among ties)
/// positive.
fn fix_phase(v: &mut DVector<f64>) {
    let top = v.amax();
    if let Some(k) = v.iter().position(|x| x.abs() >= top * (1.0 - TIE_TOL)) {
        if v[k] < 0.0 {
            v.neg_mut();
        }
    }
}

/// `⟨ψ| Π_i σ_i^x |ψ⟩`.
pub fn spin_flip_parity(state: &PureState) -> f64 {
    let amps = state.amplitudes();
    let mask = amps.len() - 1;
    amps.iter()
        .enumerate()
        .map(|(x, a)| (a.conj() * amps[x ^ mask]).re)
        .sum()
}

/// Field angles `Θ/π ∈ {0, 0.42, 0.46, 0.48, 0.49, 0.495, 0.4975, 0.4995, 0.5}`.
pub fn default_theta_list() -> Vec<f64> {
    [0.0, 0.42, 0.46, 0.48, 0.49, 0.495, 0.4975, 0.4995, 0.5]
        .iter()
        .map(|t| t * PI)
        .collect()
}

/// `g ∈ {0.05, 0.10, …, 3.00}`.
pub fn default_g_grid() -> Vec<f64> {
    (1..=60).map(|k| k as f64 / 20.0).collect()
}

/// `steps` equally spaced values from `g_min` to `g_max` inclusive.
pub fn linear_grid(g_min: f64, g_max: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::InvalidParams("grid needs at least one point".into())),
        1 => Ok(vec![g_min]),
        _ => {
            let span = g_max - g_min;
            Ok((0..steps)
                .map(|k| if k + 1 == steps { g_max } else { g_min + span * k as f64 / (steps - 1) as f64 })
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Chain size, coupling and boundary; `g` and `theta` are overwritten.
    pub template: IsingParams,
    pub g_grid: Vec<f64>,
    pub theta_list: Vec<f64>,
    /// Every this many grid points `P` is recomputed by the projector route;
    /// zero disables the check.
    pub spot_check_every: usize,
}

impl SweepConfig {
    /// Eight spins, periodic, `J = 1`, default angle list and field grid.
    pub fn default_chain() -> Self {
        SweepConfig {
            template: IsingParams::new(8, 0.0, 0.0, Boundary::Periodic),
            g_grid: default_g_grid(),
            theta_list: default_theta_list(),
            spot_check_every: 16,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_grid.is_empty() || self.theta_list.is_empty() {
            return Err(Error::InvalidParams("sweep grids must be non-empty".into()));
        }
        if self.g_grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidParams("g grid must be strictly increasing".into()));
        }
        for &theta in &self.theta_list {
            for &g in [self.g_grid[0], self.g_grid[self.g_grid.len() - 1]].iter() {
                IsingParams { g, theta, ..self.template }.validate()?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub theta: f64,
    pub g: f64,
    pub energy: f64,
    pub gap: f64,
    pub p: f64,
    pub c_n: f64,
    pub degenerate: bool,
}

fn sweep_point(template: &IsingParams, theta: f64, g: f64, spot_check: bool) -> Result<SweepRecord> {
    let params = IsingParams { g, theta, ..*template };
    let gs = ground_state(&build_hamiltonian(&params)?)?;
    let p = second_moment_purity(&gs.state)?.value;
    if spot_check {
        let q = second_moment_projector(&gs.state)?.value;
        if (p - q).abs() > SPOT_CHECK_TOL {
            return Err(Error::Inconsistent(format!("purity route {p} vs projector route {q}")));
        }
    }
    Ok(SweepRecord {
        theta,
        g,
        energy: gs.energy,
        gap: gs.gap,
        p,
        c_n: multipartite_concurrence(&gs.state)?,
        degenerate: gs.degenerate,
    })
}

/// One record per `(Θ, g)` pair, `Θ` outer and `g` inner, independent of
/// the number of worker threads.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let n_g = config.g_grid.len();
    (0..config.theta_list.len() * n_g)
        .into_par_iter()
        .map(|idx| {
            let theta = config.theta_list[idx / n_g];
            let g = config.g_grid[idx % n_g];
            let spot_check = config.spot_check_every > 0 && idx % config.spot_check_every == 0;
            sweep_point(&config.template, theta, g, spot_check).map_err(|e| Error::AtGridPoint {
                theta,
                g,
                source: Box::new(e),
            })
        })
        .collect()
}
