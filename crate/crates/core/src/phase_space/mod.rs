//! Spin-coherent states, the Husimi function `H(μ) = ⟨μ|ρ|μ⟩` and its
//! second moment `P = 3^N ∫dμ H(μ)²`.
//!
//! `P` is available through independent routes that are expected to agree:
//!
//! * [`second_moment_projector`]: expectation of `P_s^{⊗N}` on two copies of
//!   the state, where `P_s` projects each spin pair onto its symmetric
//!   subspace;
//! * [`second_moment_purity`]: `1 − c_N²/4` from subsystem purities;
//! * [`second_moment_quadrature`]: tensor-product quadrature that is exact
//!   for the integrand;
//! * [`second_moment_monte_carlo`]: sampling of the Haar measure on each
//!   Bloch sphere.
//!
//! The measure `dμ = Π sinϑ_i dϑ_i dφ_i / 4π` is normalized to one per spin.

mod doubled;
mod quadrature;
mod sampling;

use std::f64::consts::{PI, TAU};

pub use doubled::{
    antisymmetric_weight, pattern_expectation, second_moment_projector,
    symmetric_antisymmetric_split, trace_ps_minus_pa, DoubledState, SiteProjector,
    MAX_MIXED_PROJECTOR_SPINS, MAX_PURE_PROJECTOR_SPINS,
};
pub use quadrature::{
    second_moment_quadrature, verify_quadrature_exactness, MAX_QUADRATURE_SPINS, MIN_NODES_PHI,
    MIN_NODES_THETA,
};
pub use sampling::{second_moment_monte_carlo, MIN_SAMPLES, MONTE_CARLO_STREAMS};

use crate::entanglement::multipartite_concurrence;
use crate::hilbert::{PureState, StateRef, C64};
use crate::{Error, Result};

/// Imaginary parts of real expectation values must stay below this.
pub const IMAG_TOL: f64 = 1e-10;

/// Bloch angles `(ϑ_i, φ_i)` of a product coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    angles: Vec<(f64, f64)>,
}

impl PhasePoint {
    /// `theta` must lie in `[0, π]`; `phi` is reduced into `[0, 2π)`.
    pub fn new(angles: Vec<(f64, f64)>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidAngle("no spins".into()));
        }
        let angles = angles
            .into_iter()
            .map(|(theta, phi)| {
                if !(0.0..=PI).contains(&theta) {
                    return Err(Error::InvalidAngle(format!("theta = {theta} outside [0, π]")));
                }
                if !phi.is_finite() {
                    return Err(Error::InvalidAngle(format!("phi = {phi}")));
                }
                let phi = phi.rem_euclid(TAU);
                // rem_euclid can round up to exactly 2π
                Ok((theta, if phi >= TAU { 0.0 } else { phi }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { angles })
    }

    /// The same angles on every one of `n_spins` spins.
    pub fn uniform(n_spins: usize, theta: f64, phi: f64) -> Result<Self> {
        Self::new(vec![(theta, phi); n_spins])
    }

    pub fn n_spins(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    pub(crate) fn kets(&self) -> Vec<SpinKet> {
        self.angles
            .iter()
            .map(|&(t, p)| SpinKet::from_angles(t, p))
            .collect()
    }
}

/// Components `(cos(ϑ/2), sin(ϑ/2)e^{iφ})` of a single-spin coherent state.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SpinKet {
    pub up: C64,
    pub down: C64,
}

impl SpinKet {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self {
            up: C64::new(c, 0.0),
            down: C64::from_polar(s, phi),
        }
    }

    /// Parametrized by `u = cos ϑ`.
    pub fn from_cos_theta(u: f64, phi: f64) -> Self {
        Self {
            up: C64::new((0.5 * (1.0 + u)).max(0.0).sqrt(), 0.0),
            down: C64::from_polar((0.5 * (1.0 - u)).max(0.0).sqrt(), phi),
        }
    }
}

/// Contracts the leading spin of a ket with `⟨ket|`, in place. The result
/// occupies the first half of `buf`.
#[inline]
pub(crate) fn contract_pure(buf: &mut [C64], ket: SpinKet) {
    let h = buf.len() / 2;
    let (u, d) = (ket.up.conj(), ket.down.conj());
    for r in 0..h {
        buf[r] = u * buf[r] + d * buf[h + r];
    }
}

/// Contracts the leading spin of a row-major `dim × dim` operator with
/// `⟨ket| · |ket⟩`, in place. The result is the leading `(dim/2)²` block of
/// `buf`, row-major with the halved dimension.
#[inline]
pub(crate) fn contract_mixed(buf: &mut [C64], dim: usize, ket: SpinKet) {
    let h = dim / 2;
    let m = [ket.up, ket.down];
    let w = [
        [m[0].conj() * m[0], m[0].conj() * m[1]],
        [m[1].conj() * m[0], m[1].conj() * m[1]],
    ];
    for r in 0..h {
        for s in 0..h {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += w[a][b] * buf[(a * h + r) * dim + b * h + s];
                }
            }
            buf[r * h + s] = acc;
        }
    }
}

/// Product coherent state `Π_i (cos(ϑ_i/2)|0⟩ + sin(ϑ_i/2)e^{iφ_i}|1⟩)`.
pub fn coherent_state(point: &PhasePoint) -> PureState {
    let mut amps = vec![C64::new(1.0, 0.0)];
    for ket in point.kets() {
        amps = amps
            .iter()
            .flat_map(|&a| [a * ket.up, a * ket.down])
            .collect();
    }
    PureState::from_raw(point.n_spins(), amps)
}

/// Husimi function `⟨μ|ρ|μ⟩` at a point of the product of Bloch spheres.
pub fn husimi<'a>(state: impl Into<StateRef<'a>>, point: &PhasePoint) -> Result<f64> {
    let state = state.into();
    let n = state.n_spins();
    if point.n_spins() != n {
        return Err(Error::DimensionMismatch(format!(
            "phase point has {} spins, state has {n}",
            point.n_spins()
        )));
    }
    let kets = point.kets();
    match state {
        StateRef::Pure(psi) => {
            let mut buf = psi.amplitudes().to_vec();
            Ok(husimi_pure_in_place(&mut buf, &kets))
        }
        StateRef::Mixed(rho) => {
            let mut buf: Vec<C64> = row_major(rho.matrix());
            let value = husimi_mixed_in_place(&mut buf, rho.dim(), &kets);
            if value.im.abs() > IMAG_TOL {
                return Err(Error::ImaginaryResidue(value.im));
            }
            Ok(value.re)
        }
    }
}

pub(crate) fn row_major(m: &nalgebra::DMatrix<C64>) -> Vec<C64> {
    m.transpose().as_slice().to_vec()
}

pub(crate) fn husimi_pure_in_place(buf: &mut [C64], kets: &[SpinKet]) -> f64 {
    let mut len = buf.len();
    for &ket in kets {
        contract_pure(&mut buf[..len], ket);
        len /= 2;
    }
    buf[0].norm_sqr()
}

pub(crate) fn husimi_mixed_in_place(buf: &mut [C64], dim: usize, kets: &[SpinKet]) -> C64 {
    let mut d = dim;
    for &ket in kets {
        contract_mixed(&mut buf[..d * d], d, ket);
        d /= 2;
    }
    buf[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Projector,
    Purity,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Projector => "projector",
            Method::Purity => "purity",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "montecarlo",
        }
    }
}

/// Value of `P` and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMomentReport {
    pub value: f64,
    pub method: Method,
    /// Standard error of the mean; Monte Carlo only.
    pub stderr: Option<f64>,
    /// Samples, quadrature points, doubled-space dimension or number of
    /// bipartitions, depending on `method`.
    pub samples_or_nodes: usize,
}

/// `P = 1 − c_N²/4` from the multipartite concurrence.
pub fn second_moment_purity(state: &PureState) -> Result<SecondMomentReport> {
    let n = state.n_spins();
    let value = if n == 1 {
        1.0
    } else {
        let c = multipartite_concurrence(state)?;
        1.0 - 0.25 * c * c
    };
    Ok(SecondMomentReport {
        value,
        method: Method::Purity,
        stderr: None,
        samples_or_nodes: if n == 1 { 0 } else { (1 << (n - 1)) - 1 },
    })
}

/// Back-end for [`husimi_mean`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationSettings {
    Quadrature { nodes_theta: usize, nodes_phi: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// `∫dμ H(μ)`, which equals `2^{−N} Tr ρ`.
pub fn husimi_mean<'a>(
    state: impl Into<StateRef<'a>>,
    settings: IntegrationSettings,
) -> Result<f64> {
    let state = state.into();
    match settings {
        IntegrationSettings::Quadrature {
            nodes_theta,
            nodes_phi,
        } => quadrature::integrate_power(state, nodes_theta, nodes_phi, 1),
        IntegrationSettings::MonteCarlo { samples, seed } => {
            Ok(sampling::sample_power(state, samples, seed, 1)?.0)
        }
    }
}
