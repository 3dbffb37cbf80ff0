//! Tensor-product quadrature over the Bloch spheres.
//!
//! Per spin, `H²` is a trigonometric polynomial of degree at most two in
//! `(ϑ, φ)`. After the `φ` average only polynomials of degree ≤ 2 in
//! `u = cos ϑ` survive, so Gauss-Legendre in `u` with three nodes and the
//! endpoint-free trapezoid rule in `φ` with five nodes integrate it exactly.

use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;

use super::{contract_mixed, contract_pure, row_major, Method, SecondMomentReport, SpinKet, IMAG_TOL};
use crate::hilbert::{StateRef, C64};
use crate::{Error, Result};

pub const MIN_NODES_THETA: usize = 3;
pub const MIN_NODES_PHI: usize = 5;
/// The grid has `(nodes_theta · nodes_phi)^N` points.
pub const MAX_QUADRATURE_SPINS: usize = 4;

/// Doubling the nodes may move the result by at most this much.
const EXACTNESS_TOL: f64 = 1e-12;

/// Weighted single-spin rule; weights sum to one.
fn sphere_rule(nodes_theta: usize, nodes_phi: usize) -> Result<Vec<(f64, SpinKet)>> {
    if nodes_theta < MIN_NODES_THETA || nodes_phi < MIN_NODES_PHI {
        return Err(Error::TooFewNodes {
            theta: nodes_theta,
            phi: nodes_phi,
            min_theta: MIN_NODES_THETA,
            min_phi: MIN_NODES_PHI,
        });
    }
    let gl = GaussLegendre::new(nodes_theta)
        .map_err(|e| Error::InvalidParams(format!("Gauss-Legendre rule: {e}")))?;
    let mut rule = Vec::with_capacity(nodes_theta * nodes_phi);
    for &(u, w) in gl.as_node_weight_pairs() {
        for k in 0..nodes_phi {
            let phi = TAU * k as f64 / nodes_phi as f64;
            rule.push((0.5 * w / nodes_phi as f64, SpinKet::from_cos_theta(u, phi)));
        }
    }
    Ok(rule)
}

/// `∫dμ H(μ)^power` on the product grid.
pub(super) fn integrate_power(state: StateRef<'_>, nodes_theta: usize, nodes_phi: usize, power: i32) -> Result<f64> {
    let n = state.n_spins();
    if n > MAX_QUADRATURE_SPINS {
        return Err(Error::SizeCap {
            what: "tensor-product quadrature",
            cap: MAX_QUADRATURE_SPINS,
            n_spins: n,
        });
    }
    let rule = sphere_rule(nodes_theta, nodes_phi)?;
    let zero = C64::new(0.0, 0.0);
    match state {
        StateRef::Pure(psi) => {
            // scratch[l] receives the input of level l before it is contracted
            let mut scratch: Vec<Vec<C64>> = (0..n).map(|l| vec![zero; 1 << (n - l)]).collect();
            Ok(descend_pure(psi.amplitudes(), &mut scratch, 1.0, &rule, power))
        }
        StateRef::Mixed(rho) => {
            let mut scratch: Vec<Vec<C64>> = (0..n).map(|l| vec![zero; 1 << (2 * (n - l))]).collect();
            let mut worst_imag = 0.0f64;
            let value = descend_mixed(&row_major(rho.matrix()), rho.dim(), &mut scratch, 1.0, &rule, power, &mut worst_imag);
            if worst_imag > IMAG_TOL {
                return Err(Error::ImaginaryResidue(worst_imag));
            }
            Ok(value)
        }
    }
}

fn descend_pure(src: &[C64], scratch: &mut [Vec<C64>], weight: f64, rule: &[(f64, SpinKet)], power: i32) -> f64 {
    let (buf, deeper) = scratch.split_first_mut().expect("one buffer per spin");
    let mut acc = 0.0;
    for &(w, ket) in rule {
        buf.copy_from_slice(src);
        contract_pure(buf, ket);
        let half = &buf[..src.len() / 2];
        acc += if deeper.is_empty() {
            weight * w * half[0].norm_sqr().powi(power)
        } else {
            descend_pure(half, deeper, weight * w, rule, power)
        };
    }
    acc
}

fn descend_mixed(
    src: &[C64],
    dim: usize,
    scratch: &mut [Vec<C64>],
    weight: f64,
    rule: &[(f64, SpinKet)],
    power: i32,
    worst_imag: &mut f64,
) -> f64 {
    let (buf, deeper) = scratch.split_first_mut().expect("one buffer per spin");
    let h = dim / 2;
    let mut acc = 0.0;
    for &(w, ket) in rule {
        buf.copy_from_slice(src);
        contract_mixed(buf, dim, ket);
        let reduced = &buf[..h * h];
        acc += if deeper.is_empty() {
            *worst_imag = worst_imag.max(reduced[0].im.abs());
            weight * w * reduced[0].re.powi(power)
        } else {
            descend_mixed(reduced, h, deeper, weight * w, rule, power, worst_imag)
        };
    }
    acc
}

/// `P = 3^N Σ_grid w H²` with `nodes_theta` Gauss-Legendre nodes in `cos ϑ`
/// and `nodes_phi` equispaced nodes in `φ` per spin.
pub fn second_moment_quadrature<'a>(
    state: impl Into<StateRef<'a>>,
    nodes_theta: usize,
    nodes_phi: usize,
) -> Result<SecondMomentReport> {
    let state = state.into();
    let n = state.n_spins();
    let integral = integrate_power(state, nodes_theta, nodes_phi, 2)?;
    Ok(SecondMomentReport {
        value: 3f64.powi(n as i32) * integral,
        method: Method::Quadrature,
        stderr: None,
        samples_or_nodes: (nodes_theta * nodes_phi).pow(n as u32),
    })
}

/// Runs [`second_moment_quadrature`] with the given and with doubled node
/// counts and fails unless both agree within `1e-12`.
pub fn verify_quadrature_exactness<'a>(
    state: impl Into<StateRef<'a>>,
    nodes_theta: usize,
    nodes_phi: usize,
) -> Result<SecondMomentReport> {
    let state = state.into();
    let coarse = second_moment_quadrature(state, nodes_theta, nodes_phi)?;
    let fine = second_moment_quadrature(state, 2 * nodes_theta, 2 * nodes_phi)?;
    if (coarse.value - fine.value).abs() > EXACTNESS_TOL {
        return Err(Error::QuadratureNotExact {
            coarse: coarse.value,
            fine: fine.value,
        });
    }
    Ok(coarse)
}
