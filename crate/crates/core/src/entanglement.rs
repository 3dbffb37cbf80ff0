//! Concurrence-family entanglement measures of pure spin states.
//!
//! Squared concurrence-vector lengths are obtained from the purity of the
//! marginal, `Σ_α C_α² = 2(1 − Tr ρ_A²)`; individual vector components are
//! never formed.

use nalgebra::DMatrix;

use crate::hilbert::{reduced_density, scatter_table, subsystem_purity, DensityOperator, PauliAxis, PureState, SubsetMask, C64};
use crate::phase_space::DoubledState;
use crate::{Error, Result};

/// Tolerance on the agreement of two evaluations of the same quantity.
const CROSS_CHECK_TOL: f64 = 1e-12;

/// Monogamy residues above `-TANGLE_CLAMP` are round-off and read as zero.
const TANGLE_CLAMP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConcurrenceKind {
    TwoSpin,
    OneVsRest,
    Multipartite,
    VectorLengthSq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceReport {
    pub value: f64,
    pub kind: ConcurrenceKind,
    pub partition: Option<SubsetMask>,
}

fn require_spins(state: &PureState, what: &'static str, required: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongSystemSize {
            what,
            required,
            n_spins: state.n_spins(),
        })
    }
}

fn check_site(state: &PureState, site: usize) -> Result<()> {
    if site >= state.n_spins() {
        return Err(Error::SiteOutOfRange {
            site,
            n_spins: state.n_spins(),
        });
    }
    Ok(())
}

/// `σ_y ⊗ σ_y`, real in the computational basis.
fn yy() -> DMatrix<C64> {
    let y = PauliAxis::Y.matrix();
    DMatrix::from_fn(4, 4, |r, c| y[r >> 1][c >> 1] * y[r & 1][c & 1])
}

/// Unordered bipartitions of `n_spins` spins, each listed once as the side
/// that contains spin 1.
pub fn bipartitions(n_spins: usize) -> impl Iterator<Item = SubsetMask> {
    let count = if n_spins < 2 { 0 } else { (1u64 << (n_spins - 1)) - 1 };
    (0..count).map(|k| SubsetMask(1 | k << 1))
}

/// `|⟨ψ|σ_y⊗σ_y|ψ*⟩|` of a two-spin ket, cross-checked against the
/// doubled-space form.
pub fn concurrence_two_spin(state: &PureState) -> Result<f64> {
    require_spins(state, "two-spin concurrence", "exactly two spins", state.n_spins() == 2)?;
    let psi = nalgebra::DVector::from_column_slice(state.amplitudes());
    let flipped = yy() * psi.map(|z| z.conj());
    let value = psi.dotc(&flipped).norm();
    let doubled = concurrence_two_spin_doubled(state)?;
    if (value - doubled).abs() > CROSS_CHECK_TOL {
        return Err(Error::Inconsistent(format!(
            "spin-flip concurrence {value} vs doubled-space form {doubled}"
        )));
    }
    Ok(value)
}

/// `|(⟨01| − ⟨10|) ⊗ (⟨01| − ⟨10|) |ψψ⟩|`, each bracket acting on one spin
/// together with its copy.
pub fn concurrence_two_spin_doubled(state: &PureState) -> Result<f64> {
    require_spins(state, "two-spin concurrence", "exactly two spins", state.n_spins() == 2)?;
    let doubled = DoubledState::from_pure(state)?;
    let sign = |digit: usize| match digit {
        0b01 => 1.0,
        0b10 => -1.0,
        _ => 0.0,
    };
    let value: C64 = doubled
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, &a)| a * sign(idx >> 2) * sign(idx & 3))
        .sum();
    Ok(value.norm())
}

/// Wootters concurrence given any factor `V` with `ρ = V V†`: the λ's are
/// the singular values of `Vᵀ (σ_y⊗σ_y) V`.
fn concurrence_from_factor(factor: &DMatrix<C64>) -> f64 {
    let tau = factor.transpose() * yy() * factor;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = sv.iter().skip(1).sum();
    (sv.first().copied().unwrap_or(0.0) - rest).max(0.0)
}

/// Mixed-state concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-spin density
/// operator.
pub fn wootters_concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.n_spins() != 2 {
        return Err(Error::WrongSystemSize {
            what: "Wootters concurrence",
            required: "a two-spin density operator",
            n_spins: rho.n_spins(),
        });
    }
    let eig = rho.matrix().clone().symmetric_eigen();
    let sqrt_p = eig.eigenvalues.map(|p| C64::new(p.max(0.0).sqrt(), 0.0));
    let factor = eig.eigenvectors * DMatrix::from_diagonal(&sqrt_p);
    Ok(concurrence_from_factor(&factor))
}

/// Wootters concurrence of the two-spin marginal on spins `i` and `j`.
///
/// The marginal is factored as `ρ_ij = V V†` with the columns of `V` being
/// the slices of `ψ` over the remaining spins, then compressed by a QR
/// decomposition of `V†`; no square roots of nearly vanishing eigenvalues
/// are taken.
pub fn concurrence_two_spin_pair(state: &PureState, i: usize, j: usize) -> Result<f64> {
    let n = state.n_spins();
    require_spins(state, "pairwise concurrence", "at least two spins", n >= 2)?;
    check_site(state, i)?;
    check_site(state, j)?;
    if i == j {
        return Err(Error::InvalidParams(format!("pair ({i}, {j}) repeats a spin")));
    }
    let pair = scatter_table(n, &[i, j]);
    let rest_sites: Vec<usize> = (0..n).filter(|&s| s != i && s != j).collect();
    let rest = scatter_table(n, &rest_sites);
    let amps = state.amplitudes();
    // V† with rows indexed by the traced configuration
    let v_adj = DMatrix::from_fn(rest.len(), 4, |r, p| amps[pair[p] | rest[r]].conj());
    let r = v_adj.qr().r();
    Ok(concurrence_from_factor(&r.adjoint()))
}

/// `C²_{i(rest)} = 2(1 − Tr ρ_i²)`, cross-checked against `4 det ρ_i`.
pub fn one_vs_rest_concurrence_sq(state: &PureState, site: usize) -> Result<f64> {
    require_spins(state, "one-vs-rest concurrence", "at least two spins", state.n_spins() >= 2)?;
    check_site(state, site)?;
    let rho = reduced_density(state, SubsetMask::single(site))?;
    let m = rho.matrix();
    let from_purity = 2.0 * (1.0 - crate::hilbert::purity(&rho));
    let from_det = 4.0 * (m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr());
    if (from_purity - from_det).abs() > CROSS_CHECK_TOL {
        return Err(Error::Inconsistent(format!(
            "2(1 − Tr ρ²) = {from_purity} vs 4 det ρ = {from_det}"
        )));
    }
    Ok(from_purity)
}

/// 3-tangle from the monogamy decomposition with spin 1 in the focus.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    three_tangle_with_focus(state, 0)
}

/// `τ = C²_{f(rest)} − C²_{f,a} − C²_{f,b}` for focus spin `f`.
pub fn three_tangle_with_focus(state: &PureState, focus: usize) -> Result<f64> {
    require_spins(state, "3-tangle", "exactly three spins", state.n_spins() == 3)?;
    check_site(state, focus)?;
    let others: Vec<usize> = (0..3).filter(|&s| s != focus).collect();
    let one_vs_rest = one_vs_rest_concurrence_sq(state, focus)?;
    let c1 = concurrence_two_spin_pair(state, focus, others[0])?;
    let c2 = concurrence_two_spin_pair(state, focus, others[1])?;
    let tau = one_vs_rest - c1 * c1 - c2 * c2;
    if tau < -TANGLE_CLAMP {
        return Err(Error::NegativeTangle(tau));
    }
    Ok(tau.max(0.0))
}

/// N-partite concurrence
/// `c_N = 2^{1−N/2} √((2^N − 2)⟨ψ|ψ⟩² − Σ_A Tr ρ_A²)` over all proper
/// non-empty subsystems `A`; each complementary pair is evaluated once.
pub fn multipartite_concurrence(state: &PureState) -> Result<f64> {
    let n = state.n_spins();
    require_spins(state, "multipartite concurrence", "at least two spins", n >= 2)?;
    let mut purity_sum = 0.0;
    for mask in bipartitions(n) {
        purity_sum += 2.0 * subsystem_purity(state, mask)?;
    }
    let norm2 = state.norm_sqr();
    let radicand = ((1u64 << n) - 2) as f64 * norm2 * norm2 - purity_sum;
    Ok(2f64.powf(1.0 - 0.5 * n as f64) * radicand.max(0.0).sqrt())
}

/// `C̄² = Σ_{A|B} 2(1 − Tr ρ_A²)` over the `2^{N−1} − 1` bipartitions.
pub fn concurrence_vector_length_sq(state: &PureState) -> Result<f64> {
    let n = state.n_spins();
    require_spins(state, "concurrence-vector length", "at least two spins", n >= 2)?;
    bipartitions(n).try_fold(0.0, |acc, mask| Ok(acc + 2.0 * (1.0 - subsystem_purity(state, mask)?)))
}

/// Every measure that applies to a state of this size.
pub fn all_measures(state: &PureState) -> Result<Vec<ConcurrenceReport>> {
    let n = state.n_spins();
    require_spins(state, "entanglement report", "at least two spins", n >= 2)?;
    let mut out = Vec::new();
    if n == 2 {
        out.push(ConcurrenceReport {
            value: concurrence_two_spin(state)?,
            kind: ConcurrenceKind::TwoSpin,
            partition: None,
        });
    }
    for site in 0..n {
        out.push(ConcurrenceReport {
            value: one_vs_rest_concurrence_sq(state, site)?,
            kind: ConcurrenceKind::OneVsRest,
            partition: Some(SubsetMask::single(site)),
        });
    }
    out.push(ConcurrenceReport {
        value: multipartite_concurrence(state)?,
        kind: ConcurrenceKind::Multipartite,
        partition: None,
    });
    out.push(ConcurrenceReport {
        value: concurrence_vector_length_sq(state)?,
        kind: ConcurrenceKind::VectorLengthSq,
        partition: None,
    });
    Ok(out)
}
