//! The Hilbert space together with an auxiliary copy.
//!
//! Each spin and its copy form a 2-bit digit `(original, copy)` of the doubled
//! basis index; the digit of site `i` sits in bits `2(N−1−i) + 1` (original)
//! and `2(N−1−i)` (copy). Projectors acting on one spin pair are therefore 4x4
//! blocks applied over a contiguous stride, and `P_s^{⊗N}` is never formed as
//! a matrix.

use nalgebra::DMatrix;

use super::{Method, SecondMomentReport, IMAG_TOL};
use crate::hilbert::{purity, DensityOperator, PureState, StateRef, C64};
use crate::{Error, Result};

/// Pure states carry `4^N` doubled amplitudes.
pub const MAX_PURE_PROJECTOR_SPINS: usize = 12;

/// The vectorized `ρ` route for mixed states works on `4^N` entries but the
/// input itself is a dense `2^N × 2^N` matrix.
pub const MAX_MIXED_PROJECTOR_SPINS: usize = 6;

/// Per-pair projector: symmetric (triplet) or antisymmetric (singlet)
/// subspace of a spin and its copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteProjector {
    S,
    A,
}

impl SiteProjector {
    /// Matrix in the `(original, copy)` digit basis `00, 01, 10, 11`.
    fn matrix(self) -> [[f64; 4]; 4] {
        match self {
            SiteProjector::S => [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.5, 0.5, 0.0],
                [0.0, 0.5, 0.5, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
            SiteProjector::A => [
                [0.0, 0.0, 0.0, 0.0],
                [0.0, 0.5, -0.5, 0.0],
                [0.0, -0.5, 0.5, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ],
        }
    }
}

/// `P_s − P_a`, the swap of a spin with its copy.
const SWAP: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Spreads the bits of `x` to the even positions.
fn spread_bits(mut x: usize) -> usize {
    let mut out = 0;
    let mut pos = 0;
    while x != 0 {
        out |= (x & 1) << (2 * pos);
        x >>= 1;
        pos += 1;
    }
    out
}

fn spread_table(n_spins: usize) -> Vec<usize> {
    (0..1usize << n_spins).map(spread_bits).collect()
}

/// `|ψ⟩ ⊗ |ψ′⟩` on the doubled space, copies of each spin adjacent.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledState {
    n_spins: usize,
    amps: Vec<C64>,
}

impl DoubledState {
    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::from_pair(state, state)
    }

    pub fn from_pair(original: &PureState, copy: &PureState) -> Result<Self> {
        let n = original.n_spins();
        if copy.n_spins() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} spins",
                n,
                copy.n_spins()
            )));
        }
        if n > MAX_PURE_PROJECTOR_SPINS {
            return Err(Error::SizeCap {
                what: "the doubled-space projector",
                cap: MAX_PURE_PROJECTOR_SPINS,
                n_spins: n,
            });
        }
        let spread = spread_table(n);
        let mut amps = vec![C64::new(0.0, 0.0); 1 << (2 * n)];
        for (x, &a) in original.amplitudes().iter().enumerate() {
            let hi = spread[x] << 1;
            for (y, &b) in copy.amplitudes().iter().enumerate() {
                amps[hi | spread[y]] = a * b;
            }
        }
        Ok(Self { n_spins: n, amps })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Exchanges original and copy on every spin.
    pub fn swap_copies(&self) -> Self {
        let mut amps = self.amps.clone();
        for site in 0..self.n_spins {
            apply_block(&mut amps, self.n_spins, site, &SWAP);
        }
        Self {
            n_spins: self.n_spins,
            amps,
        }
    }

    pub fn is_copy_symmetric(&self, tol: f64) -> bool {
        self.swap_copies()
            .amps
            .iter()
            .zip(&self.amps)
            .all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn apply(&mut self, site: usize, projector: SiteProjector) -> Result<()> {
        if site >= self.n_spins {
            return Err(Error::SiteOutOfRange {
                site,
                n_spins: self.n_spins,
            });
        }
        match projector {
            SiteProjector::S => for_each_digit(&mut self.amps, self.n_spins, site, |q| {
                let m = 0.5 * (q[1] + q[2]);
                q[1] = m;
                q[2] = m;
            }),
            SiteProjector::A => for_each_digit(&mut self.amps, self.n_spins, site, |q| {
                let m = 0.5 * (q[1] - q[2]);
                q[0] = C64::new(0.0, 0.0);
                q[1] = m;
                q[2] = -m;
                q[3] = C64::new(0.0, 0.0);
            }),
        }
        Ok(())
    }
}

/// Visits the four amplitudes sharing all digits except that of `site`.
fn for_each_digit(amps: &mut [C64], n_spins: usize, site: usize, mut f: impl FnMut(&mut [C64; 4])) {
    let stride = 1usize << (2 * (n_spins - 1 - site));
    for block in amps.chunks_mut(4 * stride) {
        for off in 0..stride {
            let mut q = [
                block[off],
                block[off + stride],
                block[off + 2 * stride],
                block[off + 3 * stride],
            ];
            f(&mut q);
            for (k, v) in q.into_iter().enumerate() {
                block[off + k * stride] = v;
            }
        }
    }
}

fn apply_block(amps: &mut [C64], n_spins: usize, site: usize, m: &[[f64; 4]; 4]) {
    for_each_digit(amps, n_spins, site, |q| {
        let src = *q;
        for (row, out) in m.iter().zip(q.iter_mut()) {
            *out = row.iter().zip(&src).map(|(&w, &a)| a * w).sum();
        }
    });
}

/// `⟨ψψ′| ⊗_i P_{pattern_i} |ψψ′⟩` for one ordered choice of symmetric and
/// antisymmetric projectors.
pub fn symmetric_antisymmetric_split(doubled: &DoubledState, pattern: &[SiteProjector]) -> Result<f64> {
    if pattern.len() != doubled.n_spins {
        return Err(Error::PatternLength {
            expected: doubled.n_spins,
            got: pattern.len(),
        });
    }
    let mut projected = doubled.clone();
    for (site, &p) in pattern.iter().enumerate() {
        projected.apply(site, p)?;
    }
    // a product of commuting orthogonal projectors is an orthogonal projector
    Ok(projected.norm_sqr())
}

/// `Tr((ρ⊗ρ) ⊗_i O_i)` for per-pair operators `O_i`, evaluated as a bilinear
/// form on the vectorized `ρ` whose site digits are `(row bit, column bit)`.
fn doubled_expectation_mixed(rho: &DensityOperator, ops: &[[[f64; 4]; 4]]) -> Result<f64> {
    let n = rho.n_spins();
    if n > MAX_MIXED_PROJECTOR_SPINS {
        return Err(Error::SizeCap {
            what: "the mixed-state projector",
            cap: MAX_MIXED_PROJECTOR_SPINS,
            n_spins: n,
        });
    }
    debug_assert_eq!(ops.len(), n);
    let spread = spread_table(n);
    let m: &DMatrix<C64> = rho.matrix();
    let dim = rho.dim();
    let mut w = vec![C64::new(0.0, 0.0); dim * dim];
    for x in 0..dim {
        for y in 0..dim {
            w[spread[x] << 1 | spread[y]] = m[(x, y)];
        }
    }
    let mut u = w.clone();
    for (site, op) in ops.iter().enumerate() {
        // M[(x y), (x' y')] = O[(y y'), (x x')]
        let mut block = [[0.0; 4]; 4];
        for (xy, row) in block.iter_mut().enumerate() {
            for (xy2, out) in row.iter_mut().enumerate() {
                let (x, y) = (xy >> 1, xy & 1);
                let (x2, y2) = (xy2 >> 1, xy2 & 1);
                *out = op[y << 1 | y2][x << 1 | x2];
            }
        }
        apply_block(&mut u, n, site, &block);
    }
    let value: C64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// Expectation of one ordered projector product on the doubled state built
/// from `state` (pure) or `ρ ⊗ ρ` (mixed).
pub fn pattern_expectation<'a>(state: impl Into<StateRef<'a>>, pattern: &[SiteProjector]) -> Result<f64> {
    let state = state.into();
    if pattern.len() != state.n_spins() {
        return Err(Error::PatternLength {
            expected: state.n_spins(),
            got: pattern.len(),
        });
    }
    match state {
        StateRef::Pure(psi) => symmetric_antisymmetric_split(&DoubledState::from_pure(psi)?, pattern),
        StateRef::Mixed(rho) => {
            let ops: Vec<_> = pattern.iter().map(|p| p.matrix()).collect();
            doubled_expectation_mixed(rho, &ops)
        }
    }
}

/// Sum of [`pattern_expectation`] over all orderings with exactly
/// `antisymmetric` slots carrying `P_a`.
pub fn antisymmetric_weight<'a>(state: impl Into<StateRef<'a>>, antisymmetric: usize) -> Result<f64> {
    let state = state.into();
    let n = state.n_spins();
    let mut total = 0.0;
    for bits in 0u32..1 << n {
        if bits.count_ones() as usize != antisymmetric {
            continue;
        }
        let pattern: Vec<_> = (0..n)
            .map(|i| if bits >> i & 1 == 1 { SiteProjector::A } else { SiteProjector::S })
            .collect();
        total += pattern_expectation(state, &pattern)?;
    }
    Ok(total)
}

/// `P = Tr((ρ⊗ρ) P_s^{⊗N})`.
pub fn second_moment_projector<'a>(state: impl Into<StateRef<'a>>) -> Result<SecondMomentReport> {
    let state = state.into();
    let n = state.n_spins();
    let value = match state {
        StateRef::Pure(psi) => {
            let mut doubled = DoubledState::from_pure(psi)?;
            for site in 0..n {
                doubled.apply(site, SiteProjector::S)?;
            }
            doubled.norm_sqr()
        }
        StateRef::Mixed(rho) => doubled_expectation_mixed(rho, &vec![SiteProjector::S.matrix(); n])?,
    };
    Ok(SecondMomentReport {
        value,
        method: Method::Projector,
        stderr: None,
        samples_or_nodes: 1 << (2 * n),
    })
}

/// `Tr((ρ⊗ρ)(P_s − P_a)^{⊗N})`, checked against an independent evaluation of
/// `Tr ρ²`.
pub fn trace_ps_minus_pa(rho: &DensityOperator) -> Result<f64> {
    let lhs = doubled_expectation_mixed(rho, &vec![SWAP; rho.n_spins()])?;
    let rhs = purity(rho);
    if (lhs - rhs).abs() > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "swap expectation {lhs} differs from Tr ρ² = {rhs}"
        )));
    }
    Ok(lhs)
}
