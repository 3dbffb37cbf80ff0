//! Multi-spin kets, density operators and partial traces.
//!
//! Basis convention: spin 1 (site 0) is the most significant bit of the basis
//! index, so the ket `|s₁s₂…s_N⟩` sits at index `s₁·2^(N-1) + … + s_N` and
//! the two-spin amplitudes `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩` land at 0..3 in
//! order.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Tolerance on the squared norm of a constructed ket and on the trace and
/// Hermiticity of a density operator.
pub const NORM_TOL: f64 = 1e-12;

/// Eigenvalues of a density operator may dip this far below zero.
pub const PSD_TOL: f64 = 1e-10;

/// Largest number of spins a dense ket may describe.
pub const MAX_SPINS: usize = 26;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Bit position of `site` inside a basis index.
#[inline]
pub(crate) fn bit_of(n_spins: usize, site: usize) -> usize {
    n_spins - 1 - site
}

fn check_n_spins(n_spins: usize) -> Result<()> {
    if n_spins == 0 {
        return Err(Error::WrongSystemSize {
            what: "a spin system",
            required: "at least one spin",
            n_spins,
        });
    }
    if n_spins > MAX_SPINS {
        return Err(Error::SizeCap {
            what: "a dense state vector",
            cap: MAX_SPINS,
            n_spins,
        });
    }
    Ok(())
}

/// Normalized ket over the `2^N` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_spins: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// Wraps `amps`, which must already be normalized to within [`NORM_TOL`].
    pub fn new(n_spins: usize, amps: Vec<C64>) -> Result<Self> {
        check_n_spins(n_spins)?;
        let expected = 1usize << n_spins;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr.is_nan() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { n_spins, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(n_spins: usize, mut amps: Vec<C64>) -> Result<Self> {
        check_n_spins(n_spins)?;
        let expected = 1usize << n_spins;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let scale = 1.0 / norm_sqr.sqrt();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { n_spins, amps })
    }

    pub(crate) fn from_raw(n_spins: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_spins);
        Self { n_spins, amps }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n_spins != other.n_spins {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} spins",
                self.n_spins, other.n_spins
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Hermitian, unit-trace operator on `N` spins.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_spins: usize,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates Hermiticity and unit trace. Positivity is checked separately
    /// by [`DensityOperator::check_positive`].
    pub fn new(n_spins: usize, matrix: DMatrix<C64>) -> Result<Self> {
        check_n_spins(n_spins)?;
        let dim = 1usize << n_spins;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {} spins",
                matrix.nrows(),
                matrix.ncols(),
                n_spins
            )));
        }
        let mut asym = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                asym = asym.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if asym > NORM_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {asym:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {trace} is not 1")));
        }
        Ok(Self { n_spins, matrix })
    }

    pub(crate) fn from_raw(n_spins: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1 << n_spins);
        Self { n_spins, matrix }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Full eigendecomposition; fails if an eigenvalue is below `-PSD_TOL`.
    pub fn check_positive(&self) -> Result<()> {
        let eig = self.matrix.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

/// Set of spins; bit `i` selects site `i` (spin `i + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub fn full(n_spins: usize) -> Self {
        Self((1u64 << n_spins) - 1)
    }

    pub fn single(site: usize) -> Self {
        Self(1 << site)
    }

    pub fn from_sites(sites: &[usize]) -> Self {
        Self(sites.iter().fold(0, |m, &s| m | (1 << s)))
    }

    pub fn contains(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n_spins: usize) -> Self {
        Self(!self.0 & Self::full(n_spins).0)
    }

    /// Member sites in increasing order.
    pub fn sites(self, n_spins: usize) -> Vec<usize> {
        (0..n_spins).filter(|&s| self.contains(s)).collect()
    }

    pub fn validate(self, n_spins: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyMask);
        }
        if n_spins < 64 && self.0 >> n_spins != 0 {
            return Err(Error::MaskOutOfRange {
                mask: self.0,
                n_spins,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let i = C64::new(0.0, 1.0);
        match self {
            PauliAxis::X => [[ZERO, ONE], [ONE, ZERO]],
            PauliAxis::Y => [[ZERO, -i], [i, ZERO]],
            PauliAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

/// Borrowed pure or mixed input for routines that accept either.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityOperator),
}

impl StateRef<'_> {
    pub fn n_spins(&self) -> usize {
        match self {
            StateRef::Pure(p) => p.n_spins(),
            StateRef::Mixed(r) => r.n_spins(),
        }
    }
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(p: &'a PureState) -> Self {
        StateRef::Pure(p)
    }
}

impl<'a> From<&'a DensityOperator> for StateRef<'a> {
    fn from(r: &'a DensityOperator) -> Self {
        StateRef::Mixed(r)
    }
}

pub fn basis_state(n_spins: usize, bits: usize) -> Result<PureState> {
    check_n_spins(n_spins)?;
    let dim = 1usize << n_spins;
    if bits >= dim {
        return Err(Error::IndexOutOfRange {
            index: bits,
            n_spins,
        });
    }
    let mut amps = vec![ZERO; dim];
    amps[bits] = ONE;
    Ok(PureState::from_raw(n_spins, amps))
}

/// `a ⊗ b`, with the spins of `a` first.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let n_spins = a.n_spins + b.n_spins;
    check_n_spins(n_spins)?;
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for &x in &a.amps {
        amps.extend(b.amps.iter().map(|&y| x * y));
    }
    Ok(PureState::from_raw(n_spins, amps))
}

/// Applies the 2x2 matrix `u` to one spin.
pub fn apply_single_spin(state: &PureState, site: usize, u: &[[C64; 2]; 2]) -> Result<PureState> {
    let n = state.n_spins;
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n_spins: n });
    }
    let stride = 1usize << bit_of(n, site);
    let mut amps = state.amps.clone();
    for block in amps.chunks_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (x0, x1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (a0, a1) = (*x0, *x1);
            *x0 = u[0][0] * a0 + u[0][1] * a1;
            *x1 = u[1][0] * a0 + u[1][1] * a1;
        }
    }
    Ok(PureState::from_raw(n, amps))
}

pub fn apply_pauli(state: &PureState, site: usize, axis: PauliAxis) -> Result<PureState> {
    apply_single_spin(state, site, &axis.matrix())
}

/// Relabels spins: site `k` of the result carries what site `perm[k]` of
/// `state` carried.
pub fn permute_spins(state: &PureState, perm: &[usize]) -> Result<PureState> {
    let n = state.n_spins;
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidParams(format!(
            "{perm:?} is not a permutation of {n} sites"
        )));
    }
    let mut amps = vec![ZERO; state.dim()];
    for (old, &a) in state.amps.iter().enumerate() {
        let mut new = 0usize;
        for (k, &p) in perm.iter().enumerate() {
            new |= (old >> bit_of(n, p) & 1) << bit_of(n, k);
        }
        amps[new] = a;
    }
    Ok(PureState::from_raw(n, amps))
}

pub fn density_from_pure(state: &PureState) -> DensityOperator {
    let dim = state.dim();
    let matrix = DMatrix::from_fn(dim, dim, |i, j| state.amps[i] * state.amps[j].conj());
    DensityOperator::from_raw(state.n_spins, matrix)
}

/// Basis indices of the full system obtained by spreading the bits of
/// `0..2^k` over `sites` (first site ↔ most significant bit).
pub(crate) fn scatter_table(n_spins: usize, sites: &[usize]) -> Vec<usize> {
    let k = sites.len();
    (0..1usize << k)
        .map(|a| {
            sites.iter().enumerate().fold(0, |idx, (j, &s)| {
                idx | ((a >> (k - 1 - j) & 1) << bit_of(n_spins, s))
            })
        })
        .collect()
}

/// Partial trace over the complement of `keep`. Kept spins retain their
/// relative order.
pub fn reduced_density<'a>(
    state: impl Into<StateRef<'a>>,
    keep: SubsetMask,
) -> Result<DensityOperator> {
    let state = state.into();
    let n = state.n_spins();
    keep.validate(n)?;
    let kept = keep.sites(n);
    let traced = keep.complement(n).sites(n);
    let sk = scatter_table(n, &kept);
    let sr = scatter_table(n, &traced);
    let m = sk.len();
    let matrix = match state {
        StateRef::Pure(psi) => {
            let gathered = DMatrix::from_fn(m, sr.len(), |a, b| psi.amps[sk[a] | sr[b]]);
            &gathered * gathered.adjoint()
        }
        StateRef::Mixed(rho) => {
            let full = &rho.matrix;
            DMatrix::from_fn(m, m, |a, a2| {
                sr.iter().map(|&b| full[(sk[a] | b, sk[a2] | b)]).sum()
            })
        }
    };
    Ok(DensityOperator::from_raw(kept.len(), matrix))
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

/// `Tr ρ_A²` of a pure state, tracing out whichever side of the cut is
/// larger.
pub fn subsystem_purity(state: &PureState, keep: SubsetMask) -> Result<f64> {
    let n = state.n_spins;
    keep.validate(n)?;
    let other = keep.complement(n);
    let smaller = if !other.is_empty() && other.len() < keep.len() {
        other
    } else {
        keep
    };
    Ok(purity(&reduced_density(state, smaller)?))
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n_spins: usize) -> Result<PureState> {
    check_n_spins(n_spins)?;
    let dim = 1usize << n_spins;
    let mut amps = vec![ZERO; dim];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[dim - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(n_spins, amps)
}

/// Equal superposition of all single-excitation kets.
pub fn w_state(n_spins: usize) -> Result<PureState> {
    check_n_spins(n_spins)?;
    let mut amps = vec![ZERO; 1 << n_spins];
    let a = 1.0 / (n_spins as f64).sqrt();
    for site in 0..n_spins {
        amps[1 << bit_of(n_spins, site)] = C64::new(a, 0.0);
    }
    PureState::new(n_spins, amps)
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    ghz(2).expect("two spins")
}

/// `pairs` Bell pairs on spins (1,2), (3,4), ….
pub fn bell_pairs(pairs: usize) -> Result<PureState> {
    if pairs == 0 {
        return Err(Error::InvalidParams("need at least one Bell pair".into()));
    }
    let b = bell();
    (1..pairs).try_fold(b.clone(), |acc, _| tensor(&acc, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_amps(state: &PureState, expected: &[C64]) {
        assert_eq!(state.dim(), expected.len());
        for (a, b) in state.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-14, "{a} != {b}");
        }
    }

    #[test]
    fn basis_states_follow_bit_convention() {
        assert_amps(&basis_state(1, 0).unwrap(), &[c(1., 0.), c(0., 0.)]);
        let s = basis_state(2, 3).unwrap();
        assert_amps(&s, &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        let s = basis_state(3, 4).unwrap();
        assert_eq!(s.amplitudes()[4], c(1., 0.));
        // |100⟩: flipping spin 1 of |000⟩ lands on index 4
        let flipped = apply_pauli(&basis_state(3, 0).unwrap(), 0, PauliAxis::X).unwrap();
        assert_eq!(flipped, s);
        assert!(matches!(
            basis_state(2, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn tensor_products() {
        let zero = basis_state(1, 0).unwrap();
        let one = basis_state(1, 1).unwrap();
        assert_eq!(tensor(&zero, &one).unwrap(), basis_state(2, 1).unwrap());
        let plus = PureState::normalized(1, vec![c(1., 0.), c(1., 0.)]).unwrap();
        let h = FRAC_1_SQRT_2;
        assert_amps(
            &tensor(&plus, &zero).unwrap(),
            &[c(h, 0.), c(0., 0.), c(h, 0.), c(0., 0.)],
        );
        let bb = tensor(&bell(), &bell()).unwrap();
        assert_abs_diff_eq!(bb.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn pauli_actions() {
        let zero = basis_state(1, 0).unwrap();
        assert_eq!(apply_pauli(&zero, 0, PauliAxis::Z).unwrap(), zero);
        assert_eq!(
            apply_pauli(&zero, 0, PauliAxis::X).unwrap(),
            basis_state(1, 1).unwrap()
        );
        assert_amps(
            &apply_pauli(&zero, 0, PauliAxis::Y).unwrap(),
            &[c(0., 0.), c(0., 1.)],
        );
        assert!(matches!(
            apply_pauli(&zero, 1, PauliAxis::X),
            Err(Error::SiteOutOfRange { .. })
        ));
    }

    #[test]
    fn pure_densities() {
        let rho = density_from_pure(&basis_state(1, 0).unwrap());
        assert_eq!(rho.matrix()[(0, 0)], c(1., 0.));
        assert_eq!(rho.matrix()[(1, 1)], c(0., 0.));

        let plus = PureState::normalized(1, vec![c(1., 0.), c(1., 0.)]).unwrap();
        let rho = density_from_pure(&plus);
        for z in rho.matrix().iter() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
        }

        let rho = density_from_pure(&bell());
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(purity(&rho), 1.0, epsilon = 1e-14);
        let rank = rho.matrix().clone().symmetric_eigen().eigenvalues;
        assert_eq!(rank.iter().filter(|e| e.abs() > 1e-12).count(), 1);
    }

    #[test]
    fn reduced_density_examples() {
        let r = reduced_density(&bell(), SubsetMask::single(0)).unwrap();
        assert_abs_diff_eq!(r.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix()[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-15);

        let r = reduced_density(&basis_state(2, 0).unwrap(), SubsetMask::single(1)).unwrap();
        assert_eq!(r.matrix()[(0, 0)], c(1., 0.));
        assert_eq!(r.matrix()[(1, 1)], c(0., 0.));

        // W3 marginal: brute-force sum over the traced spins
        let w = w_state(3).unwrap();
        let r = reduced_density(&w, SubsetMask::single(0)).unwrap();
        let mut brute = [[C64::new(0., 0.); 2]; 2];
        for s1 in 0..2 {
            for t1 in 0..2 {
                for rest in 0..4 {
                    brute[s1][t1] += w.amplitudes()[s1 << 2 | rest]
                        * w.amplitudes()[t1 << 2 | rest].conj();
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((r.matrix()[(i, j)] - brute[i][j]).norm(), 0.0, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(r.matrix()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix()[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(purity(&r), 5.0 / 9.0, epsilon = 1e-15);

        assert_eq!(reduced_density(&w, SubsetMask(0)), Err(Error::EmptyMask));
        assert!(reduced_density(&w, SubsetMask(8)).is_err());
    }

    #[test]
    fn reduced_density_of_mixed_matches_pure_route() {
        let w = w_state(3).unwrap();
        let rho = density_from_pure(&w);
        for mask in 1..8u64 {
            let a = reduced_density(&w, SubsetMask(mask)).unwrap();
            let b = reduced_density(&rho, SubsetMask(mask)).unwrap();
            assert!((a.matrix() - b.matrix()).norm() < 1e-14);
        }
        let full = reduced_density(&rho, SubsetMask::full(3)).unwrap();
        assert!((full.matrix() - rho.matrix()).norm() < 1e-15);
    }

    #[test]
    fn purity_examples() {
        let half = DensityOperator::new(1, DMatrix::identity(2, 2) * c(0.5, 0.)).unwrap();
        assert_abs_diff_eq!(purity(&half), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            purity(&density_from_pure(&ghz(4).unwrap())),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn density_validation() {
        let not_hermitian = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0.1, 0.), c(0.0, 0.), c(0.5, 0.)]);
        assert!(DensityOperator::new(1, not_hermitian).is_err());
        let bad_trace = DMatrix::identity(2, 2) * c(0.6, 0.);
        assert!(DensityOperator::new(1, bad_trace).is_err());
        let negative = DensityOperator::new(1, DMatrix::from_diagonal(&nalgebra::dvector![c(1.5, 0.), c(-0.5, 0.)])).unwrap();
        assert!(negative.check_positive().is_err());
        assert!(density_from_pure(&bell()).check_positive().is_ok());
    }

    #[test]
    fn named_states() {
        let g = ghz(3).unwrap();
        assert_abs_diff_eq!(g.amplitudes()[0].re, FRAC_1_SQRT_2);
        assert_abs_diff_eq!(g.amplitudes()[7].re, FRAC_1_SQRT_2);
        let w = w_state(3).unwrap();
        for idx in [1, 2, 4] {
            assert_abs_diff_eq!(w.amplitudes()[idx].re, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        assert_eq!(bell_pairs(3).unwrap().n_spins(), 6);
        assert!(PureState::new(1, vec![c(1., 0.), c(1., 0.)]).is_err());
        assert!(PureState::new(2, vec![c(1., 0.), c(0., 0.)]).is_err());
    }

    #[test]
    fn permutation_relabels_sites() {
        // |100⟩ with spins rotated left becomes |001⟩
        let s = basis_state(3, 0b100).unwrap();
        let p = permute_spins(&s, &[1, 2, 0]).unwrap();
        assert_eq!(p, basis_state(3, 0b001).unwrap());
        assert!(permute_spins(&s, &[0, 0, 1]).is_err());
    }
}
