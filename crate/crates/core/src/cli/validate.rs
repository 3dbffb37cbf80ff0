//! Identity checks on random states.

use crate::entanglement::{
    concurrence_two_spin, concurrence_two_spin_pair, concurrence_vector_length_sq, multipartite_concurrence,
    one_vs_rest_concurrence_sq, three_tangle,
};
use crate::hilbert::{purity, PureState};
use crate::phase_space::{antisymmetric_weight, second_moment_projector, second_moment_purity};
use crate::random::{random_density, random_pure_state, stream_rng};
use crate::Result;

/// Largest allowed deviation of any identity.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Largest size at which the odd-pattern check enumerates all `2^N`
/// projector orderings.
const ODD_PATTERN_MAX_SPINS: usize = 5;

/// Largest size of the mixed-state projector expansion.
const MIXED_MAX_SPINS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub max_deviation: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_deviation <= VALIDATION_TOL
    }
}

type PureCheck = fn(&PureState) -> Result<f64>;

fn projector(psi: &PureState) -> Result<f64> {
    Ok(second_moment_projector(psi)?.value)
}

fn two_spin_determinant(psi: &PureState) -> Result<f64> {
    let a = psi.amplitudes();
    let det = (a[0] * a[3] - a[1] * a[2]).norm_sqr();
    Ok((projector(psi)? - (1.0 - det)).abs())
}

fn two_spin_concurrence(psi: &PureState) -> Result<f64> {
    let c = concurrence_two_spin(psi)?;
    Ok((projector(psi)? - (1.0 - 0.25 * c * c)).abs())
}

fn three_spin_pairwise_and_tangle(psi: &PureState) -> Result<f64> {
    let pairs: f64 = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| concurrence_two_spin_pair(psi, i, j).map(|c| c * c))
        .sum::<Result<f64>>()?;
    let tau = three_tangle(psi)?;
    Ok((projector(psi)? - (1.0 - 0.25 * pairs - 0.375 * tau)).abs())
}

fn three_spin_one_vs_rest(psi: &PureState) -> Result<f64> {
    let sum: f64 = (0..3).map(|s| one_vs_rest_concurrence_sq(psi, s)).sum::<Result<f64>>()?;
    Ok((projector(psi)? - (1.0 - 0.125 * sum)).abs())
}

fn projector_vs_purity(psi: &PureState) -> Result<f64> {
    Ok((projector(psi)? - second_moment_purity(psi)?.value).abs())
}

fn odd_antisymmetric_terms(psi: &PureState) -> Result<f64> {
    (1..=psi.n_spins())
        .step_by(2)
        .try_fold(0.0f64, |worst, k| Ok(worst.max(antisymmetric_weight(psi, k)?.abs())))
}

fn concurrence_length(psi: &PureState) -> Result<f64> {
    let n = psi.n_spins() as i32;
    let c = multipartite_concurrence(psi)?;
    Ok((c * c - 2f64.powi(2 - n) * concurrence_vector_length_sq(psi)?).abs())
}

fn moment_from_length(psi: &PureState) -> Result<f64> {
    let n = psi.n_spins() as i32;
    let len = concurrence_vector_length_sq(psi)?;
    Ok((projector(psi)? - (1.0 - len * 2f64.powi(-n))).abs())
}

fn run_pure(name: &'static str, sizes: Vec<usize>, trials: usize, seed: u64, stream: u64, check: PureCheck) -> Result<IdentityCheck> {
    let mut max_deviation = 0.0f64;
    for &n in &sizes {
        let mut rng = stream_rng(seed, stream << 8 | n as u64);
        for _ in 0..trials {
            max_deviation = max_deviation.max(check(&random_pure_state(n, &mut rng)?)?);
        }
    }
    Ok(IdentityCheck {
        name,
        sizes,
        trials,
        max_deviation,
    })
}

/// Alternating sum of ordered `P_s`/`P_a` products against `Tr ρ²`.
fn swap_expansion(n_max: usize, trials: usize, seed: u64) -> Result<IdentityCheck> {
    let sizes: Vec<usize> = (1..=n_max.min(MIXED_MAX_SPINS)).collect();
    let mut max_deviation = 0.0f64;
    for &n in &sizes {
        let mut rng = stream_rng(seed, 1 << 16 | n as u64);
        for _ in 0..trials {
            let rho = random_density(n, &mut rng)?;
            let mut lhs = 0.0;
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                lhs += sign * antisymmetric_weight(&rho, k)?;
            }
            max_deviation = max_deviation.max((lhs - purity(&rho)).abs());
        }
    }
    Ok(IdentityCheck {
        name: "swap expansion of doubled mixed state equals purity",
        sizes,
        trials,
        max_deviation,
    })
}

/// All identity checks that apply up to `n_max` spins, `trials` random
/// states per identity and size.
pub fn run_validation(n_max: usize, trials: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let range = |lo: usize, hi: usize| (lo..=hi.min(n_max)).collect::<Vec<_>>();
    let pure: [(&'static str, Vec<usize>, PureCheck); 8] = [
        ("two-spin moment from amplitude determinant", range(2, 2), two_spin_determinant),
        ("two-spin moment from concurrence", range(2, 2), two_spin_concurrence),
        ("three-spin moment from pairwise concurrences and tangle", range(3, 3), three_spin_pairwise_and_tangle),
        ("three-spin moment from one-vs-rest concurrences", range(3, 3), three_spin_one_vs_rest),
        ("projector moment equals purity moment", range(2, n_max), projector_vs_purity),
        ("odd antisymmetric terms vanish", range(2, ODD_PATTERN_MAX_SPINS), odd_antisymmetric_terms),
        ("multipartite concurrence from vector length", range(2, n_max), concurrence_length),
        ("moment from concurrence vector length", range(2, n_max), moment_from_length),
    ];
    let mut out = Vec::new();
    for (stream, (name, sizes, check)) in pure.into_iter().enumerate() {
        if !sizes.is_empty() {
            out.push(run_pure(name, sizes, trials, seed, stream as u64, check)?);
        }
    }
    if n_max >= 1 {
        out.push(swap_expansion(n_max, trials, seed)?);
    }
    Ok(out)
}
