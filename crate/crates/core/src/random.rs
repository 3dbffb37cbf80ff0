//! Seeded random states and unitaries.
//!
//! All generators are ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded from a
//! 64-bit seed; independent streams are selected with the ChaCha stream
//! counter, so parallel consumers reproduce the same numbers regardless of
//! scheduling.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{DensityOperator, PureState, C64};
use crate::Result;

/// Name of the generator, echoed into run manifests.
pub const RNG_ALGORITHM: &str = "ChaCha8";

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random ket (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng + ?Sized>(n_spins: usize, rng: &mut R) -> Result<PureState> {
    let amps = (0..1usize << n_spins).map(|_| gaussian_c64(rng)).collect();
    PureState::normalized(n_spins, amps)
}

/// Full-rank density operator `G G† / Tr(G G†)` from a square Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(n_spins: usize, rng: &mut R) -> Result<DensityOperator> {
    let dim = 1usize << n_spins;
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho /= C64::new(trace, 0.0);
    // exact Hermitian symmetrization; the product carries round-off
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(n_spins, rho)
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 2]; 2] {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(q[0], q[1]) / norm;
    let b = C64::new(q[2], q[3]) / norm;
    [[a, -b.conj()], [b, a.conj()]]
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 0).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(stream_rng(7, 0).next_u64(), stream_rng(7, 1).next_u64());
    }

    #[test]
    fn random_objects_are_valid() {
        let mut rng = stream_rng(1, 0);
        let psi = random_pure_state(4, &mut rng).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-14);
        let rho = random_density(3, &mut rng).unwrap();
        rho.check_positive().unwrap();
        let u = random_su2(&mut rng);
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        assert!((det - C64::new(1.0, 0.0)).norm() < 1e-14);
        let mut p = random_permutation(6, &mut rng);
        p.sort();
        assert_eq!(p, (0..6).collect::<Vec<_>>());
    }
}
