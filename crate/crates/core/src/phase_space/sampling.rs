//! Monte Carlo estimate of `P = 3^N E[H(μ)²]` with `μ` drawn from the
//! normalized Haar measure: `cos ϑ ~ U[−1, 1]` and `φ ~ U[0, 2π)` on every
//! spin.
//!
//! Samples are split over [`MONTE_CARLO_STREAMS`] ChaCha8 streams with fixed
//! per-stream counts and the partial statistics are merged in stream order,
//! so the estimate is bit-identical for any thread count.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::{husimi_mixed_in_place, husimi_pure_in_place, row_major, Method, SecondMomentReport, SpinKet, IMAG_TOL};
use crate::hilbert::{StateRef, C64};
use crate::random::stream_rng;
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 100;
pub const MONTE_CARLO_STREAMS: usize = 64;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
    worst_imag: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
            worst_imag: self.worst_imag.max(other.worst_imag),
        }
    }
}

fn haar_kets<R: Rng>(rng: &mut R, kets: &mut [SpinKet]) {
    for ket in kets.iter_mut() {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let phi = TAU * rng.random::<f64>();
        *ket = SpinKet::from_cos_theta(u, phi);
    }
}

fn run_stream(state: StateRef<'_>, count: usize, seed: u64, stream: u64, power: i32) -> Moments {
    let n = state.n_spins();
    let mut rng = stream_rng(seed, stream);
    let mut kets = vec![SpinKet::from_angles(0.0, 0.0); n];
    let mut moments = Moments::default();
    match state {
        StateRef::Pure(psi) => {
            let mut buf = psi.amplitudes().to_vec();
            for _ in 0..count {
                haar_kets(&mut rng, &mut kets);
                buf.copy_from_slice(psi.amplitudes());
                moments.push(husimi_pure_in_place(&mut buf, &kets).powi(power));
            }
        }
        StateRef::Mixed(rho) => {
            let flat = row_major(rho.matrix());
            let mut buf = vec![C64::new(0.0, 0.0); flat.len()];
            for _ in 0..count {
                haar_kets(&mut rng, &mut kets);
                buf.copy_from_slice(&flat);
                let h = husimi_mixed_in_place(&mut buf, rho.dim(), &kets);
                moments.worst_imag = moments.worst_imag.max(h.im.abs());
                moments.push(h.re.powi(power));
            }
        }
    }
    moments
}

/// Mean of `H^power` over `samples` Haar points and its standard error.
pub(super) fn sample_power(state: StateRef<'_>, samples: usize, seed: u64, power: i32) -> Result<(f64, f64)> {
    if samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: samples,
        });
    }
    let base = samples / MONTE_CARLO_STREAMS;
    let extra = samples % MONTE_CARLO_STREAMS;
    let parts: Vec<Moments> = (0..MONTE_CARLO_STREAMS)
        .into_par_iter()
        .map(|s| run_stream(state, base + usize::from(s < extra), seed, s as u64, power))
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    if total.worst_imag > IMAG_TOL {
        return Err(Error::ImaginaryResidue(total.worst_imag));
    }
    let variance = total.m2 / (total.count - 1.0);
    Ok((total.mean, (variance / total.count).sqrt()))
}

/// Unbiased estimate of `P` with the standard error of the mean; fully
/// determined by `(samples, seed)`.
pub fn second_moment_monte_carlo<'a>(
    state: impl Into<StateRef<'a>>,
    samples: usize,
    seed: u64,
) -> Result<SecondMomentReport> {
    let state = state.into();
    let scale = 3f64.powi(state.n_spins() as i32);
    let (mean, stderr) = sample_power(state, samples, seed, 2)?;
    Ok(SecondMomentReport {
        value: scale * mean,
        method: Method::MonteCarlo,
        stderr: Some(scale * stderr),
        samples_or_nodes: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{bell, density_from_pure, ghz};

    #[test]
    fn bell_within_three_sigma() {
        let r = second_moment_monte_carlo(&bell(), 1_000_000, 42).unwrap();
        let se = r.stderr.unwrap();
        assert!(se > 0.0 && se < 1e-3);
        assert!((r.value - 0.75).abs() < 3.0 * se, "{} ± {}", r.value, se);
    }

    #[test]
    fn ghz8_within_three_sigma() {
        let r = second_moment_monte_carlo(&ghz(8).unwrap(), 1_000_000, 42).unwrap();
        let se = r.stderr.unwrap();
        assert!((r.value - 0.50390625).abs() < 3.0 * se, "{} ± {}", r.value, se);
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let a = second_moment_monte_carlo(&bell(), 10_001, 7).unwrap();
        let b = second_moment_monte_carlo(&bell(), 10_001, 7).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.unwrap().to_bits(), b.stderr.unwrap().to_bits());
        let c = second_moment_monte_carlo(&bell(), 10_001, 8).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let psi = ghz(3).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| second_moment_monte_carlo(&psi, 50_000, 3).unwrap().value)
        };
        assert_eq!(run(1).to_bits(), run(3).to_bits());
    }

    #[test]
    fn mixed_input_and_sample_floor() {
        let rho = density_from_pure(&bell());
        let a = second_moment_monte_carlo(&rho, 20_000, 1).unwrap();
        let b = second_moment_monte_carlo(&bell(), 20_000, 1).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        assert!(matches!(
            second_moment_monte_carlo(&bell(), 99, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
