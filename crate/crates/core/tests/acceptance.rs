//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use husimi_core::entanglement::{
    concurrence_two_spin, concurrence_two_spin_pair, concurrence_vector_length_sq, multipartite_concurrence,
    one_vs_rest_concurrence_sq, three_tangle,
};
use husimi_core::hilbert::{apply_single_spin, bell_pairs, ghz, permute_spins, purity, w_state, PureState};
use husimi_core::ising::{default_g_grid, default_theta_list, sweep, SweepConfig, SweepRecord};
use husimi_core::phase_space::{
    antisymmetric_weight, second_moment_monte_carlo, second_moment_projector, second_moment_purity,
    trace_ps_minus_pa, verify_quadrature_exactness,
};
use husimi_core::random::{random_density, random_permutation, random_pure_state, random_su2, stream_rng};
use husimi_core::Result;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome { name, passed, detail }
}

fn projector(psi: &PureState) -> Result<f64> {
    Ok(second_moment_projector(psi)?.value)
}

fn within_time(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn ghz_closed_form() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=10 {
        let p = projector(&ghz(n)?)?;
        worst = worst.max((p - (0.5 + 0.5f64.powi(n as i32))).abs());
    }
    let t = start.elapsed();
    Ok(outcome(
        "GHZ moment equals 1/2 + 2^-N for N = 1..10 (tol 1e-10, < 10 s)",
        worst <= 1e-10 && within_time(t, 10.0),
        format!("max deviation {worst:.2e}, {:.2} s", t.as_secs_f64()),
    ))
}

fn w_closed_form() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_step = 0.0f64;
    let mut previous: Option<f64> = None;
    for n in 2..=10usize {
        let p = projector(&w_state(n)?)?;
        let nf = n as f64;
        worst_closed = worst_closed.max((p - (0.5 + 0.5 / nf)).abs());
        if let Some(prev) = previous {
            let step = (nf - 1.0).powi(2) / (nf * nf) * prev + 1.0 / nf;
            worst_step = worst_step.max((p - step).abs());
        }
        previous = Some(p);
    }
    let t = start.elapsed();
    Ok(outcome(
        "W moment equals 1/2 + 1/(2N) and obeys the size recursion, N = 2..10 (tol 1e-10, < 10 s)",
        worst_closed <= 1e-10 && worst_step <= 1e-10 && within_time(t, 10.0),
        format!("closed form {worst_closed:.2e}, recursion {worst_step:.2e}, {:.2} s", t.as_secs_f64()),
    ))
}

fn two_spin_law() -> Result<Outcome> {
    let mut rng = stream_rng(1001, 0);
    let (mut det_dev, mut conc_dev) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let psi = random_pure_state(2, &mut rng)?;
        let a = psi.amplitudes();
        let p = projector(&psi)?;
        det_dev = det_dev.max((p - (1.0 - (a[0] * a[3] - a[1] * a[2]).norm_sqr())).abs());
        let c = concurrence_two_spin(&psi)?;
        conc_dev = conc_dev.max((p - (1.0 - 0.25 * c * c)).abs());
    }
    Ok(outcome(
        "two-spin moment equals 1 - |ad-bc|^2 and 1 - C^2/4, 1000 states (tol 1e-10)",
        det_dev <= 1e-10 && conc_dev <= 1e-10,
        format!("determinant {det_dev:.2e}, concurrence {conc_dev:.2e}"),
    ))
}

fn three_spin_decompositions() -> Result<Outcome> {
    let mut rng = stream_rng(1002, 0);
    let (mut pair_dev, mut rest_dev) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let psi = random_pure_state(3, &mut rng)?;
        let p = projector(&psi)?;
        let mut pairs = 0.0;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            pairs += concurrence_two_spin_pair(&psi, i, j)?.powi(2);
        }
        let tau = three_tangle(&psi)?;
        pair_dev = pair_dev.max((p - (1.0 - 0.25 * pairs - 0.375 * tau)).abs());
        let mut rest = 0.0;
        for s in 0..3 {
            rest += one_vs_rest_concurrence_sq(&psi, s)?;
        }
        rest_dev = rest_dev.max((p - (1.0 - 0.125 * rest)).abs());
    }
    Ok(outcome(
        "three-spin moment from pairwise C + tangle and from one-vs-rest C, 1000 states (tol 1e-9)",
        pair_dev <= 1e-9 && rest_dev <= 1e-9,
        format!("pairwise+tangle {pair_dev:.2e}, one-vs-rest {rest_dev:.2e}"),
    ))
}

fn cross_method() -> Result<Outcome> {
    let start = Instant::now();
    let mut exact_dev = 0.0f64;
    let mut worst_sigma = 0.0f64;
    for n in 2..=4 {
        let mut rng = stream_rng(1003, n as u64);
        for trial in 0..200u64 {
            let psi = random_pure_state(n, &mut rng)?;
            let q = verify_quadrature_exactness(&psi, 3, 5)?.value;
            let p = projector(&psi)?;
            let r = second_moment_purity(&psi)?.value;
            exact_dev = exact_dev.max((q - p).abs()).max((q - r).abs()).max((p - r).abs());
            let mc = second_moment_monte_carlo(&psi, 1_000_000, 7000 + 1000 * n as u64 + trial)?;
            worst_sigma = worst_sigma.max((mc.value - p).abs() / mc.stderr.expect("sampled"));
        }
    }
    Ok(outcome(
        "quadrature, projector and purity agree; Monte Carlo (1e6 samples) within 4 stderr; 200 states per N = 2..4",
        exact_dev <= 1e-9 && worst_sigma <= 4.0,
        format!(
            "exact routes {exact_dev:.2e}, worst Monte Carlo {worst_sigma:.2} stderr, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    ))
}

fn projector_identities() -> Result<Outcome> {
    let mut swap_dev = 0.0f64;
    let mut odd_max = 0.0f64;
    for n in 1..=4 {
        let mut rng = stream_rng(1004, n as u64);
        for _ in 0..100 {
            let rho = random_density(n, &mut rng)?;
            swap_dev = swap_dev.max((trace_ps_minus_pa(&rho)? - purity(&rho)).abs());
            let psi = random_pure_state(n, &mut rng)?;
            for k in (1..=n).step_by(2) {
                odd_max = odd_max.max(antisymmetric_weight(&psi, k)?.abs());
            }
        }
    }
    Ok(outcome(
        "swap expectation equals Tr rho^2 on mixed states (tol 1e-10); odd antisymmetric terms vanish on pure states (tol 1e-12); N <= 4",
        swap_dev <= 1e-10 && odd_max <= 1e-12,
        format!("swap {swap_dev:.2e}, odd terms {odd_max:.2e}"),
    ))
}

fn concurrence_lengths() -> Result<Outcome> {
    let (mut len_dev, mut moment_dev) = (0.0f64, 0.0f64);
    let mut n8_time = 0.0;
    for n in 2..=8 {
        let start = Instant::now();
        let mut rng = stream_rng(1005, n as u64);
        for _ in 0..100 {
            let psi = random_pure_state(n, &mut rng)?;
            let c = multipartite_concurrence(&psi)?;
            let len = concurrence_vector_length_sq(&psi)?;
            len_dev = len_dev.max((c * c - 2f64.powi(2 - n as i32) * len).abs());
            moment_dev = moment_dev.max((projector(&psi)? - (1.0 - len * 0.5f64.powi(n as i32))).abs());
        }
        if n == 8 {
            n8_time = start.elapsed().as_secs_f64();
        }
    }
    Ok(outcome(
        "c_N^2 = 2^(2-N) |C|^2 and P = 1 - |C|^2 / 2^N, 100 states per N = 2..8 (tol 1e-10, N = 8 < 60 s)",
        len_dev <= 1e-10 && moment_dev <= 1e-10 && n8_time < 60.0,
        format!("length {len_dev:.2e}, moment {moment_dev:.2e}, N = 8 in {n8_time:.2} s"),
    ))
}

fn bell_pair_product() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for k in 1..=5 {
        worst = worst.max((projector(&bell_pairs(k)?)? - 0.75f64.powi(k as i32)).abs());
    }
    Ok(outcome(
        "K Bell pairs have moment (3/4)^K, K = 1..5 (tol 1e-10)",
        worst <= 1e-10,
        format!("max deviation {worst:.2e}"),
    ))
}

fn curve(records: &[SweepRecord], theta: f64) -> Vec<&SweepRecord> {
    records.iter().filter(|r| r.theta == theta).collect()
}

fn ising_checks() -> Result<Vec<Outcome>> {
    let start = Instant::now();
    let config = SweepConfig::default_chain();
    let records = sweep(&config)?;
    let elapsed = start.elapsed().as_secs_f64();
    let thetas = default_theta_list();
    let grid = default_g_grid();
    let mut out = Vec::new();

    let longitudinal = curve(&records, 0.0);
    let worst = longitudinal.iter().map(|r| (r.p - 1.0).abs()).fold(0.0, f64::max);
    out.push(outcome(
        "Ising, field along z: P = 1 for every g (tol 1e-10)",
        worst <= 1e-10,
        format!("max deviation {worst:.2e}"),
    ));

    let transverse = curve(&records, FRAC_PI_2);
    let low = transverse[0];
    let target = 0.5 + 0.5f64.powi(8);
    out.push(outcome(
        "Ising, transverse field at g = 0.05: P within 1e-3 of 1/2 + 2^-8",
        (low.g - 0.05).abs() < 1e-15 && (low.p - target).abs() <= 1e-3,
        format!("P = {:.8}, deviation {:.2e}, degenerate flag {}", low.p, (low.p - target).abs(), low.degenerate),
    ));

    let tail: Vec<&&SweepRecord> = transverse.iter().filter(|r| r.g >= 1.0 - 1e-12).collect();
    let min_step = tail.windows(2).map(|w| w[1].p - w[0].p).fold(f64::INFINITY, f64::min);
    out.push(outcome(
        "Ising, transverse field: P strictly increasing for g >= 1",
        min_step > 0.0,
        format!("smallest increment {min_step:.3e} over {} points", tail.len()),
    ));

    let end = transverse.last().expect("non-empty curve");
    out.push(outcome(
        "Ising, transverse field: P > 0.95 at g = 3",
        end.p > 0.95,
        format!("P(g = {}) = {:.6}", end.g, end.p),
    ));

    let mut violations = 0;
    let mut worst_rise = 0.0f64;
    for &g in grid.iter().filter(|&&g| g <= 1.0 + 1e-12) {
        let column: Vec<f64> = thetas
            .iter()
            .map(|&t| records.iter().find(|r| r.theta == t && r.g == g).expect("grid point").p)
            .collect();
        for w in column.windows(2) {
            if w[1] > w[0] {
                violations += 1;
                worst_rise = worst_rise.max(w[1] - w[0]);
            }
        }
    }
    out.push(outcome(
        "Ising: for every g <= 1, P non-increasing along the field-angle list",
        violations == 0,
        format!("{violations} violations, largest rise {worst_rise:.2e}"),
    ));

    out.push(outcome(
        "Ising: full 9 x 60 sweep of the 8-spin periodic chain in < 5 min",
        records.len() == thetas.len() * grid.len() && elapsed < 300.0,
        format!("{} rows in {elapsed:.1} s", records.len()),
    ));
    Ok(out)
}

fn invariance() -> Result<Outcome> {
    let mut rng = stream_rng(1010, 0);
    let mut worst = [0.0f64; 4];
    for trial in 0..100 {
        let n = 2 + trial % 5;
        let psi = random_pure_state(n, &mut rng)?;
        let mut moved = psi.clone();
        for site in 0..n {
            moved = apply_single_spin(&moved, site, &random_su2(&mut rng))?;
        }
        moved = permute_spins(&moved, &random_permutation(n, &mut rng))?;
        let pairs = [
            (projector(&psi)?, projector(&moved)?),
            (multipartite_concurrence(&psi)?, multipartite_concurrence(&moved)?),
            (concurrence_vector_length_sq(&psi)?, concurrence_vector_length_sq(&moved)?),
        ];
        for (k, (a, b)) in pairs.iter().enumerate() {
            worst[k] = worst[k].max((a - b).abs());
        }
        if n == 3 {
            worst[3] = worst[3].max((three_tangle(&psi)? - three_tangle(&moved)?).abs());
        }
    }
    Ok(outcome(
        "P, c_N, |C|^2 and tangle invariant under local unitaries and spin permutations, 100 trials, N <= 6 (tol 1e-10)",
        worst.iter().all(|&w| w <= 1e-10),
        format!("P {:.2e}, c_N {:.2e}, |C|^2 {:.2e}, tangle {:.2e}", worst[0], worst[1], worst[2], worst[3]),
    ))
}

fn main() {
    let checks: Vec<fn() -> Result<Vec<Outcome>>> = vec![
        || ghz_closed_form().map(|o| vec![o]),
        || w_closed_form().map(|o| vec![o]),
        || two_spin_law().map(|o| vec![o]),
        || three_spin_decompositions().map(|o| vec![o]),
        || cross_method().map(|o| vec![o]),
        || projector_identities().map(|o| vec![o]),
        || concurrence_lengths().map(|o| vec![o]),
        || bell_pair_product().map(|o| vec![o]),
        ising_checks,
        || invariance().map(|o| vec![o]),
    ];
    let mut failed = 0;
    let mut total = 0;
    for check in checks {
        let outcomes = check().unwrap_or_else(|e| {
            vec![Outcome {
                name: "criterion aborted",
                passed: false,
                detail: e.to_string(),
            }]
        });
        for o in outcomes {
            total += 1;
            if !o.passed {
                failed += 1;
            }
            println!("{}  {}  [{}]", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        }
    }
    println!("acceptance: {} of {total} criteria passed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
