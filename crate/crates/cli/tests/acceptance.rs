//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ldp_contraction::contraction::{chi2_tv_bound, duchi_chi2_bound, eta_bruteforce, eta_tv_exact, psi, upsilon};
use ldp_contraction::fisher::{
    entropy_extremal_theta, entropy_gradient, fisher_multinomial, fisher_multinomial_inverse, log_likelihood_variance,
};
use ldp_contraction::mechanisms::{hadamard_response, random_ldp_channel, randomized_response, HadamardConfig};
use ldp_contraction::minimax::{distribution_estimation_lb, packing_neighbor_tv, DensityPacking};
use ldp_contraction::prob::{chi2_via_eg_quadrature, divergence, hellinger_via_eg_quadrature, push_forward};
use ldp_contraction::rng::StreamRng;
use ldp_contraction::simulation::{empirical_sample_complexity, simulate_dist_estimation, Estimator, Harness};
use ldp_contraction::{DivergenceKind, ProbVector};

const LN3: f64 = 1.0986122886681098;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_prob(dim: usize, rng: &mut StreamRng) -> ProbVector {
    let raw: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.uniform()).ln()).collect();
    let total: f64 = raw.iter().sum();
    ProbVector::new(raw.iter().map(|v| v / total).collect()).unwrap()
}

fn rr_tightness() -> Outcome {
    let mut worst = 0.0f64;
    for eps in [0.25, 0.5, 1.0, 2.0] {
        let k = randomized_response(2, eps).map_err(|e| e.to_string())?;
        let q = ProbVector::bernoulli(0.5).unwrap();
        let qk = push_forward(&q, &k).unwrap();
        let ups = upsilon(eps).unwrap();
        for i in [1, 2, 3, 4, 6, 7, 8, 9] {
            let p = ProbVector::bernoulli(i as f64 / 10.0).unwrap();
            let ratio = divergence(DivergenceKind::ChiSquared, &push_forward(&p, &k).unwrap(), &qk).unwrap()
                / divergence(DivergenceKind::ChiSquared, &p, &q).unwrap();
            worst = worst.max((ratio - ups).abs());
        }
    }
    check(worst <= 1e-12, format!("max |ratio - upsilon| = {worst:.3e}"))
}

fn upsilon_bound() -> Outcome {
    let mut rng = StreamRng::new(2);
    let dims: Vec<(usize, usize)> = (2..=6).flat_map(|a| (2..=6).map(move |b| (a, b))).collect();
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for eps in [0.1, 0.5, 1.0, 2.0, 4.0] {
        let ups = upsilon(eps).unwrap();
        for i in 0..500 {
            let (nx, nz) = dims[i % dims.len()];
            let k = random_ldp_channel(nx, nz, eps, &mut rng).map_err(|e| e.to_string())?;
            for kind in [
                DivergenceKind::Kl,
                DivergenceKind::ChiSquared,
                DivergenceKind::SquaredHellinger,
            ] {
                let est = eta_bruteforce(&k, kind, 201).map_err(|e| e.to_string())?;
                worst = worst.max(est.value - ups);
            }
            count += 1;
        }
    }
    check(
        worst <= 1e-6,
        format!("{count} channels, max eta - upsilon = {worst:.3e}"),
    )
}

fn chi2_tv() -> Outcome {
    let mut rng = StreamRng::new(3);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..10_000 {
        let eps = 0.05 + 5.0 * rng.uniform();
        let nx = 2 + i % 5;
        let nz = 2 + (i / 5) % 5;
        let k = random_ldp_channel(nx, nz, eps, &mut rng).map_err(|e| e.to_string())?;
        let p = random_prob(nx, &mut rng);
        let q = random_prob(nx, &mut rng);
        let tv = divergence(DivergenceKind::Tv, &p, &q).unwrap();
        let out = divergence(
            DivergenceKind::ChiSquared,
            &push_forward(&p, &k).unwrap(),
            &push_forward(&q, &k).unwrap(),
        )
        .unwrap();
        let bound = psi(eps).unwrap() * (4.0 * tv * tv).min(tv);
        worst = worst.max(out - bound);
    }
    let mut beaten = true;
    for i in 0..=90 {
        let eps = 1.0 + 0.1 * i as f64;
        for j in 1..=50 {
            let tv = j as f64 / 50.0;
            beaten &= chi2_tv_bound(eps, tv).unwrap() < duchi_chi2_bound(eps, tv).unwrap();
        }
    }
    check(
        worst <= 1e-10 && beaten,
        format!("max chi2 - bound = {worst:.3e}, below prior bound on grid: {beaten}"),
    )
}

/// `(e^ε − 1)/(e^ε + 1)` at ε = 0.25·i, correctly rounded from 200-bit
/// arithmetic.
const RR_TV: [f64; 20] = [
    0.12435300177159621,
    0.24491866240370913,
    0.35835739835078595,
    0.46211715726000974,
    0.5545997223493823,
    0.6351489523872873,
    0.703905603936621,
    0.7615941559557649,
    0.809301070201781,
    0.8482836399575129,
    0.8798266996519848,
    0.9051482536448664,
    0.925346225311741,
    0.9413755384972874,
    0.9540452601799487,
    0.9640275800758169,
    0.971872745913509,
    0.9780261147388136,
    0.982845029172576,
    0.9866142981514303,
];

fn dobrushin_rr() -> Outcome {
    let mut worst_ulps = 0u64;
    for (i, want) in RR_TV.iter().enumerate() {
        let eps = 0.25 * (i + 1) as f64;
        let k = randomized_response(2, eps).map_err(|e| e.to_string())?;
        let got = eta_tv_exact(&k).value;
        worst_ulps = worst_ulps.max(got.to_bits().abs_diff(want.to_bits()));
    }
    check(
        worst_ulps <= 1,
        format!("max deviation = {worst_ulps} ulp over 20 values"),
    )
}

fn interior_theta(k: usize, rng: &mut StreamRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.05 - (1.0 - rng.uniform()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw[..k - 1].iter().map(|v| v / total).collect()
}

fn fisher_identities() -> Outcome {
    let mut rng = StreamRng::new(5);
    let mut inv_err = 0.0f64;
    let mut var_err = 0.0f64;
    for i in 0..100 {
        let k = 2 + i % 9;
        let theta = interior_theta(k, &mut rng);
        let fi = fisher_multinomial(&theta).map_err(|e| e.to_string())?;
        let inv = fisher_multinomial_inverse(&theta).map_err(|e| e.to_string())?;
        let prod = fi.matrix() * inv.matrix();
        for r in 0..k - 1 {
            for c in 0..k - 1 {
                let want = if r == c { 1.0 } else { 0.0 };
                inv_err = inv_err.max((prod[(r, c)] - want).abs());
            }
        }
        let g = entropy_gradient(&theta).unwrap();
        let qf = inv.quadratic_form(&g).unwrap();
        var_err = var_err.max((qf - log_likelihood_variance(&theta).unwrap()).abs());
    }
    let mut ext_err = 0.0f64;
    for k in 3..=8 {
        let theta = entropy_extremal_theta(k).unwrap();
        let want = (2.0 / 9.0) * ((2 * k - 2) as f64).ln().powi(2);
        ext_err = ext_err.max((log_likelihood_variance(&theta).unwrap() - want).abs());
    }
    check(
        inv_err <= 1e-8 && var_err <= 1e-8 && ext_err <= 1e-12,
        format!("inverse {inv_err:.2e}, quadratic form {var_err:.2e}, extremal {ext_err:.2e}"),
    )
}

fn bht_sandwich() -> Outcome {
    let p = ProbVector::bernoulli(0.9).unwrap();
    let q = ProbVector::bernoulli(0.1).unwrap();
    let n = empirical_sample_complexity(&p, &q, LN3, 10_000, 6, &Harness::default()).map_err(|e| e.to_string())?;
    check(
        (2..=21).contains(&n),
        format!("sample complexity = {n}, interval [2, 21]"),
    )
}

fn hadamard_rate() -> Outcome {
    let (d, eps, h) = (4, LN3, 2.0);
    let cfg = HadamardConfig::new(d, eps).map_err(|e| e.to_string())?;
    let k = hadamard_response(&cfg).unwrap();
    let p = ProbVector::uniform(d).unwrap();
    let ns = [1_000u64, 4_000, 16_000];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut above_lb = true;
    for &n in &ns {
        let r = simulate_dist_estimation(
            &k,
            Estimator::Hadamard { config: cfg },
            &p,
            n,
            h,
            1_000,
            7,
            &Harness::default(),
        )
        .map_err(|e| e.to_string())?;
        let lb = distribution_estimation_lb(n as f64, d, h, eps).unwrap();
        above_lb &= r.estimate >= lb - 3.0 * r.half_width;
        xs.push((n as f64).ln());
        ys.push(r.estimate.ln());
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    check(
        (slope + 0.5).abs() <= 0.05 && above_lb,
        format!("slope = {slope:.4}, risk above lower bound: {above_lb}"),
    )
}

fn density_packing() -> Outcome {
    let mut rng = StreamRng::new(8);
    let (mut tv_err, mut mass_err, mut min_val) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let beta = 0.2 + 0.8 * rng.uniform();
        let l = 0.5 + 2.0 * rng.uniform();
        let n = 10f64.powf(2.0 + 4.0 * rng.uniform());
        let eps = 0.2 + 3.0 * rng.uniform();
        let pk = DensityPacking::build(beta, l, n, eps).map_err(|e| e.to_string())?;
        tv_err = tv_err.max((packing_neighbor_tv(&pk) - pk.neighbor_tv_closed()).abs());
        for _ in 0..4 {
            let theta: Vec<f64> = (0..pk.n_bumps).map(|_| if rng.coin() { 1.0 } else { 0.0 }).collect();
            mass_err = mass_err.max((pk.mass(&theta).unwrap() - 1.0).abs());
            min_val = min_val.min(pk.min_on_grid(&theta, 64).unwrap());
        }
    }
    check(
        tv_err <= 1e-6 && mass_err <= 1e-8 && min_val >= 0.0,
        format!("neighbor TV error {tv_err:.2e}, mass error {mass_err:.2e}, minimum density {min_val:.3e}"),
    )
}

fn quadrature_identities() -> Outcome {
    let mut rng = StreamRng::new(9);
    let (mut h2_err, mut chi2_err) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let dim = 2 + i % 7;
        let p = random_prob(dim, &mut rng);
        let q = random_prob(dim, &mut rng);
        let h2 = divergence(DivergenceKind::SquaredHellinger, &p, &q).unwrap();
        let chi2 = divergence(DivergenceKind::ChiSquared, &p, &q).unwrap();
        h2_err = h2_err.max((hellinger_via_eg_quadrature(&p, &q).unwrap() - h2).abs());
        chi2_err = chi2_err.max((chi2_via_eg_quadrature(&p, &q).unwrap() - chi2).abs());
    }
    check(
        h2_err <= 1e-6 && chi2_err <= 1e-6,
        format!("max error H2 {h2_err:.2e}, chi2 {chi2_err:.2e}"),
    )
}

fn run_cli(workers: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ldpc"))
        .args(["--workers", workers])
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let invocations: [&[&str]; 4] = [
        &[
            "simulate", "dist", "--d", "6", "--eps", "1", "--n", "200,800", "--trials", "300", "--seed", "11",
        ],
        &[
            "simulate", "bht", "--p", "0.7", "--q", "0.4", "--eps", "1", "--n", "10", "--trials", "500", "--seed", "12",
        ],
        &[
            "simulate",
            "sc",
            "--p",
            "0.9",
            "--q",
            "0.1",
            "--eps",
            "1.0986122886681098",
            "--trials",
            "500",
            "--seed",
            "13",
        ],
        &[
            "simulate", "binom", "--n", "50", "--p", "0.3", "--h", "4", "--trials", "2000", "--seed", "14",
        ],
    ];
    for args in invocations {
        let one = run_cli("1", args)?;
        let four = run_cli("4", args)?;
        if one != four || one.is_empty() {
            return Err(format!("outputs differ for `{}`", args.join(" ")));
        }
    }
    Ok(format!(
        "{} simulate invocations byte-identical across 1 and 4 workers",
        invocations.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("rr_chi2_tightness", rr_tightness),
        ("random_channel_upsilon_bound", upsilon_bound),
        ("chi2_tv_contraction", chi2_tv),
        ("rr_dobrushin_exact", dobrushin_rr),
        ("fisher_identities", fisher_identities),
        ("bht_sample_complexity_sandwich", bht_sandwich),
        ("hadamard_rate", hadamard_rate),
        ("density_packing", density_packing),
        ("quadrature_identities", quadrature_identities),
        ("simulation_determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} ({secs:.1} s)", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
