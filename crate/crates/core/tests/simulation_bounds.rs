use ldp_contraction::mechanisms::{hadamard_response, HadamardConfig};
use ldp_contraction::minimax::{
    bht_sample_complexity, distribution_estimation_lb, hadamard_ub, packing_neighbor_tv, DensityPacking,
};
use ldp_contraction::prob::divergence;
use ldp_contraction::report::{from_json, to_json};
use ldp_contraction::rng::StreamRng;
use ldp_contraction::simulation::{
    empirical_sample_complexity, simulate_bht, simulate_dist_estimation, Estimator, Harness, SimResult,
};
use ldp_contraction::{DivergenceKind, ProbVector};

const LN3: f64 = 1.0986122886681098;

#[test]
fn hadamard_risk_between_bounds() {
    let h = Harness::default();
    for (d, eps) in [(4, LN3), (8, 1.0), (3, 2.0)] {
        let cfg = HadamardConfig::new(d, eps).unwrap();
        let k = hadamard_response(&cfg).unwrap();
        let p = ProbVector::uniform(d).unwrap();
        for n in [500, 2000] {
            let r = simulate_dist_estimation(&k, Estimator::Hadamard { config: cfg }, &p, n, 2.0, 300, 7, &h).unwrap();
            let nf = n as f64;
            assert!(r.estimate <= 10.0 * hadamard_ub(nf, d, 2.0, eps).unwrap(), "{r:?}");
            assert!(
                r.estimate >= distribution_estimation_lb(nf, d, 2.0, eps).unwrap() - 3.0 * r.half_width,
                "{r:?}"
            );
        }
    }
}

#[test]
fn simulations_ignore_worker_count() {
    let p = ProbVector::bernoulli(0.7).unwrap();
    let q = ProbVector::bernoulli(0.4).unwrap();
    let one = simulate_bht(&p, &q, 1.0, 12, 500, 99, &Harness::new(1).unwrap()).unwrap();
    let four = simulate_bht(&p, &q, 1.0, 12, 500, 99, &Harness::new(4).unwrap()).unwrap();
    assert_eq!(to_json(&one).unwrap(), to_json(&four).unwrap());
}

#[test]
fn sim_result_round_trips() {
    let cfg = HadamardConfig::new(5, 1.0).unwrap();
    let k = hadamard_response(&cfg).unwrap();
    let p = ProbVector::new(vec![0.1, 0.2, 0.3, 0.15, 0.25]).unwrap();
    let r = simulate_dist_estimation(
        &k,
        Estimator::Hadamard { config: cfg },
        &p,
        100,
        3.0,
        20,
        5,
        &Harness::default(),
    )
    .unwrap();
    let s = to_json(&r).unwrap();
    let back: SimResult = from_json(&s).unwrap();
    assert_eq!(back, r);
    assert_eq!(to_json(&back).unwrap(), s);
}

#[test]
fn bht_sample_complexity_sandwich() {
    let p = ProbVector::bernoulli(0.9).unwrap();
    let q = ProbVector::bernoulli(0.1).unwrap();
    let tv = divergence(DivergenceKind::Tv, &p, &q).unwrap();
    let h2 = divergence(DivergenceKind::SquaredHellinger, &p, &q).unwrap();
    let (lo, hi) = bht_sample_complexity(tv, h2, LN3).unwrap();
    let n = empirical_sample_complexity(&p, &q, LN3, 3000, 1, &Harness::default()).unwrap();
    assert!(lo.ceil() <= n as f64 && n as f64 <= hi.ceil(), "{lo} <= {n} <= {hi}");
    let near_identity = empirical_sample_complexity(&p, &q, 40.0, 3000, 1, &Harness::default()).unwrap();
    assert!(near_identity <= n);
}

#[test]
fn packing_closed_form_and_validity() {
    let mut rng = StreamRng::new(8);
    for i in 0..10 {
        let beta = 0.2 + 0.8 * rng.uniform();
        let l = 0.5 + 2.0 * rng.uniform();
        let n = 10f64.powf(2.0 + 3.0 * rng.uniform());
        let eps = 0.5 + 2.0 * rng.uniform();
        let pk = DensityPacking::build(beta, l, n, eps).unwrap();
        assert!(pk.is_member());
        assert!(
            (packing_neighbor_tv(&pk) - pk.neighbor_tv_closed()).abs() <= 1e-6,
            "config {i}"
        );
        let theta: Vec<f64> = (0..pk.n_bumps).map(|_| if rng.coin() { 1.0 } else { 0.0 }).collect();
        assert!((pk.mass(&theta).unwrap() - 1.0).abs() <= 1e-8);
        assert!(pk.min_on_grid(&theta, 64).unwrap() >= 0.0);
    }
}
