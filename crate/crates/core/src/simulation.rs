//! Seeded Monte Carlo harness.
//!
//! Trial `t` of a run with master seed `s` draws only from
//! `StreamRng::new(s).split(t)` and its children, and trial outputs are
//! reduced in ascending trial order. Results are therefore identical for any
//! number of worker threads.

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use statrs::function::gamma::ln_gamma;

use crate::error::{ensure_dim, Error, Result};
use crate::mechanisms::{
    binary_mechanism, hadamard_estimate, hadamard_response, randomized_response, ChannelSampler, HadamardConfig,
};
use crate::prob::{Channel, ProbVector};
use crate::report::real;
use crate::rng::StreamRng;

/// Normal quantile for a two-sided 95% interval.
pub const Z95: f64 = 1.96;

/// Default number of trials.
pub const DEFAULT_TRIALS: u64 = 10_000;

/// Largest `n` tried by [`empirical_sample_complexity`].
pub const MAX_SAMPLE_SIZE: u64 = 1 << 20;

/// Error level both test errors must fall below.
pub const TARGET_ERROR: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    #[serde(with = "real")]
    pub estimate: f64,
    /// Half-width of the normal-approximation 95% interval.
    #[serde(with = "real")]
    pub half_width: f64,
    pub trials: u64,
    pub seed: u64,
    pub config: Map<String, Value>,
}

impl SimResult {
    /// Mean and `1.96 · sd / √T` of per-trial values, summed in order.
    pub fn from_values(values: &[f64], seed: u64, config: Map<String, Value>) -> SimResult {
        let t = values.len();
        let mean = if t == 0 {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / t as f64
        };
        let half_width = if t < 2 {
            0.0
        } else {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1) as f64;
            Z95 * (var / t as f64).sqrt()
        };
        SimResult {
            estimate: mean,
            half_width,
            trials: t as u64,
            seed,
            config,
        }
    }

    pub fn lower(&self) -> f64 {
        self.estimate - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.estimate + self.half_width
    }
}

/// Runs independent trials on a fixed number of worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Harness {
    pub workers: usize,
}

impl Default for Harness {
    fn default() -> Self {
        Harness { workers: 1 }
    }
}

impl Harness {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::param("workers", "must be at least 1"));
        }
        Ok(Harness { workers })
    }

    /// `f(t, stream_t)` for `t = 0..trials`, in trial order.
    pub fn run<T, F>(&self, seed: u64, trials: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, StreamRng) -> T + Sync,
    {
        let master = StreamRng::new(seed);
        if self.workers <= 1 {
            return Ok((0..trials).map(|t| f(t, master.split(t))).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(pool.install(|| (0..trials).into_par_iter().map(|t| f(t, master.split(t))).collect()))
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::param("trials", "must be at least 1"))
    } else {
        Ok(())
    }
}

fn check_h(h: f64, lo: f64, hi: f64) -> Result<()> {
    if (lo..=hi).contains(&h) {
        Ok(())
    } else {
        Err(Error::param("h", format!("{h} not in [{lo}, {hi}]")))
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| {
        Value::String(if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        })
    })
}

fn vec_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

/// How privatized outputs are turned into a frequency estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimator {
    /// Unbiased Hadamard-response estimate; needs `hadamard_response(cfg)`.
    Hadamard { config: HadamardConfig },
    /// Debiased randomized response; needs `randomized_response(d, eps)`.
    RandomizedResponse { eps: f64 },
    /// Output frequencies as they are; needs a square channel.
    Empirical,
}

impl Estimator {
    fn name(&self) -> &'static str {
        match self {
            Estimator::Hadamard { .. } => "hadamard",
            Estimator::RandomizedResponse { .. } => "randomized_response",
            Estimator::Empirical => "empirical",
        }
    }

    /// Checks that `k` is the channel this estimator inverts.
    pub fn check_compatible(&self, k: &Channel) -> Result<()> {
        let expected = match self {
            Estimator::Hadamard { config } => hadamard_response(config)?,
            Estimator::RandomizedResponse { eps } => {
                if *eps == 0.0 {
                    return Err(Error::param("eps", "randomized response at eps = 0 cannot be inverted"));
                }
                randomized_response(k.inputs(), *eps)?
            }
            Estimator::Empirical => {
                return if k.inputs() == k.outputs() {
                    Ok(())
                } else {
                    Err(Error::InvalidChannel(format!(
                        "empirical estimator needs a square channel, got {}x{}",
                        k.inputs(),
                        k.outputs()
                    )))
                };
            }
        };
        let same = expected.inputs() == k.inputs()
            && expected.outputs() == k.outputs()
            && (0..k.inputs()).all(|x| (0..k.outputs()).all(|z| (expected.entry(x, z) - k.entry(x, z)).abs() <= 1e-12));
        if same {
            Ok(())
        } else {
            Err(Error::InvalidChannel(format!(
                "channel does not match the {} estimator",
                self.name()
            )))
        }
    }

    fn estimate(&self, counts: &[u64], n: u64) -> Result<Vec<f64>> {
        match self {
            Estimator::Hadamard { config } => hadamard_estimate(counts, config),
            Estimator::RandomizedResponse { eps } => {
                let d = counts.len();
                let t = (-eps).exp();
                let diag = 1.0 / (1.0 + (d - 1) as f64 * t);
                let off = t * diag;
                Ok(counts
                    .iter()
                    .map(|&c| (c as f64 / n as f64 - off) / (diag - off))
                    .collect())
            }
            Estimator::Empirical => Ok(counts.iter().map(|&c| c as f64 / n as f64).collect()),
        }
    }
}

/// `(Σ |a_i − b_i|^h)^{1/h}`.
pub fn lh_distance(a: &[f64], b: &[f64], h: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().powf(h))
        .sum::<f64>()
        .powf(1.0 / h)
}

/// Mean `ℓ_h` error of estimating `p_true` from `n` privatized samples.
///
/// User `i` of trial `t` draws its sample and its mechanism output from
/// child stream `i` of the trial stream.
#[allow(clippy::too_many_arguments)]
pub fn simulate_dist_estimation(
    mechanism: &Channel,
    estimator: Estimator,
    p_true: &ProbVector,
    n: u64,
    h: f64,
    trials: u64,
    seed: u64,
    harness: &Harness,
) -> Result<SimResult> {
    ensure_dim(mechanism.inputs(), p_true.dim())?;
    estimator.check_compatible(mechanism)?;
    check_trials(trials)?;
    check_h(h, 1.0, f64::INFINITY)?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let source = ChannelSampler::for_distribution(p_true);
    let channel = ChannelSampler::new(mechanism);
    let outputs = mechanism.outputs();
    let risks = harness.run(seed, trials, |_, stream| -> Result<f64> {
        let mut counts = vec![0u64; outputs];
        for i in 0..n {
            let mut user = stream.split(i);
            let x = source.draw(0, &mut user);
            counts[channel.draw(x, &mut user)] += 1;
        }
        let est = estimator.estimate(&counts, n)?;
        Ok(lh_distance(&est, p_true.as_slice(), h))
    })?;
    let risks = risks.into_iter().collect::<Result<Vec<f64>>>()?;
    let mut config = Map::new();
    config.insert("experiment".into(), "dist_estimation".into());
    config.insert(
        "estimator".into(),
        serde_json::to_value(estimator).map_err(|e| Error::Parse(e.to_string()))?,
    );
    config.insert("p_true".into(), vec_value(p_true.as_slice()));
    config.insert("n".into(), n.into());
    config.insert("h".into(), num(h));
    config.insert("d".into(), p_true.dim().into());
    Ok(SimResult::from_values(&risks, seed, config))
}

fn check_distinct(p: &ProbVector, q: &ProbVector) -> Result<()> {
    ensure_dim(p.dim(), q.dim())?;
    if p == q {
        return Err(Error::param("q", "p and q coincide"));
    }
    Ok(())
}

/// Per-trial errors of the likelihood-ratio test, indexed by `n`.
struct BhtSetup {
    source_p: ChannelSampler,
    source_q: ChannelSampler,
    channel: ChannelSampler,
    /// `ln(pK(z)/qK(z))` for `z = 0, 1`.
    llr: [f64; 2],
}

impl BhtSetup {
    fn new(p: &ProbVector, q: &ProbVector, eps: f64) -> Result<Self> {
        check_distinct(p, q)?;
        let k = binary_mechanism(p, q, eps)?;
        let pk = crate::prob::push_forward(p, &k)?;
        let qk = crate::prob::push_forward(q, &k)?;
        Ok(BhtSetup {
            source_p: ChannelSampler::for_distribution(p),
            source_q: ChannelSampler::for_distribution(q),
            channel: ChannelSampler::new(&k),
            llr: [(pk.get(0) / qk.get(0)).ln(), (pk.get(1) / qk.get(1)).ln()],
        })
    }

    fn statistic(&self, source: &ChannelSampler, n: u64, stream: &StreamRng) -> f64 {
        let mut counts = [0u64; 2];
        for i in 0..n {
            let mut user = stream.split(i);
            let x = source.draw(0, &mut user);
            counts[self.channel.draw(x, &mut user)] += 1;
        }
        counts
            .iter()
            .zip(self.llr)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, l)| c as f64 * l)
            .sum()
    }

    /// `(type I, type II)` error of one trial. A zero or undefined statistic
    /// is decided by a fair coin, which contributes its expected error 1/2.
    fn trial(&self, n: u64, stream: &StreamRng) -> (f64, f64) {
        let under_p = self.statistic(&self.source_p, n, &stream.split(0));
        let under_q = self.statistic(&self.source_q, n, &stream.split(1));
        let err = |s: f64, wrong_sign: bool| {
            if s == 0.0 || s.is_nan() {
                0.5
            } else if (s < 0.0) == wrong_sign {
                1.0
            } else {
                0.0
            }
        };
        (err(under_p, true), err(under_q, false))
    }
}

fn bht_config(p: &ProbVector, q: &ProbVector, eps: f64, n: u64, which: &str) -> Map<String, Value> {
    let mut config = Map::new();
    config.insert("experiment".into(), "bht".into());
    config.insert("error".into(), which.into());
    config.insert("p".into(), vec_value(p.as_slice()));
    config.insert("q".into(), vec_value(q.as_slice()));
    config.insert("eps".into(), num(eps));
    config.insert("n".into(), n.into());
    config
}

fn run_bht(setup: &BhtSetup, n: u64, trials: u64, seed: u64, harness: &Harness) -> Result<(Vec<f64>, Vec<f64>)> {
    let pairs = harness.run(seed, trials, |_, stream| setup.trial(n, &stream))?;
    Ok(pairs.into_iter().unzip())
}

/// Type I and type II error of the log-likelihood-ratio test between `p`
/// and `q` on `n` outputs of `binary_mechanism(p, q, eps)`.
pub fn simulate_bht(
    p: &ProbVector,
    q: &ProbVector,
    eps: f64,
    n: u64,
    trials: u64,
    seed: u64,
    harness: &Harness,
) -> Result<(SimResult, SimResult)> {
    check_trials(trials)?;
    let setup = BhtSetup::new(p, q, eps)?;
    let (e0, e1) = run_bht(&setup, n, trials, seed, harness)?;
    Ok((
        SimResult::from_values(&e0, seed, bht_config(p, q, eps, n, "type_1")),
        SimResult::from_values(&e1, seed, bht_config(p, q, eps, n, "type_2")),
    ))
}

/// Smallest `n` at which both simulated errors are below 1/10, found by
/// doubling and then bisection. Every `n` is judged with the same seed.
pub fn empirical_sample_complexity(
    p: &ProbVector,
    q: &ProbVector,
    eps: f64,
    trials: u64,
    seed: u64,
    harness: &Harness,
) -> Result<u64> {
    check_trials(trials)?;
    let setup = BhtSetup::new(p, q, eps)?;
    let passes = |n: u64| -> Result<bool> {
        let (e0, e1) = run_bht(&setup, n, trials, seed, harness)?;
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        Ok(mean(&e0) < TARGET_ERROR && mean(&e1) < TARGET_ERROR)
    };
    let mut lo = 0;
    let mut hi = 1;
    while !passes(hi)? {
        lo = hi;
        hi *= 2;
        if hi > MAX_SAMPLE_SIZE {
            return Err(Error::NonConvergence(format!(
                "errors stay above {TARGET_ERROR} up to n = {MAX_SAMPLE_SIZE}"
            )));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Error rates along a list of sample sizes, one row per `n`.
pub fn bht_sweep(
    p: &ProbVector,
    q: &ProbVector,
    eps: f64,
    ns: &[u64],
    trials: u64,
    seed: u64,
    harness: &Harness,
) -> Result<Vec<(SimResult, SimResult)>> {
    ns.iter()
        .map(|&n| simulate_bht(p, q, eps, n, trials, seed, harness))
        .collect()
}

fn check_binomial(n: u64, p: f64, h: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} not in [0, 1]")));
    }
    check_h(h, 2.0, 100.0)?;
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    Ok(())
}

/// Monte Carlo estimate of `E|Z − np|^h` for `Z ~ Binomial(n, p)`.
pub fn binomial_moment_check(n: u64, p: f64, h: f64, trials: u64, seed: u64, harness: &Harness) -> Result<SimResult> {
    check_binomial(n, p, h)?;
    check_trials(trials)?;
    let binom = Binomial::new(n, p).map_err(|e| Error::param("p", e.to_string()))?;
    let center = n as f64 * p;
    let values = harness.run(seed, trials, |_, mut stream| {
        (binom.sample(&mut stream) as f64 - center).abs().powf(h)
    })?;
    let mut config = Map::new();
    config.insert("experiment".into(), "binomial_moment".into());
    config.insert("n".into(), n.into());
    config.insert("p".into(), num(p));
    config.insert("h".into(), num(h));
    Ok(SimResult::from_values(&values, seed, config))
}

/// Exact `E|Z − np|^h` by summing the probability mass function.
pub fn binomial_central_moment(n: u64, p: f64, h: f64) -> Result<f64> {
    check_binomial(n, p, h)?;
    let center = n as f64 * p;
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let log_norm = ln_gamma(nf + 1.0);
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    Ok((0..=n)
        .map(|z| {
            let zf = z as f64;
            let log_pmf = log_norm - ln_gamma(zf + 1.0) - ln_gamma(nf - zf + 1.0) + zf * lp + (nf - zf) * lq;
            (log_pmf + h * (zf - center).abs().ln()).exp()
        })
        .sum())
}

/// `max(1, (np)^{h/2})`.
pub fn binomial_moment_scale(n: u64, p: f64, h: f64) -> f64 {
    (n as f64 * p).powf(h / 2.0).max(1.0)
}

/// Sample sizes of the calibration sweep.
pub const CALIBRATION_N: [u64; 12] = [1, 2, 3, 5, 8, 13, 20, 50, 100, 200, 500, 1000];
/// Success probabilities of the calibration sweep.
pub const CALIBRATION_P: [f64; 11] = [0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999];

/// `1.5 · max E|Z − np|^h / max(1, (np)^{h/2})` over the calibration sweep,
/// from exact moments.
pub fn calibrate_c2(h: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &n in &CALIBRATION_N {
        for &p in &CALIBRATION_P {
            worst = worst.max(binomial_central_moment(n, p, h)? / binomial_moment_scale(n, p, h));
        }
    }
    Ok(1.5 * worst)
}

/// Calibrated constants `(h, c₂)` for the moment bound
/// `E|Z − np|^h ≤ c₂ max(1, (np)^{h/2})`; see [`calibrate_c2`].
pub const BINOMIAL_MOMENT_C2: [(f64, f64); 6] = [
    (2.0, 1.4984999999991513),
    (3.0, 2.598589274311628),
    (4.0, 5.980522490998159),
    (6.0, 61.11695880824023),
    (8.0, 1062.3545789774012),
    (10.0, 26236.747675064158),
];

/// The persisted `c₂` for `h`, if `h` is in the calibrated table.
pub fn binomial_c2(h: f64) -> Option<f64> {
    BINOMIAL_MOMENT_C2.iter().find(|(k, _)| *k == h).map(|(_, c)| *c)
}
