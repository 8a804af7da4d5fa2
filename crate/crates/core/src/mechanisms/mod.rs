//! LDP mechanisms as [`Channel`]s, the ε-LDP audit and channel sampling.

mod hadamard;

pub use hadamard::{hadamard_estimate, hadamard_estimate_freq, hadamard_response, project_to_simplex, HadamardConfig};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::contraction::{psi, upsilon};
use crate::error::{ensure_dim, Error, Result};
use crate::prob::{Channel, ProbVector};
use crate::rng::StreamRng;

/// A privacy level `ε ≥ 0` together with its contraction constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PrivacyLevelRepr")]
pub struct PrivacyLevel {
    pub eps: f64,
    /// `((e^ε − 1)/(e^ε + 1))²`
    pub upsilon: f64,
    /// `e^{−ε}(e^ε − 1)²`
    pub psi: f64,
}

#[derive(Deserialize)]
struct PrivacyLevelRepr {
    eps: f64,
}

impl TryFrom<PrivacyLevelRepr> for PrivacyLevel {
    type Error = Error;
    fn try_from(r: PrivacyLevelRepr) -> Result<Self> {
        PrivacyLevel::new(r.eps)
    }
}

impl PrivacyLevel {
    pub fn new(eps: f64) -> Result<Self> {
        Ok(PrivacyLevel {
            eps,
            upsilon: upsilon(eps)?,
            psi: psi(eps)?,
        })
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && !eps.is_nan() {
        Ok(())
    } else {
        Err(Error::param("eps", format!("{eps} is not a nonnegative number")))
    }
}

/// `e^ε/(1 + e^ε)` without overflow.
fn keep_probability(eps: f64) -> f64 {
    1.0 / (1.0 + (-eps).exp())
}

/// Largest alphabet for which [`randomized_response`] searches neighboring
/// floats for its entries.
const RR_SEARCH_MAX_K: usize = 64;
/// Search radius in ulps around the rounded diagonal and off-diagonal mass.
const RR_SEARCH_ULPS: i64 = 2;

fn rr_channel(k: usize, diag: f64, off: f64) -> Result<Channel> {
    let rows = (0..k)
        .map(|x| (0..k).map(|z| if z == x { diag } else { off }).collect())
        .collect();
    Channel::new(rows)
}

fn ulp_step(x: f64, n: i64) -> f64 {
    f64::from_bits((x.to_bits() as i64 + n) as u64)
}

/// k-ary randomized response.
///
/// Among floats within a few ulps of the rounded entries, picks the pair
/// whose stored channel audits closest to `eps`, then whose row TV is
/// closest to `(1 − e^{−ε})/(1 + (k−1)e^{−ε})`.
pub fn randomized_response(k: usize, eps: f64) -> Result<Channel> {
    check_eps(eps)?;
    if k < 2 {
        return Err(Error::param("k", format!("alphabet size {k} < 2")));
    }
    let t = (-eps).exp();
    let denom = 1.0 + (k - 1) as f64 * t;
    let diag = 1.0 / denom;
    let off = t * diag;
    if k > RR_SEARCH_MAX_K || off == 0.0 || eps == 0.0 {
        return rr_channel(k, diag, off);
    }
    let gap = -(-eps).exp_m1() / denom;
    let mut best: Option<((f64, f64, i64), Channel)> = None;
    for i in -RR_SEARCH_ULPS..=RR_SEARCH_ULPS {
        for j in -RR_SEARCH_ULPS..=RR_SEARCH_ULPS {
            let Ok(ch) = rr_channel(k, ulp_step(diag, i), ulp_step(off, j)) else {
                continue;
            };
            let tv = ch.entry(0, 0) - ch.entry(0, 1);
            let score = ((audit_ldp(&ch) - eps).abs(), (tv - gap).abs(), i.abs() + j.abs());
            if best.as_ref().is_none_or(|(b, _)| score < *b) {
                best = Some((score, ch));
            }
        }
    }
    match best {
        Some((_, ch)) => Ok(ch),
        None => rr_channel(k, diag, off),
    }
}

/// Binary randomized response applied to the indicator of `p(x) ≥ q(x)`.
pub fn binary_mechanism(p: &ProbVector, q: &ProbVector, eps: f64) -> Result<Channel> {
    ensure_dim(p.dim(), q.dim())?;
    check_eps(eps)?;
    let keep = keep_probability(eps);
    let flip = 1.0 - keep;
    let rows = p
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| if a >= b { vec![keep, flip] } else { vec![flip, keep] })
        .collect();
    Channel::new(rows)
}

/// Smallest `ε` for which `k` is ε-LDP; `+∞` if some output separates two
/// inputs with probability zero on one side.
pub fn audit_ldp(k: &Channel) -> f64 {
    let mut worst: f64 = 0.0;
    for z in 0..k.outputs() {
        let mut hi = 0.0f64;
        let mut lo = f64::INFINITY;
        for x in 0..k.inputs() {
            let v = k.entry(x, z);
            hi = hi.max(v);
            lo = lo.min(v);
        }
        if hi == 0.0 {
            continue;
        }
        if lo == 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max((hi / lo).ln());
    }
    worst
}

/// A random `inputs × outputs` channel mixed toward uniform just far enough
/// to pass `audit_ldp(K) ≤ eps`.
///
/// Base rows have independent `Exp(1)` entries, each zeroed with probability
/// 1/4 (keeping at least one positive).
pub fn random_ldp_channel(inputs: usize, outputs: usize, eps: f64, rng: &mut StreamRng) -> Result<Channel> {
    check_eps(eps)?;
    if inputs == 0 || outputs < 2 {
        return Err(Error::param(
            "outputs",
            format!("need at least 1 input and 2 outputs, got {inputs}x{outputs}"),
        ));
    }
    let rows: Vec<Vec<f64>> = (0..inputs)
        .map(|_| {
            let mut row: Vec<f64> = (0..outputs)
                .map(|_| {
                    if rng.uniform() < 0.25 {
                        0.0
                    } else {
                        -(1.0 - rng.uniform()).ln()
                    }
                })
                .collect();
            if row.iter().all(|&v| v == 0.0) {
                row[(rng.next_u64() % outputs as u64) as usize] = 1.0;
            }
            let total: f64 = row.iter().sum();
            row.iter().map(|v| v / total).collect()
        })
        .collect();
    let base = Channel::new(rows)?;
    if audit_ldp(&base) <= eps {
        return Ok(base);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if audit_ldp(&base.mix_with_uniform(mid)?) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    base.mix_with_uniform(hi)
}

/// One draw from row `x` of `k`.
pub fn sample(k: &Channel, x: usize, rng: &mut StreamRng) -> Result<usize> {
    if x >= k.inputs() {
        return Err(Error::param(
            "x",
            format!("input {x} out of range for {} inputs", k.inputs()),
        ));
    }
    Ok(draw_from(k.row(x).as_slice(), rng.uniform()))
}

fn draw_from(row: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (z, &m) in row.iter().enumerate() {
        if m == 0.0 {
            continue;
        }
        acc += m;
        last = z;
        if u < acc {
            return z;
        }
    }
    last
}

/// Precomputed inverse-CDF tables for repeated sampling from a channel or
/// distribution.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    cumulative: Vec<Vec<f64>>,
    last_positive: Vec<usize>,
}

impl ChannelSampler {
    pub fn new(k: &Channel) -> Self {
        let mut cumulative = Vec::with_capacity(k.inputs());
        let mut last_positive = Vec::with_capacity(k.inputs());
        for row in k.rows() {
            let mut acc = 0.0;
            cumulative.push(
                row.as_slice()
                    .iter()
                    .map(|m| {
                        acc += m;
                        acc
                    })
                    .collect(),
            );
            last_positive.push(row.as_slice().iter().rposition(|&m| m > 0.0).unwrap_or(0));
        }
        ChannelSampler {
            cumulative,
            last_positive,
        }
    }

    pub fn for_distribution(p: &ProbVector) -> Self {
        ChannelSampler::new(&Channel::constant(1, p.clone()).expect("single row"))
    }

    pub fn inputs(&self) -> usize {
        self.cumulative.len()
    }

    /// Draw for input `x`; panics if `x` is out of range.
    pub fn draw<R: RngCore>(&self, x: usize, rng: &mut R) -> usize {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let cum = &self.cumulative[x];
        let z = cum.partition_point(|&c| c <= u);
        z.min(self.last_positive[x])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close_rows(k: &Channel, expected: &[&[f64]]) {
        for (row, exp) in k.rows().iter().zip(expected) {
            for (a, b) in row.as_slice().iter().zip(*exp) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn rr_examples() {
        let ln3 = 3f64.ln();
        close_rows(&randomized_response(2, ln3).unwrap(), &[&[0.75, 0.25], &[0.25, 0.75]]);
        close_rows(&randomized_response(2, 0.0).unwrap(), &[&[0.5, 0.5], &[0.5, 0.5]]);
        let k4 = randomized_response(4, ln3).unwrap();
        for x in 0..4 {
            for z in 0..4 {
                let want = if x == z { 0.5 } else { 1.0 / 6.0 };
                assert_abs_diff_eq!(k4.entry(x, z), want, epsilon = 1e-15);
            }
        }
        assert!(randomized_response(1, 1.0).is_err());
        assert!(randomized_response(3, -0.1).is_err());
    }

    #[test]
    fn rr_audit_recovers_eps() {
        assert_eq!(audit_ldp(&randomized_response(2, 3f64.ln()).unwrap()), 3f64.ln());
        for i in 0..=40 {
            let eps = 0.1 * i as f64;
            for k in [2, 3, 7] {
                let a = audit_ldp(&randomized_response(k, eps).unwrap());
                assert!((a - eps).abs() <= 1e-12, "k={k} eps={eps} audit={a}");
            }
        }
    }

    #[test]
    fn audit_examples() {
        let same = Channel::constant(3, ProbVector::new(vec![0.2, 0.8]).unwrap()).unwrap();
        assert_eq!(audit_ldp(&same), 0.0);
        assert_eq!(audit_ldp(&Channel::identity(2).unwrap()), f64::INFINITY);
        // a shared zero column is skipped, not infinite
        let k = Channel::new(vec![vec![0.5, 0.5, 0.0], vec![0.25, 0.75, 0.0]]).unwrap();
        assert_abs_diff_eq!(audit_ldp(&k), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn binary_mechanism_examples() {
        let ln3 = 3f64.ln();
        let p = ProbVector::new(vec![0.9, 0.1]).unwrap();
        let q = ProbVector::new(vec![0.1, 0.9]).unwrap();
        let k = binary_mechanism(&p, &q, ln3).unwrap();
        close_rows(&k, &[&[0.75, 0.25], &[0.25, 0.75]]);
        let tie = binary_mechanism(&p, &p, ln3).unwrap();
        close_rows(&tie, &[&[0.75, 0.25], &[0.75, 0.25]]);
        close_rows(&binary_mechanism(&p, &q, 0.0).unwrap(), &[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(audit_ldp(&k) <= ln3 + 1e-12);
        let r = ProbVector::uniform(3).unwrap();
        assert!(binary_mechanism(&p, &r, 1.0).is_err());
    }

    #[test]
    fn huge_eps_stays_finite() {
        let k = randomized_response(3, 800.0).unwrap();
        assert_eq!(k.entry(0, 0), 1.0);
        let p = ProbVector::new(vec![0.9, 0.1]).unwrap();
        let q = ProbVector::new(vec![0.1, 0.9]).unwrap();
        let b = binary_mechanism(&p, &q, f64::INFINITY).unwrap();
        assert_eq!(b.entry(0, 0), 1.0);
    }

    #[test]
    fn deterministic_row_sampling() {
        let k = Channel::new(vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let mut rng = StreamRng::new(5);
        let s = ChannelSampler::new(&k);
        for _ in 0..100 {
            assert_eq!(sample(&k, 0, &mut rng).unwrap(), 2);
            assert_eq!(s.draw(1, &mut rng), 1);
        }
        assert!(sample(&k, 2, &mut rng).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let k = randomized_response(5, 0.7).unwrap();
        let s = ChannelSampler::new(&k);
        let run = |seed| {
            let mut rng = StreamRng::new(seed);
            (0..50).map(|i| s.draw(i % 5, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(11), run(11));
        assert_ne!(run(11), run(12));
    }

    #[test]
    fn sampler_agrees_with_linear_scan() {
        let k = Channel::new(vec![vec![0.1, 0.0, 0.6, 0.3]]).unwrap();
        let s = ChannelSampler::new(&k);
        let mut a = StreamRng::new(2);
        let mut b = StreamRng::new(2);
        for _ in 0..1000 {
            assert_eq!(s.draw(0, &mut a), sample(&k, 0, &mut b).unwrap());
        }
    }

    #[test]
    fn random_channels_pass_audit() {
        let mut rng = StreamRng::new(3);
        for (i, eps) in [0.0, 0.1, 1.0, 4.0].into_iter().enumerate() {
            for dims in 2..6 {
                let k = random_ldp_channel(dims, dims + i % 2, eps, &mut rng).unwrap();
                let a = audit_ldp(&k);
                assert!(a <= eps, "{a} > {eps}");
                if eps > 0.0 {
                    assert!(a > 0.9 * eps || a == audit_ldp(&k.mix_with_uniform(0.0).unwrap()));
                }
            }
        }
        assert!(random_ldp_channel(3, 1, 1.0, &mut rng).is_err());
    }
}
