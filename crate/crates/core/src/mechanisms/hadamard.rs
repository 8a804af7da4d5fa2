//! Hadamard response.
//!
//! The output alphabet is split into `b` blocks of `B` symbols. Input `x`
//! lives in block `x / (B/2)` and is assigned row `x % (B/2) + 1` of the
//! Sylvester Hadamard matrix of order `B`; its "coset" `C_x` is the set of
//! columns where that row is `+1`, placed inside its block. The mechanism
//! reports a symbol of `C_x` with probability proportional to `e^ε` and any
//! other symbol with probability proportional to 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::Channel;

use super::check_eps;

/// Slack applied before rounding `e^ε` up; `ε = ln 3` gives 3.
const CEIL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HadamardConfig {
    pub d: usize,
    pub eps: f64,
    /// Block size `B`, a power of two.
    pub block_size: usize,
    /// Number of blocks `b`.
    pub blocks: usize,
}

impl HadamardConfig {
    /// `B` = smallest power of two `≥ min(⌈e^ε⌉ + 1, 2d)`, `b = ⌈d / (B/2)⌉`.
    pub fn new(d: usize, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        if d < 2 {
            return Err(Error::param("d", format!("alphabet size {d} < 2")));
        }
        let target = ((eps.exp() - CEIL_SLACK).ceil() + 1.0).min((2 * d) as f64) as usize;
        let block_size = target.next_power_of_two();
        let blocks = d.div_ceil(block_size / 2);
        Ok(HadamardConfig {
            d,
            eps,
            block_size,
            blocks,
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if self.d < 2 {
            return Err(Error::param("d", format!("alphabet size {} < 2", self.d)));
        }
        if self.block_size < 2 || !self.block_size.is_power_of_two() {
            return Err(Error::param(
                "block_size",
                format!("{} is not a power of two ≥ 2", self.block_size),
            ));
        }
        if self.blocks * (self.block_size / 2) < self.d {
            return Err(Error::param(
                "blocks",
                format!(
                    "{} blocks of {} symbols cannot hold {} inputs",
                    self.blocks,
                    self.block_size / 2,
                    self.d
                ),
            ));
        }
        Ok(())
    }

    pub fn outputs(&self) -> usize {
        self.block_size * self.blocks
    }

    fn half(&self) -> usize {
        self.block_size / 2
    }

    fn block_of(&self, x: usize) -> usize {
        x / self.half()
    }

    /// Whether output `z` lies in the coset of input `x`.
    pub fn in_coset(&self, x: usize, z: usize) -> bool {
        let block = self.block_of(x);
        if z / self.block_size != block {
            return false;
        }
        let row = x % self.half() + 1;
        let col = z % self.block_size;
        (row & col).count_ones().is_multiple_of(2)
    }

    /// `(p_in, p_out)`: probability of each coset symbol and of each other symbol.
    fn weights(&self) -> (f64, f64) {
        let inside = self.half() as f64;
        let outside = (self.outputs() - self.half()) as f64;
        let t = (-self.eps).exp();
        let p_in = 1.0 / (inside + outside * t);
        (p_in, p_in * t)
    }
}

pub fn hadamard_response(cfg: &HadamardConfig) -> Result<Channel> {
    cfg.validate()?;
    let (p_in, p_out) = cfg.weights();
    let rows = (0..cfg.d)
        .map(|x| {
            (0..cfg.outputs())
                .map(|z| if cfg.in_coset(x, z) { p_in } else { p_out })
                .collect()
        })
        .collect();
    Channel::new(rows)
}

/// Unbiased frequency estimate from output counts.
pub fn hadamard_estimate(counts: &[u64], cfg: &HadamardConfig) -> Result<Vec<f64>> {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::param("counts", "histogram is empty"));
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    hadamard_estimate_freq(&freq, cfg)
}

/// Unbiased frequency estimate from empirical output frequencies.
///
/// `p̂(x) = 2(e^ε + 2b − 1)/(e^ε − 1) · (freq(C_x) − freq(block of x)/2)`.
/// The result is a signed vector and is not projected onto the simplex.
pub fn hadamard_estimate_freq(freq: &[f64], cfg: &HadamardConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if freq.len() != cfg.outputs() {
        return Err(Error::DimensionMismatch {
            expected: cfg.outputs(),
            got: freq.len(),
        });
    }
    if cfg.eps == 0.0 {
        return Err(Error::param("eps", "outputs carry no information at eps = 0"));
    }
    let em1 = cfg.eps.exp_m1();
    let scale = 2.0 * (em1 + 2.0 * cfg.blocks as f64) / em1;
    let block_mass: Vec<f64> = freq.chunks(cfg.block_size).map(|c| c.iter().sum()).collect();
    let est = (0..cfg.d)
        .map(|x| {
            let block = cfg.block_of(x);
            let start = block * cfg.block_size;
            let coset: f64 = (start..start + cfg.block_size)
                .filter(|&z| cfg.in_coset(x, z))
                .map(|z| freq[z])
                .sum();
            scale * (coset - 0.5 * block_mass[block])
        })
        .collect();
    Ok(est)
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        acc += u;
        let t = (acc - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}
