//! Fisher information and private Cramér–Rao / van Trees bounds.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::contraction::upsilon;
use crate::error::{ensure_dim, Error, Result};
use crate::mechanisms::ChannelSampler;
use crate::prob::{Channel, ProbVector};
use crate::quad;
use crate::rng::StreamRng;

/// Step of the central-difference score.
pub const SCORE_STEP: f64 = 1e-5;

/// Half-width, in standard deviations, of the integration window used for
/// continuous families.
const WINDOW_SDS: f64 = 12.0;

/// Sample space of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    /// `{0, .., n-1}`, evaluated at the points `0.0, 1.0, ..`.
    Finite(usize),
    /// The real line, effectively supported on `[lo, hi]`.
    Real { lo: f64, hi: f64 },
}

/// A parametric family of distributions `{P_θ}`.
pub trait ParametricFamily {
    fn dim_theta(&self) -> usize;

    /// Rejects `θ` outside the open parameter domain.
    fn check_interior(&self, theta: &[f64]) -> Result<()>;

    fn support(&self, theta: &[f64]) -> Support;

    /// Density or pmf at `x`.
    fn density(&self, theta: &[f64], x: f64) -> f64;

    /// Closed-form score `∇_θ log P_θ(x)`, if available.
    fn score_closed(&self, _theta: &[f64], _x: f64) -> Option<Vec<f64>> {
        None
    }

    /// The score, falling back to Richardson-refined central differences.
    fn score(&self, theta: &[f64], x: f64) -> Vec<f64> {
        self.score_closed(theta, x)
            .unwrap_or_else(|| numeric_score(self, theta, x))
    }
}

fn numeric_score<F: ParametricFamily + ?Sized>(fam: &F, theta: &[f64], x: f64) -> Vec<f64> {
    let log_at = |i: usize, delta: f64| {
        let mut t = theta.to_vec();
        t[i] += delta;
        fam.density(&t, x).ln()
    };
    (0..theta.len())
        .map(|i| {
            let central = |h: f64| (log_at(i, h) - log_at(i, -h)) / (2.0 * h);
            let coarse = central(SCORE_STEP);
            let fine = central(0.5 * SCORE_STEP);
            (4.0 * fine - coarse) / 3.0
        })
        .collect()
}

/// Symmetric positive-semidefinite `d × d` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct FisherMatrix {
    m: DMatrix<f64>,
}

impl FisherMatrix {
    /// Validates symmetry and semidefiniteness up to `1e−10` relative to the
    /// largest entry.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::param(
                "matrix",
                format!("shape {}x{} is not square", m.nrows(), m.ncols()),
            ));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("matrix", "non-finite entry"));
        }
        let scale = m.amax().max(1.0);
        let tol = 1e-10 * scale;
        if (&m - m.transpose()).amax() > tol {
            return Err(Error::param("matrix", "not symmetric"));
        }
        let min_eig = m.clone().symmetric_eigenvalues().min();
        if min_eig < -tol {
            return Err(Error::param("matrix", format!("eigenvalue {min_eig} < 0")));
        }
        Ok(FisherMatrix { m })
    }

    pub fn scalar(v: f64) -> Result<Self> {
        FisherMatrix::new(DMatrix::from_element(1, 1, v))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> Result<f64> {
        ensure_dim(self.dim(), v.len())?;
        let v = DVector::from_column_slice(v);
        Ok(v.dot(&(&self.m * &v)))
    }

    fn scaled(&self, c: f64) -> FisherMatrix {
        FisherMatrix { m: &self.m * c }
    }
}

impl TryFrom<Vec<Vec<f64>>> for FisherMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: r.len(),
            });
        }
        FisherMatrix::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }
}

impl From<FisherMatrix> for Vec<Vec<f64>> {
    fn from(f: FisherMatrix) -> Self {
        f.m.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}

/// `E[s sᵀ]` for the score `s`: an exact sum on finite supports and
/// adaptive Simpson quadrature on the real line.
/// Absolute tolerance for continuous supports; the numeric score carries
/// about 1e−10 relative error, so finer targets only add evaluations.
const REAL_QUAD_TOL: f64 = 1e-9;

pub fn fisher_numeric<F: ParametricFamily + ?Sized>(fam: &F, theta: &[f64]) -> Result<FisherMatrix> {
    ensure_dim(fam.dim_theta(), theta.len())?;
    fam.check_interior(theta)?;
    let d = theta.len();
    let mut m = DMatrix::zeros(d, d);
    match fam.support(theta) {
        Support::Finite(n) => {
            for x in 0..n {
                let x = x as f64;
                let w = fam.density(theta, x);
                if w == 0.0 {
                    continue;
                }
                let s = fam.score(theta, x);
                for i in 0..d {
                    for j in 0..d {
                        m[(i, j)] += w * s[i] * s[j];
                    }
                }
            }
        }
        Support::Real { lo, hi } => {
            for i in 0..d {
                for j in i..d {
                    let v = quad::adaptive_simpson(
                        |x| {
                            let s = fam.score(theta, x);
                            fam.density(theta, x) * s[i] * s[j]
                        },
                        lo,
                        hi,
                        REAL_QUAD_TOL,
                    );
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
        }
    }
    FisherMatrix::new(m)
}

/// Monte Carlo estimate of a scalar family's Fisher information with its
/// standard error; finite supports only.
pub fn fisher_monte_carlo<F: ParametricFamily + ?Sized>(
    fam: &F,
    theta: &[f64],
    samples: usize,
    rng: &mut StreamRng,
) -> Result<(f64, f64)> {
    ensure_dim(1, theta.len())?;
    fam.check_interior(theta)?;
    let Support::Finite(n) = fam.support(theta) else {
        return Err(Error::param(
            "family",
            "Monte Carlo Fisher information needs a finite support",
        ));
    };
    if samples < 2 {
        return Err(Error::param("samples", "need at least two samples"));
    }
    let pmf = ProbVector::new((0..n).map(|x| fam.density(theta, x as f64)).collect())?;
    let sampler = ChannelSampler::for_distribution(&pmf);
    let sq: Vec<f64> = (0..n).map(|x| fam.score(theta, x as f64)[0].powi(2)).collect();
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let v = sq[sampler.draw(0, rng)];
        sum += v;
        sum2 += v * v;
    }
    let t = samples as f64;
    let mean = sum / t;
    let var = ((sum2 - t * mean * mean) / (t - 1.0)).max(0.0);
    Ok((mean, (var / t).sqrt()))
}

fn boundary(msg: String) -> Error {
    Error::Boundary(msg)
}

/// `Bernoulli(θ)` on `{0, 1}`.
#[derive(Debug, Clone, Copy)]
pub struct Bernoulli;

impl ParametricFamily for Bernoulli {
    fn dim_theta(&self) -> usize {
        1
    }

    fn check_interior(&self, theta: &[f64]) -> Result<()> {
        if theta[0] > 0.0 && theta[0] < 1.0 {
            Ok(())
        } else {
            Err(boundary(format!("Bernoulli parameter {} not in (0, 1)", theta[0])))
        }
    }

    fn support(&self, _theta: &[f64]) -> Support {
        Support::Finite(2)
    }

    fn density(&self, theta: &[f64], x: f64) -> f64 {
        if x == 1.0 {
            theta[0]
        } else {
            1.0 - theta[0]
        }
    }

    fn score_closed(&self, theta: &[f64], x: f64) -> Option<Vec<f64>> {
        let t = theta[0];
        Some(vec![if x == 1.0 { 1.0 / t } else { -1.0 / (1.0 - t) }])
    }
}

/// Multinomial on `k` symbols parameterized by its first `k − 1` masses.
#[derive(Debug, Clone, Copy)]
pub struct Multinomial {
    pub k: usize,
}

impl Multinomial {
    fn last(theta: &[f64]) -> f64 {
        1.0 - theta.iter().sum::<f64>()
    }
}

impl ParametricFamily for Multinomial {
    fn dim_theta(&self) -> usize {
        self.k - 1
    }

    fn check_interior(&self, theta: &[f64]) -> Result<()> {
        check_simplex_interior(theta)
    }

    fn support(&self, _theta: &[f64]) -> Support {
        Support::Finite(self.k)
    }

    fn density(&self, theta: &[f64], x: f64) -> f64 {
        let x = x as usize;
        if x + 1 < self.k {
            theta[x]
        } else {
            Self::last(theta)
        }
    }

    fn score_closed(&self, theta: &[f64], x: f64) -> Option<Vec<f64>> {
        let x = x as usize;
        let tail = -1.0 / Self::last(theta);
        Some(
            (0..self.k - 1)
                .map(|i| {
                    if i == x {
                        1.0 / theta[i]
                    } else if x + 1 == self.k {
                        tail
                    } else {
                        0.0
                    }
                })
                .collect(),
        )
    }
}

/// `N(θ, σ²)` with known `σ`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianLocation {
    pub sigma: f64,
}

impl ParametricFamily for GaussianLocation {
    fn dim_theta(&self) -> usize {
        1
    }

    fn check_interior(&self, theta: &[f64]) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param("sigma", format!("{} is not positive", self.sigma)));
        }
        if theta[0].is_finite() {
            Ok(())
        } else {
            Err(boundary("location must be finite".into()))
        }
    }

    fn support(&self, theta: &[f64]) -> Support {
        let w = WINDOW_SDS * self.sigma;
        Support::Real {
            lo: theta[0] - w,
            hi: theta[0] + w,
        }
    }

    fn density(&self, theta: &[f64], x: f64) -> f64 {
        let z = (x - theta[0]) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * PI).sqrt())
    }
}

/// `N(0, θ)`, parameterized by the variance.
#[derive(Debug, Clone, Copy)]
pub struct GaussianVariance;

impl ParametricFamily for GaussianVariance {
    fn dim_theta(&self) -> usize {
        1
    }

    fn check_interior(&self, theta: &[f64]) -> Result<()> {
        if theta[0] > 0.0 && theta[0].is_finite() {
            Ok(())
        } else {
            Err(boundary(format!("variance {} is not positive", theta[0])))
        }
    }

    fn support(&self, theta: &[f64]) -> Support {
        let w = WINDOW_SDS * theta[0].sqrt();
        Support::Real { lo: -w, hi: w }
    }

    fn density(&self, theta: &[f64], x: f64) -> f64 {
        let v = theta[0];
        (-0.5 * x * x / v).exp() / (2.0 * PI * v).sqrt()
    }

    fn score_closed(&self, theta: &[f64], x: f64) -> Option<Vec<f64>> {
        let v = theta[0];
        Some(vec![0.5 * (x * x / v - 1.0) / v])
    }
}

/// A finite family observed through a channel: `Z ~ P_θ K`.
pub struct Privatized<'a, F> {
    pub inner: &'a F,
    pub channel: &'a Channel,
}

impl<F: ParametricFamily> ParametricFamily for Privatized<'_, F> {
    fn dim_theta(&self) -> usize {
        self.inner.dim_theta()
    }

    fn check_interior(&self, theta: &[f64]) -> Result<()> {
        self.inner.check_interior(theta)?;
        match self.inner.support(theta) {
            Support::Finite(n) => ensure_dim(self.channel.inputs(), n),
            Support::Real { .. } => Err(Error::param("family", "channels act on finite supports only")),
        }
    }

    fn support(&self, _theta: &[f64]) -> Support {
        Support::Finite(self.channel.outputs())
    }

    fn density(&self, theta: &[f64], z: f64) -> f64 {
        let z = z as usize;
        (0..self.channel.inputs())
            .map(|x| self.inner.density(theta, x as f64) * self.channel.entry(x, z))
            .sum()
    }
}

fn check_simplex_interior(theta: &[f64]) -> Result<()> {
    if theta.is_empty() {
        return Err(Error::param("theta", "need at least one coordinate"));
    }
    if let Some(i) = theta.iter().position(|&t| !(t > 0.0)) {
        return Err(boundary(format!("theta[{i}] = {} is not positive", theta[i])));
    }
    let last = 1.0 - theta.iter().sum::<f64>();
    if !(last > 0.0) {
        return Err(boundary(format!("implied last mass {last} is not positive")));
    }
    Ok(())
}

/// `diag(1/θ_i) + (1/θ_k) 1 1ᵀ` for `θ ∈ ℝ^{k−1}` in the simplex interior.
pub fn fisher_multinomial(theta: &[f64]) -> Result<FisherMatrix> {
    check_simplex_interior(theta)?;
    let d = theta.len();
    let inv_last = 1.0 / Multinomial::last(theta);
    FisherMatrix::new(DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            1.0 / theta[i] + inv_last
        } else {
            inv_last
        }
    }))
}

/// `diag(θ) − θ θᵀ`, the inverse of [`fisher_multinomial`].
pub fn fisher_multinomial_inverse(theta: &[f64]) -> Result<FisherMatrix> {
    check_simplex_interior(theta)?;
    let d = theta.len();
    FisherMatrix::new(DMatrix::from_fn(d, d, |i, j| {
        let diag = if i == j { theta[i] } else { 0.0 };
        diag - theta[i] * theta[j]
    }))
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} is not positive")))
    }
}

/// `n Υ_ε I_X(θ)`, which dominates the Fisher information of `n` privatized
/// samples.
pub fn private_fisher_bound(n: f64, eps: f64, ix: &FisherMatrix) -> Result<FisherMatrix> {
    check_positive("n", n)?;
    Ok(ix.scaled(n * upsilon(eps)?))
}

/// `d² / (n Υ_ε sup Tr I_X + d π²/B²)` on `Θ = [−B, B]^d`.
pub fn van_trees_lb(n: f64, eps: f64, d: usize, b: f64, sup_trace: f64) -> Result<f64> {
    check_positive("n", n)?;
    check_positive("B", b)?;
    if d == 0 {
        return Err(Error::param("d", "must be positive"));
    }
    if !(sup_trace >= 0.0) {
        return Err(Error::param("sup_trace", format!("{sup_trace} is negative")));
    }
    let d = d as f64;
    let ups = upsilon(eps)?;
    let data = if ups == 0.0 { 0.0 } else { n * ups * sup_trace };
    Ok(d * d / (data + d * PI * PI / (b * b)))
}

/// `(∇T)ᵀ I_X⁻¹ ∇T / (n Υ_ε)`; `+∞` at `ε = 0` unless `∇T` is null.
pub fn cramer_rao_private_lb(n: f64, eps: f64, grad_t: &[f64], ix_inv: &FisherMatrix) -> Result<f64> {
    check_positive("n", n)?;
    let q = ix_inv.quadratic_form(grad_t)?;
    if q == 0.0 {
        return Ok(0.0);
    }
    let ups = upsilon(eps)?;
    if ups == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(q / (n * ups))
}

/// `∂H/∂θ_i = log(θ_k/θ_i)` for the Shannon entropy of a multinomial.
pub fn entropy_gradient(theta: &[f64]) -> Result<Vec<f64>> {
    check_simplex_interior(theta)?;
    let last = Multinomial::last(theta);
    Ok(theta.iter().map(|t| (last / t).ln()).collect())
}

/// `Var[log P_θ(X)]` for the multinomial with first masses `θ`.
pub fn log_likelihood_variance(theta: &[f64]) -> Result<f64> {
    check_simplex_interior(theta)?;
    let mut full = theta.to_vec();
    full.push(Multinomial::last(theta));
    let mean: f64 = full.iter().map(|p| p * p.ln()).sum();
    Ok(full.iter().map(|p| p * (p.ln() - mean).powi(2)).sum())
}

/// `θ_i = 1/(3(k − 1))` for `i < k`, which leaves `θ_k = 2/3`.
pub fn entropy_extremal_theta(k: usize) -> Result<Vec<f64>> {
    if k < 3 {
        return Err(Error::param("k", format!("{k} < 3")));
    }
    Ok(vec![1.0 / (3.0 * (k - 1) as f64); k - 1])
}
