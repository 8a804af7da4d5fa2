//! Hölder density packing on `[0, 1]`.
//!
//! `f_θ(x) = 1 + γ Σ_k θ_k g_k(x)` with `g_k(x) = 2^{b/2} g(2^b x − k)` for
//! `k = 1..N`, `N = 2^b − 1`, and the bump `g(u) = a sin(2πu)` on `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::contraction::psi;
use crate::error::{Error, Result};
use crate::quad;

/// Points of the grid on which the bump's Hölder constant is evaluated.
pub const HOLDER_GRID: usize = 10_000;

const MAX_LEVEL: u32 = 30;
const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityPacking {
    pub beta: f64,
    /// Hölder constant `L` of the class.
    pub l: f64,
    pub gamma: f64,
    /// Dyadic level `b`.
    pub b: u32,
    /// Number of bumps `N = 2^b − 1`.
    pub n_bumps: usize,
    /// Amplitude `a` of the bump.
    pub amplitude: f64,
    /// Hölder constant of `sin(2π·)` on the grid, so `L_g = a · holder_unit`.
    pub holder_unit: f64,
    pub g_l1: f64,
    pub g_l2: f64,
    pub g_linf: f64,
}

/// `(γ, b)` for `nΨ_ε`: `γ = (nΨ)^{−(2β+1)/(2(2β+2))}` and
/// `b = round(log₂((nΨ)^{1/(2β+2)} + 1))`.
pub fn packing_parameters(n_psi: f64, beta: f64) -> Result<(f64, u32)> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::param("beta", format!("{beta} not in (0, 1]")));
    }
    if !(n_psi >= 1.0) {
        return Err(Error::Infeasible(format!("n·psi = {n_psi} < 1")));
    }
    let gamma = n_psi.powf(-(2.0 * beta + 1.0) / (2.0 * (2.0 * beta + 2.0)));
    let target = n_psi.powf(1.0 / (2.0 * beta + 2.0));
    let b = (target + 1.0).log2().round();
    if b > MAX_LEVEL as f64 {
        return Err(Error::Infeasible(format!("dyadic level {b} is too fine")));
    }
    Ok((gamma, b as u32))
}

/// `sup_δ 2 sin(πδ)/δ^β` over `δ = i/HOLDER_GRID`.
fn sine_holder_constant(beta: f64) -> f64 {
    (1..=HOLDER_GRID)
        .map(|i| {
            let d = i as f64 / HOLDER_GRID as f64;
            2.0 * (PI * d).sin() / d.powf(beta)
        })
        .fold(0.0, f64::max)
}

impl DensityPacking {
    pub fn build(beta: f64, l: f64, n: f64, eps: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::param("L", format!("{l} is not positive")));
        }
        if !(n > 0.0) {
            return Err(Error::param("n", format!("{n} is not positive")));
        }
        let (gamma, b) = packing_parameters(n * psi(eps)?, beta)?;
        Self::with_parameters(beta, l, gamma, b)
    }

    /// Packing at explicit `(γ, b)` with the bump amplitude chosen maximal
    /// under `γ 2^{b/2} ‖g‖_∞ ≤ 1` and `γ 2^{b(β+1/2)} L_g ≤ L`.
    pub fn with_parameters(beta: f64, l: f64, gamma: f64, b: u32) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::param("beta", format!("{beta} not in (0, 1]")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::param("gamma", format!("{gamma} is not positive")));
        }
        if b == 0 || b > MAX_LEVEL {
            return Err(Error::Infeasible(format!("dyadic level {b} leaves no usable bumps")));
        }
        let holder_unit = sine_holder_constant(beta);
        let scale = 2f64.powi(b as i32);
        let a_sup = 1.0 / (gamma * scale.sqrt());
        let a_holder = l / (gamma * scale.powf(beta + 0.5) * holder_unit);
        let amplitude = a_sup.min(a_holder);
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::Infeasible(format!("bump amplitude {amplitude}")));
        }
        let g = |u: f64| amplitude * (2.0 * PI * u).sin();
        let halves = [0.0, 0.5, 1.0];
        let g_l1 = quad::piecewise_simpson(|u| g(u).abs(), &halves, QUAD_TOL);
        let g_l2 = quad::piecewise_simpson(|u| g(u).powi(2), &halves, QUAD_TOL).sqrt();
        let g_linf = (0..=HOLDER_GRID)
            .map(|i| g(i as f64 / HOLDER_GRID as f64).abs())
            .fold(0.0, f64::max);
        Ok(DensityPacking {
            beta,
            l,
            gamma,
            b,
            n_bumps: (1usize << b) - 1,
            amplitude,
            holder_unit,
            g_l1,
            g_l2,
            g_linf,
        })
    }

    fn scale(&self) -> f64 {
        2f64.powi(self.b as i32)
    }

    /// `‖g‖_q` by quadrature.
    pub fn g_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) {
            return Err(Error::param("q", format!("{q} < 1")));
        }
        let a = self.amplitude;
        let v = quad::piecewise_simpson(|u| (a * (2.0 * PI * u).sin()).abs().powf(q), &[0.0, 0.5, 1.0], QUAD_TOL);
        Ok(v.powf(1.0 / q))
    }

    /// Whether both membership conditions hold.
    pub fn is_member(&self) -> bool {
        let s = self.scale();
        let sup_ok = self.gamma * s.sqrt() * self.g_linf <= 1.0 + 1e-12;
        let holder_ok =
            self.gamma * s.powf(self.beta + 0.5) * self.amplitude * self.holder_unit <= self.l * (1.0 + 1e-12);
        sup_ok && holder_ok
    }

    fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_bumps {
            return Err(Error::DimensionMismatch {
                expected: self.n_bumps,
                got: theta.len(),
            });
        }
        if let Some(i) = theta.iter().position(|t| !(0.0..=1.0).contains(t)) {
            return Err(Error::param("theta", format!("coordinate {i} not in [0, 1]")));
        }
        Ok(())
    }

    fn density_unchecked(&self, theta: &[f64], x: f64) -> f64 {
        let s = self.scale();
        let cell = (x * s).floor();
        let k = cell as usize;
        if cell < 1.0 || k > self.n_bumps {
            return 1.0;
        }
        let u = x * s - cell;
        1.0 + self.gamma * theta[k - 1] * s.sqrt() * self.amplitude * (2.0 * PI * u).sin()
    }

    /// `f_θ(x)`.
    pub fn density(&self, theta: &[f64], x: f64) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(self.density_unchecked(theta, x))
    }

    /// Half-cell knots `j 2^{−(b+1)}` covering `[0, 1]`.
    fn knots(&self) -> Vec<f64> {
        let m = 1usize << (self.b + 1);
        (0..=m).map(|j| j as f64 / m as f64).collect()
    }

    /// `∫_0^1 f_θ` by quadrature.
    pub fn mass(&self, theta: &[f64]) -> Result<f64> {
        self.check_theta(theta)?;
        Ok(quad::piecewise_simpson(
            |x| self.density_unchecked(theta, x),
            &self.knots(),
            QUAD_TOL,
        ))
    }

    /// Minimum of `f_θ` over a grid with `per_cell` points per dyadic cell,
    /// including every quarter-cell extremum of the bumps.
    pub fn min_on_grid(&self, theta: &[f64], per_cell: usize) -> Result<f64> {
        self.check_theta(theta)?;
        let cells = 1usize << self.b;
        let per = (per_cell.max(1) / 4).max(1) * 4;
        let total = cells * per;
        Ok((0..=total)
            .map(|i| self.density_unchecked(theta, i as f64 / total as f64))
            .fold(f64::INFINITY, f64::min))
    }

    /// `TV(f_θ, f_θ')` by quadrature of `½|f_θ − f_θ'|`.
    pub fn tv(&self, theta: &[f64], theta2: &[f64]) -> Result<f64> {
        self.check_theta(theta)?;
        self.check_theta(theta2)?;
        let diff = |x: f64| (self.density_unchecked(theta, x) - self.density_unchecked(theta2, x)).abs();
        Ok(0.5 * quad::piecewise_simpson(diff, &self.knots(), QUAD_TOL))
    }

    /// Closed-form TV between Hamming neighbours: `(γ/2) 2^{−b/2} ‖g‖₁`.
    pub fn neighbor_tv_closed(&self) -> f64 {
        0.5 * self.gamma * self.scale().sqrt().recip() * (2.0 * self.amplitude / PI)
    }
}

/// Neighbour TV by quadrature: `θ = 0` against the flip of coordinate 1.
pub fn packing_neighbor_tv(pk: &DensityPacking) -> f64 {
    let zero = vec![0.0; pk.n_bumps];
    let mut flip = zero.clone();
    flip[0] = 1.0;
    pk.tv(&zero, &flip).expect("valid parameter vectors")
}
