//! Private minimax lower and upper bounds.
//!
//! Every function returns the bound value; negative formula values (which
//! occur exactly when a bound is vacuous) are clamped to zero. The `*_report`
//! functions wrap a value in a [`BoundReport`] that records clamping and
//! whether the value is only a rate.

mod packing;

pub use packing::{packing_neighbor_tv, packing_parameters, DensityPacking, HOLDER_GRID};

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::contraction::{psi, upsilon};
use crate::error::{Error, Result};
use crate::report::{BoundEntry, BoundReport};

fn check_n(n: f64) -> Result<()> {
    if n > 0.0 && !n.is_nan() {
        Ok(())
    } else {
        Err(Error::param("n", format!("{n} is not positive")))
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} not in [0, 1]")))
    }
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} is negative")))
    }
}

/// `0` when `a == 0`, else `a·b` (so that `0 · ∞ = 0`).
fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * b
    }
}

fn le_cam_raw(alpha: f64, n: f64, eps: f64, kl: f64, tv: f64) -> Result<f64> {
    check_nonneg("alpha", alpha)?;
    check_n(n)?;
    check_nonneg("kl", kl)?;
    check_unit("tv", tv)?;
    let (ups, ps) = (upsilon(eps)?, psi(eps)?);
    let sep = (mul0(ups, kl).sqrt())
        .min(2.0 * mul0(tv, ps.sqrt()))
        .min(mul0(tv, ps).sqrt());
    Ok(alpha / (2.0 * SQRT_2) * (SQRT_2 - n.sqrt() * sep))
}

/// Private two-point lower bound
/// `(α/2√2)[√2 − √n min{√(Υ KL), 2√Ψ TV, √(Ψ TV)}]`.
pub fn le_cam_lb(alpha: f64, n: f64, eps: f64, kl: f64, tv: f64) -> Result<f64> {
    Ok(le_cam_raw(alpha, n, eps, kl, tv)?.max(0.0))
}

/// The earlier two-point bound `(α/2√2)[√2 − √n (e^ε − 1) TV]`.
pub fn le_cam_prior_lb(alpha: f64, n: f64, eps: f64, tv: f64) -> Result<f64> {
    check_nonneg("alpha", alpha)?;
    check_n(n)?;
    check_unit("tv", tv)?;
    crate::mechanisms::check_eps(eps)?;
    let sep = mul0(tv, eps.exp_m1());
    Ok((alpha / (2.0 * SQRT_2) * (SQRT_2 - n.sqrt() * sep)).max(0.0))
}

/// `(1/20) min{1, 1/(100 n Υ_ε)} log²(k − 1)`.
pub fn entropy_estimation_lb(n: f64, k: usize, eps: f64) -> Result<f64> {
    check_n(n)?;
    if k < 3 {
        return Err(Error::param("k", format!("{k} < 3")));
    }
    let ups = upsilon(eps)?;
    let factor = if ups == 0.0 {
        1.0
    } else {
        (1.0 / (100.0 * n * ups)).min(1.0)
    };
    Ok(factor * ((k - 1) as f64).ln().powi(2) / 20.0)
}

fn assouad_raw(k: usize, tau: f64, n: f64, eps: f64, tv_sq: &[f64]) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "must be positive"));
    }
    if tv_sq.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: tv_sq.len(),
        });
    }
    check_nonneg("tau", tau)?;
    check_n(n)?;
    for &t in tv_sq {
        check_unit("tv_sq", t)?;
    }
    let total: f64 = tv_sq.iter().sum();
    let sep = mul0(total, 2.0 * n * psi(eps)? / k as f64).sqrt();
    Ok(k as f64 * tau * (1.0 - sep))
}

/// Private hypercube lower bound `kτ[1 − (2nΨ_ε/k · Σ TV²)^{1/2}]`.
pub fn assouad_lb(k: usize, tau: f64, n: f64, eps: f64, tv_sq: &[f64]) -> Result<f64> {
    Ok(assouad_raw(k, tau, n, eps, tv_sq)?.max(0.0))
}

/// The three terms of the `ℓ_h` distribution-estimation lower bound, before
/// taking their minimum.
pub fn distribution_estimation_terms(n: f64, d: usize, h: f64, eps: f64) -> Result<[f64; 3]> {
    check_n(n)?;
    if !(h >= 1.0 && h.is_finite()) {
        return Err(Error::param("h", format!("{h} < 1")));
    }
    if d < 2 {
        return Err(Error::param("d", format!("{d} < 2")));
    }
    let root = (n * psi(eps)?).sqrt();
    let lead = SQRT_2 * h / (h + 1.0);
    let second = lead * (1.0 / (2.0 * h + 2.0)).powf(1.0 / h) * (d as f64).powf(1.0 / h) / root;
    let third = lead * (1.0 / (SQRT_2 * h)).powf(1.0 / h) * root.recip().powf(1.0 - 1.0 / h);
    Ok([1.0, second, third])
}

/// Lower bound on the `ℓ_h` risk of estimating a distribution on `d` symbols.
pub fn distribution_estimation_lb(n: f64, d: usize, h: f64, eps: f64) -> Result<f64> {
    let t = distribution_estimation_terms(n, d, h, eps)?;
    Ok(t[0].min(t[1]).min(t[2]))
}

/// Hadamard-response risk rate
/// `(e^ε)^{(h−1)/h} (e^ε + d)^{1/h} / ((e^ε − 1)√n)` (universal constant 1).
pub fn hadamard_ub(n: f64, d: usize, h: f64, eps: f64) -> Result<f64> {
    check_n(n)?;
    crate::mechanisms::check_eps(eps)?;
    if !(2.0..=100.0).contains(&h) {
        return Err(Error::param("h", format!("{h} not in [2, 100]")));
    }
    if d < 2 {
        return Err(Error::param("d", format!("{d} < 2")));
    }
    if eps == 0.0 {
        return Ok(f64::INFINITY);
    }
    // In logs: ε(h−1)/h + ln(e^ε + d)/h − ln(e^ε − 1) − ln(n)/2.
    let ln_sum = eps + (d as f64 * (-eps).exp()).ln_1p();
    let ln_em1 = if eps > 1.0 {
        eps + (-(-eps).exp()).ln_1p()
    } else {
        eps.exp_m1().ln()
    };
    Ok((eps * (h - 1.0) / h + ln_sum / h - ln_em1 - 0.5 * n.ln()).exp())
}

/// Whether `n ≥ min(d^{2/h}, e^{2ε/h})`, the sample-size regime of
/// [`hadamard_ub`].
pub fn hadamard_ub_regime(n: f64, d: usize, h: f64, eps: f64) -> bool {
    n >= (d as f64).powf(2.0 / h).min((2.0 * eps / h).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityRate {
    pub rate: f64,
    pub gamma: f64,
    /// Number of bumps `N = 2^b − 1`.
    pub n_bumps: usize,
    pub b: u32,
}

/// Density-estimation rate `(nΨ_ε)^{−hβ/(2β+2)}` with the packing parameters.
pub fn density_estimation_lb(n: f64, beta: f64, h: f64, eps: f64) -> Result<DensityRate> {
    check_n(n)?;
    if !(h >= 1.0 && h.is_finite()) {
        return Err(Error::param("h", format!("{h} < 1")));
    }
    let n_psi = n * psi(eps)?;
    let (gamma, b) = packing_parameters(n_psi, beta)?;
    Ok(DensityRate {
        rate: n_psi.powf(-h * beta / (2.0 * beta + 2.0)),
        gamma,
        n_bumps: (1usize << b) - 1,
        b,
    })
}

/// `ln V_d` for the unit Euclidean ball in `ℝ^d`.
pub fn log_unit_l2_ball_volume(d: usize) -> f64 {
    let d = d as f64;
    0.5 * d * PI.ln() - ln_gamma(1.0 + 0.5 * d)
}

/// `ln(d / (r e^c [V_d Γ(1 + d/r)]^{r/d}))`.
fn log_mim_prefactor(d: f64, r: f64, log_vd: f64, c: f64) -> f64 {
    d.ln() - r.ln() - c - (r / d) * (log_vd + ln_gamma(1.0 + d / r))
}

fn check_dr(d: usize, r: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::param("d", "must be positive"));
    }
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::param("r", format!("{r} < 1")));
    }
    Ok(())
}

/// Mutual-information lower bound
/// `d/(r e [V_d Γ(1+d/r)]^{r/d}) · e^{H(θ) − Υ_ε I(θ; X^n)}`.
pub fn mim_lb(d: usize, r: f64, log_vd: f64, h_theta: f64, i_theta: f64, eps: f64) -> Result<f64> {
    check_dr(d, r)?;
    check_nonneg("I", i_theta)?;
    let ups = upsilon(eps)?;
    Ok((log_mim_prefactor(d as f64, r, log_vd, 1.0) + h_theta - mul0(ups, i_theta)).exp())
}

#[allow(clippy::too_many_arguments)]
fn gaussian_terms(
    n: f64,
    d: usize,
    r: f64,
    sigma: f64,
    eps: f64,
    vol_ratio: f64,
    rad: f64,
    log_vd: f64,
) -> Result<(f64, f64, f64)> {
    check_n(n)?;
    check_dr(d, r)?;
    for (name, v) in [("sigma", sigma), ("vol_ratio", vol_ratio), ("rad", rad)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::param(name, format!("{v} is not positive")));
        }
    }
    let df = d as f64;
    let ups = upsilon(eps)?;
    let log_pre =
        (1.0 - r / 2.0) * df.ln() + (log_mim_prefactor(df, r, log_vd, 2.0) - df.ln()) + (r / df) * vol_ratio.ln();
    let geometric = rad.powf(r);
    let statistical = if ups == 0.0 {
        f64::INFINITY
    } else {
        (sigma * sigma * df / (n * ups)).powf(r / 2.0)
    };
    Ok((log_pre.exp(), geometric, statistical))
}

/// Gaussian location lower bound
/// `d^{1−r/2}/(r e² [V_d Γ(1+d/r)]^{r/d}) [V(Θ)/V₂(Θ)]^{r/d} min{rad^r, (σ²d/(nΥ_ε))^{r/2}}`.
#[allow(clippy::too_many_arguments)]
pub fn gaussian_location_lb(
    n: f64,
    d: usize,
    r: f64,
    sigma: f64,
    eps: f64,
    vol_ratio: f64,
    rad: f64,
    log_vd: f64,
) -> Result<f64> {
    let (pre, geo, stat) = gaussian_terms(n, d, r, sigma, eps, vol_ratio, rad, log_vd)?;
    Ok(pre * geo.min(stat))
}

/// The unit-ℓ₂-ball, `r = 1` specialization:
/// `√d/(e²(V_d Γ(1+d))^{1/d}) min{1, √(σ²d/n) (e^ε+1)/(e^ε−1)}`.
pub fn gaussian_location_unit_ball_lb(n: f64, d: usize, sigma: f64, eps: f64) -> Result<f64> {
    check_n(n)?;
    check_dr(d, 1.0)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::param("sigma", format!("{sigma} is not positive")));
    }
    let df = d as f64;
    let log_vd = log_unit_l2_ball_volume(d);
    let pre = (0.5 * df.ln() - 2.0 - (log_vd + ln_gamma(1.0 + df)) / df).exp();
    let t = crate::contraction::tv_contraction_bound(eps)?;
    let stat = if t == 0.0 {
        f64::INFINITY
    } else {
        (sigma * sigma * df / n).sqrt() / t
    };
    Ok(pre * stat.min(1.0))
}

/// `(lower, upper)` sample-complexity bounds for private binary testing:
/// `max{log 2.5/(4Υ H²), 2/(25Ψ TV²)}` and `2 log 5/(Υ TV²)`.
pub fn bht_sample_complexity(tv: f64, h2: f64, eps: f64) -> Result<(f64, f64)> {
    if !(tv > 0.0 && tv <= 1.0) {
        return Err(Error::param("tv", format!("{tv} not in (0, 1]")));
    }
    if !(h2 > 0.0 && h2 <= 2.0) {
        return Err(Error::param("h2", format!("{h2} not in (0, 2]")));
    }
    let (ups, ps) = (upsilon(eps)?, psi(eps)?);
    let lower = (2.5f64.ln() / (4.0 * ups * h2)).max(2.0 / (25.0 * ps * tv * tv));
    let upper = 2.0 * 5f64.ln() / (ups * tv * tv);
    if lower > upper {
        return Err(Error::InconsistentBounds(format!(
            "lower {lower} exceeds upper {upper}; check that tv² ≤ 2·h2"
        )));
    }
    Ok((lower, upper))
}

/// Bounds evaluable through [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    LeCam,
    Entropy,
    Assouad,
    Distribution,
    Hadamard,
    Density,
    Mim,
    GaussianLocation,
    Bht,
    VanTrees,
}

impl BoundName {
    pub const ALL: [BoundName; 10] = [
        BoundName::LeCam,
        BoundName::Entropy,
        BoundName::Assouad,
        BoundName::Distribution,
        BoundName::Hadamard,
        BoundName::Density,
        BoundName::Mim,
        BoundName::GaussianLocation,
        BoundName::Bht,
        BoundName::VanTrees,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::LeCam => "le_cam",
            BoundName::Entropy => "entropy",
            BoundName::Assouad => "assouad",
            BoundName::Distribution => "distribution",
            BoundName::Hadamard => "hadamard",
            BoundName::Density => "density",
            BoundName::Mim => "mim",
            BoundName::GaussianLocation => "gaussian_location",
            BoundName::Bht => "bht",
            BoundName::VanTrees => "van_trees",
        }
    }
}

impl std::str::FromStr for BoundName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_").to_ascii_lowercase();
        BoundName::ALL
            .into_iter()
            .find(|b| b.as_str() == key)
            .ok_or_else(|| Error::Parse(format!("unknown bound `{s}`")))
    }
}

/// Named inputs for [`evaluate`]; each bound reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundParams {
    pub n: Option<f64>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub kl: Option<f64>,
    pub tv: Option<f64>,
    pub h2: Option<f64>,
    pub k: Option<usize>,
    pub tau: Option<f64>,
    pub tv_sq: Option<Vec<f64>>,
    pub d: Option<usize>,
    pub h: Option<f64>,
    pub beta: Option<f64>,
    pub r: Option<f64>,
    pub log_vd: Option<f64>,
    pub h_theta: Option<f64>,
    pub i_theta: Option<f64>,
    pub sigma: Option<f64>,
    pub vol_ratio: Option<f64>,
    pub rad: Option<f64>,
    pub b: Option<f64>,
    pub sup_trace: Option<f64>,
}

fn need<T: Clone>(v: &Option<T>, name: &'static str) -> Result<T> {
    v.clone().ok_or_else(|| Error::param(name, "required by this bound"))
}

/// Evaluates `name` into a validated [`BoundReport`].
pub fn evaluate(name: BoundName, p: &BoundParams) -> Result<BoundReport> {
    let eps = need(&p.eps, "eps")?;
    let mut r = BoundReport::new([("eps", eps)]);
    let mut input = |k: &str, v: f64| {
        r.inputs.insert(k.to_string(), v);
    };
    match name {
        BoundName::LeCam => {
            let (alpha, n, kl, tv) = (
                need(&p.alpha, "alpha")?,
                need(&p.n, "n")?,
                need(&p.kl, "kl")?,
                need(&p.tv, "tv")?,
            );
            for (k, v) in [("alpha", alpha), ("n", n), ("kl", kl), ("tv", tv)] {
                input(k, v);
            }
            let raw = le_cam_raw(alpha, n, eps, kl, tv)?;
            r.push(BoundEntry::lower("le_cam", raw.max(0.0), "private_le_cam", "risk").clamped(raw < 0.0));
            r.push(BoundEntry::lower(
                "le_cam_prior",
                le_cam_prior_lb(alpha, n, eps, tv)?,
                "le_cam_prior",
                "risk",
            ));
        }
        BoundName::Entropy => {
            let (n, k) = (need(&p.n, "n")?, need(&p.k, "k")?);
            input("n", n);
            input("k", k as f64);
            r.push(BoundEntry::lower(
                "entropy",
                entropy_estimation_lb(n, k, eps)?,
                "private_entropy",
                "risk",
            ));
        }
        BoundName::Assouad => {
            let (k, tau, n, tv_sq) = (
                need(&p.k, "k")?,
                need(&p.tau, "tau")?,
                need(&p.n, "n")?,
                need(&p.tv_sq, "tv_sq")?,
            );
            input("k", k as f64);
            input("tau", tau);
            input("n", n);
            input("sum_tv_sq", tv_sq.iter().sum());
            let raw = assouad_raw(k, tau, n, eps, &tv_sq)?;
            r.push(BoundEntry::lower("assouad", raw.max(0.0), "private_assouad", "risk").clamped(raw < 0.0));
        }
        BoundName::Distribution | BoundName::Hadamard => {
            let (n, d, h) = (need(&p.n, "n")?, need(&p.d, "d")?, need(&p.h, "h")?);
            input("n", n);
            input("d", d as f64);
            input("h", h);
            r.push(BoundEntry::lower(
                "distribution",
                distribution_estimation_lb(n, d, h, eps)?,
                "private_distribution_lh",
                "risk",
            ));
            if (2.0..=100.0).contains(&h) {
                let mut e = BoundEntry::upper("hadamard", hadamard_ub(n, d, h, eps)?, "hadamard_response_lh", "risk")
                    .up_to_constant();
                if !hadamard_ub_regime(n, d, h, eps) {
                    e = e.with_note("n below min(d^(2/h), e^(2 eps/h)); rate not claimed");
                }
                r.push(e);
            } else if name == BoundName::Hadamard {
                return Err(Error::param("h", format!("{h} not in [2, 100]")));
            }
        }
        BoundName::Density => {
            let (n, beta, h) = (need(&p.n, "n")?, need(&p.beta, "beta")?, need(&p.h, "h")?);
            input("n", n);
            input("beta", beta);
            input("h", h);
            let dr = density_estimation_lb(n, beta, h, eps)?;
            r.push(BoundEntry::lower("density", dr.rate, "private_density_holder", "risk").up_to_constant());
            r.push(BoundEntry::value("packing_gamma", dr.gamma, "packing_gamma"));
            r.push(BoundEntry::value("packing_bumps", dr.n_bumps as f64, "packing_bumps"));
        }
        BoundName::Mim => {
            let (d, rr, log_vd, ht, it) = (
                need(&p.d, "d")?,
                need(&p.r, "r")?,
                need(&p.log_vd, "log_vd")?,
                need(&p.h_theta, "h_theta")?,
                need(&p.i_theta, "i_theta")?,
            );
            for (k, v) in [
                ("d", d as f64),
                ("r", rr),
                ("log_vd", log_vd),
                ("h_theta", ht),
                ("i_theta", it),
            ] {
                input(k, v);
            }
            r.push(BoundEntry::lower(
                "mim",
                mim_lb(d, rr, log_vd, ht, it, eps)?,
                "private_mutual_information",
                "bayes_risk",
            ));
        }
        BoundName::GaussianLocation => {
            let (n, d, sigma) = (need(&p.n, "n")?, need(&p.d, "d")?, need(&p.sigma, "sigma")?);
            let rr = p.r.unwrap_or(1.0);
            let vol_ratio = p.vol_ratio.unwrap_or(1.0);
            let rad = p.rad.unwrap_or(1.0);
            let log_vd = p.log_vd.unwrap_or_else(|| log_unit_l2_ball_volume(d));
            for (k, v) in [
                ("n", n),
                ("d", d as f64),
                ("sigma", sigma),
                ("r", rr),
                ("vol_ratio", vol_ratio),
                ("rad", rad),
                ("log_vd", log_vd),
            ] {
                input(k, v);
            }
            r.push(BoundEntry::lower(
                "gaussian_location",
                gaussian_location_lb(n, d, rr, sigma, eps, vol_ratio, rad, log_vd)?,
                "private_gaussian_location",
                "risk",
            ));
            if rr == 1.0 && vol_ratio == 1.0 && rad == 1.0 && p.log_vd.is_none() {
                r.push(BoundEntry::lower(
                    "gaussian_location_unit_ball",
                    gaussian_location_unit_ball_lb(n, d, sigma, eps)?,
                    "private_gaussian_location_unit_ball",
                    "risk",
                ));
            }
        }
        BoundName::Bht => {
            let (tv, h2) = (need(&p.tv, "tv")?, need(&p.h2, "h2")?);
            input("tv", tv);
            input("h2", h2);
            let (lo, hi) = bht_sample_complexity(tv, h2, eps)?;
            r.push(BoundEntry::lower(
                "bht_lower",
                lo,
                "private_testing_lower",
                "sample_complexity",
            ));
            r.push(BoundEntry::upper(
                "bht_upper",
                hi,
                "private_testing_upper",
                "sample_complexity",
            ));
        }
        BoundName::VanTrees => {
            let (n, d, b, tr) = (
                need(&p.n, "n")?,
                need(&p.d, "d")?,
                need(&p.b, "b")?,
                need(&p.sup_trace, "sup_trace")?,
            );
            for (k, v) in [("n", n), ("d", d as f64), ("b", b), ("sup_trace", tr)] {
                input(k, v);
            }
            r.push(BoundEntry::lower(
                "van_trees",
                crate::fisher::van_trees_lb(n, eps, d, b, tr)?,
                "private_van_trees",
                "risk",
            ));
        }
    }
    r.validate()?;
    Ok(r)
}

/// One row of the summary table; `None` marks a cell with no known bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub problem: String,
    pub ub: Option<f64>,
    pub previous_lb: Option<f64>,
    pub lb: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Params {
    pub n: f64,
    pub d: usize,
    pub h: f64,
    pub beta: f64,
    pub sigma: f64,
    pub eps: f64,
    pub tv: f64,
    pub h2: f64,
}

/// The summary table of private minimax rates at one parameter point.
///
/// Entropy uses alphabet size `d`; testing uses `(tv, h2)`. Earlier bounds
/// that only hold for `ε ≤ 1` are left empty above that.
pub fn table1(p: &Table1Params) -> Result<Vec<Table1Row>> {
    let eps = p.eps;
    let small = eps <= 1.0;
    let dist_prev = {
        let em1 = eps.exp_m1();
        let base = (0.5 * eps).exp() / (p.n.sqrt() * em1);
        (base * (p.d as f64).powf(1.0 / p.h))
            .min(base.powf(1.0 - 1.0 / p.h))
            .min(1.0)
    };
    let hadamard = if (2.0..=100.0).contains(&p.h) {
        Some(hadamard_ub(p.n, p.d, p.h, eps)?)
    } else {
        None
    };
    let density_prev = small.then(|| (p.n * eps * eps).powf(-p.h * p.beta / (2.0 * p.beta + 2.0)));
    let (bht_lo, bht_hi) = bht_sample_complexity(p.tv, p.h2, eps)?;
    let bht_prev = small.then(|| 1.0 / (eps * eps * p.tv * p.tv));
    Ok(vec![
        Table1Row {
            problem: "entropy".into(),
            ub: None,
            previous_lb: None,
            lb: Some(entropy_estimation_lb(p.n, p.d, eps)?),
        },
        Table1Row {
            problem: "distribution_lh".into(),
            ub: hadamard,
            previous_lb: Some(dist_prev),
            lb: Some(distribution_estimation_lb(p.n, p.d, p.h, eps)?),
        },
        Table1Row {
            problem: "density_holder".into(),
            ub: None,
            previous_lb: density_prev,
            lb: Some(density_estimation_lb(p.n, p.beta, p.h, eps)?.rate),
        },
        Table1Row {
            problem: "gaussian_location".into(),
            ub: None,
            previous_lb: None,
            lb: Some(gaussian_location_unit_ball_lb(p.n, p.d, p.sigma, eps)?),
        },
        Table1Row {
            problem: "testing_sample_complexity".into(),
            ub: Some(bht_hi),
            previous_lb: bht_prev,
            lb: Some(bht_lo),
        },
    ])
}
