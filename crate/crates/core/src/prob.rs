//! Finite distributions, channels and exact f-divergences.
//!
//! All divergences use the measure-theoretic conventions: a `0/0` term
//! contributes nothing, and mass of `p` on a point where `q` vanishes makes
//! KL and χ² equal to `+∞` (a value, not an error).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::quad;

/// Largest drift of the total mass from 1 that construction will repair.
pub const MAX_MASS_DRIFT: f64 = 1e-9;

/// Absolute tolerance used by the hockey-stick integral representations.
pub const QUAD_TOL: f64 = 1e-8;

/// A probability vector on `{0, .., dim-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector {
    mass: Vec<f64>,
}

impl ProbVector {
    /// Validates and renormalizes `mass`.
    ///
    /// Entries must be finite and non-negative and sum to 1 up to
    /// [`MAX_MASS_DRIFT`]; smaller drift is divided out unless it is at the
    /// level of summation roundoff.
    pub fn new(mut mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidDistribution("empty probability vector".into()));
        }
        for (i, &m) in mass.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::InvalidDistribution(format!("entry {i} is not finite")));
            }
            if m < 0.0 {
                return Err(Error::InvalidDistribution(format!("entry {i} is negative ({m})")));
            }
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MAX_MASS_DRIFT {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}, not 1")));
        }
        if (total - 1.0).abs() > mass.len() as f64 * f64::EPSILON {
            mass.iter_mut().for_each(|m| *m /= total);
        }
        Ok(ProbVector { mass })
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        Ok(ProbVector {
            mass: vec![1.0 / dim as f64; dim],
        })
    }

    pub fn point_mass(dim: usize, at: usize) -> Result<Self> {
        if at >= dim {
            return Err(Error::param("at", format!("{at} out of range for dim {dim}")));
        }
        let mut mass = vec![0.0; dim];
        mass[at] = 1.0;
        Ok(ProbVector { mass })
    }

    /// `Bernoulli(p)` as the vector `(1 - p, p)`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", format!("{p} not in [0, 1]")));
        }
        Ok(ProbVector { mass: vec![1.0 - p, p] })
    }

    /// Mass `alpha` on `x` and `1 - alpha` on `y`, zero elsewhere.
    pub fn two_point(dim: usize, x: usize, y: usize, alpha: f64) -> Result<Self> {
        if x >= dim || y >= dim || x == y {
            return Err(Error::param("support", "need two distinct in-range symbols"));
        }
        let mut mass = vec![0.0; dim];
        mass[x] = alpha;
        mass[y] = 1.0 - alpha;
        ProbVector::new(mass)
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mass
    }

    pub fn get(&self, i: usize) -> f64 {
        self.mass[i]
    }

    pub fn has_full_support(&self) -> bool {
        self.mass.iter().all(|&m| m > 0.0)
    }

    /// Product distribution, indexed `i * other.dim() + j`.
    pub fn tensor(&self, other: &ProbVector) -> ProbVector {
        let mass = self
            .mass
            .iter()
            .flat_map(|&a| other.mass.iter().map(move |&b| a * b))
            .collect();
        ProbVector { mass }
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ProbVector::new(v)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Self {
        p.mass
    }
}

/// A row-stochastic kernel from `inputs()` symbols to `outputs()` symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Channel {
    rows: Vec<ProbVector>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(x, r)| ProbVector::new(r).map_err(|e| Error::InvalidChannel(format!("row {x}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Channel::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<ProbVector>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidChannel("channel has no rows".into()));
        };
        let width = first.dim();
        if let Some((x, r)) = rows.iter().enumerate().find(|(_, r)| r.dim() != width) {
            return Err(Error::InvalidChannel(format!(
                "row {x} has {} outputs, row 0 has {width}",
                r.dim()
            )));
        }
        Ok(Channel { rows })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        (0..dim)
            .map(|x| ProbVector::point_mass(dim, x))
            .collect::<Result<Vec<_>>>()
            .and_then(Channel::from_rows)
    }

    /// Every input mapped to the same output distribution.
    pub fn constant(inputs: usize, row: ProbVector) -> Result<Self> {
        Channel::from_rows(vec![row; inputs])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn row(&self, x: usize) -> &ProbVector {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[ProbVector] {
        &self.rows
    }

    pub fn entry(&self, x: usize, z: usize) -> f64 {
        self.rows[x].get(z)
    }

    /// Convex combination `(1 - lambda) K + lambda U` with `U` uniform on outputs.
    pub fn mix_with_uniform(&self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param("lambda", format!("{lambda} not in [0, 1]")));
        }
        let u = 1.0 / self.outputs() as f64;
        let rows = self
            .rows
            .iter()
            .map(|r| r.as_slice().iter().map(|&k| (1.0 - lambda) * k + lambda * u).collect())
            .collect();
        Channel::new(rows)
    }

    /// Independent composition `K1 ⊗ K2`; inputs and outputs are indexed
    /// row-major like [`ProbVector::tensor`].
    pub fn tensor(&self, other: &Channel) -> Channel {
        let rows = self
            .rows
            .iter()
            .flat_map(|a| other.rows.iter().map(move |b| a.tensor(b)))
            .collect();
        Channel { rows }
    }

    /// Restriction to the two inputs `x` and `y` (in that order).
    pub fn restrict(&self, x: usize, y: usize) -> Channel {
        Channel {
            rows: vec![self.rows[x].clone(), self.rows[y].clone()],
        }
    }
}

impl TryFrom<Vec<Vec<f64>>> for Channel {
    type Error = Error;
    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Channel::new(v)
    }
}

impl From<Channel> for Vec<Vec<f64>> {
    fn from(k: Channel) -> Self {
        k.rows.into_iter().map(Vec::from).collect()
    }
}

/// Output distribution `pK`.
pub fn push_forward(p: &ProbVector, k: &Channel) -> Result<ProbVector> {
    ensure_dim(k.inputs(), p.dim())?;
    let mut out = vec![0.0; k.outputs()];
    for (px, row) in p.as_slice().iter().zip(k.rows()) {
        if *px == 0.0 {
            continue;
        }
        for (o, kz) in out.iter_mut().zip(row.as_slice()) {
            *o += px * kz;
        }
    }
    ProbVector::new(out)
}

/// The f-divergences supported throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivergenceKind {
    Kl,
    Tv,
    ChiSquared,
    SquaredHellinger,
    /// `E_γ` with `γ ≥ 1`; build through [`DivergenceKind::hockey_stick`].
    HockeyStick(f64),
}

impl DivergenceKind {
    pub fn hockey_stick(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(DivergenceKind::HockeyStick(gamma))
    }

    /// Strictly convex generators: divergence is zero only for `p == q`.
    pub fn is_strictly_convex(self) -> bool {
        matches!(
            self,
            DivergenceKind::Kl | DivergenceKind::ChiSquared | DivergenceKind::SquaredHellinger
        )
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceKind::Kl => f.write_str("kl"),
            DivergenceKind::Tv => f.write_str("tv"),
            DivergenceKind::ChiSquared => f.write_str("chi2"),
            DivergenceKind::SquaredHellinger => f.write_str("h2"),
            DivergenceKind::HockeyStick(g) => write!(f, "eg:{g}"),
        }
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(DivergenceKind::Kl),
            "tv" => Ok(DivergenceKind::Tv),
            "chi2" | "chi_squared" => Ok(DivergenceKind::ChiSquared),
            "h2" | "hellinger" | "squared_hellinger" => Ok(DivergenceKind::SquaredHellinger),
            other => match other.strip_prefix("eg:") {
                Some(g) => g
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("hockey-stick parameter: {e}")))
                    .and_then(DivergenceKind::hockey_stick),
                None => Err(Error::Parse(format!("unknown divergence `{s}`"))),
            },
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma >= 1.0 && !gamma.is_nan() {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("{gamma} < 1")))
    }
}

/// `D_f(p ‖ q)` for the given kind.
pub fn divergence(kind: DivergenceKind, p: &ProbVector, q: &ProbVector) -> Result<f64> {
    ensure_dim(p.dim(), q.dim())?;
    if let DivergenceKind::HockeyStick(g) = kind {
        check_gamma(g)?;
    }
    Ok(divergence_slices(kind, p.as_slice(), q.as_slice()))
}

/// Unchecked divergence on raw slices of equal length.
pub(crate) fn divergence_slices(kind: DivergenceKind, p: &[f64], q: &[f64]) -> f64 {
    match kind {
        DivergenceKind::Kl => kl(p, q),
        DivergenceKind::Tv => 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>(),
        DivergenceKind::ChiSquared => chi2(p, q),
        DivergenceKind::SquaredHellinger => p
            .iter()
            .zip(q)
            .map(|(a, b)| {
                let d = a.sqrt() - b.sqrt();
                d * d
            })
            .sum(),
        DivergenceKind::HockeyStick(g) => p.iter().zip(q).map(|(a, b)| (a - g * b).max(0.0)).sum(),
    }
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return f64::INFINITY;
        }
        acc += a * (a / b).ln();
    }
    acc.max(0.0)
}

fn chi2(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if b == 0.0 {
            if a > 0.0 {
                return f64::INFINITY;
            }
            continue;
        }
        let d = a - b;
        acc += d * d / b;
    }
    acc
}

/// `E_γ(p ‖ q) = Σ (p − γ q)_+`.
pub fn hockey_stick(p: &ProbVector, q: &ProbVector, gamma: f64) -> Result<f64> {
    divergence(DivergenceKind::HockeyStick(gamma), p, q)
}

/// The map `γ ↦ E_γ(p ‖ q)` on `[1, ∞)`, stored as its breakpoints.
///
/// Symbols with `q = 0 < p` contribute a constant `unbounded_mass` for every
/// `γ`; all other terms vanish beyond the largest finite likelihood ratio.
#[derive(Debug, Clone)]
pub struct HockeyStickCurve {
    /// `(p/q, p, q)` for symbols with finite ratio above 1, ascending in ratio.
    terms: Vec<(f64, f64, f64)>,
    unbounded_mass: f64,
}

impl HockeyStickCurve {
    pub fn new(p: &ProbVector, q: &ProbVector) -> Result<Self> {
        ensure_dim(p.dim(), q.dim())?;
        Ok(Self::from_slices(p.as_slice(), q.as_slice()))
    }

    fn from_slices(p: &[f64], q: &[f64]) -> Self {
        let mut terms = Vec::new();
        let mut unbounded_mass = 0.0;
        for (&a, &b) in p.iter().zip(q) {
            if a == 0.0 {
                continue;
            }
            if b == 0.0 {
                unbounded_mass += a;
            } else if a > b {
                terms.push((a / b, a, b));
            }
        }
        terms.sort_by(|x, y| x.0.total_cmp(&y.0));
        HockeyStickCurve { terms, unbounded_mass }
    }

    /// Largest finite likelihood ratio above 1, or 1 if there is none.
    pub fn max_finite_ratio(&self) -> f64 {
        self.terms.last().map_or(1.0, |t| t.0)
    }

    pub fn unbounded_mass(&self) -> f64 {
        self.unbounded_mass
    }

    /// Part of `E_γ` that vanishes beyond [`Self::max_finite_ratio`].
    pub fn eval_finite(&self, gamma: f64) -> f64 {
        self.terms
            .iter()
            .rev()
            .take_while(|t| t.0 > gamma)
            .map(|&(_, a, b)| a - gamma * b)
            .sum()
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        self.unbounded_mass + self.eval_finite(gamma)
    }

    /// Knots `1 = r_0 < r_1 < ... < r_max` where the finite part changes slope.
    fn knots(&self) -> Vec<f64> {
        let mut k = vec![1.0];
        for t in &self.terms {
            if t.0 > *k.last().unwrap() {
                k.push(t.0);
            }
        }
        k
    }

    /// `∫_1^∞ E_γ^{finite}(γ) w(γ) dγ`, truncated exactly at the largest ratio.
    fn integrate_finite<W: Fn(f64) -> f64>(&self, weight: W) -> f64 {
        let knots = self.knots();
        quad::piecewise_simpson(|g| self.eval_finite(g) * weight(g), &knots, QUAD_TOL)
    }
}

/// `H²(p, q)` through `½ ∫_1^∞ [E_γ(p‖q) + E_γ(q‖p)] γ^{-3/2} dγ`.
pub fn hellinger_via_eg_quadrature(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    let pq = HockeyStickCurve::new(p, q)?;
    let qp = HockeyStickCurve::new(q, p)?;
    let w = |g: f64| g.powf(-1.5);
    // ∫_1^∞ γ^{-3/2} dγ = 2, so a constant tail of mass m contributes m.
    let tails = pq.unbounded_mass + qp.unbounded_mass;
    Ok(0.5 * (pq.integrate_finite(w) + qp.integrate_finite(w)) + tails)
}

/// `χ²(p ‖ q)` through `2 ∫_1^∞ [E_γ(p‖q) + γ^{-3} E_γ(q‖p)] dγ`.
///
/// Returns `+∞` without integrating when `p` charges a point `q` does not.
pub fn chi2_via_eg_quadrature(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    let pq = HockeyStickCurve::new(p, q)?;
    if pq.unbounded_mass > 0.0 {
        return Ok(f64::INFINITY);
    }
    let qp = HockeyStickCurve::new(q, p)?;
    // 2 ∫_1^∞ γ^{-3} dγ = 1.
    let tail = qp.unbounded_mass;
    Ok(2.0 * (pq.integrate_finite(|_| 1.0) + qp.integrate_finite(|g| g.powi(-3))) + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    fn bsc() -> Channel {
        Channel::new(vec![vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap()
    }

    #[test]
    fn construction_renormalizes_small_drift() {
        let p = ProbVector::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        assert_abs_diff_eq!(p.as_slice().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(ProbVector::new(vec![0.5, 0.5 + 1e-8]).is_err());
        assert!(ProbVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        assert!(Channel::new(vec![vec![1.0], vec![0.5, 0.5]]).is_err());
    }

    #[test]
    fn push_forward_examples() {
        let p = pv(&[0.3, 0.2, 0.5]);
        assert_eq!(push_forward(&p, &Channel::identity(3).unwrap()).unwrap(), p);
        assert_eq!(
            push_forward(&pv(&[1.0, 0.0]), &bsc()).unwrap().as_slice(),
            &[0.75, 0.25]
        );
        assert_eq!(push_forward(&pv(&[0.5, 0.5]), &bsc()).unwrap().as_slice(), &[0.5, 0.5]);
        assert!(matches!(
            push_forward(&p, &bsc()),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn divergence_examples() {
        let p = pv(&[0.9, 0.1]);
        let q = pv(&[0.1, 0.9]);
        assert_abs_diff_eq!(divergence(DivergenceKind::Tv, &p, &q).unwrap(), 0.8, epsilon = 1e-15);
        let h2 = (0.9f64.sqrt() - 0.1f64.sqrt()).powi(2) * 2.0;
        assert_abs_diff_eq!(h2, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(
            divergence(DivergenceKind::SquaredHellinger, &p, &q).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        let chi = divergence(DivergenceKind::ChiSquared, &pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap();
        assert_abs_diff_eq!(chi, 1.0, epsilon = 1e-15);
        assert_eq!(divergence(DivergenceKind::Kl, &p, &p).unwrap(), 0.0);
    }

    #[test]
    fn support_violation_is_infinite() {
        let p = pv(&[0.5, 0.5]);
        let q = pv(&[1.0, 0.0]);
        assert_eq!(divergence(DivergenceKind::Kl, &p, &q).unwrap(), f64::INFINITY);
        assert_eq!(divergence(DivergenceKind::ChiSquared, &p, &q).unwrap(), f64::INFINITY);
        // 0 log 0 convention in the other direction.
        assert!(divergence(DivergenceKind::Kl, &q, &p).unwrap().is_finite());
        assert_eq!(chi2_via_eg_quadrature(&p, &q).unwrap(), f64::INFINITY);
    }

    #[test]
    fn hockey_stick_examples() {
        let p = pv(&[0.75, 0.25]);
        let q = pv(&[0.25, 0.75]);
        assert_abs_diff_eq!(
            hockey_stick(&p, &q, 1.0).unwrap(),
            divergence(DivergenceKind::Tv, &p, &q).unwrap(),
            epsilon = 1e-15
        );
        assert_eq!(hockey_stick(&p, &p, 2.5).unwrap(), 0.0);
        assert_eq!(hockey_stick(&p, &q, 3.0).unwrap(), 0.0);
        assert!(hockey_stick(&p, &q, 0.5).is_err());
        assert!(DivergenceKind::hockey_stick(0.99).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let p = pv(&[0.9, 0.1]);
        let q = pv(&[0.1, 0.9]);
        assert_eq!(hellinger_via_eg_quadrature(&p, &p).unwrap(), 0.0);
        assert_abs_diff_eq!(hellinger_via_eg_quadrature(&p, &q).unwrap(), 0.8, epsilon = 1e-6);
        let a = pv(&[0.75, 0.25]);
        let b = pv(&[0.25, 0.75]);
        let closed = divergence(DivergenceKind::SquaredHellinger, &a, &b).unwrap();
        assert_abs_diff_eq!(hellinger_via_eg_quadrature(&a, &b).unwrap(), closed, epsilon = 1e-6);

        assert_eq!(chi2_via_eg_quadrature(&p, &p).unwrap(), 0.0);
        let half = pv(&[0.5, 0.5]);
        let closed = divergence(DivergenceKind::ChiSquared, &a, &half).unwrap();
        assert_abs_diff_eq!(chi2_via_eg_quadrature(&a, &half).unwrap(), closed, epsilon = 1e-6);
        assert_abs_diff_eq!(
            chi2_via_eg_quadrature(&pv(&[1.0, 0.0]), &half).unwrap(),
            1.0,
            epsilon = 1e-6
        );
    }

    #[test]
    fn disjoint_supports_hellinger_is_two() {
        let p = pv(&[1.0, 0.0]);
        let q = pv(&[0.0, 1.0]);
        assert_abs_diff_eq!(hellinger_via_eg_quadrature(&p, &q).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("chi2".parse::<DivergenceKind>().unwrap(), DivergenceKind::ChiSquared);
        assert_eq!(
            "eg:2".parse::<DivergenceKind>().unwrap(),
            DivergenceKind::HockeyStick(2.0)
        );
        assert!("eg:0.5".parse::<DivergenceKind>().is_err());
        assert!("js".parse::<DivergenceKind>().is_err());
    }

    #[test]
    fn tensor_products() {
        let p = pv(&[0.2, 0.8]);
        let q = pv(&[0.5, 0.25, 0.25]);
        let pq = p.tensor(&q);
        assert_eq!(pq.dim(), 6);
        assert_abs_diff_eq!(pq.get(4), 0.8 * 0.25);
        let k = bsc().tensor(&Channel::identity(3).unwrap());
        let out = push_forward(&pq, &k).unwrap();
        let expected = push_forward(&p, &bsc()).unwrap().tensor(&q);
        for (a, b) in out.as_slice().iter().zip(expected.as_slice()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    fn arb_dist(dim: usize) -> impl Strategy<Value = ProbVector> {
        prop::collection::vec(0.0f64..1.0, dim).prop_filter_map("degenerate", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-3).then(|| ProbVector::new(w.iter().map(|x| x / s).collect()).unwrap())
        })
    }

    fn arb_triple() -> impl Strategy<Value = (ProbVector, ProbVector, Channel)> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(nx, nz)| {
            (
                arb_dist(nx),
                arb_dist(nx),
                prop::collection::vec(arb_dist(nz), nx).prop_map(|rows| Channel::from_rows(rows).unwrap()),
            )
        })
    }

    const KINDS: [DivergenceKind; 5] = [
        DivergenceKind::Kl,
        DivergenceKind::Tv,
        DivergenceKind::ChiSquared,
        DivergenceKind::SquaredHellinger,
        DivergenceKind::HockeyStick(1.7),
    ];

    proptest! {
        #[test]
        fn data_processing((p, q, k) in arb_triple()) {
            let pk = push_forward(&p, &k).unwrap();
            let qk = push_forward(&q, &k).unwrap();
            for kind in KINDS {
                let before = divergence(kind, &p, &q).unwrap();
                let after = divergence(kind, &pk, &qk).unwrap();
                prop_assert!(after <= before + 1e-10, "{kind}: {after} > {before}");
            }
        }

        #[test]
        fn classical_inequalities((p, q, _k) in arb_triple()) {
            let tv = divergence(DivergenceKind::Tv, &p, &q).unwrap();
            let kl = divergence(DivergenceKind::Kl, &p, &q).unwrap();
            let chi = divergence(DivergenceKind::ChiSquared, &p, &q).unwrap();
            let h2 = divergence(DivergenceKind::SquaredHellinger, &p, &q).unwrap();
            prop_assert!((0.0..=1.0).contains(&tv));
            prop_assert!((0.0..=2.0 + 1e-12).contains(&h2));
            prop_assert!(2.0 * tv * tv <= kl + 1e-10);
            prop_assert!(4.0 * tv * tv <= chi + 1e-10);
            prop_assert!(kl <= chi + 1e-10);
        }

        #[test]
        fn hockey_stick_curve_is_convex_and_nonincreasing((p, q, _k) in arb_triple()) {
            let curve = HockeyStickCurve::new(&p, &q).unwrap();
            let grid: Vec<f64> = (0..60).map(|i| 1.0 + 0.1 * i as f64).collect();
            let vals: Vec<f64> = grid.iter().map(|&g| hockey_stick(&p, &q, g).unwrap()).collect();
            for (g, v) in grid.iter().zip(&vals) {
                prop_assert!((curve.eval(*g) - v).abs() < 1e-12);
            }
            for w in vals.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-15);
            }
            for w in vals.windows(3) {
                prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-12);
            }
        }

        #[test]
        fn quadrature_matches_closed_forms((p, q, _k) in arb_triple()) {
            let h2 = divergence(DivergenceKind::SquaredHellinger, &p, &q).unwrap();
            prop_assert!((hellinger_via_eg_quadrature(&p, &q).unwrap() - h2).abs() < 1e-6);
            let chi = divergence(DivergenceKind::ChiSquared, &p, &q).unwrap();
            let via = chi2_via_eg_quadrature(&p, &q).unwrap();
            if chi.is_finite() {
                prop_assert!((via - chi).abs() < 1e-6 * chi.max(1.0));
            } else {
                prop_assert!(via.is_infinite());
            }
        }
    }
}
