//! Contraction coefficients of channels and closed-form LDP contraction
//! bounds.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::mechanisms::check_eps;
use crate::prob::{divergence, divergence_slices, push_forward, Channel, DivergenceKind, ProbVector};
use crate::report::{BoundEntry, BoundReport};

/// Input pairs whose divergence falls below this are skipped by the search.
pub const MIN_INPUT_DIVERGENCE: f64 = 1e-12;

/// `((e^ε − 1)/(e^ε + 1))²`, the KL/χ²/H² contraction bound under ε-LDP.
pub fn upsilon(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let t = (0.5 * eps).tanh();
    Ok(t * t)
}

/// `e^{−ε}(e^ε − 1)²`, the χ²-versus-TV constant under ε-LDP.
pub fn psi(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if eps == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(eps.exp_m1() * -(-eps).exp_m1())
}

/// `(e^ε − 1)/(e^ε + 1)`, the Dobrushin coefficient of binary randomized
/// response.
pub fn tv_contraction_bound(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok((0.5 * eps).tanh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Maximum pairwise row TV.
    ExactTv,
    /// Ratio maximized over the two-point grid.
    Grid,
    /// Limit of the ratio as `Q → P` along a two-point direction.
    LocalChi2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionEstimate {
    #[serde(with = "crate::report::real")]
    pub value: f64,
    pub witness_p: ProbVector,
    pub witness_q: ProbVector,
    pub method: Method,
}

/// Dobrushin coefficient `max_{x,x'} TV(K(·|x), K(·|x'))`.
pub fn eta_tv_exact(k: &Channel) -> ContractionEstimate {
    let mut best = (0.0, 0, 0);
    for x in 0..k.inputs() {
        for y in x + 1..k.inputs() {
            let tv = divergence_slices(DivergenceKind::Tv, k.row(x).as_slice(), k.row(y).as_slice());
            if tv > best.0 {
                best = (tv, x, y);
            }
        }
    }
    let (value, x, mut y) = best;
    if value == 0.0 && k.inputs() > 1 {
        y = 1;
    }
    let n = k.inputs();
    ContractionEstimate {
        value,
        witness_p: ProbVector::point_mass(n, x).expect("in range"),
        witness_q: ProbVector::point_mass(n, y.min(n - 1)).expect("in range"),
        method: Method::ExactTv,
    }
}

/// `η_χ²(P, K)`: the squared second singular value of
/// `[P(x)K(z|x)/√(P(x)·PK(z))]`.
pub fn eta_chi2_at(p: &ProbVector, k: &Channel) -> Result<f64> {
    ensure_dim(k.inputs(), p.dim())?;
    if let Some(x) = p.as_slice().iter().position(|&m| m <= 0.0) {
        return Err(Error::InvalidDistribution(format!("input symbol {x} has zero mass")));
    }
    let q = push_forward(p, k)?;
    let cols: Vec<usize> = (0..k.outputs()).filter(|&z| q.get(z) > 0.0).collect();
    let m = DMatrix::from_fn(k.inputs(), cols.len(), |x, j| {
        let z = cols[j];
        p.get(x).sqrt() * k.entry(x, z) / q.get(z).sqrt()
    });
    if m.nrows().min(m.ncols()) < 2 {
        return Ok(0.0);
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[1] * sv[1]).clamp(0.0, 1.0))
}

/// Grid points `j/(grid_n + 1)`, `j = 1..=grid_n`.
fn grid(grid_n: usize) -> Vec<f64> {
    (1..=grid_n).map(|j| j as f64 / (grid_n + 1) as f64).collect()
}

/// Per-point data of an output mixture `α K_x + (1 − α) K_y`.
struct Segment {
    mass: Vec<f64>,
    ln: Vec<f64>,
    sqrt: Vec<f64>,
}

impl Segment {
    fn new(a: &[f64], b: &[f64], alpha: f64) -> Self {
        let mass: Vec<f64> = a.iter().zip(b).map(|(u, v)| alpha * u + (1.0 - alpha) * v).collect();
        Segment {
            ln: mass.iter().map(|m| m.ln()).collect(),
            sqrt: mass.iter().map(|m| m.sqrt()).collect(),
            mass,
        }
    }
}

/// Output divergence `D(m_i ‖ m_j)` from precomputed segment data.
fn segment_divergence(kind: DivergenceKind, p: &Segment, q: &Segment) -> f64 {
    match kind {
        DivergenceKind::Kl => {
            let mut acc = 0.0;
            for z in 0..p.mass.len() {
                let a = p.mass[z];
                if a == 0.0 {
                    continue;
                }
                if q.mass[z] == 0.0 {
                    return f64::INFINITY;
                }
                acc += a * (p.ln[z] - q.ln[z]);
            }
            acc.max(0.0)
        }
        DivergenceKind::SquaredHellinger => p.sqrt.iter().zip(&q.sqrt).map(|(a, b)| (a - b) * (a - b)).sum(),
        _ => divergence_slices(kind, &p.mass, &q.mass),
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    pair: (usize, usize),
    alpha: f64,
    beta: f64,
    method: Method,
}

impl Best {
    fn offer(&mut self, other: Best) {
        if other.value > self.value {
            *self = other;
        }
    }
}

/// Brute-force estimate of `η_f(K)` over two-point input distributions.
///
/// For every input pair `(x, x')` and grid points `α ≠ β`, the ratio
/// `D(P_α K ‖ P_β K) / D(P_α ‖ P_β)` is evaluated with
/// `P_α = α δ_x + (1 − α) δ_{x'}`. For KL, χ² and H² the `β → α` limit, which
/// is the χ² coefficient of the restricted channel at `P_α`, is also probed.
/// The grid of `grid_n` points is contained in the grid of `2 grid_n + 1`
/// points, so the estimate is nondecreasing along that refinement.
pub fn eta_bruteforce(k: &Channel, kind: DivergenceKind, grid_n: usize) -> Result<ContractionEstimate> {
    if grid_n < 3 {
        return Err(Error::param("grid_n", format!("{grid_n} < 3")));
    }
    if k.inputs() < 2 {
        return Err(Error::InvalidChannel("contraction needs at least two inputs".into()));
    }
    if let DivergenceKind::HockeyStick(g) = kind {
        DivergenceKind::hockey_stick(g)?;
    }
    let pts = grid(grid_n);
    let input_div: Vec<f64> = pts
        .iter()
        .flat_map(|&a| {
            pts.iter()
                .map(move |&b| divergence_slices(kind, &[a, 1.0 - a], &[b, 1.0 - b]))
        })
        .collect();
    let local = kind.is_strictly_convex();

    let pairs: Vec<(usize, usize)> = (0..k.inputs())
        .flat_map(|x| (x + 1..k.inputs()).map(move |y| (x, y)))
        .collect();
    let results: Vec<Best> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let (rx, ry) = (k.row(x).as_slice(), k.row(y).as_slice());
            let segs: Vec<Segment> = pts.iter().map(|&a| Segment::new(rx, ry, a)).collect();
            let mut best = Best {
                value: 0.0,
                pair: (x, y),
                alpha: pts[0],
                beta: pts[1],
                method: Method::Grid,
            };
            for (i, si) in segs.iter().enumerate() {
                for (j, sj) in segs.iter().enumerate() {
                    let den = input_div[i * grid_n + j];
                    if i == j || den < MIN_INPUT_DIVERGENCE {
                        continue;
                    }
                    let ratio = segment_divergence(kind, si, sj) / den;
                    best.offer(Best {
                        value: ratio,
                        pair: (x, y),
                        alpha: pts[i],
                        beta: pts[j],
                        method: Method::Grid,
                    });
                }
                if local {
                    let a = pts[i];
                    let s: f64 = si
                        .mass
                        .iter()
                        .zip(rx.iter().zip(ry))
                        .filter(|(m, _)| **m > 0.0)
                        .map(|(m, (u, v))| (u - v) * (u - v) / m)
                        .sum();
                    let neighbor = if i + 1 < grid_n { pts[i + 1] } else { pts[i - 1] };
                    best.offer(Best {
                        value: a * (1.0 - a) * s,
                        pair: (x, y),
                        alpha: a,
                        beta: neighbor,
                        method: Method::LocalChi2,
                    });
                }
            }
            best
        })
        .collect();

    let mut best = results[0];
    for r in &results[1..] {
        best.offer(*r);
    }
    let (x, y) = best.pair;
    let n = k.inputs();
    Ok(ContractionEstimate {
        value: best.value.clamp(0.0, 1.0),
        witness_p: ProbVector::two_point(n, x, y, best.alpha)?,
        witness_q: ProbVector::two_point(n, x, y, best.beta)?,
        method: best.method,
    })
}

fn check_tv(tv: f64) -> Result<()> {
    if (0.0..=1.0).contains(&tv) {
        Ok(())
    } else {
        Err(Error::param("tv", format!("{tv} not in [0, 1]")))
    }
}

/// `Ψ_ε min{4 TV², TV}`, an upper bound on `χ²(PK ‖ QK)` for ε-LDP `K`.
pub fn chi2_tv_bound(eps: f64, tv: f64) -> Result<f64> {
    check_tv(tv)?;
    let m = (4.0 * tv * tv).min(tv);
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(psi(eps)? * m)
}

/// `min{4, e^{2ε}}(e^ε − 1)² TV²`, an earlier KL bound.
pub fn duchi_kl_bound(eps: f64, tv: f64) -> Result<f64> {
    check_eps(eps)?;
    check_tv(tv)?;
    if tv == 0.0 {
        return Ok(0.0);
    }
    let em1 = eps.exp_m1();
    Ok((2.0 * eps).exp().min(4.0) * em1 * em1 * tv * tv)
}

/// `4(e^{ε²} − 1) TV²`, an earlier χ² bound.
pub fn duchi_chi2_bound(eps: f64, tv: f64) -> Result<f64> {
    check_eps(eps)?;
    check_tv(tv)?;
    if tv == 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * (eps * eps).exp_m1() * tv * tv)
}

/// The two earlier bounds on output divergence in terms of input TV.
pub fn prior_art_bounds(eps: f64, tv: f64) -> Result<BoundReport> {
    let mut r = BoundReport::new([("eps", eps), ("tv", tv)]);
    r.push(BoundEntry::upper(
        "kl_prior",
        duchi_kl_bound(eps, tv)?,
        "kl_tv_prior",
        "output_kl",
    ));
    r.push(BoundEntry::upper(
        "chi2_prior",
        duchi_chi2_bound(eps, tv)?,
        "chi2_tv_prior",
        "output_chi2",
    ));
    Ok(r)
}

/// Constants and all output-divergence bounds at `(ε, TV)`.
pub fn bounds_report(eps: f64, tv: f64) -> Result<BoundReport> {
    let mut r = BoundReport::new([("eps", eps), ("tv", tv)]);
    r.push(BoundEntry::value("upsilon", upsilon(eps)?, "upsilon"));
    r.push(BoundEntry::value("psi", psi(eps)?, "psi"));
    r.push(BoundEntry::value(
        "eta_tv_bound",
        tv_contraction_bound(eps)?,
        "tv_contraction",
    ));
    r.push(BoundEntry::upper(
        "chi2_tv",
        chi2_tv_bound(eps, tv)?,
        "chi2_tv_contraction",
        "output_chi2",
    ));
    r.merge(prior_art_bounds(eps, tv)?);
    Ok(r)
}

/// `H²(1 − H²/4)` for the two rows of a binary-input channel; an upper
/// bound on `η_KL(K)`.
pub fn binary_input_kl_bound(k: &Channel) -> Result<f64> {
    if k.inputs() != 2 {
        return Err(Error::InvalidChannel(format!("expected 2 inputs, got {}", k.inputs())));
    }
    let h2 = divergence(DivergenceKind::SquaredHellinger, k.row(0), k.row(1))?;
    Ok((h2 * (1.0 - 0.25 * h2)).clamp(0.0, 1.0))
}

/// Largest TV between two distributions whose likelihood ratio is within
/// `[e^{−ε}, e^ε]`: `e^{−ε}(e^ε − 1)²/(e^ε − e^{−ε})`.
pub fn extremal_tv_under_ldp(eps: f64) -> Result<f64> {
    tv_contraction_bound(eps)
}
