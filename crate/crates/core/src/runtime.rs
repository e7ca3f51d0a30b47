//! Light-cone minimum times, the optimal Schatten exponent, and runtime lower bounds.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Unstated constants of the light cones; all default to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightConeConstants {
    pub c_pnorm: f64,
    pub c_op: f64,
    pub v: f64,
    pub beta_op: f64,
    pub c_frob: f64,
}

impl Default for LightConeConstants {
    fn default() -> Self {
        Self { c_pnorm: 1.0, c_op: 1.0, v: 1.0, beta_op: 1.0, c_frob: 1.0 }
    }
}

impl LightConeConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [self.c_pnorm, self.c_op, self.v, self.beta_op, self.c_frob];
        if all.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::Domain(format!("light-cone constants must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// A minimum evolution time and the branch of the light cone it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightConeTime {
    pub time: f64,
    pub branch: &'static str,
    /// The branch only gives the large-distance behaviour.
    pub asymptotic: bool,
}

impl LightConeTime {
    fn exact(time: f64, branch: &'static str) -> Self {
        Self { time, branch, asymptotic: false }
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}

fn check_distance(r: f64) -> Result<()> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(Error::Domain(format!("distance must exceed 1, got {r}")));
    }
    Ok(())
}

/// Distance dependence of the p-norm light cone.
pub fn r_of_r(r: f64, alpha: f64) -> Result<f64> {
    check_distance(r)?;
    if !(alpha > 1.5) {
        return Err(Error::OutOfValidity(format!("p-norm light cone needs α > 3/2, got {alpha}")));
    }
    Ok(if alpha < 2.5 {
        r.powf(alpha - 1.5)
    } else if alpha == 2.5 {
        r / r.ln().powf(1.5)
    } else {
        r
    })
}

/// `δ R(r) / (√p C)`; valid for `p ≥ 2`.
pub fn pnorm_light_cone_time(r: f64, alpha: f64, delta: f64, p: f64, c: &LightConeConstants) -> Result<LightConeTime> {
    if !(p >= 2.0) {
        return Err(Error::OutOfValidity(format!("p-norm light cone needs p >= 2, got {p}")));
    }
    check_positive("δ", delta)?;
    c.validate()?;
    let time = if p.is_infinite() { 0.0 } else { delta * r_of_r(r, alpha)? / (p.sqrt() * c.c_pnorm) };
    Ok(LightConeTime::exact(time, "pnorm"))
}

/// Operator-norm light cone in one dimension. The `α > 3` branch returns the
/// linear-cone time `r/v`, flagged asymptotic.
pub fn opnorm_light_cone_time(r: f64, alpha: f64, delta: f64, c: &LightConeConstants) -> Result<LightConeTime> {
    if r < 1.0 || !r.is_finite() {
        return Err(Error::Domain(format!("distance must be >= 1, got {r}")));
    }
    check_positive("δ", delta)?;
    c.validate()?;
    if !(alpha > 1.0) {
        return Err(Error::OutOfValidity(format!("operator-norm light cone needs α > 1, got {alpha}")));
    }
    if alpha == 2.0 || alpha == 3.0 {
        return Err(Error::OutOfValidity(format!("α = {alpha} is a branch boundary of the operator-norm light cone")));
    }
    Ok(if alpha < 2.0 {
        LightConeTime::exact(alpha * r.ln() + delta.ln(), "log")
    } else if alpha < 3.0 {
        LightConeTime::exact(c.c_op * r.powf((alpha - 2.0) / c.beta_op) * delta.powf(1.0 / c.beta_op), "power")
    } else {
        LightConeTime { time: r / c.v, branch: "linear", asymptotic: true }
    })
}

/// Frobenius light cone `δ² C g(r)` in one dimension.
pub fn frobenius_light_cone_time(r: f64, alpha: f64, delta: f64, c: &LightConeConstants) -> Result<LightConeTime> {
    check_distance(r)?;
    check_positive("δ", delta)?;
    c.validate()?;
    if !(alpha > 1.0) {
        return Err(Error::OutOfValidity(format!("Frobenius light cone needs α > 1, got {alpha}")));
    }
    let (g, branch) = if alpha < 2.0 {
        (r.powf(alpha - 1.0), "power")
    } else if alpha == 2.0 {
        (r / r.ln().powi(2), "log2")
    } else {
        (r / r.ln(), "log")
    };
    Ok(LightConeTime::exact(delta * delta * c.c_frob * g, branch))
}

fn check_k(sites: usize, k: usize) -> Result<()> {
    if sites < 2 || k > sites - 1 {
        return Err(Error::Domain(format!("need 0 <= k <= L-1, got L = {sites}, k = {k}")));
    }
    Ok(())
}

/// `max{2, 2 ln 2 (L−k−1)}`.
pub fn optimal_p(sites: usize, k: usize) -> Result<f64> {
    check_k(sites, k)?;
    Ok((2.0 * LN_2 * (sites - k - 1) as f64).max(2.0))
}

/// `log₂` of `2^{(k−L+1)/p}/√p`, the quantity maximized by the optimal p.
pub fn log2_objective(sites: usize, k: usize, p: f64) -> f64 {
    (k as f64 - sites as f64 + 1.0) / p - p.ln() / (2.0 * LN_2)
}

/// Uniform grid of exponents `p_min, p_min + step, …, ≤ p_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PGrid {
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
}

impl PGrid {
    pub fn new(p_min: f64, p_max: f64, step: f64) -> Result<Self> {
        if !(p_min >= 2.0) || !(p_max >= p_min) || !(step > 0.0) {
            return Err(Error::Domain(format!("invalid grid [{p_min}, {p_max}] step {step}")));
        }
        Ok(Self { p_min, p_max, step })
    }

    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let n = ((self.p_max - self.p_min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(move |j| self.p_min + j as f64 * self.step)
    }
}

/// Brute-force argmax of the objective over `grid`; ties go to the smaller p.
pub fn optimal_p_oracle(sites: usize, k: usize, grid: &PGrid) -> Result<f64> {
    check_k(sites, k)?;
    let mut best = (f64::NEG_INFINITY, grid.p_min);
    for p in grid.points() {
        let h = log2_objective(sites, k, p);
        if h > best.0 {
            best = (h, p);
        }
    }
    Ok(best.1)
}

/// Two-stage oracle: a 0.01 grid over `[2, max(200, 2(L−k))]`, then a 1e-5 grid
/// within ±0.02 of the coarse argmax.
pub fn optimal_p_oracle_refined(sites: usize, k: usize) -> Result<f64> {
    check_k(sites, k)?;
    let p_max = (2.0 * (sites - k) as f64).max(200.0);
    let coarse = optimal_p_oracle(sites, k, &PGrid::new(2.0, p_max, 0.01)?)?;
    let lo = (coarse - 0.02).max(2.0);
    optimal_p_oracle(sites, k, &PGrid::new(lo, coarse + 0.02, 1e-5)?)
}

/// Inputs to [`runtime_lower_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuntimeQuery {
    pub sites: usize,
    /// Transfer distance; `L` by default.
    pub r: f64,
    /// `|𝒮| = 2^k`.
    pub k: usize,
    pub alpha: f64,
    pub constants: LightConeConstants,
}

impl RuntimeQuery {
    pub fn new(sites: usize, k: usize, alpha: f64) -> Self {
        Self { sites, r: sites as f64, k, alpha, constants: LightConeConstants::default() }
    }
}

/// Minimum transfer time from each light cone fed with the robustness bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeBounds {
    pub p_star: f64,
    pub pnorm: Result<LightConeTime>,
    pub opnorm: Result<LightConeTime>,
    pub frobenius: Result<LightConeTime>,
}

impl RuntimeBounds {
    /// Largest time among the branches that evaluated.
    pub fn best(&self) -> Option<f64> {
        [&self.pnorm, &self.opnorm, &self.frobenius]
            .into_iter()
            .filter_map(|t| t.as_ref().ok().map(|t| t.time))
            .reduce(f64::max)
    }
}

/// Evaluates each light cone at the smallest commutator norm allowed for a
/// `2^k`-robust protocol. Branches outside their validity range carry their error.
pub fn runtime_lower_bound(q: &RuntimeQuery) -> Result<RuntimeBounds> {
    check_k(q.sites, q.k)?;
    check_positive("α", q.alpha)?;
    q.constants.validate()?;
    let excess = (q.sites - q.k - 1) as f64;
    // closed form only where the optimum is interior
    let p_star = if excess >= 1.0 / LN_2 { optimal_p(q.sites, q.k)? } else { optimal_p_oracle_refined(q.sites, q.k)? };
    let delta_p = 2.0 * (-excess / p_star).exp2();
    let delta_frob = 2.0 * (-excess / 2.0).exp2();
    Ok(RuntimeBounds {
        p_star,
        pnorm: pnorm_light_cone_time(q.r, q.alpha, delta_p, p_star, &q.constants),
        opnorm: opnorm_light_cone_time(q.r, q.alpha, 2.0, &q.constants),
        frobenius: frobenius_light_cone_time(q.r, q.alpha, delta_frob, &q.constants),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Domain("slope needs at least two paired points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("log-log slope needs positive values".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
