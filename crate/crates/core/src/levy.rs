//! Marginals of Brownian motion plus compound Poisson jumps in one
//! dimension.
//!
//! `p_t = e^{−λt} Σ_k (λt)^k/k! · g_t ⋆ f^{⋆k}` is evaluated by repeated
//! convolution with the series cut at `k_max`. The comparison process uses
//! the rearranged jump law `f*` with the same diffusion. Both series run
//! on the half-width grid of `f*` (the jump law enters as `f.refine(2)`),
//! so the two marginals share discretization error.

use statrs::function::gamma::{gamma_lr, ln_gamma};

use crate::convolution::{convolve, project};
use crate::density::{Grid1D, GridSpec, MASS_TOL};
use crate::error::{Error, Result};
use crate::information::{renyi_entropy, RenyiOrder};
use crate::rearrangement::rearrange_1d;
use crate::report::VerificationReport;
use crate::special::gaussian;

/// Poisson tail mass allowed beyond `k_max`.
pub const SERIES_TOL: f64 = 1e-8;
/// Largest series length tried by [`auto_k_max`].
pub const K_MAX_CAP: usize = 200;
/// Half-width of the gridded Gaussian factor, in standard deviations.
const GAUSS_SIGMAS: f64 = 8.0;

/// Brownian-plus-compound-Poisson process `a·B_t + Σ_{i ≤ N_t} Y_i` data.
#[derive(Debug, Clone, PartialEq)]
pub struct LevySpec {
    /// Variance of the Brownian part per unit time.
    pub a: f64,
    /// Jump rate.
    pub lambda: f64,
    pub jump_density: Grid1D,
    pub t: f64,
}

impl LevySpec {
    pub fn new(a: f64, lambda: f64, jump_density: Grid1D, t: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::BadParameter(format!("diffusion coefficient must be positive, got {a}")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::BadParameter(format!("jump rate must be nonnegative, got {lambda}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::BadParameter(format!("time must be positive, got {t}")));
        }
        let mass = crate::density::Density::mass(&jump_density);
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::BadParameter(format!("jump density has mass {mass}")));
        }
        Ok(Self { a, lambda, jump_density, t })
    }

    /// Same process observed at another time.
    pub fn at_time(&self, t: f64) -> Result<Self> {
        Self::new(self.a, self.lambda, self.jump_density.clone(), t)
    }

    /// Expected number of jumps `λt`.
    pub fn intensity(&self) -> f64 {
        self.lambda * self.t
    }

    /// Spacing of the working grid.
    pub fn working_dx(&self) -> f64 {
        self.jump_density.dx() / 2.0
    }
}

/// `P(N > k)` for `N ~ Poisson(mu)`.
pub fn poisson_tail(mu: f64, k: usize) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    gamma_lr(k as f64 + 1.0, mu)
}

/// Smallest `k` with `P(N > k) < SERIES_TOL`, capped at [`K_MAX_CAP`].
pub fn auto_k_max(mu: f64) -> Result<usize> {
    for k in 0..=K_MAX_CAP {
        if poisson_tail(mu, k) < SERIES_TOL {
            return Ok(k);
        }
    }
    Err(Error::TruncationInsufficient { k_max: K_MAX_CAP, tail: poisson_tail(mu, K_MAX_CAP), tol: SERIES_TOL })
}

/// Poisson weights for `k = 0..=k_max`, renormalized to sum to one.
pub fn poisson_weights(mu: f64, k_max: usize) -> Vec<f64> {
    if mu == 0.0 {
        let mut w = vec![0.0; k_max + 1];
        w[0] = 1.0;
        return w;
    }
    let raw: Vec<f64> =
        (0..=k_max).map(|k| (-mu + k as f64 * mu.ln() - ln_gamma(k as f64 + 1.0)).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn brownian_factor(spec: &LevySpec, dx: f64) -> Result<Grid1D> {
    let sigma = (spec.a * spec.t).sqrt();
    let half_cells = (GAUSS_SIGMAS * sigma / dx).ceil().max(1.0) as usize;
    let grid = GridSpec::new(-(half_cells as f64) * dx, dx, 2 * half_cells)?;
    gaussian(0.0, sigma, grid)
}

fn series(spec: &LevySpec, jump: &Grid1D, k_max: usize) -> Result<Grid1D> {
    let mu = spec.intensity();
    let tail = poisson_tail(mu, k_max);
    if tail >= SERIES_TOL {
        return Err(Error::TruncationInsufficient { k_max, tail, tol: SERIES_TOL });
    }
    let weights = poisson_weights(mu, k_max);
    let dx = jump.dx();
    let mut term = brownian_factor(spec, dx)?;
    let mut terms = Vec::with_capacity(k_max + 1);
    for (k, &w) in weights.iter().enumerate() {
        if k > 0 {
            term = convolve(&term, jump)?;
        }
        terms.push((w, term.clone()));
    }
    let lo = terms.iter().map(|(_, g)| g.x0()).fold(f64::INFINITY, f64::min);
    let hi = terms.iter().map(|(_, g)| g.x_end()).fold(f64::NEG_INFINITY, f64::max);
    let cells = ((hi - lo) / dx).ceil() as usize + 1;
    let common = GridSpec::new(lo, dx, cells)?;
    let mut out = vec![0.0; cells];
    for (w, g) in &terms {
        if *w == 0.0 {
            continue;
        }
        // Terms on the common lattice are copied; misaligned ones are projected.
        let p = g.pad_to(lo, cells).unwrap_or_else(|_| project(g, common));
        for (o, v) in out.iter_mut().zip(p.values()) {
            *o += w * v;
        }
    }
    Grid1D::new(lo, dx, out)?.normalize()
}

/// Density of `X_t` from the series truncated at `k_max`.
pub fn marginal_density(spec: &LevySpec, k_max: usize) -> Result<Grid1D> {
    series(spec, &spec.jump_density.refine(2), k_max)
}

/// Density of `Z_t`, the same series with jump law `f*`.
pub fn rearranged_marginal(spec: &LevySpec, k_max: usize) -> Result<Grid1D> {
    series(spec, &rearrange_1d(&spec.jump_density), k_max)
}

fn tolerance(spec: &LevySpec, k_max: usize) -> f64 {
    10.0 * spec.working_dx() * k_max.max(1) as f64
}

/// `h_p(X_t) ≥ h_p(Z_t)` for each order, with `k_max` chosen
/// automatically.
pub fn check_levy_dominance(spec: &LevySpec, orders: &[RenyiOrder]) -> Result<Vec<VerificationReport>> {
    let k_max = auto_k_max(spec.intensity())?;
    let x = marginal_density(spec, k_max)?;
    let z = rearranged_marginal(spec, k_max)?;
    let tol = tolerance(spec, k_max);
    orders
        .iter()
        .map(|&order| {
            let lhs = renyi_entropy(&x, order)?;
            let rhs = renyi_entropy(&z, order)?;
            Ok(VerificationReport::at_least("levy_dominance", lhs, rhs, tol)
                .with_param("order", order.to_string())
                .with_param("a", spec.a)
                .with_param("lambda", spec.lambda)
                .with_param("t", spec.t)
                .with_param("k_max", k_max))
        })
        .collect()
}

/// Joint-entropy form over observation times `0 < t_1 < … < t_m`:
/// `Σ_i h(X_{t_i − t_{i−1}}) ≥ Σ_i h(Z_{t_i − t_{i−1}})`, the increments being
/// independent copies of the process at the elapsed times.
pub fn check_levy_increments(spec: &LevySpec, times: &[f64]) -> Result<VerificationReport> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) || !(times[0] > 0.0) {
        return Err(Error::BadParameter("times must be positive and strictly increasing".into()));
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut tol = 0.0;
    let mut prev = 0.0;
    for &t in times {
        let step = spec.at_time(t - prev)?;
        let k_max = auto_k_max(step.intensity())?;
        lhs += renyi_entropy(&marginal_density(&step, k_max)?, RenyiOrder::One)?;
        rhs += renyi_entropy(&rearranged_marginal(&step, k_max)?, RenyiOrder::One)?;
        tol += tolerance(&step, k_max);
        prev = t;
    }
    Ok(VerificationReport::at_least("levy_increments", lhs, rhs, tol).with_param("times", times.len()))
}
