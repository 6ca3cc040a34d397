//! Sum of two independent uniforms on centered balls.
//!
//! For radii `r1`, `r2` in dimension `n` the density of `X* + Y*` at radius
//! `r` is `g(r) / (B·V_n·r1ⁿ·r2ⁿ)` with `B = B((n+1)/2, ½)`, where `g` is
//! `min(r1, r2)ⁿ·B` inside `|r1 − r2|` and a sum of two spherical caps
//! beyond it. Everything is evaluated in log space so that large
//! dimensions neither overflow nor underflow.

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::convolution::convolve;
use crate::density::{Grid1D, MASS_TOL};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::report::VerificationReport;
use crate::special::ln_unit_ball_volume;

const CAP_ABS_TOL: f64 = 1e-14;
const CAP_REL_TOL: f64 = 1e-12;
const RADIAL_ABS_TOL: f64 = 1e-10;
/// Equal-width pieces used on the cap branch of the radial integrals.
const CAP_PIECES: usize = 16;

/// `ln B((n+1)/2, ½)`.
pub fn ln_cap_beta(n: usize) -> f64 {
    let a = 0.5 * (n as f64 + 1.0);
    ln_gamma(a) + ln_gamma(0.5) - ln_gamma(a + 0.5)
}

/// `ln ∫_θ^{π/2} cosⁿ x dx` for `θ ∈ [−π/2, π/2]`.
pub fn ln_cap_integral(theta: f64, n: usize) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let theta = theta.clamp(-FRAC_PI_2, FRAC_PI_2);
    if theta < 0.0 {
        let full = ln_cap_beta(n).exp();
        let upper = ln_cap_integral(-theta, n).exp();
        return (full - upper).ln();
    }
    let c = theta.cos();
    if theta >= FRAC_PI_2 || c <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    let lc = c.ln();
    // Factor out cosⁿθ so the integrand stays in [0, 1].
    let q = integrate(|x| (nf * (x.cos().max(0.0).ln() - lc)).exp(), theta, FRAC_PI_2, CAP_ABS_TOL, CAP_REL_TOL);
    nf * lc + q.value.ln()
}

/// Spherical-cap integral `h(θ) = ∫_θ^{π/2} cosⁿ x dx`.
pub fn cap_integral(theta: f64, n: usize) -> f64 {
    ln_cap_integral(theta, n).exp()
}

/// Radii of two centered balls in `ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPair {
    pub dim: usize,
    pub r1: f64,
    pub r2: f64,
}

impl BallPair {
    pub fn new(dim: usize, r1: f64, r2: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        for r in [r1, r2] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::BadParameter(format!("radius must be positive, got {r}")));
            }
        }
        Ok(Self { dim, r1, r2 })
    }

    /// Pair whose balls have the given volumes.
    pub fn from_volumes(dim: usize, v1: f64, v2: f64) -> Result<Self> {
        let n = dim as f64;
        let lv = ln_unit_ball_volume(dim);
        let radius = |v: f64| ((v.ln() - lv) / n).exp();
        Self::new(dim, radius(v1), radius(v2))
    }

    /// Same pair with `r1 ≤ r2`; all evaluation goes through this so that
    /// results are exactly symmetric in the radii.
    fn sorted(self) -> Self {
        if self.r1 <= self.r2 {
            self
        } else {
            Self { dim: self.dim, r1: self.r2, r2: self.r1 }
        }
    }

    /// `ln(B·V_n·r1ⁿ·r2ⁿ)`, the log of the normalizer of `g`.
    fn ln_normalizer(&self) -> f64 {
        let n = self.dim as f64;
        ln_cap_beta(self.dim) + ln_unit_ball_volume(self.dim) + n * (self.r1.ln() + self.r2.ln())
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Cap branch of `ln g(r)`, valid for `r > |r1 − r2|`.
fn ln_g_caps(bp: BallPair, r: f64) -> f64 {
    let n = bp.dim as f64;
    let (r1, r2) = (bp.r1, bp.r2);
    let arg1 = ((r * r - r2 * r2 + r1 * r1) / (2.0 * r * r1)).clamp(-1.0, 1.0);
    let arg2 = ((r * r - r1 * r1 + r2 * r2) / (2.0 * r * r2)).clamp(-1.0, 1.0);
    log_add(n * r1.ln() + ln_cap_integral(arg1.asin(), bp.dim), n * r2.ln() + ln_cap_integral(arg2.asin(), bp.dim))
}

/// Inner branch of `ln g(r)`, valid for `r ≤ |r1 − r2|`.
fn ln_g_inner(bp: BallPair) -> f64 {
    bp.dim as f64 * bp.r1.min(bp.r2).ln() + ln_cap_beta(bp.dim)
}

fn ln_g(bp: BallPair, r: f64) -> f64 {
    let bp = bp.sorted();
    if r >= bp.r1 + bp.r2 {
        f64::NEG_INFINITY
    } else if r <= bp.r2 - bp.r1 {
        ln_g_inner(bp)
    } else {
        ln_g_caps(bp, r)
    }
}

/// Density of `X* + Y*` at any point of norm `r`.
pub fn ball_sum_radial(bp: BallPair, r: f64) -> f64 {
    let bp = bp.sorted();
    (ln_g(bp, r) - bp.ln_normalizer()).exp()
}

/// `ln` of the radial weight `n·g(r)·r^{n−1} / (r1ⁿ r2ⁿ B)`, which is the
/// density of `‖X* + Y*‖`.
fn ln_radial_weight(bp: BallPair, r: f64) -> f64 {
    let n = bp.dim as f64;
    let lg = ln_g(bp, r);
    let lr = if bp.dim == 1 { 0.0 } else { (n - 1.0) * r.ln() };
    n.ln() + lg + lr - n * (bp.r1.ln() + bp.r2.ln()) - ln_cap_beta(bp.dim)
}

/// Breakpoints `0, |r1 − r2|`, then equal pieces up to `r1 + r2`.
fn radial_breaks(bp: BallPair) -> Vec<f64> {
    let bp = bp.sorted();
    let d = bp.r2 - bp.r1;
    let top = bp.r1 + bp.r2;
    let mut breaks = vec![0.0];
    if d > 0.0 {
        breaks.push(d);
    }
    for k in 1..=CAP_PIECES {
        breaks.push(d + (top - d) * k as f64 / CAP_PIECES as f64);
    }
    breaks
}

fn radial_integral(bp: BallPair, f: impl Fn(f64) -> f64) -> f64 {
    let breaks = radial_breaks(bp);
    let tol = RADIAL_ABS_TOL / breaks.len() as f64;
    breaks.windows(2).map(|w| integrate(&f, w[0], w[1], tol, 0.0).value).sum()
}

/// Total mass of the ball-sum density (should be 1).
pub fn ball_sum_mass(bp: BallPair) -> f64 {
    let bp = bp.sorted();
    radial_integral(bp, |r| ln_radial_weight(bp, r).exp())
}

/// Shannon entropy `h(X* + Y*)`.
pub fn ball_sum_entropy(bp: BallPair) -> f64 {
    let bp = bp.sorted();
    let inner = radial_integral(bp, |r| {
        let lw = ln_radial_weight(bp, r);
        if lw == f64::NEG_INFINITY {
            0.0
        } else {
            -ln_g(bp, r) * lw.exp()
        }
    });
    bp.ln_normalizer() + inner
}

/// One-dimensional lower bounds for uniforms of lengths `m1 ≤ m2`:
/// `h(X+Y) ≥ log m2 + m1/(2 m2) ≥ log(m2 + m1/2)`, evaluated at the
/// symmetric intervals where the first link is an equality.
pub fn dim1_entropy_bound(m1: f64, m2: f64) -> Result<Vec<VerificationReport>> {
    let (m1, m2) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
    let bp = BallPair::new(1, m1 / 2.0, m2 / 2.0)?;
    let h = ball_sum_entropy(bp);
    let first = m2.ln() + m1 / (2.0 * m2);
    let second = (m2 + 0.5 * m1).ln();
    Ok(vec![
        VerificationReport::at_least("dim1_entropy_bound", h, first, 1e-8).with_param("m1", m1).with_param("m2", m2),
        VerificationReport::at_least("dim1_log_bound", first, second, 1e-12).with_param("m1", m1).with_param("m2", m2),
    ])
}

/// Residual EPI gap for uniforms on balls of radii `√λ·b1`, `√(1−λ)·b2` in
/// dimension `m`, after removing the explicit concavity term (zero when
/// `b1 = b2`).
pub fn epi_gap_balls(m: usize, b1: f64, b2: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::BadParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let bp = BallPair::new(m, lambda.sqrt() * b1, (1.0 - lambda).sqrt() * b2)?;
    let mf = m as f64;
    let lv = ln_unit_ball_volume(m);
    let h_sum = ball_sum_entropy(bp);
    let h1 = lv + mf * b1.ln();
    let h2 = lv + mf * b2.ln();
    let l1 = 2.0 * b1.ln();
    let l2 = 2.0 * b2.ln();
    let mix = lambda * b1 * b1 + (1.0 - lambda) * b2 * b2;
    let concavity = if b1 == b2 { 0.0 } else { 0.5 * mf * (mix.ln() - lambda * l1 - (1.0 - lambda) * l2) };
    Ok(h_sum - lambda * h1 - (1.0 - lambda) * h2 - concavity)
}

/// [`epi_gap_balls`] over several dimensions, in input order.
pub fn epi_gap_sweep(dims: &[usize], b1: f64, b2: f64, lambda: f64) -> Result<Vec<(usize, f64)>> {
    dims.par_iter().map(|&m| epi_gap_balls(m, b1, b2, lambda).map(|g| (m, g))).collect()
}

fn is_indicator(f: &Grid1D) -> bool {
    let mut level = None;
    for &v in f.values().iter().filter(|&&v| v > 0.0) {
        match level {
            None => level = Some(v),
            Some(l) if (v - l).abs() > 1e-9 * l => return false,
            _ => {}
        }
    }
    level.is_some_and(|l| (l * f.support_measure() - 1.0).abs() <= MASS_TOL.max(1e-9))
}

/// `|A + B| ≥ |A| + |B|` for normalized indicators of `A` and `B`, reading
/// `|A + B|` off the support of the grid convolution.
pub fn brunn_minkowski_check(f: &Grid1D, g: &Grid1D) -> Result<VerificationReport> {
    if !is_indicator(f) || !is_indicator(g) {
        return Err(Error::NotIndicator);
    }
    let c = convolve(f, g)?;
    let lhs = c.support_measure();
    let rhs = f.support_measure() + g.support_measure();
    Ok(VerificationReport::at_least("brunn_minkowski", lhs, rhs, 2.0 * f.dx()).with_param("dx", f.dx()))
}
