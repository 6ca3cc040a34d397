//! Closed-form densities: uniforms, Gaussians and the generalized
//! Gaussians `g_β(x) = A_β (1 − β‖x‖²/2)₊^{1/β − n/2 − 1}`.
//!
//! The family interpolates between heavy-tailed Student-r laws (`β < 0`),
//! the standard Gaussian (`β = 0`) and compactly supported Student-t laws
//! (`0 < β ≤ 2/(n+2)`), with uniform on the ball of radius `√(n+2)` at the
//! top end. Every member has `E‖Z‖² = n`.

use std::f64::consts::PI;

use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::density::{Density, Grid1D, GridSpec, RadialDensity};
use crate::error::{Error, Result};
use crate::information::{entropy_power, renyi_entropy, RenyiOrder};
use crate::quadrature::integrate;

/// Tail mass left out when truncating full-support members.
pub const TAIL_TOL: f64 = 1e-6;
/// Default number of cells for gridded generalized Gaussians.
pub const DEFAULT_GG_CELLS: usize = 8192;

/// `ln V_n(1) = (n/2)·ln π − ln Γ(n/2 + 1)`.
pub fn ln_unit_ball_volume(n: usize) -> f64 {
    0.5 * n as f64 * PI.ln() - ln_gamma(0.5 * n as f64 + 1.0)
}

/// Volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => ln_unit_ball_volume(n).exp(),
    }
}

/// `β_p` from `1/β_p = 1/(p−1) + (n+2)/2`; `β_1 = 0`, `β_∞ = 2/(n+2)`.
pub fn beta_of_p(p: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    if n == 0 || p.is_nan() || p <= nf / (nf + 2.0) {
        return Err(Error::OrderOutOfRange { p, n });
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(2.0 / (nf + 2.0));
    }
    Ok(1.0 / (1.0 / (p - 1.0) + 0.5 * (nf + 2.0)))
}

/// Radial shape and normalization of a standard generalized Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedGaussianParams {
    pub dim: usize,
    pub beta: f64,
    pub scale: f64,
    /// Normalizing constant of the unit-scale density.
    pub a_beta: f64,
}

impl GeneralizedGaussianParams {
    pub fn new(dim: usize, beta: f64, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadParameter("dimension must be at least 1".into()));
        }
        if !beta.is_finite() || beta > 2.0 / (dim as f64 + 2.0) + 1e-15 {
            return Err(Error::BetaOutOfRange { beta, n: dim });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::BadParameter(format!("scale must be positive, got {scale}")));
        }
        let mut params = Self { dim, beta, scale, a_beta: 1.0 };
        params.a_beta = 1.0 / params.radial_mass_of_shape();
        Ok(params)
    }

    /// Exponent `1/β − n/2 − 1` (unused at `β = 0`).
    pub fn exponent(&self) -> f64 {
        1.0 / self.beta - 0.5 * self.dim as f64 - 1.0
    }

    /// Unnormalized unit-scale profile as a function of radius.
    pub fn shape(&self, r: f64) -> f64 {
        if self.beta == 0.0 {
            return (-0.5 * r * r).exp();
        }
        let base = 1.0 - 0.5 * self.beta * r * r;
        if base <= 0.0 {
            0.0
        } else {
            base.powf(self.exponent())
        }
    }

    /// Radius of the support for `β > 0`, infinite otherwise.
    pub fn support_radius(&self) -> f64 {
        if self.beta > 0.0 {
            (2.0 / self.beta).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// `P(‖Z‖ > R)` for the unit-scale law, in closed form.
    pub fn tail_mass(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        if r <= 0.0 {
            return 1.0;
        }
        if self.beta > 0.0 {
            if r >= self.support_radius() {
                return 0.0;
            }
            let u = 0.5 * self.beta * r * r;
            // ∫ (1−u)^e over the shell reduces to a regularized beta.
            return 1.0 - beta_reg(0.5 * n, self.exponent() + 1.0, u);
        }
        if self.beta == 0.0 {
            return gamma_ur(0.5 * n, 0.5 * r * r);
        }
        let b = -0.5 * self.beta;
        let t = b * r * r;
        let one_minus_u = 1.0 / (1.0 + t);
        beta_reg(1.0 - 1.0 / self.beta, 0.5 * n, one_minus_u)
    }

    /// Radius beyond which the analytic tail mass is below `tail_tol`.
    pub fn truncation_radius(&self, tail_tol: f64) -> f64 {
        if self.beta > 0.0 {
            return self.support_radius();
        }
        let mut hi = 1.0;
        while self.tail_mass(hi) >= tail_tol {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.tail_mass(mid) >= tail_tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// `∫ shape(‖x‖) dx` by adaptive quadrature over the radius.
    fn radial_mass_of_shape(&self) -> f64 {
        let n = self.dim;
        let surface = n as f64 * unit_ball_volume(n);
        let radial = |r: f64| surface * r.powi(n as i32 - 1) * self.shape(r);
        if self.beta > 0.0 {
            integrate(radial, 0.0, self.support_radius(), 1e-14, 1e-13).value
        } else {
            // r = u/(1−u) maps [0,1) onto [0,∞).
            integrate(
                |u: f64| {
                    if u >= 1.0 {
                        return 0.0;
                    }
                    let w = 1.0 - u;
                    radial(u / w) / (w * w)
                },
                0.0,
                1.0,
                1e-14,
                1e-13,
            )
            .value
        }
    }

    /// Density of `scale·Z` at radius `r`.
    pub fn density(&self, r: f64) -> f64 {
        let n = self.dim as i32;
        self.a_beta * self.shape(r / self.scale) / self.scale.powi(n)
    }
}

/// `g_β` in one dimension on `cells` cells over its (possibly truncated)
/// support, midpoint-sampled and renormalized on the grid.
pub fn generalized_gaussian(beta: f64, cells: usize) -> Result<Grid1D> {
    generalized_gaussian_scaled(beta, 1.0, cells)
}

pub fn generalized_gaussian_scaled(beta: f64, scale: f64, cells: usize) -> Result<Grid1D> {
    let params = GeneralizedGaussianParams::new(1, beta, scale)?;
    let radius = scale * params.truncation_radius(TAIL_TOL);
    let spec = GridSpec::over(-radius, radius, cells)?;
    Grid1D::from_fn(spec, |x| params.density(x.abs()))?.normalize()
}

/// `g_β` in dimension `n` as a radial profile on `shells` shells.
pub fn generalized_gaussian_radial(n: usize, beta: f64, shells: usize) -> Result<RadialDensity> {
    let params = GeneralizedGaussianParams::new(n, beta, 1.0)?;
    if shells == 0 {
        return Err(Error::EmptyGrid);
    }
    let radius = params.truncation_radius(TAIL_TOL);
    let dr = radius / shells as f64;
    let profile = (0..shells).map(|j| params.density((j as f64 + 0.5) * dr)).collect();
    RadialDensity::new(n, dr, profile)?.normalize()
}

/// Closed-form `N_p(Z^{(p)}) = A_β^{−2/n} (1 − nβ_p/2)^{2/(n(1−p))}`, with
/// `N_1 = 2πe`.
pub fn np_closed_form(p: f64, n: usize) -> Result<f64> {
    let beta = beta_of_p(p, n)?;
    if p == 1.0 {
        return Ok(2.0 * PI * std::f64::consts::E);
    }
    let nf = n as f64;
    let params = GeneralizedGaussianParams::new(n, beta, 1.0)?;
    let power = if p.is_infinite() { 0.0 } else { 2.0 / (nf * (1.0 - p)) };
    Ok(params.a_beta.powf(-2.0 / nf) * (1.0 - 0.5 * nf * beta).powf(power))
}

/// `N_p` of the gridded one-dimensional `g_{β_p}`.
pub fn np_on_grid(p: f64, cells: usize) -> Result<f64> {
    let beta = beta_of_p(p, 1)?;
    let z = generalized_gaussian(beta, cells)?;
    entropy_power(&z, RenyiOrder::from_p(p)?, 1)
}

/// Uniform density on the centered ball of radius `r`, on `shells` shells.
pub fn uniform_ball(n: usize, r: f64, shells: usize) -> Result<RadialDensity> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::BadParameter(format!("radius must be positive, got {r}")));
    }
    if shells == 0 {
        return Err(Error::EmptyGrid);
    }
    let nf = n as f64;
    let direct = 1.0 / (unit_ball_volume(n) * r.powf(nf));
    let value = if direct.is_finite() && direct > 0.0 { direct } else { (-(ln_unit_ball_volume(n) + nf * r.ln())).exp() };
    RadialDensity::new(n, r / shells as f64, vec![value; shells])
}

/// `N(mu, sigma²)` sampled at the midpoints of `spec`, renormalized.
pub fn gaussian(mu: f64, sigma: f64, spec: GridSpec) -> Result<Grid1D> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::BadParameter(format!("sigma must be positive, got {sigma}")));
    }
    let c = 1.0 / (sigma * (2.0 * PI).sqrt());
    Grid1D::from_fn(spec, |x| {
        let z = (x - mu) / sigma;
        c * (-0.5 * z * z).exp()
    })?
    .normalize()
}

/// Gaussian on a grid symmetric about `mu` spanning `±halfwidth_sigmas·σ`.
pub fn gaussian_centered(mu: f64, sigma: f64, cells: usize, halfwidth_sigmas: f64) -> Result<Grid1D> {
    let hw = halfwidth_sigmas * sigma;
    gaussian(mu, sigma, GridSpec::over(mu - hw, mu + hw, cells)?)
}

/// Uniform on `[a, b]` on `spec`, exact per-cell overlap, renormalized.
pub fn uniform_interval(a: f64, b: f64, spec: GridSpec) -> Result<Grid1D> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadParameter(format!("need a < b, got [{a}, {b}]")));
    }
    let values = (0..spec.cells)
        .map(|j| {
            let lo = spec.x0 + j as f64 * spec.dx;
            let hi = lo + spec.dx;
            let overlap = hi.min(b) - lo.max(a);
            // Round-off slivers at coincident edges are not support.
            if overlap > 1e-9 * spec.dx { overlap / (spec.dx * (b - a)) } else { 0.0 }
        })
        .collect();
    Grid1D::new(spec.x0, spec.dx, values)?.normalize()
}

/// `E[X²]/N_p(X)`; bounded below by its value at `Z^{(p)}`.
pub fn moment_entropy_ratio<D: Density>(second_moment: f64, f: &D, order: RenyiOrder) -> Result<f64> {
    let h = renyi_entropy(f, order)?;
    Ok(second_moment / (2.0 * h / f.dim() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use statrs::function::beta::beta;

    #[test]
    fn beta_of_p_examples() {
        assert!((beta_of_p(2.0, 1).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(beta_of_p(1.0, 3).unwrap(), 0.0);
        assert!((beta_of_p(f64::INFINITY, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(beta_of_p(1.0 / 3.0, 1).is_err());
        assert!(beta_of_p(0.2, 1).is_err());
        // β_p increases towards 2/(n+2).
        assert!(beta_of_p(1e6, 2).unwrap() < 0.5 && beta_of_p(1e6, 2).unwrap() > 0.4999);
    }

    #[test]
    fn unit_ball_volume_matches_slice_recursion() {
        // V_n = V_{n−1}·∫_{−1}^{1} (1 − x²)^{(n−1)/2} dx.
        let mut v = 2.0;
        for n in 2..=8usize {
            let slice = integrate(|x| (1.0 - x * x).max(0.0).powf(0.5 * (n as f64 - 1.0)), -1.0, 1.0, 1e-15, 1e-15);
            v *= slice.value;
            assert!((unit_ball_volume(n) - v).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn normalizing_constant_matches_gamma_form() {
        // n = 1, β = 0.4: ∫(1 − x²/5)dx over [−√5, √5] = 4√5/3.
        let p = GeneralizedGaussianParams::new(1, 0.4, 1.0).unwrap();
        assert!((p.a_beta - 3.0 / (4.0 * 5f64.sqrt())).abs() < 1e-13);
        // General n = 1 gamma form: A = 1/(R·B(½, e+1)), R = √(2/β).
        for &b in &[0.1, 0.25, 0.5, 2.0 / 3.0] {
            let p = GeneralizedGaussianParams::new(1, b, 1.0).unwrap();
            let expect = 1.0 / (p.support_radius() * beta(0.5, p.exponent() + 1.0));
            assert!((p.a_beta - expect).abs() < 1e-12 * expect, "beta = {b}");
        }
        let g = GeneralizedGaussianParams::new(1, 0.0, 1.0).unwrap();
        assert!((g.a_beta - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn beta_04_is_a_parabola() {
        let f = generalized_gaussian(0.4, 1000).unwrap();
        let r = 5f64.sqrt();
        assert!((f.x0() + r).abs() < 1e-12);
        let c = f.values()[500] / (1.0 - f.midpoint(500).powi(2) / 5.0);
        for j in (0..1000).step_by(37) {
            let expect = c * (1.0 - f.midpoint(j).powi(2) / 5.0);
            assert!((f.values()[j] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn second_moment_is_one() {
        for &b in &[-1.0, 0.0, 0.4] {
            let f = generalized_gaussian(b, DEFAULT_GG_CELLS).unwrap();
            assert!((f.moment(2) - 1.0).abs() < 5e-3, "beta = {b}: {}", f.moment(2));
        }
        let f = generalized_gaussian(2.0 / 3.0, 4096).unwrap();
        // Uniform on [−√3, √3].
        assert!((f.x0() + 3f64.sqrt()).abs() < 1e-12);
        assert!((f.moment(2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn radial_second_moment_is_dimension() {
        for n in [2usize, 3, 5] {
            for &b in &[-0.5, 0.0, 1.0 / (n as f64 + 2.0)] {
                let f = generalized_gaussian_radial(n, b, 4000).unwrap();
                let m2 = f.second_moment();
                assert!((m2 / n as f64 - 1.0).abs() < 5e-3, "n={n} beta={b}: {m2}");
            }
        }
    }

    #[test]
    fn tail_mass_agrees_with_quadrature() {
        for &(n, b) in &[(1usize, -1.0), (1, 0.0), (3, -0.3), (2, 0.25)] {
            let p = GeneralizedGaussianParams::new(n, b, 1.0).unwrap();
            let r = 1.7;
            let surface = n as f64 * unit_ball_volume(n);
            let inside = integrate(|s| surface * s.powi(n as i32 - 1) * p.density(s), 0.0, r, 1e-14, 1e-13).value;
            assert!((1.0 - inside - p.tail_mass(r)).abs() < 1e-10, "n={n} beta={b}");
        }
    }

    #[test]
    fn closed_form_entropy_power() {
        // p = 2, n = 1: A = 3/(4√5), N_2 = A^{-2}·0.8^{-2} = 125/9.
        let n2 = np_closed_form(2.0, 1).unwrap();
        assert!((n2 - 125.0 / 9.0).abs() < 1e-10);
        let grid = np_on_grid(2.0, DEFAULT_GG_CELLS).unwrap();
        assert!((grid / n2 - 1.0).abs() < 2e-3);
        assert!((np_closed_form(1.0, 4).unwrap() - 2.0 * PI * std::f64::consts::E).abs() < 1e-12);
        // p = ∞: N_∞ = |ball of radius √(n+2)|^{2/n}.
        let ninf = np_closed_form(f64::INFINITY, 1).unwrap();
        assert!((ninf - 12.0).abs() < 1e-10);
        for &(p, tol) in &[(0.6, 1e-2), (0.8, 2e-3), (1.5, 2e-3), (3.0, 2e-3)] {
            // Heavy tails at p = 0.6 lose ∫f^p mass beyond the truncation radius.
            let grid = np_on_grid(p, DEFAULT_GG_CELLS).unwrap();
            let exact = np_closed_form(p, 1).unwrap();
            assert!((grid / exact - 1.0).abs() < tol, "p = {p}: {grid} vs {exact}");
        }
    }

    #[test]
    fn constructors() {
        let b = uniform_ball(1, 1.0, 4).unwrap();
        assert_eq!(b.profile(), &[0.5; 4]);
        let b = uniform_ball(3, 2.0, 50).unwrap();
        assert!((b.mass() - 1.0).abs() < 1e-12);
        assert!(uniform_ball(2, 0.0, 5).is_err());

        let spec = GridSpec::over(-8.0, 8.0, 4001).unwrap();
        let g = gaussian(0.0, 1.0, spec).unwrap();
        assert!((g.mass() - 1.0).abs() < 1e-12);
        let h = renyi_entropy(&g, RenyiOrder::One).unwrap();
        assert!((h - 0.5 * (2.0 * PI * std::f64::consts::E).ln()).abs() < 1e-3);
        assert!(gaussian(0.0, -1.0, spec).is_err());

        let u = uniform_interval(0.0, 1.0, GridSpec::over(-0.5, 1.5, 20).unwrap()).unwrap();
        assert!((u.support_measure() - 1.0).abs() < 1e-12);
        assert!(uniform_interval(1.0, 1.0, spec).is_err());
    }

    #[test]
    fn out_of_range_beta() {
        assert!(matches!(GeneralizedGaussianParams::new(1, 0.7, 1.0), Err(Error::BetaOutOfRange { .. })));
        assert!(generalized_gaussian(1.0, 100).is_err());
    }
}
