//! Rényi entropies, entropy powers, divergences and Fisher information of
//! gridded densities.
//!
//! On a piecewise-constant density every quantity here is a finite sum over
//! cells, so identities that only depend on the value distribution (for
//! instance invariance under rearrangement) hold to rounding error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::{stable_sum, Density, Grid1D};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Relative threshold below which cells are left out of the Fisher
/// integrand.
pub const FISHER_FLOOR: f64 = 1e-12;

/// Order `p ∈ [0, ∞]` of a Rényi entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RenyiOrder {
    Zero,
    One,
    Infinity,
    General(f64),
}

impl RenyiOrder {
    /// Maps 0, 1 and ∞ to their distinguished tags.
    pub fn from_p(p: f64) -> Result<Self> {
        if p.is_nan() || p < 0.0 {
            return Err(Error::BadParameter(format!("Rényi order must be in [0, ∞], got {p}")));
        }
        Ok(if p == 0.0 {
            RenyiOrder::Zero
        } else if p == 1.0 {
            RenyiOrder::One
        } else if p.is_infinite() {
            RenyiOrder::Infinity
        } else {
            RenyiOrder::General(p)
        })
    }

    /// Untagged order, rejecting the distinguished values.
    pub fn general(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0 && p != 1.0) {
            return Err(Error::BadParameter(format!("general order must be in (0,1)∪(1,∞), got {p}")));
        }
        Ok(RenyiOrder::General(p))
    }

    pub fn p(self) -> f64 {
        match self {
            RenyiOrder::Zero => 0.0,
            RenyiOrder::One => 1.0,
            RenyiOrder::Infinity => f64::INFINITY,
            RenyiOrder::General(p) => p,
        }
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenyiOrder::Zero => write!(f, "0"),
            RenyiOrder::One => write!(f, "1"),
            RenyiOrder::Infinity => write!(f, "inf"),
            RenyiOrder::General(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    /// Accepts `0`, `1`, `inf`, `p=<x>` or a bare number.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let body = t.strip_prefix("p=").unwrap_or(t);
        match body {
            "inf" | "infinity" | "∞" => Ok(RenyiOrder::Infinity),
            _ => {
                let p: f64 = body.parse().map_err(|_| Error::BadParameter(format!("cannot parse order {s:?}")))?;
                RenyiOrder::from_p(p)
            }
        }
    }
}

/// Rényi entropy `h_p` in nats.
///
/// `p = 1` is the Shannon sum `−Σ f log f`, `p = 0` is the log-measure of
/// `{f > 0}` and `p = ∞` is `−log max f`; general orders are evaluated in
/// log-sum-exp form so that large `p` cannot overflow.
pub fn renyi_entropy<D: Density>(f: &D, order: RenyiOrder) -> Result<f64> {
    let mass = f.mass();
    if !(mass > 0.0) {
        return Err(Error::ZeroMass);
    }
    let h = match order {
        RenyiOrder::Zero => stable_sum(f.cells().filter(|&(v, _)| v > 0.0).map(|(_, m)| m)).ln(),
        RenyiOrder::Infinity => -f.max_value().ln(),
        RenyiOrder::One => -stable_sum(f.cells().filter(|&(v, _)| v > 0.0).map(|(v, m)| v * v.ln() * m)),
        RenyiOrder::General(p) => {
            let logs: Vec<f64> = f.cells().filter(|&(v, _)| v > 0.0).map(|(v, m)| p * v.ln() + m.ln()).collect();
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = top + stable_sum(logs.iter().map(|l| (l - top).exp())).ln();
            lse / (1.0 - p)
        }
    };
    Ok(h)
}

/// `N_p = exp(2h_p/n)`.
pub fn entropy_power<D: Density>(f: &D, order: RenyiOrder, n: usize) -> Result<f64> {
    let h = renyi_entropy(f, order)?;
    Ok((2.0 * h / n as f64).exp())
}

fn same_grid(f: &Grid1D, g: &Grid1D) -> Result<()> {
    if f.len() != g.len() || f.dx() != g.dx() || f.x0() != g.x0() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `∫ f^α g^{1−α}` on a shared grid.
pub fn renyi_integral(f: &Grid1D, g: &Grid1D, alpha: f64) -> Result<f64> {
    same_grid(f, g)?;
    let dx = f.dx();
    Ok(stable_sum(
        f.values()
            .iter()
            .zip(g.values())
            .filter(|&(&a, &b)| a > 0.0 && b > 0.0)
            .map(|(&a, &b)| a.powf(alpha) * b.powf(1.0 - alpha) * dx),
    ))
}

/// Rényi divergence `D_α(f‖g)` for `α ∈ (0, 1]`; `α = 1` is relative
/// entropy. Returns `+∞` when `g` vanishes where `f` does not (`α = 1`) or
/// when the supports are disjoint (`α < 1`).
pub fn renyi_divergence(f: &Grid1D, g: &Grid1D, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::BadParameter(format!("alpha must be in (0, 1], got {alpha}")));
    }
    same_grid(f, g)?;
    if alpha == 1.0 {
        let dx = f.dx();
        let mut terms = Vec::with_capacity(f.len());
        for (&a, &b) in f.values().iter().zip(g.values()) {
            if a > 0.0 {
                if b <= 0.0 {
                    return Ok(f64::INFINITY);
                }
                terms.push(a * (a / b).ln() * dx);
            }
        }
        return Ok(stable_sum(terms));
    }
    let integral = renyi_integral(f, g, alpha)?;
    if integral <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(integral.ln() / (alpha - 1.0))
}

/// Fisher information `∫_{f>0} f′²/f` with central differences on interior
/// cells. Cells below `FISHER_FLOOR·max f` are skipped.
pub fn fisher_information(f: &Grid1D) -> f64 {
    let v = f.values();
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let floor = FISHER_FLOOR * f.max_value();
    let dx = f.dx();
    stable_sum((1..n - 1).filter(|&j| v[j] > floor).map(|j| {
        let d = (v[j + 1] - v[j - 1]) / (2.0 * dx);
        d * d / v[j] * dx
    }))
}

/// Discrete entropy `−Σ c log c` of a weight vector.
pub fn discrete_entropy(weights: &[f64]) -> f64 {
    -stable_sum(weights.iter().filter(|&&c| c > 0.0).map(|&c| c * c.ln()))
}

/// Checks `h(Σ c_i f_i) ≤ Σ c_i h(f_i) + H(c)` for components on a shared
/// grid.
pub fn mixture_entropy_bound_check(components: &[Grid1D], weights: &[f64]) -> Result<VerificationReport> {
    const TOL: f64 = 1e-12;
    if components.is_empty() || components.len() != weights.len() {
        return Err(Error::BadParameter("need one weight per component".into()));
    }
    let wsum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| !(w >= 0.0)) || (wsum - 1.0).abs() > 1e-9 {
        return Err(Error::WeightSum(wsum));
    }
    let first = &components[0];
    for c in &components[1..] {
        same_grid(first, c)?;
    }
    let mut mix = vec![0.0; first.len()];
    let mut weighted_h = Vec::with_capacity(components.len());
    for (c, &w) in components.iter().zip(weights) {
        for (m, &v) in mix.iter_mut().zip(c.values()) {
            *m += w * v;
        }
        if w > 0.0 {
            weighted_h.push(w * renyi_entropy(c, RenyiOrder::One)?);
        }
    }
    let mixture = Grid1D::new(first.x0(), first.dx(), mix)?;
    let lhs = renyi_entropy(&mixture, RenyiOrder::One)?;
    let rhs = stable_sum(weighted_h) + discrete_entropy(weights);
    let tol = TOL * lhs.abs().max(rhs.abs()).max(1.0);
    Ok(VerificationReport::at_most("mixture_entropy_bound", lhs, rhs, tol)
        .with_param("components", components.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{random_density, DensityGeneratorSpec, GeneratorKind, GridSpec};
    use crate::special::{gaussian, uniform_interval};
    use std::f64::consts::{E, PI};

    const ORDERS: [RenyiOrder; 5] =
        [RenyiOrder::Zero, RenyiOrder::General(0.5), RenyiOrder::One, RenyiOrder::General(2.0), RenyiOrder::Infinity];

    #[test]
    fn uniform_entropies_coincide() {
        let u = Grid1D::new(1.0, 0.01, vec![1.0 / 3.0; 300]).unwrap();
        for o in ORDERS {
            assert!((renyi_entropy(&u, o).unwrap() - 3f64.ln()).abs() < 1e-12, "{o}");
        }
    }

    #[test]
    fn triangle_shannon_entropy() {
        // −2∫₀¹(1−u)log(1−u)du = ½.
        let spec = GridSpec::over(-1.0, 1.0, 4000).unwrap();
        let t = Grid1D::from_fn(spec, |x| 1.0 - x.abs()).unwrap().normalize().unwrap();
        assert!((renyi_entropy(&t, RenyiOrder::One).unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn gaussian_infinity_and_power() {
        let g = gaussian(0.0, 1.0, GridSpec::over(-8.0, 8.0, 8001).unwrap()).unwrap();
        let hinf = renyi_entropy(&g, RenyiOrder::Infinity).unwrap();
        assert!((hinf - 0.5 * (2.0 * PI).ln()).abs() < 1e-3);
        let n1 = entropy_power(&g, RenyiOrder::One, 1).unwrap();
        assert!((n1 / (2.0 * PI * E) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn entropy_power_scaling() {
        let u = Grid1D::new(0.0, 0.01, vec![1.0; 100]).unwrap();
        assert!((entropy_power(&u, RenyiOrder::General(3.0), 1).unwrap() - 1.0).abs() < 1e-12);
        let f = random_density(&DensityGeneratorSpec::new(GeneratorKind::Bimodal, 2, 4, 3.0, 200)).unwrap();
        let s = Grid1D::new(2.0 * f.x0(), 2.0 * f.dx(), f.values().iter().map(|v| v / 2.0).collect()).unwrap();
        for o in ORDERS {
            let a = entropy_power(&f, o, 1).unwrap();
            let b = entropy_power(&s, o, 1).unwrap();
            assert!((b / a - 4.0).abs() < 1e-11, "{o}");
        }
    }

    #[test]
    fn order_parsing() {
        assert_eq!("0".parse::<RenyiOrder>().unwrap(), RenyiOrder::Zero);
        assert_eq!("1".parse::<RenyiOrder>().unwrap(), RenyiOrder::One);
        assert_eq!("inf".parse::<RenyiOrder>().unwrap(), RenyiOrder::Infinity);
        assert_eq!("p=2.5".parse::<RenyiOrder>().unwrap(), RenyiOrder::General(2.5));
        assert_eq!("p=1".parse::<RenyiOrder>().unwrap(), RenyiOrder::One);
        assert!("p=-1".parse::<RenyiOrder>().is_err());
        assert!("x".parse::<RenyiOrder>().is_err());
        assert!(RenyiOrder::general(1.0).is_err());
    }

    #[test]
    fn zero_mass_is_an_error() {
        let z = Grid1D::new(0.0, 1.0, vec![0.0; 3]).unwrap();
        assert_eq!(renyi_entropy(&z, RenyiOrder::One), Err(Error::ZeroMass));
    }

    #[test]
    fn divergence_examples() {
        let spec = GridSpec::over(0.0, 2.0, 200).unwrap();
        let f = uniform_interval(0.0, 1.0, spec).unwrap();
        let g = uniform_interval(0.0, 2.0, spec).unwrap();
        assert!((renyi_divergence(&f, &g, 1.0).unwrap() - 2f64.ln()).abs() < 1e-12);
        for a in [0.3, 0.7, 1.0] {
            assert!(renyi_divergence(&f, &f, a).unwrap().abs() < 1e-12);
        }
        assert_eq!(renyi_divergence(&g, &f, 1.0).unwrap(), f64::INFINITY);
        let h = uniform_interval(1.0, 2.0, spec).unwrap();
        assert_eq!(renyi_divergence(&f, &h, 0.5).unwrap(), f64::INFINITY);
        let other = Grid1D::new(0.5, 0.01, vec![1.0; 200]).unwrap();
        assert_eq!(renyi_divergence(&f, &other, 1.0), Err(Error::GridMismatch));
        assert!(renyi_divergence(&f, &g, 1.5).is_err());
    }

    #[test]
    fn fisher_of_gaussians() {
        for (sigma, expect) in [(1.0, 1.0), (2.0, 0.25)] {
            let g = gaussian(0.0, sigma, GridSpec::over(-10.0 * sigma, 10.0 * sigma, 4000).unwrap()).unwrap();
            let i = fisher_information(&g);
            assert!((i / expect - 1.0).abs() < 1e-2, "sigma={sigma}: {i}");
        }
    }

    #[test]
    fn mixture_bound_examples() {
        let spec = GridSpec::over(0.0, 2.0, 200).unwrap();
        let a = uniform_interval(0.0, 1.0, spec).unwrap();
        let b = uniform_interval(1.0, 2.0, spec).unwrap();
        let r = mixture_entropy_bound_check(&[a.clone(), b], &[0.5, 0.5]).unwrap();
        assert!(r.pass);
        assert!((r.lhs - 2f64.ln()).abs() < 1e-12 && (r.rhs - 2f64.ln()).abs() < 1e-12);

        let r = mixture_entropy_bound_check(&[a.clone(), a.clone()], &[0.5, 0.5]).unwrap();
        assert!(r.pass);
        assert!((r.rhs - r.lhs - 2f64.ln()).abs() < 1e-12);

        assert!(matches!(mixture_entropy_bound_check(&[a.clone(), a.clone()], &[0.5, 0.6]), Err(Error::WeightSum(_))));
    }

    #[test]
    fn mixture_bound_random() {
        for seed in 0..25u64 {
            let comps: Vec<Grid1D> = (0..4)
                .map(|i| {
                    random_density(&DensityGeneratorSpec::new(GeneratorKind::ALL[i], 3, seed * 7 + i as u64, 4.0, 256))
                        .unwrap()
                })
                .collect();
            let r = mixture_entropy_bound_check(&comps, &[0.1, 0.2, 0.3, 0.4]).unwrap();
            assert!(r.pass, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn limits_in_order() {
        for kind in [GeneratorKind::UniformMixture, GeneratorKind::SpikyPiecewise, GeneratorKind::Bimodal] {
            for seed in 0..10 {
                let f = random_density(&DensityGeneratorSpec::new(kind, 3, seed, 4.0, 2048)).unwrap();
                let h0 = renyi_entropy(&f, RenyiOrder::Zero).unwrap();
                let hinf = renyi_entropy(&f, RenyiOrder::Infinity).unwrap();
                let near0 = renyi_entropy(&f, RenyiOrder::General(1e-4)).unwrap();
                let big = renyi_entropy(&f, RenyiOrder::General(1e4)).unwrap();
                assert!((near0 - h0).abs() < 1e-3, "{kind:?} {seed}: {near0} vs {h0}");
                assert!((big - hinf).abs() < 1e-3, "{kind:?} {seed}: {big} vs {hinf}");
            }
        }
    }
}
