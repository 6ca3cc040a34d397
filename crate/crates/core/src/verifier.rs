//! Inequality checks over canonical and random inputs.
//!
//! Checks that compare a convolution of the original factors with a
//! convolution of their rearrangements first refine the originals by two,
//! so both sides are convolved on the same half-width grid.
//!
//! | tolerance            | used for                                    |
//! |----------------------|---------------------------------------------|
//! | `1e-12` (scaled)     | identities that are exact on the grid       |
//! | `10·dx·k`            | entropies downstream of a `k`-fold product  |
//! | `10·dx·k·max f`      | majorization and multilinear integrals     |
//! | 1% relative          | anything built from finite differences      |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ball::brunn_minkowski_check;
use crate::conjecture::bobkov_chistyakov_bound_check;
use crate::convolution::{convolve_k, inner_product};
use crate::density::{random_density, stable_sum, Density, DensityGeneratorSpec, GeneratorKind, Grid1D, GridSpec};
use crate::error::{Error, Result};
use crate::information::{fisher_information, mixture_entropy_bound_check, renyi_divergence, renyi_entropy, RenyiOrder};
use crate::levy::{check_levy_dominance, LevySpec};
use crate::rearrangement::{l1_distance, majorizes_with_tol, rearrange_1d};
use crate::report::{InfinityPolicy, SuiteSummary, VerificationReport};
use crate::special::gaussian;

/// Slack for identities that hold exactly on the grid.
pub const EXACT_TOL: f64 = 1e-12;
/// Relative slack for Fisher-information based checks.
pub const FISHER_RTOL: f64 = 0.01;

/// Convolution budget `10·dx·k`.
pub fn eps_conv(dx: f64, k: usize) -> f64 {
    10.0 * dx * k as f64
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("{name} = {v}")))
    }
}

/// `⋆ f_i` (refined) and `⋆ f_i*`, on the same grid.
fn paired_convolutions(fs: &[Grid1D]) -> Result<(Grid1D, Grid1D)> {
    if fs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let refined: Vec<Grid1D> = fs.iter().map(|f| f.refine(2)).collect();
    let rearranged: Vec<Grid1D> = fs.iter().map(rearrange_1d).collect();
    Ok((convolve_k(&refined)?, convolve_k(&rearranged)?))
}

fn need_at_least(fs: &[Grid1D], k: usize) -> Result<()> {
    if fs.len() < k {
        return Err(Error::BadParameter(format!("need at least {k} densities, got {}", fs.len())));
    }
    Ok(())
}

/// `h_p(f_1 ⋆ … ⋆ f_k) ≥ h_p(f_1* ⋆ … ⋆ f_k*)` for each order, sharing the
/// two convolutions.
pub fn check_main_theorem_orders(fs: &[Grid1D], orders: &[RenyiOrder]) -> Result<Vec<VerificationReport>> {
    need_at_least(fs, 2)?;
    let (lhs_conv, rhs_conv) = paired_convolutions(fs)?;
    let tol = eps_conv(fs[0].dx(), fs.len());
    orders
        .iter()
        .map(|&order| {
            let lhs = finite("h_p(f1*...*fk)", renyi_entropy(&lhs_conv, order)?)?;
            let rhs = finite("h_p(f1* * ... * fk*)", renyi_entropy(&rhs_conv, order)?)?;
            Ok(VerificationReport::at_least("main_theorem", lhs, rhs, tol)
                .with_param("order", order.to_string())
                .with_param("k", fs.len())
                .with_param("dx", fs[0].dx()))
        })
        .collect()
}

pub fn check_main_theorem(fs: &[Grid1D], order: RenyiOrder) -> Result<VerificationReport> {
    Ok(check_main_theorem_orders(fs, &[order])?.remove(0))
}

/// `∫ f_1·(f_2 ⋆ … ⋆ f_k) ≤ ∫ f_1*·(f_2* ⋆ … ⋆ f_k*)`. With one factor this
/// is `∫ f_1 = ∫ f_1*`.
pub fn check_rbll(fs: &[Grid1D]) -> Result<VerificationReport> {
    need_at_least(fs, 1)?;
    let first = &fs[0];
    let first_star = rearrange_1d(first);
    let k = fs.len();
    let (lhs, rhs, tol) = if k == 1 {
        (first.mass(), first_star.mass(), EXACT_TOL)
    } else {
        let (rest, rest_star) = paired_convolutions(&fs[1..])?;
        let lhs = inner_product(&first.refine(2), &rest);
        let rhs = inner_product(&first_star, &rest_star);
        let scale = first_star.max_value().max(rest_star.max_value());
        (lhs, rhs, eps_conv(first.dx(), k) * scale)
    };
    Ok(VerificationReport::at_most("rbll", lhs, rhs, tol).with_param("k", k))
}

/// Convex `φ` with `φ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phi {
    /// `u·log u`.
    XLogX,
    /// `u^p` for `p > 1`, `−u^p` for `0 < p < 1`.
    Power(f64),
    /// `(u − t)₊`.
    Hinge(f64),
}

impl Phi {
    fn validate(self) -> Result<()> {
        match self {
            Phi::Power(p) if !(p > 0.0 && p != 1.0 && p.is_finite()) => {
                Err(Error::BadParameter(format!("power must be positive and not 1, got {p}")))
            }
            Phi::Hinge(t) if !(t >= 0.0 && t.is_finite()) => {
                Err(Error::BadParameter(format!("hinge level must be nonnegative, got {t}")))
            }
            _ => Ok(()),
        }
    }

    pub fn apply(self, u: f64) -> f64 {
        match self {
            Phi::XLogX if u > 0.0 => u * u.ln(),
            Phi::XLogX => 0.0,
            Phi::Power(p) if p > 1.0 => u.powf(p),
            Phi::Power(p) => -u.powf(p),
            Phi::Hinge(t) => (u - t).max(0.0),
        }
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phi::XLogX => write!(f, "xlogx"),
            Phi::Power(p) => write!(f, "power({p})"),
            Phi::Hinge(t) => write!(f, "hinge({t})"),
        }
    }
}

fn integrate_phi(f: &Grid1D, phi: Phi) -> f64 {
    stable_sum(f.values().iter().map(|&u| phi.apply(u) * f.dx()))
}

/// `∫ φ(f_1 ⋆ … ⋆ f_k) ≤ ∫ φ(f_1* ⋆ … ⋆ f_k*)`.
pub fn check_most_gen(fs: &[Grid1D], phi: Phi) -> Result<VerificationReport> {
    need_at_least(fs, 2)?;
    phi.validate()?;
    let (lhs_conv, rhs_conv) = paired_convolutions(fs)?;
    let lhs = integrate_phi(&lhs_conv, phi);
    let rhs = integrate_phi(&rhs_conv, phi);
    let tol = eps_conv(fs[0].dx(), fs.len()) * lhs.abs().max(rhs.abs()).max(1.0);
    Ok(VerificationReport::at_most("most_gen", lhs, rhs, tol).with_param("phi", phi.to_string()).with_param("k", fs.len()))
}

/// `f_1 ⋆ … ⋆ f_k ≺ f_1* ⋆ … ⋆ f_k*`.
pub fn check_majorized_convolution(fs: &[Grid1D]) -> Result<VerificationReport> {
    need_at_least(fs, 2)?;
    let (lhs_conv, rhs_conv) = paired_convolutions(fs)?;
    let tol = eps_conv(fs[0].dx(), fs.len()) * rhs_conv.max_value();
    let m = majorizes_with_tol(&lhs_conv, &rhs_conv, tol)?;
    Ok(VerificationReport::from_margin("majorized_convolution", m.worst_margin, 0.0, m.worst_margin, tol)
        .with_param("k", fs.len()))
}

/// `h(X₁+X₂) ≥ h(X₁*+X₂*) ≥ h(Z₁+Z₂)` with Gaussians `Z_i` of the same
/// entropy as `X_i`; one report per link.
pub fn check_epi_chain(f1: &Grid1D, f2: &Grid1D) -> Result<Vec<VerificationReport>> {
    let fs = [f1.clone(), f2.clone()];
    let (sum, sum_star) = paired_convolutions(&fs)?;
    let h = finite("h(X1+X2)", renyi_entropy(&sum, RenyiOrder::One)?)?;
    let h_star = finite("h(X1*+X2*)", renyi_entropy(&sum_star, RenyiOrder::One)?)?;
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    let var = |f: &Grid1D| -> Result<f64> { Ok((2.0 * renyi_entropy(f, RenyiOrder::One)?).exp() / two_pi_e) };
    let (s1, s2) = (var(f1)?, var(f2)?);
    let h_gauss = 0.5 * (two_pi_e * (s1 + s2)).ln();
    let tol = eps_conv(f1.dx(), 2);
    Ok(vec![
        VerificationReport::at_least("epi_chain_rearranged", h, h_star, tol),
        VerificationReport::at_least("epi_chain_gaussian", h_star, h_gauss, tol)
            .with_param("sigma1_sq", s1)
            .with_param("sigma2_sq", s2),
    ])
}

/// `D_α(f*‖g*) ≤ D_α(f‖g)`; `+∞` on the right passes.
pub fn check_divergence_contraction(f: &Grid1D, g: &Grid1D, alpha: f64) -> Result<VerificationReport> {
    let rhs = renyi_divergence(f, g, alpha)?;
    let lhs = renyi_divergence(&rearrange_1d(f), &rearrange_1d(g), alpha)?;
    let scale = if rhs.is_finite() { rhs.abs().max(1.0) } else { 1.0 };
    Ok(VerificationReport::at_most_with("divergence_contraction", lhs, rhs, EXACT_TOL * scale, InfinityPolicy::LargeInfinitePasses)
        .with_param("alpha", alpha))
}

/// `‖f* − g*‖₁ ≤ ‖f − g‖₁`.
pub fn check_l1_contraction(f: &Grid1D, g: &Grid1D) -> Result<VerificationReport> {
    let rhs = l1_distance(f, g)?;
    let lhs = l1_distance(&rearrange_1d(f), &rearrange_1d(g))?;
    Ok(VerificationReport::at_most("l1_contraction", lhs, rhs, EXACT_TOL * rhs.max(1.0)))
}

/// Variance of the step function (cell widths included).
fn step_variance(f: &Grid1D) -> f64 {
    f.variance() + f.dx() * f.dx() / 12.0
}

/// `Var(f*) ≤ Var(f)` for the step functions themselves.
pub fn check_variance_decrease(f: &Grid1D) -> Result<VerificationReport> {
    let rhs = step_variance(f);
    let lhs = step_variance(&rearrange_1d(f));
    Ok(VerificationReport::at_most("variance_decrease", lhs, rhs, EXACT_TOL * rhs.max(1.0)))
}

/// `I(f) ≥ I(f*)` up to 1% of `I(f)`.
pub fn check_fisher_monotone(f: &Grid1D) -> Result<VerificationReport> {
    let lhs = finite("I(f)", fisher_information(f))?;
    let rhs = finite("I(f*)", fisher_information(&rearrange_1d(f)))?;
    Ok(VerificationReport::at_least("fisher_monotone", lhs, rhs, FISHER_RTOL * lhs))
}

/// `D(f‖g̃) ≤ ½(σ²·I(f) − 1)` for the Gaussian `g̃` with the mean and
/// variance of `f`, sampled on `f`'s grid.
pub fn check_log_sobolev(f: &Grid1D) -> Result<VerificationReport> {
    let var = f.variance();
    let g = gaussian(f.mean(), var.sqrt(), f.spec())?;
    let lhs = renyi_divergence(f, &g, 1.0)?;
    let fisher = fisher_information(f);
    let rhs = 0.5 * (var * fisher - 1.0);
    Ok(VerificationReport::at_most("log_sobolev", lhs, rhs, FISHER_RTOL * 0.5 * var * fisher).with_param("variance", var))
}

/// `I(f) ≥ 1/N(f)` with `N = e^{2h}/(2πe)`.
pub fn check_isoperimetric_entropy(f: &Grid1D) -> Result<VerificationReport> {
    let lhs = fisher_information(f);
    let h = finite("h(f)", renyi_entropy(f, RenyiOrder::One)?)?;
    let n = (2.0 * h).exp() / (2.0 * std::f64::consts::PI * std::f64::consts::E);
    let rhs = 1.0 / n;
    Ok(VerificationReport::at_least("isoperimetric_entropy", lhs, rhs, FISHER_RTOL * rhs))
}

/// Families of checks run by [`run_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    Main,
    Rbll,
    Majorization,
    MostGen,
    Epi,
    Divergence,
    Fisher,
    Levy,
    Brunn,
    Bc,
    Mixture,
    All,
}

impl SuiteKind {
    pub const EACH: [SuiteKind; 11] = [
        SuiteKind::Main,
        SuiteKind::Rbll,
        SuiteKind::Majorization,
        SuiteKind::MostGen,
        SuiteKind::Epi,
        SuiteKind::Divergence,
        SuiteKind::Fisher,
        SuiteKind::Levy,
        SuiteKind::Brunn,
        SuiteKind::Bc,
        SuiteKind::Mixture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Main => "main",
            SuiteKind::Rbll => "rbll",
            SuiteKind::Majorization => "majorization",
            SuiteKind::MostGen => "mostgen",
            SuiteKind::Epi => "epi",
            SuiteKind::Divergence => "divergence",
            SuiteKind::Fisher => "fisher",
            SuiteKind::Levy => "levy",
            SuiteKind::Brunn => "brunn",
            SuiteKind::Bc => "bc",
            SuiteKind::Mixture => "mixture",
            SuiteKind::All => "all",
        }
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteKind::EACH
            .iter()
            .chain(std::iter::once(&SuiteKind::All))
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown suite {s:?}")))
    }
}

/// Suite parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: SuiteKind,
    pub seed: u64,
    /// Random items per family.
    pub count: usize,
    pub cells: usize,
    /// Multiplies every tolerance; 0 exposes the raw discretization error.
    pub tolerance_scale: f64,
    pub orders: Vec<RenyiOrder>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: SuiteKind::All,
            seed: 0,
            count: 20,
            cells: 1024,
            tolerance_scale: 1.0,
            orders: vec![
                RenyiOrder::Zero,
                RenyiOrder::General(0.5),
                RenyiOrder::One,
                RenyiOrder::General(2.0),
                RenyiOrder::Infinity,
            ],
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::ConfigInvalid("count must be at least 1".into()));
        }
        if self.cells < 16 {
            return Err(Error::ConfigInvalid(format!("need at least 16 cells, got {}", self.cells)));
        }
        if !(self.tolerance_scale >= 0.0 && self.tolerance_scale.is_finite()) {
            return Err(Error::ConfigInvalid(format!("bad tolerance scale {}", self.tolerance_scale)));
        }
        if self.orders.is_empty() {
            return Err(Error::ConfigInvalid("no orders".into()));
        }
        Ok(())
    }
}

/// Half-width of the random corpus domain.
pub const CORPUS_HALFWIDTH: f64 = 4.0;
/// Half-width of the smooth corpus domain (wider so tails are negligible).
pub const SMOOTH_HALFWIDTH: f64 = 6.0;

/// General corpus member: shape cycles with the seed.
pub fn corpus_density(seed: u64, cells: usize) -> Result<Grid1D> {
    let kind = GeneratorKind::ALL[(seed % 4) as usize];
    let components = 1 + ((seed / 4) % 4) as usize;
    random_density(&DensityGeneratorSpec::new(kind, components, seed, CORPUS_HALFWIDTH, cells))
}

/// Smooth, strictly positive corpus member (Gaussian mixtures).
pub fn smooth_density(seed: u64, cells: usize) -> Result<Grid1D> {
    let components = 1 + (seed % 3) as usize;
    random_density(&DensityGeneratorSpec::new(GeneratorKind::GaussianMixture, components, seed, SMOOTH_HALFWIDTH, cells))
}

/// Normalized indicator of one to three random unions of whole cells.
pub fn random_indicator(seed: u64, cells: usize) -> Result<Grid1D> {
    let spec = GridSpec::over(-CORPUS_HALFWIDTH, CORPUS_HALFWIDTH, cells)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1D1C_A70B);
    let runs = rng.random_range(1..=3);
    let mut values = vec![0.0; cells];
    for _ in 0..runs {
        let len = rng.random_range(1..=(cells / 6).max(1));
        let start = rng.random_range(0..cells - len);
        values[start..start + len].iter_mut().for_each(|v| *v = 1.0);
    }
    Grid1D::new(spec.x0, spec.dx, values)?.normalize()
}

fn item_seed(base: u64, i: usize) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add(i as u64)
}

fn sub(seed: u64, j: u64) -> u64 {
    seed.wrapping_mul(31).wrapping_add(j)
}

fn pair(seed: u64, cells: usize) -> Result<[Grid1D; 2]> {
    Ok([corpus_density(sub(seed, 1), cells)?, corpus_density(sub(seed, 2), cells)?])
}

fn triple(seed: u64, cells: usize) -> Result<[Grid1D; 3]> {
    Ok([corpus_density(sub(seed, 3), cells)?, corpus_density(sub(seed, 4), cells)?, corpus_density(sub(seed, 5), cells)?])
}

/// `f` with a random block of cells zeroed, renormalized.
fn with_hole(f: &Grid1D, seed: u64) -> Result<Grid1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.len();
    let len = rng.random_range(1..=(n / 8).max(1));
    let start = rng.random_range(0..n - len);
    let mut v = f.values().to_vec();
    v[start..start + len].iter_mut().for_each(|x| *x = 0.0);
    Grid1D::new(f.x0(), f.dx(), v)?.normalize()
}

fn items_for(kind: SuiteKind, seed: u64, i: usize, cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let cells = cfg.cells;
    let mut out = Vec::new();
    let with_triple = i.is_multiple_of(4);
    match kind {
        SuiteKind::Main => {
            out.extend(check_main_theorem_orders(&pair(seed, cells)?, &cfg.orders)?);
            if with_triple {
                out.extend(check_main_theorem_orders(&triple(seed, cells)?, &cfg.orders)?);
            }
        }
        SuiteKind::Rbll => {
            out.push(check_rbll(&pair(seed, cells)?)?);
            out.push(check_rbll(&triple(seed, cells)?)?);
        }
        SuiteKind::Majorization => {
            out.push(check_majorized_convolution(&pair(seed, cells)?)?);
            if with_triple {
                out.push(check_majorized_convolution(&triple(seed, cells)?)?);
            }
        }
        SuiteKind::MostGen => {
            let fs = pair(seed, cells)?;
            for phi in [Phi::XLogX, Phi::Power(2.0), Phi::Power(0.5), Phi::Hinge(0.1)] {
                out.push(check_most_gen(&fs, phi)?);
            }
        }
        SuiteKind::Epi => {
            let [f, g] = pair(seed, cells)?;
            out.extend(check_epi_chain(&f, &g)?);
        }
        SuiteKind::Divergence => {
            let f = smooth_density(sub(seed, 6), cells)?;
            let g = smooth_density(sub(seed, 7), cells)?;
            let holes = with_hole(&g, sub(seed, 8))?;
            for alpha in [0.3, 1.0] {
                out.push(check_divergence_contraction(&f, &g, alpha)?);
                out.push(check_divergence_contraction(&f, &holes, alpha)?);
            }
            let [a, b] = pair(seed, cells)?;
            out.push(check_l1_contraction(&a, &b)?);
            out.push(check_variance_decrease(&a)?);
        }
        SuiteKind::Fisher => {
            let f = smooth_density(sub(seed, 9), cells)?;
            out.push(check_fisher_monotone(&f)?);
            out.push(check_log_sobolev(&f)?);
            out.push(check_isoperimetric_entropy(&f)?);
        }
        SuiteKind::Levy => {
            let jumps = corpus_density(sub(seed, 10), (cells / 4).max(16))?;
            let lambda_t = if i.is_multiple_of(2) { 0.25 } else { 1.0 };
            let spec = LevySpec::new(1.0, lambda_t, jumps, 1.0)?;
            let orders = [RenyiOrder::General(0.5), RenyiOrder::One, RenyiOrder::General(2.0), RenyiOrder::Infinity];
            out.extend(check_levy_dominance(&spec, &orders)?);
        }
        SuiteKind::Brunn => {
            let f = random_indicator(sub(seed, 11), cells)?;
            let g = random_indicator(sub(seed, 12), cells)?;
            out.push(brunn_minkowski_check(&f, &g)?);
        }
        SuiteKind::Bc => {
            let fs = pair(seed, cells)?;
            for p in [1.0, 2.0, f64::INFINITY] {
                out.push(bobkov_chistyakov_bound_check(p, &fs)?);
            }
        }
        SuiteKind::Mixture => {
            let fs = triple(seed, cells)?;
            let mut rng = ChaCha8Rng::seed_from_u64(sub(seed, 13));
            let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
            out.push(mixture_entropy_bound_check(&fs, &w)?);
        }
        SuiteKind::All => unreachable!("expanded by run_suite"),
    }
    Ok(out)
}

/// Runs the configured families. Output is sorted by `(name, seed)` and is
/// identical for identical configurations.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let kinds: Vec<SuiteKind> = if cfg.suite == SuiteKind::All { SuiteKind::EACH.to_vec() } else { vec![cfg.suite] };
    let jobs: Vec<(SuiteKind, usize)> = kinds.iter().flat_map(|&k| (0..cfg.count).map(move |i| (k, i))).collect();
    let batches: Result<Vec<Vec<VerificationReport>>> = jobs
        .par_iter()
        .map(|&(kind, i)| {
            let seed = item_seed(cfg.seed, i);
            let reports = items_for(kind, seed, i, cfg)?;
            Ok(reports
                .into_iter()
                .map(|r| r.with_seed(seed).with_param("suite", kind.name()).rescale_tolerance(cfg.tolerance_scale))
                .collect())
        })
        .collect();
    let mut reports: Vec<VerificationReport> = batches?.into_iter().flatten().collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.seed.cmp(&b.seed)));
    Ok(reports)
}

/// [`run_suite`] plus its summary.
pub fn run_suite_summary(cfg: &SuiteConfig) -> Result<(Vec<VerificationReport>, SuiteSummary)> {
    let reports = run_suite(cfg)?;
    let summary = SuiteSummary::of(&reports);
    Ok((reports, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rearrangement::majorizes;
    use crate::special::{gaussian_centered, uniform_interval};

    fn unit(cells: usize) -> Grid1D {
        uniform_interval(0.0, 1.0, GridSpec::over(0.0, 1.0, cells).unwrap()).unwrap()
    }

    fn split_unit(cells: usize) -> Grid1D {
        // ½(unif[0,1] + unif[2,3]) on [0,3] with `cells` cells.
        let spec = GridSpec::over(0.0, 3.0, cells).unwrap();
        Grid1D::from_fn(spec, |x| if !(1.0..2.0).contains(&x) { 0.5 } else { 0.0 }).unwrap()
    }

    #[test]
    fn main_theorem_examples() {
        let dx = 0.01;
        let g1 = gaussian(0.7, 1.0, GridSpec::new(-6.0, dx, 1400).unwrap()).unwrap();
        let g2 = gaussian(-1.0, 0.5, GridSpec::new(-4.0, dx, 700).unwrap()).unwrap();
        for order in [RenyiOrder::Zero, RenyiOrder::One, RenyiOrder::Infinity] {
            let r = check_main_theorem(&[g1.clone(), g2.clone()], order).unwrap();
            assert!(r.pass && r.margin.abs() <= r.tolerance, "{r:?}");
        }
        let r = check_main_theorem(&[unit(100), split_unit(300)], RenyiOrder::One).unwrap();
        assert!(r.pass && r.margin > 0.0, "{r:?}");
        assert!(check_main_theorem(&[unit(10)], RenyiOrder::One).is_err());
        assert!(matches!(check_main_theorem(&[unit(10), unit(20)], RenyiOrder::One), Err(Error::SpacingMismatch(..))));
    }

    #[test]
    fn rbll_examples() {
        let centered = uniform_interval(-0.5, 0.5, GridSpec::over(-0.5, 0.5, 50).unwrap()).unwrap();
        let r = check_rbll(&[centered.clone(), centered.clone()]).unwrap();
        assert!(r.pass && (r.lhs - r.rhs).abs() < 1e-12);
        let r = check_rbll(&[split_unit(90)]).unwrap();
        assert!(r.pass && (r.lhs - r.rhs).abs() < 1e-12);
        let cells = 128;
        for seed in 0..6 {
            let fs = [corpus_density(seed, cells).unwrap(), corpus_density(seed + 9, cells).unwrap(), corpus_density(seed + 17, cells).unwrap()];
            assert!(check_rbll(&fs).unwrap().pass);
        }
    }

    #[test]
    fn most_gen_examples() {
        let fs = [corpus_density(3, 128).unwrap(), corpus_density(6, 128).unwrap()];
        let r = check_most_gen(&fs, Phi::Hinge(1e3)).unwrap();
        assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
        assert!(check_most_gen(&fs, Phi::Power(2.0)).unwrap().pass);
        // ∫ u log u = −h: the two checks carry opposite signs.
        let x = check_most_gen(&fs, Phi::XLogX).unwrap();
        let m = check_main_theorem(&fs, RenyiOrder::One).unwrap();
        assert!(x.pass && (x.lhs + m.lhs).abs() < 1e-12 && (x.rhs + m.rhs).abs() < 1e-12);
        assert!(check_most_gen(&fs, Phi::Power(1.0)).is_err());
    }

    #[test]
    fn majorization_examples() {
        let g = gaussian_centered(0.0, 1.0, 200, 6.0).unwrap();
        let r = check_majorized_convolution(&[g.clone(), g]).unwrap();
        assert!(r.pass && r.margin.abs() <= r.tolerance);
        let fs = [corpus_density(2, 128).unwrap(), corpus_density(7, 128).unwrap()];
        assert!(check_majorized_convolution(&fs).unwrap().pass);
        let (lhs, rhs) = paired_convolutions(&fs).unwrap();
        let (holds, margin) = majorizes(&rhs, &lhs).unwrap();
        assert!(!holds && margin < -1e-3);
    }

    #[test]
    fn epi_chain_examples() {
        let spec = GridSpec::over(-10.0, 10.0, 2000).unwrap();
        let g1 = gaussian(0.0, 1.0, spec).unwrap();
        let g2 = gaussian(0.0, 1.3, spec).unwrap();
        let reports = check_epi_chain(&g1, &g2).unwrap();
        assert!(reports.iter().all(|r| r.pass && r.margin.abs() < 2e-3), "{reports:?}");

        let reports = check_epi_chain(&unit(200), &unit(200)).unwrap();
        assert!(reports.iter().all(|r| r.pass));
        assert!((reports[0].lhs - 0.5).abs() < 1e-3);
        // Unit uniforms have σ² = 1/(2πe), so the Gaussian bound is ½·ln 2.
        assert!((reports[1].rhs - 0.5 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn divergence_examples() {
        let f = smooth_density(1, 256).unwrap();
        let r = check_divergence_contraction(&f, &f, 1.0).unwrap();
        assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
        let mut v = f.values().to_vec();
        v[100..140].iter_mut().for_each(|x| *x = 0.0);
        let holes = Grid1D::new(f.x0(), f.dx(), v).unwrap().normalize().unwrap();
        let r = check_divergence_contraction(&f, &holes, 1.0).unwrap();
        assert!(r.pass && r.rhs == f64::INFINITY);
        for alpha in [0.3, 1.0] {
            let g = smooth_density(5, 256).unwrap();
            assert!(check_divergence_contraction(&f, &g, alpha).unwrap().pass);
        }
    }

    #[test]
    fn fisher_examples() {
        let g = gaussian_centered(0.0, 1.0, 2000, 10.0).unwrap();
        let r = check_fisher_monotone(&g).unwrap();
        assert!(r.pass && (r.lhs - r.rhs).abs() <= 0.01 * r.lhs && (r.lhs - 1.0).abs() < 1e-3);
        let spec = GridSpec::over(-8.0, 8.0, 2000).unwrap();
        let skew = Grid1D::from_fn(spec, |x| 0.7 * (-0.5 * (x + 1.0) * (x + 1.0)).exp() + 0.3 / 0.3 * (-0.5 * ((x - 2.0) / 0.3).powi(2)).exp())
            .unwrap()
            .normalize()
            .unwrap();
        let r = check_fisher_monotone(&skew).unwrap();
        assert!(r.pass && r.margin > 0.0, "{r:?}");
        let r = check_log_sobolev(&g).unwrap();
        assert!(r.pass && r.lhs.abs() < 1e-6 && r.rhs.abs() < 1e-3, "{r:?}");
        let r = check_isoperimetric_entropy(&g).unwrap();
        assert!(r.pass && (r.lhs - r.rhs).abs() < 1e-3);
    }

    #[test]
    fn suite_config_validation() {
        let bad = SuiteConfig { count: 0, ..SuiteConfig::default() };
        assert!(matches!(run_suite(&bad), Err(Error::ConfigInvalid(_))));
        assert!(matches!("bogus".parse::<SuiteKind>(), Err(Error::ConfigInvalid(_))));
        assert_eq!("levy".parse::<SuiteKind>().unwrap(), SuiteKind::Levy);
    }

    #[test]
    fn default_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig { count: 4, cells: 512, ..SuiteConfig::default() };
        let (reports, summary) = run_suite_summary(&cfg).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(summary.all_passed(), "{failed:?}");
        let again = run_suite(&cfg).unwrap();
        let a: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
        let b: Vec<String> = again.iter().map(|r| r.to_json()).collect();
        assert_eq!(a, b);
    }
}
