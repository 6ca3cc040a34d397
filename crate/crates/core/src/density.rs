//! Gridded probability densities.
//!
//! [`Grid1D`] is a piecewise-constant density on a uniform 1-D grid and
//! [`RadialDensity`] a spherically symmetric density in dimension `n` given
//! by its value on concentric shells of equal width. Both expose the
//! [`Density`] trait, a flat view of `(value, cell measure)` pairs that the
//! rearrangement and entropy code works on.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::unit_ball_volume;

/// Default tolerance on total mass after normalization.
pub const MASS_TOL: f64 = 1e-9;
/// Default tolerance for symmetry tests about the origin.
pub const SYM_TOL: f64 = 1e-9;

/// Positive floor applied to generated Gaussian mixtures.
const POSITIVE_FLOOR: f64 = 1e-300;

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// A density seen as a finite list of cells, each with a constant value
/// (probability per unit measure) and a Lebesgue measure.
pub trait Density {
    /// Ambient dimension.
    fn dim(&self) -> usize;
    fn cell_count(&self) -> usize;
    fn value(&self, j: usize) -> f64;
    fn cell_measure(&self, j: usize) -> f64;

    fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.cell_count()).map(move |j| (self.value(j), self.cell_measure(j)))
    }

    fn mass(&self) -> f64 {
        stable_sum(self.cells().map(|(v, m)| v * m))
    }

    fn max_value(&self) -> f64 {
        self.cells().map(|(v, _)| v).fold(0.0, f64::max)
    }
}

fn validate_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeValue { index, value });
        }
    }
    Ok(())
}

/// Uniform grid layout: left edge, spacing, number of cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub dx: f64,
    pub cells: usize,
}

impl GridSpec {
    pub fn new(x0: f64, dx: f64, cells: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::NonPositiveSpacing(dx));
        }
        if cells == 0 {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { x0, dx, cells })
    }

    /// `cells` equal cells exactly covering `[a, b]`.
    pub fn over(a: f64, b: f64, cells: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::BadParameter(format!("empty interval [{a}, {b}]")));
        }
        Self::new(a, (b - a) / cells as f64, cells)
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        self.x0 + (j as f64 + 0.5) * self.dx
    }
}

/// Piecewise-constant density on a uniform 1-D grid. Cell `j` covers
/// `[x0 + j·dx, x0 + (j+1)·dx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl Grid1D {
    /// Validated grid; mass is not required to be one.
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::NonPositiveSpacing(dx));
        }
        if !x0.is_finite() {
            return Err(Error::BadParameter(format!("x0 must be finite, got {x0}")));
        }
        validate_values(&values)?;
        Ok(Self { x0, dx, values })
    }

    /// Samples `f` at cell midpoints.
    pub fn from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..spec.cells).map(|j| f(spec.midpoint(j))).collect();
        Self::new(spec.x0, spec.dx, values)
    }

    pub(crate) fn from_parts_unchecked(x0: f64, dx: f64, values: Vec<f64>) -> Self {
        Self { x0, dx, values }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec { x0: self.x0, dx: self.dx, cells: self.values.len() }
    }

    /// Right edge of the last cell.
    pub fn x_end(&self) -> f64 {
        self.x0 + self.values.len() as f64 * self.dx
    }

    pub fn midpoint(&self, j: usize) -> f64 {
        self.x0 + (j as f64 + 0.5) * self.dx
    }

    /// Rescaled copy with unit mass. A density whose mass already rounds
    /// to one is returned unchanged, which makes this idempotent.
    pub fn normalize(&self) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(Error::ZeroMass);
        }
        if (m - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(self.clone());
        }
        let values = self.values.iter().map(|v| v / m).collect();
        Ok(Self { x0: self.x0, dx: self.dx, values })
    }

    /// Midpoint-rule moment `Σ f_j·dx·m_j^k`.
    pub fn moment(&self, k: u32) -> f64 {
        let dx = self.dx;
        stable_sum(
            self.values
                .iter()
                .enumerate()
                .map(|(j, v)| v * dx * self.midpoint(j).powi(k as i32)),
        )
    }

    pub fn mean(&self) -> f64 {
        self.moment(1) / self.moment(0)
    }

    /// Midpoint-rule variance `moment(2) − moment(1)²` of the normalized
    /// density.
    pub fn variance(&self) -> f64 {
        let m0 = self.moment(0);
        let m1 = self.moment(1) / m0;
        self.moment(2) / m0 - m1 * m1
    }

    /// Same step function on a grid `factor` times finer.
    pub fn refine(&self, factor: usize) -> Self {
        assert!(factor >= 1, "refinement factor must be at least 1");
        let mut values = Vec::with_capacity(self.values.len() * factor);
        for &v in &self.values {
            values.extend(std::iter::repeat_n(v, factor));
        }
        Self { x0: self.x0, dx: self.dx / factor as f64, values }
    }

    /// Measure of `{f > 0}`.
    pub fn support_measure(&self) -> f64 {
        self.values.iter().filter(|&&v| v > 0.0).count() as f64 * self.dx
    }

    /// Translation by a whole number of cells.
    pub fn shift_cells(&self, k: i64) -> Self {
        Self { x0: self.x0 + k as f64 * self.dx, dx: self.dx, values: self.values.clone() }
    }

    /// True when `x0 = −len·dx/2` and mirrored cells agree within `tol`
    /// (relative to the largest value).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.values.len();
        let half = n as f64 * self.dx / 2.0;
        if (self.x0 + half).abs() > tol * self.dx.max(half) {
            return false;
        }
        let scale = self.max_value().max(1.0);
        (0..n / 2).all(|j| (self.values[j] - self.values[n - 1 - j]).abs() <= tol * scale)
    }

    /// Offset of this grid relative to `other`, in cells, if the two
    /// lattices coincide (same `dx`, `x0` differing by a whole number of
    /// cells).
    pub fn cell_offset(&self, other: &Grid1D) -> Option<i64> {
        if (self.dx - other.dx).abs() > 1e-12 * self.dx {
            return None;
        }
        let shift = (self.x0 - other.x0) / self.dx;
        let k = shift.round();
        ((shift - k).abs() <= 1e-6).then_some(k as i64)
    }

    /// Zero-pads onto the aligned grid starting at `x0` with `cells` cells.
    pub fn pad_to(&self, x0: f64, cells: usize) -> Result<Self> {
        let probe = Self { x0, dx: self.dx, values: Vec::new() };
        let offset = self.cell_offset(&probe).ok_or(Error::GridMismatch)?;
        if offset < 0 || offset as usize + self.values.len() > cells {
            return Err(Error::GridMismatch);
        }
        let mut values = vec![0.0; cells];
        values[offset as usize..offset as usize + self.values.len()].copy_from_slice(&self.values);
        Ok(Self { x0, dx: self.dx, values })
    }

    /// Writes the `x,f` CSV dump: one row per cell midpoint.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let fmt_err = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["x", "f"]).map_err(fmt_err)?;
        for (j, &v) in self.values.iter().enumerate() {
            w.write_record([format_f64(self.midpoint(j)), format_f64(v)]).map_err(fmt_err)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Reads an `x,f` CSV dump. Midpoints must be equally spaced; a single
    /// row is taken to be a unit-mass cell.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "f" {
            return Err(Error::Format(format!("expected header \"x,f\", found {headers:?}")));
        }
        let mut xs = Vec::new();
        let mut fs = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::Format(format!("row {}: expected 2 fields", line + 2)));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Format(format!("row {}: {e}", line + 2)))
            };
            xs.push(parse(&rec[0])?);
            fs.push(parse(&rec[1])?);
        }
        match xs.len() {
            0 => Err(Error::EmptyGrid),
            1 => {
                if !(fs[0] > 0.0) {
                    return Err(Error::Format("single-cell file needs a positive value".into()));
                }
                let dx = 1.0 / fs[0];
                Self::new(xs[0] - dx / 2.0, dx, fs)
            }
            n => {
                let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
                if !(dx > 0.0) {
                    return Err(Error::NonPositiveSpacing(dx));
                }
                let x0 = xs[0] - dx / 2.0;
                for (j, &x) in xs.iter().enumerate() {
                    let expected = x0 + (j as f64 + 0.5) * dx;
                    if (x - expected).abs() > 1e-9 * dx.max(expected.abs()) {
                        return Err(Error::Format(format!("row {}: midpoints not equally spaced", j + 2)));
                    }
                }
                Self::new(x0, dx, fs)
            }
        }
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

/// Shortest round-trip representation; exponent form for very small or
/// very large magnitudes.
fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

impl Density for Grid1D {
    fn dim(&self) -> usize {
        1
    }

    fn cell_count(&self) -> usize {
        self.values.len()
    }

    fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    fn cell_measure(&self, _j: usize) -> f64 {
        self.dx
    }

    fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Spherically symmetric density in dimension `dim`: `profile[j]` is the
/// value on radii `[j·dr, (j+1)·dr)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensity {
    dim: usize,
    dr: f64,
    profile: Vec<f64>,
    unit_ball: f64,
}

impl RadialDensity {
    pub fn new(dim: usize, dr: f64, profile: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadParameter("dimension must be at least 1".into()));
        }
        if !(dr > 0.0 && dr.is_finite()) {
            return Err(Error::NonPositiveSpacing(dr));
        }
        validate_values(&profile)?;
        Ok(Self { dim, dr, profile, unit_ball: unit_ball_volume(dim) })
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn len(&self) -> usize {
        self.profile.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_empty()
    }

    /// `(j+1)^n − j^n`: shell volume in units of `V_n(1)·drⁿ`.
    pub fn shell_units(&self, j: usize) -> f64 {
        let n = self.dim as i32;
        (j as f64 + 1.0).powi(n) - (j as f64).powi(n)
    }

    /// `V_n(1)·((j+1)ⁿ − jⁿ)·drⁿ`.
    pub fn shell_volume(&self, j: usize) -> f64 {
        self.unit_ball * self.shell_units(j) * self.dr.powi(self.dim as i32)
    }

    pub fn normalize(&self) -> Result<Self> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(Error::ZeroMass);
        }
        if (m - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(self.clone());
        }
        let profile = self.profile.iter().map(|v| v / m).collect();
        Ok(Self { profile, ..self.clone() })
    }

    /// `E‖X‖²` by the shell-midpoint rule.
    pub fn second_moment(&self) -> f64 {
        stable_sum((0..self.profile.len()).map(|j| {
            let r = (j as f64 + 0.5) * self.dr;
            self.profile[j] * self.shell_volume(j) * r * r
        }))
    }
}

impl Density for RadialDensity {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cell_count(&self) -> usize {
        self.profile.len()
    }

    fn value(&self, j: usize) -> f64 {
        self.profile[j]
    }

    fn cell_measure(&self, j: usize) -> f64 {
        self.shell_volume(j)
    }
}

/// One-dimensional radial view of a grid density symmetric about 0.
///
/// Grids with an even number of cells map onto shells of width `dx`; odd
/// grids (whose central cell straddles the origin) onto shells of width
/// `dx/2`.
pub fn radial_from_grid(f: &Grid1D) -> Result<RadialDensity> {
    radial_from_grid_tol(f, SYM_TOL)
}

pub fn radial_from_grid_tol(f: &Grid1D, sym_tol: f64) -> Result<RadialDensity> {
    if !f.is_symmetric(sym_tol) {
        return Err(Error::NotSymmetric);
    }
    let n = f.len();
    let v = f.values();
    let (dr, profile) = if n.is_multiple_of(2) {
        (f.dx(), v[n / 2..].to_vec())
    } else {
        let c = n / 2;
        let mut p = Vec::with_capacity(n);
        p.push(v[c]);
        for &x in &v[c + 1..] {
            p.push(x);
            p.push(x);
        }
        (f.dx() / 2.0, p)
    };
    RadialDensity::new(1, dr, profile)
}

/// Shape family for [`random_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    UniformMixture,
    GaussianMixture,
    SpikyPiecewise,
    Bimodal,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::UniformMixture,
        GeneratorKind::GaussianMixture,
        GeneratorKind::SpikyPiecewise,
        GeneratorKind::Bimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::UniformMixture => "uniform-mixture",
            GeneratorKind::GaussianMixture => "gaussian-mixture",
            GeneratorKind::SpikyPiecewise => "spiky-piecewise",
            GeneratorKind::Bimodal => "bimodal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityGeneratorSpec {
    pub kind: GeneratorKind,
    pub component_count: usize,
    pub seed: u64,
    pub domain_halfwidth: f64,
    pub cells: usize,
}

impl DensityGeneratorSpec {
    pub fn new(kind: GeneratorKind, component_count: usize, seed: u64, domain_halfwidth: f64, cells: usize) -> Self {
        Self { kind, component_count, seed, domain_halfwidth, cells }
    }

    pub fn validate(&self) -> Result<()> {
        if self.component_count == 0 {
            return Err(Error::BadParameter("component_count must be at least 1".into()));
        }
        if self.cells < 8 {
            return Err(Error::BadParameter(format!("need at least 8 cells, got {}", self.cells)));
        }
        if !(self.domain_halfwidth > 0.0 && self.domain_halfwidth.is_finite()) {
            return Err(Error::BadParameter("domain_halfwidth must be positive".into()));
        }
        Ok(())
    }
}

/// Mass of the uniform law on `[a, b]` falling in each cell, divided by `dx`.
fn add_uniform(values: &mut [f64], spec: GridSpec, a: f64, b: f64, weight: f64) {
    let height = weight / (b - a);
    for (j, v) in values.iter_mut().enumerate() {
        let lo = spec.x0 + j as f64 * spec.dx;
        let hi = lo + spec.dx;
        let overlap = (hi.min(b) - lo.max(a)).max(0.0);
        *v += height * overlap / spec.dx;
    }
}

fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Deterministic random test density on `[−hw, hw]`, normalized.
pub fn random_density(spec: &DensityGeneratorSpec) -> Result<Grid1D> {
    spec.validate()?;
    let hw = spec.domain_halfwidth;
    let grid = GridSpec::over(-hw, hw, spec.cells)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.component_count;
    let mut values = vec![0.0; spec.cells];
    // Smallest admissible component width: a few cells.
    let min_w = (4.0 * grid.dx).max(0.02 * hw);
    match spec.kind {
        GeneratorKind::UniformMixture => {
            let weights = random_weights(&mut rng, k);
            for w in weights {
                let width = rng.random_range(min_w..(0.6 * hw).max(2.0 * min_w));
                let a = rng.random_range(-hw..(hw - width));
                add_uniform(&mut values, grid, a, a + width, w);
            }
        }
        GeneratorKind::GaussianMixture => {
            let weights = random_weights(&mut rng, k);
            let comps: Vec<(f64, f64, f64)> = weights
                .into_iter()
                .map(|w| {
                    let mu = rng.random_range(-0.3 * hw..0.3 * hw);
                    let sigma = rng.random_range(0.05 * hw..0.1 * hw).max(4.0 * grid.dx);
                    (w, mu, sigma)
                })
                .collect();
            for (j, v) in values.iter_mut().enumerate() {
                let x = grid.midpoint(j);
                let d: f64 = comps
                    .iter()
                    .map(|&(w, mu, s)| {
                        let z = (x - mu) / s;
                        w * (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
                    })
                    .sum();
                *v = d.max(POSITIVE_FLOOR);
            }
        }
        GeneratorKind::SpikyPiecewise => {
            // Random blocks of constant value separated by random gaps.
            let blocks = 2 * k + 1;
            let mut cuts: Vec<usize> = (0..blocks - 1).map(|_| rng.random_range(1..spec.cells)).collect();
            cuts.push(0);
            cuts.push(spec.cells);
            cuts.sort_unstable();
            cuts.dedup();
            for win in cuts.windows(2) {
                let level = if rng.random_bool(0.35) { 0.0 } else { rng.random_range(0.05..1.0f64).powi(2) };
                for v in &mut values[win[0]..win[1]] {
                    *v = level;
                }
            }
            if values.iter().all(|&v| v == 0.0) {
                let j = rng.random_range(0..spec.cells);
                values[j] = 1.0;
            }
        }
        GeneratorKind::Bimodal => {
            let w = rng.random_range(0.2..0.8);
            let width_l = rng.random_range(min_w..(0.4 * hw).max(2.0 * min_w));
            let width_r = rng.random_range(min_w..(0.4 * hw).max(2.0 * min_w));
            let a = rng.random_range(-hw..(-0.1 * hw - width_l).max(-hw + 1e-9));
            let b = rng.random_range(0.1 * hw..(hw - width_r).max(0.1 * hw + 1e-9));
            add_uniform(&mut values, grid, a, a + width_l, w);
            add_tent(&mut values, grid, b, b + width_r, 1.0 - w);
        }
    }
    Grid1D::new(grid.x0, grid.dx, values)?.normalize()
}

/// Symmetric triangle on `[a, b]` with total mass `weight`, sampled at
/// cell midpoints.
fn add_tent(values: &mut [f64], spec: GridSpec, a: f64, b: f64, weight: f64) {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for (j, v) in values.iter_mut().enumerate() {
        let x = spec.midpoint(j);
        let t = (1.0 - (x - c).abs() / half).max(0.0);
        *v += weight * t / half;
    }
}
