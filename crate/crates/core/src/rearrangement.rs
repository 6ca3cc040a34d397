//! Symmetric decreasing rearrangement, level sets and majorization.
//!
//! A rearranged grid density keeps the multiset of cell values (weighted by
//! cell measure) and stacks them from the origin outwards in decreasing
//! order. For [`Grid1D`] each input cell is split into two mirrored
//! half-width cells, so the output is exactly symmetric and its level sets
//! have exactly the input's measures.

use crate::density::{stable_sum, Density, Grid1D, RadialDensity};
use crate::error::{Error, Result};

/// Default majorization slack for comparisons that involve no convolution.
pub const MAJ_TOL: f64 = 1e-12;

/// Indices of the cells sorted by decreasing value; ties keep index order.
fn decreasing_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Symmetric decreasing rearrangement of a 1-D grid density.
///
/// The result lives on a grid of spacing `dx/2` centered at the origin with
/// twice as many cells; the `k`-th largest input value fills the two
/// half-cells at distance `[k·dx/2, (k+1)·dx/2)` from 0.
pub fn rearrange_1d(f: &Grid1D) -> Grid1D {
    let n = f.len();
    let v = f.values();
    let half = f.dx() / 2.0;
    let mut out = vec![0.0; 2 * n];
    for (k, &j) in decreasing_order(v).iter().enumerate() {
        out[n + k] = v[j];
        out[n - 1 - k] = v[j];
    }
    Grid1D::from_parts_unchecked(-(n as f64) * half, half, out)
}

/// Symmetric decreasing rearrangement of a radial density, on the same
/// shell grid.
///
/// Values sorted in decreasing order are laid out as consecutive volume
/// segments from the origin; every output shell receives the
/// volume-average of the segments it overlaps, so super-level volumes are
/// exact at every shell boundary and already-decreasing profiles are fixed
/// points.
pub fn rearrange_radial(f: &RadialDensity) -> RadialDensity {
    let p = f.profile();
    let n = p.len();
    let order = decreasing_order(p);
    let mut out = vec![0.0; n];
    // Volumes in units of V_n·drⁿ: shell j spans [jⁿ, (j+1)ⁿ).
    let mut seg = order.iter().map(|&j| (p[j], f.shell_units(j)));
    let mut current = seg.next();
    let mut seg_left = current.map_or(0.0, |s| s.1);
    for (j, slot) in out.iter_mut().enumerate() {
        let units = f.shell_units(j);
        let mut need = units;
        let mut acc = 0.0;
        let mut single: Option<f64> = None;
        let mut uniform = true;
        while need > 0.0 {
            let Some((val, _)) = current else { break };
            let take = need.min(seg_left);
            acc += val * take;
            uniform &= single.is_none_or(|s| s == val);
            single = Some(val);
            need -= take;
            seg_left -= take;
            if seg_left <= 0.0 {
                current = seg.next();
                seg_left = current.map_or(0.0, |s| s.1);
            }
        }
        *slot = match single {
            Some(v) if uniform && need <= 0.0 => v,
            _ => acc / units,
        };
    }
    RadialDensity::new(f.dim(), f.dr(), out).expect("rearranged profile stays valid")
}

/// Lebesgue measure of `{f > t}`.
pub fn level_set_measure<D: Density>(f: &D, t: f64) -> f64 {
    stable_sum(f.cells().filter(|&(v, _)| v > t).map(|(_, m)| m))
}

/// Super-level set measures at every distinct value of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetProfile {
    /// Distinct values, decreasing.
    pub thresholds: Vec<f64>,
    /// `measures[j] = |{f > thresholds[j]}|`, nondecreasing.
    pub measures: Vec<f64>,
}

pub fn level_set_profile<D: Density>(f: &D) -> LevelSetProfile {
    let mut cells: Vec<(f64, f64)> = f.cells().collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut thresholds = Vec::new();
    let mut measures = Vec::new();
    let mut below = Vec::new();
    let mut i = 0;
    while i < cells.len() {
        let t = cells[i].0;
        thresholds.push(t);
        measures.push(stable_sum(below.iter().copied()));
        while i < cells.len() && cells[i].0 == t {
            below.push(cells[i].1);
            i += 1;
        }
    }
    LevelSetProfile { thresholds, measures }
}

/// Cumulative measure and mass of the decreasing rearrangement at each
/// cell boundary (starting from `(0, 0)`).
fn lorenz_curve<D: Density>(f: &D) -> (Vec<f64>, Vec<f64>) {
    let mut cells: Vec<(f64, f64)> = f.cells().filter(|&(v, m)| v > 0.0 && m > 0.0).collect();
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut s = Vec::with_capacity(cells.len() + 1);
    let mut mass = Vec::with_capacity(cells.len() + 1);
    s.push(0.0);
    mass.push(0.0);
    let (mut cs, mut cm) = (0.0, 0.0);
    for (v, m) in cells {
        cs += m;
        cm += v * m;
        s.push(cs);
        mass.push(cm);
    }
    (s, mass)
}

/// Piecewise-linear evaluation of a Lorenz curve with a monotone cursor.
struct LorenzCursor<'a> {
    s: &'a [f64],
    mass: &'a [f64],
    k: usize,
}

impl LorenzCursor<'_> {
    fn at(&mut self, x: f64) -> f64 {
        let last = self.s.len() - 1;
        while self.k < last && self.s[self.k + 1] <= x {
            self.k += 1;
        }
        if self.k == last {
            return self.mass[last];
        }
        let (s0, s1) = (self.s[self.k], self.s[self.k + 1]);
        let (m0, m1) = (self.mass[self.k], self.mass[self.k + 1]);
        if x <= s0 {
            return m0;
        }
        m0 + (m1 - m0) * (x - s0) / (s1 - s0)
    }
}

/// Outcome of a majorization test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorization {
    /// True when `f ≺ g` within the tolerance.
    pub holds: bool,
    /// `min_r (∫_{B(0,r)} g* − ∫_{B(0,r)} f*)`; never positive.
    pub worst_margin: f64,
}

/// Whether `f` is majorized by `g`: `∫_{B(0,r)} f* ≤ ∫_{B(0,r)} g* + tol`
/// for every radius. Both Lorenz curves are piecewise linear, so checking
/// at the union of their breakpoints is exact.
pub fn majorizes_with_tol<F: Density, G: Density>(f: &F, g: &G, tol: f64) -> Result<Majorization> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    let (sf, mf) = lorenz_curve(f);
    let (sg, mg) = lorenz_curve(g);
    let mut cf = LorenzCursor { s: &sf, mass: &mf, k: 0 };
    let mut cg = LorenzCursor { s: &sg, mass: &mg, k: 0 };
    let mut worst = 0.0_f64;
    let (mut i, mut j) = (0, 0);
    while i < sf.len() || j < sg.len() {
        let x = match (sf.get(i), sg.get(j)) {
            (Some(&a), Some(&b)) if a <= b => {
                i += 1;
                a
            }
            (Some(_), Some(&b)) => {
                j += 1;
                b
            }
            (Some(&a), None) => {
                i += 1;
                a
            }
            (None, Some(&b)) => {
                j += 1;
                b
            }
            (None, None) => unreachable!(),
        };
        let margin = cg.at(x) - cf.at(x);
        worst = worst.min(margin);
    }
    Ok(Majorization { holds: worst >= -tol, worst_margin: worst })
}

/// [`majorizes_with_tol`] at [`MAJ_TOL`], returning `(holds, worst_margin)`.
pub fn majorizes<F: Density, G: Density>(f: &F, g: &G) -> Result<(bool, f64)> {
    let m = majorizes_with_tol(f, g, MAJ_TOL)?;
    Ok((m.holds, m.worst_margin))
}

/// `‖f − g‖₁` on a shared grid.
pub fn l1_distance(f: &Grid1D, g: &Grid1D) -> Result<f64> {
    if f.len() != g.len() || f.dx() != g.dx() || f.x0() != g.x0() {
        return Err(Error::GridMismatch);
    }
    Ok(stable_sum(f.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs() * f.dx())))
}
