//! Linear convolution of grid densities.
//!
//! Each factor is read as atoms of mass `value·dx` at its cell midpoints.
//! The discrete convolution of the mass vectors places the atom sums at
//! `x0_f + x0_g + (k+1)·dx`, which are the midpoints of an output grid with
//! origin `x0_f + x0_g + dx/2` and `N_f + N_g − 1` cells.
//!
//! Large products go through an FFT. The positivity pattern of the output is
//! always the exact index sumset of the factors' supports: cells outside it
//! are exactly zero and cells inside it are at least `f64::MIN_POSITIVE`, so
//! `h_0` and support measures never see FFT round-off.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::density::{stable_sum, Grid1D, GridSpec};
use crate::error::{Error, Result};

/// Output sizes above this use the FFT path.
pub const FFT_THRESHOLD: usize = 4096;
/// Factors this short are always summed directly.
const DIRECT_FACTOR_MAX: usize = 64;
/// Relative slack allowed between the spacings of two factors.
const SPACING_RTOL: f64 = 1e-12;

fn check_spacing(f: &Grid1D, g: &Grid1D) -> Result<()> {
    let (a, b) = (f.dx(), g.dx());
    if (a - b).abs() > SPACING_RTOL * a.max(b) {
        return Err(Error::SpacingMismatch(a, b));
    }
    Ok(())
}

fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let lift = |v: &[f64]| {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (z, &x) in buf.iter_mut().zip(v) {
            z.re = x;
        }
        buf
    };
    let mut fa = lift(a);
    let mut fb = lift(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa[..out_len].iter().map(|z| z.re * scale).collect()
}

fn direct_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// Maximal runs `[start, end]` of positive entries.
fn positive_runs(v: &[f64]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &x) in v.iter().enumerate() {
        match (x > 0.0, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, v.len() - 1));
    }
    runs
}

/// Indicator of the index sumset `{i + j : a_i > 0, b_j > 0}`.
fn support_sumset(a: &[f64], b: &[f64]) -> Vec<bool> {
    let out_len = a.len() + b.len() - 1;
    let ra = positive_runs(a);
    let rb = positive_runs(b);
    let mut mask = vec![false; out_len];
    if ra.len().saturating_mul(rb.len()) <= 4 * out_len {
        // Interval sumsets, marked through a difference array.
        let mut diff = vec![0i64; out_len + 1];
        for &(s1, e1) in &ra {
            for &(s2, e2) in &rb {
                diff[s1 + s2] += 1;
                diff[e1 + e2 + 1] -= 1;
            }
        }
        let mut acc = 0i64;
        for (m, d) in mask.iter_mut().zip(&diff) {
            acc += d;
            *m = acc > 0;
        }
    } else {
        // Many runs: convolve the 0/1 indicators; counts are integers.
        let ia: Vec<f64> = a.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect();
        let ib: Vec<f64> = b.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect();
        let counts = if out_len > FFT_THRESHOLD { fft_convolve(&ia, &ib) } else { direct_convolve(&ia, &ib) };
        for (m, c) in mask.iter_mut().zip(counts) {
            *m = c > 0.5;
        }
    }
    mask
}

/// Linear convolution `f ⋆ g` of two densities with equal spacing.
pub fn convolve(f: &Grid1D, g: &Grid1D) -> Result<Grid1D> {
    check_spacing(f, g)?;
    let dx = f.dx();
    let (a, b) = (f.values(), g.values());
    let out_len = a.len() + b.len() - 1;
    let scaled: Vec<f64> = b.iter().map(|&y| y * dx).collect();
    let use_fft = out_len > FFT_THRESHOLD && a.len().min(b.len()) > DIRECT_FACTOR_MAX;
    let raw = if use_fft { fft_convolve(a, &scaled) } else { direct_convolve(a, &scaled) };
    let mask = support_sumset(a, b);
    let values = raw
        .into_iter()
        .zip(mask)
        .map(|(v, inside)| if !inside { 0.0 } else if v > 0.0 { v } else { f64::MIN_POSITIVE })
        .collect();
    let x0 = f.x0() + g.x0() + 0.5 * dx;
    Ok(Grid1D::from_parts_unchecked(x0, dx, values))
}

/// Left fold of [`convolve`] over `fs`.
pub fn convolve_k(fs: &[Grid1D]) -> Result<Grid1D> {
    let (first, rest) = fs.split_first().ok_or(Error::EmptyGrid)?;
    rest.iter().try_fold(first.clone(), |acc, g| convolve(&acc, g))
}

/// Density of `s·X`: spacing and origin scale by `s`, values by `1/s`.
pub fn scale_density(f: &Grid1D, s: f64) -> Result<Grid1D> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::BadParameter(format!("scale must be positive, got {s}")));
    }
    if s == 1.0 {
        return Ok(f.clone());
    }
    let values = f.values().iter().map(|&v| v / s).collect();
    Ok(Grid1D::from_parts_unchecked(f.x0() * s, f.dx() * s, values))
}

/// Mass-preserving cell-overlap projection of `f` onto `spec`. Mass of `f`
/// lying outside `spec` is dropped.
pub fn project(f: &Grid1D, spec: GridSpec) -> Grid1D {
    let mut out = vec![0.0; spec.cells];
    let (x0, dx) = (f.x0(), f.dx());
    for (i, &v) in f.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let lo = x0 + i as f64 * dx;
        let hi = lo + dx;
        let first = ((lo - spec.x0) / spec.dx).floor().max(0.0) as usize;
        let mut j = first;
        while j < spec.cells {
            let clo = spec.x0 + j as f64 * spec.dx;
            if clo >= hi {
                break;
            }
            let chi = clo + spec.dx;
            let overlap = hi.min(chi) - lo.max(clo);
            if overlap > 0.0 {
                out[j] += v * overlap;
            }
            j += 1;
        }
    }
    for o in &mut out {
        *o /= spec.dx;
    }
    Grid1D::from_parts_unchecked(spec.x0, spec.dx, out)
}

/// Projection onto a grid of spacing `dx_new` that starts at `f`'s left
/// edge and covers its whole range.
pub fn resample(f: &Grid1D, dx_new: f64) -> Result<Grid1D> {
    if !(dx_new > 0.0 && dx_new.is_finite()) {
        return Err(Error::NonPositiveSpacing(dx_new));
    }
    if dx_new == f.dx() {
        return Ok(f.clone());
    }
    let width = f.x_end() - f.x0();
    let cells = ((width / dx_new) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok(project(f, GridSpec::new(f.x0(), dx_new, cells)?))
}

/// `∫ f g` for two step functions on arbitrary grids, integrating over the
/// merged cell boundaries.
pub fn inner_product(f: &Grid1D, g: &Grid1D) -> f64 {
    let (fv, gv) = (f.values(), g.values());
    let edge_f = |i: usize| f.x0() + i as f64 * f.dx();
    let edge_g = |j: usize| g.x0() + j as f64 * g.dx();
    let (mut i, mut j) = (0usize, 0usize);
    // Skip to the first overlapping pair of cells.
    while i < fv.len() && edge_f(i + 1) <= edge_g(0) {
        i += 1;
    }
    while j < gv.len() && edge_g(j + 1) <= edge_f(0) {
        j += 1;
    }
    let mut terms = Vec::new();
    while i < fv.len() && j < gv.len() {
        let lo = edge_f(i).max(edge_g(j));
        let (hf, hg) = (edge_f(i + 1), edge_g(j + 1));
        let hi = hf.min(hg);
        if hi > lo {
            terms.push(fv[i] * gv[j] * (hi - lo));
        }
        if hf <= hg {
            i += 1;
        } else {
            j += 1;
        }
    }
    stable_sum(terms)
}
