//! Peak finding, power-law fits, crossover location and data-collapse scoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid size of the unimodality pre-scan done before golden-section refinement.
pub const PRESCAN_POINTS: usize = 1024;

/// Midpoint of the Poisson (2 ln 2 − 1) and GOE (0.5307) mean gap ratios.
pub const DEFAULT_CROSSOVER_TARGET: f64 = 0.4585;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal function on `[lo, hi]` to within `tol` in `x`.
///
/// A [`PRESCAN_POINTS`]-point grid is evaluated first. It rejects flat curves
/// and curves with a second, separated maximum, and it brackets the peak so the
/// golden-section search cannot be fooled by a maximum squeezed against an
/// endpoint.
pub fn golden_section_maximize<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::validation(format!("invalid interval [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::validation(format!("tolerance must be positive, got {tol}")));
    }
    let step = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let grid_x = |i: usize| if i == PRESCAN_POINTS - 1 { hi } else { lo + step * i as f64 };
    let ys: Vec<f64> = (0..PRESCAN_POINTS).map(|i| f(grid_x(i))).collect();
    if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
        return Err(Error::Numeric(format!("function is not finite at x = {}", grid_x(i))));
    }
    let (imax, ymax) = argmax(&ys);
    let ymin = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = ymax - ymin;
    if spread < 1e-14 {
        return Err(Error::DegenerateCurve { spread });
    }
    let noise = 1e-9 * spread;
    check_unimodal(&ys, imax, noise).map_err(|j| Error::NonUnimodal {
        first: grid_x(imax),
        second: grid_x(j),
    })?;

    let mut a = grid_x(imax.saturating_sub(1));
    let mut b = grid_x((imax + 1).min(PRESCAN_POINTS - 1));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let best = [(x, fx), (c, fc), (d, fd), (grid_x(imax), ymax)]
        .into_iter()
        .fold((x, fx), |acc, p| if p.1 > acc.1 { p } else { acc });
    Ok(Maximum { x: best.0, value: best.1 })
}

fn argmax(ys: &[f64]) -> (usize, f64) {
    ys.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, y)| if y > acc.1 { (i, y) } else { acc })
}

/// Returns the index of a competing maximum if the sequence rises again by
/// more than `noise` after falling away from the global maximum.
fn check_unimodal(ys: &[f64], imax: usize, noise: f64) -> std::result::Result<(), usize> {
    let mut low = ys[imax];
    for j in (0..imax).rev() {
        low = low.min(ys[j]);
        if ys[j] > low + noise {
            return Err(j);
        }
    }
    let mut low = ys[imax];
    for (j, &y) in ys.iter().enumerate().skip(imax + 1) {
        low = low.min(y);
        if y > low + noise {
            return Err(j);
        }
    }
    Ok(())
}

/// Least-squares fit of `y = prefactor · x^exponent` in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Root-mean-square residual of `ln y`.
    pub rms_residual: f64,
    pub points: usize,
}

/// Fits the points whose `x` lies inside `window` (inclusive; all points when `None`).
pub fn power_law_fit(points: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<PowerLawFit> {
    let selected: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, _)| window.map_or(true, |(lo, hi)| x >= lo && x <= hi))
        .collect();
    if let Some(&(x, y)) = selected.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::validation(format!(
            "power-law fit needs positive data, got ({x}, {y})"
        )));
    }
    if selected.len() < 3 {
        return Err(Error::validation(format!(
            "power-law fit needs at least 3 points, window holds {}",
            selected.len()
        )));
    }
    let logs: Vec<(f64, f64)> = selected.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::validation("power-law fit needs distinct x values"));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = logs
        .iter()
        .map(|&(lx, ly)| (ly - intercept - exponent * lx).powi(2))
        .sum();
    let x_min = selected.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x_max = selected.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit {
        exponent,
        prefactor: intercept.exp(),
        x_min,
        x_max,
        rms_residual: (rss / n).sqrt(),
        points: selected.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverPoint {
    pub control: f64,
    pub target: f64,
    /// Indices of the two samples that straddle the target.
    pub bracket: (usize, usize),
}

/// First place where the piecewise-linear curve reaches `target`.
pub fn crossover_location(curve: &[(f64, f64)], target: f64) -> Result<CrossoverPoint> {
    if curve.len() < 2 {
        return Err(Error::validation("crossover search needs at least two samples"));
    }
    for i in 0..curve.len() - 1 {
        let (x0, y0) = curve[i];
        let (x1, y1) = curve[i + 1];
        let (a, b) = (y0 - target, y1 - target);
        if a == 0.0 {
            return Ok(CrossoverPoint { control: x0, target, bracket: (i, i) });
        }
        if a * b < 0.0 {
            let control = x0 + (x1 - x0) * a / (a - b);
            return Ok(CrossoverPoint { control, target, bracket: (i, i + 1) });
        }
    }
    let last = curve.len() - 1;
    if curve[last].1 == target {
        return Ok(CrossoverPoint { control: curve[last].0, target, bracket: (last, last) });
    }
    Err(Error::NotFound { target })
}

fn sorted_curve(curve: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut c = curve.to_vec();
    c.sort_by(|a, b| a.0.total_cmp(&b.0));
    c
}

/// Linear interpolation on a curve sorted by `x`; `None` outside its range.
pub fn interpolate(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    let first = curve.first()?;
    let last = curve.last()?;
    if x < first.0 || x > last.0 {
        return None;
    }
    let k = curve.partition_point(|p| p.0 < x);
    if k == 0 {
        return Some(first.1);
    }
    let (x0, y0) = curve[k - 1];
    let (x1, y1) = curve[k];
    if x1 == x0 {
        return Some(y1);
    }
    Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// The part of `curve` inside `[lo, hi]`, with interpolated end points added.
pub fn restrict_curve(curve: &[(f64, f64)], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let c = sorted_curve(curve);
    let mut out = Vec::new();
    if let Some(y) = interpolate(&c, lo) {
        out.push((lo, y));
    }
    out.extend(c.iter().copied().filter(|p| p.0 > lo && p.0 < hi));
    if let Some(y) = interpolate(&c, hi) {
        out.push((hi, y));
    }
    out
}

/// Largest vertical spread between linearly interpolated curves over their
/// common `x` range.
pub fn collapse_residual(curves: &[Vec<(f64, f64)>]) -> Result<f64> {
    if curves.len() < 2 {
        return Err(Error::validation("collapse needs at least two curves"));
    }
    let sorted: Vec<Vec<(f64, f64)>> = curves.iter().map(|c| sorted_curve(c)).collect();
    if sorted.iter().any(|c| c.is_empty()) {
        return Err(Error::validation("collapse curves must be nonempty"));
    }
    let lo = sorted.iter().map(|c| c[0].0).fold(f64::NEG_INFINITY, f64::max);
    let hi = sorted.iter().map(|c| c[c.len() - 1].0).fold(f64::INFINITY, f64::min);
    if !(lo <= hi) {
        return Err(Error::validation("collapse curves do not overlap"));
    }
    let mut xs: Vec<f64> = sorted
        .iter()
        .flat_map(|c| c.iter().map(|p| p.0))
        .filter(|&x| x >= lo && x <= hi)
        .chain([lo, hi])
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut worst = 0.0f64;
    for x in xs {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for c in &sorted {
            let y = interpolate(c, x).expect("x lies in the common range");
            min = min.min(y);
            max = max.max(y);
        }
        worst = worst.max(max - min);
    }
    Ok(worst)
}

/// A grid maximum, optionally refined by a parabola through its neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedPeak {
    pub x: f64,
    pub value: f64,
    pub index: usize,
    pub parabolic: bool,
}

/// Locates the maximum of sampled data and refines it with a 3-point parabola.
///
/// With `log_x` the parabola is fitted in `(ln x, y)`, which suits peaks on
/// logarithmic grids. The grid maximum must be strictly interior.
pub fn parabolic_peak(xs: &[f64], ys: &[f64], log_x: bool) -> Result<RefinedPeak> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::validation("peak search needs at least 3 matching samples"));
    }
    let (i, value) = argmax(ys);
    if i == 0 || i == ys.len() - 1 {
        return Err(Error::Numeric(format!(
            "maximum sits on the boundary of the grid (x = {})",
            xs[i]
        )));
    }
    let grid = RefinedPeak { x: xs[i], value, index: i, parabolic: false };
    let tx = |x: f64| if log_x { x.ln() } else { x };
    let (x0, x1, x2) = (tx(xs[i - 1]), tx(xs[i]), tx(xs[i + 1]));
    if !(x0.is_finite() && x2.is_finite()) {
        return Ok(grid);
    }
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    let c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
    if !(a < 0.0) {
        return Ok(grid);
    }
    let xv = -b / (2.0 * a);
    if !(xv >= x0 && xv <= x2) {
        return Ok(grid);
    }
    let yv = c - b * b / (4.0 * a);
    Ok(RefinedPeak {
        x: if log_x { xv.exp() } else { xv },
        value: yv.max(value),
        index: i,
        parabolic: true,
    })
}
