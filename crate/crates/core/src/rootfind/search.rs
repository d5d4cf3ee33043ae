//! Grid-seeded Newton search with deflation, checked against the argument
//! principle on the window boundary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::Scatterer;

use super::contour::{contours_of, sample_grid, FieldGrid};
use super::{KZero, RootOptions, Warning, Window};

// Largest phase step accepted between neighbouring boundary samples.
const MAX_PHASE_STEP: f64 = 0.5;
const MAX_WALK_DEPTH: usize = 40;

#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn contains(&self, k: Complex64) -> bool {
        k.re >= self.x0 && k.re <= self.x1 && k.im >= self.y0 && k.im <= self.y1
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }

    fn size(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let ym = self.y0 + fy * (self.y1 - self.y0);
        [
            Rect {
                x1: xm,
                y1: ym,
                ..*self
            },
            Rect {
                x0: xm,
                y1: ym,
                ..*self
            },
            Rect {
                x0: xm,
                y0: ym,
                ..*self
            },
            Rect {
                x1: xm,
                y0: ym,
                ..*self
            },
        ]
    }
}

/// Result of [`find_zeros`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSearch {
    /// Zeros with Im k ≥ −axis_tol, in the order found.
    pub zeros: Vec<KZero>,
    /// Zeros between the real axis and the lowered bottom edge of the
    /// search rectangle; counted by the winding check, not eigenvalues.
    pub below_axis: Vec<KZero>,
    /// Number of zeros enclosed according to the argument principle.
    pub winding: Option<i64>,
    /// Order of the pole of F at k = 0 (0 when the origin is not enclosed).
    pub origin_pole_order: i64,
    /// Median |F| on the boundary; residuals are judged against it.
    pub boundary_scale: f64,
    pub grid_shape: (usize, usize),
    pub warnings: Vec<Warning>,
}

impl ZeroSearch {
    /// True when the located zeros account for the whole winding count.
    pub fn is_complete(&self) -> bool {
        self.winding == Some((self.zeros.len() + self.below_axis.len()) as i64)
    }
}

fn eval<S: Scatterer + ?Sized>(model: &S, k: Complex64, deflate: &[Complex64]) -> Result<Complex64> {
    let mut f = model.f_of_k(k)?;
    for &r in deflate {
        f /= k - r;
    }
    Ok(f)
}

/// Damped Newton iteration on F(k)/Π(k − r) for r in `deflate`, with a
/// central-difference derivative of step 1e-6·max(1, |k|). The step length
/// is capped at `max_step`.
pub fn newton<S: Scatterer + ?Sized>(
    model: &S,
    seed: Complex64,
    deflate: &[Complex64],
    max_step: f64,
    max_iter: usize,
) -> Result<KZero> {
    let mut k = seed;
    let mut f = eval(model, k, deflate)?;
    let mut last_step = f64::INFINITY;
    for it in 1..=max_iter {
        if f == Complex64::new(0.0, 0.0) {
            return Ok(KZero {
                k,
                residual: 0.0,
                iterations: it - 1,
            });
        }
        let h = 1e-6 * k.norm().max(1.0);
        let d = (eval(model, k + h, deflate)? - eval(model, k - h, deflate)?) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::NoRoot(format!("vanishing derivative at k = {k}")));
        }
        let mut step = f / d;
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        // backtrack while the modulus grows
        let mut trial = k - step;
        let mut ft = eval(model, trial, deflate);
        for _ in 0..8 {
            match &ft {
                Ok(v) if v.norm() <= f.norm() * 1.5 => break,
                _ => {
                    step *= 0.5;
                    trial = k - step;
                    ft = eval(model, trial, deflate);
                }
            }
        }
        let ft = ft?;
        k = trial;
        f = ft;
        // the second test stops at the noise floor of a numerically integrated F
        let scale = k.norm().max(1.0);
        let s = step.norm();
        if s <= 1e-13 * scale || (s <= 1e-9 * scale && s >= 0.5 * last_step) {
            return Ok(KZero {
                k,
                residual: model.f_of_k(k)?.norm(),
                iterations: it,
            });
        }
        last_step = s;
    }
    Err(Error::NoRoot(format!(
        "Newton did not settle within {max_iter} iterations from {seed}"
    )))
}

fn phase_walk<S: Scatterer + ?Sized>(
    model: &S,
    z0: Complex64,
    f0: Complex64,
    z1: Complex64,
    f1: Complex64,
    depth: usize,
) -> Result<f64> {
    let d = (f1 / f0).arg();
    if d.abs() <= MAX_PHASE_STEP {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::NoRoot(format!(
            "phase of F unresolved between {z0} and {z1}; a zero may sit on the contour"
        )));
    }
    let zm = 0.5 * (z0 + z1);
    let fm = model.f_of_k(zm)?;
    Ok(phase_walk(model, z0, f0, zm, fm, depth - 1)? + phase_walk(model, zm, fm, z1, f1, depth - 1)?)
}

// Winding of F around a closed polygon plus the |F| samples seen at base
// resolution.
fn wind<S: Scatterer + ?Sized>(model: &S, vertices: &[Complex64], min_samples: usize) -> Result<(i64, Vec<f64>)> {
    let n = vertices.len();
    let perimeter: f64 = (0..n).map(|i| (vertices[(i + 1) % n] - vertices[i]).norm()).sum();
    let mut points = Vec::new();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let m = ((min_samples as f64 * (b - a).norm() / perimeter).ceil() as usize).max(4);
        for s in 0..m {
            points.push(a + (b - a) * (s as f64 / m as f64));
        }
    }
    let values: Vec<Complex64> = points.par_iter().map(|&z| model.f_of_k(z)).collect::<Result<_>>()?;
    let total: f64 = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let j = (i + 1) % points.len();
            phase_walk(model, points[i], values[i], points[j], values[j], MAX_WALK_DEPTH)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    let turns = total / (2.0 * PI);
    let w = turns.round();
    if (turns - w).abs() > 0.05 {
        return Err(Error::NoRoot(format!("winding {turns} is not an integer")));
    }
    Ok((w as i64, values.iter().map(|v| v.norm()).collect()))
}

/// Argument-principle count (zeros minus poles) of F inside the closed
/// polygon `vertices`, traversed counter-clockwise.
pub fn winding_number<S: Scatterer + ?Sized>(model: &S, vertices: &[Complex64], min_samples: usize) -> Result<i64> {
    Ok(wind(model, vertices, min_samples)?.0)
}

fn circle(centre: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| centre + Complex64::from_polar(radius, 2.0 * PI * i as f64 / n as f64))
        .collect()
}

fn even_at_least(n: usize) -> usize {
    let n = n.max(16);
    n + n % 2
}

struct Search<'a, S: Scatterer + ?Sized> {
    model: &'a S,
    rect: Rect,
    opts: &'a RootOptions,
    scale: f64,
    cell: f64,
    origin_radius: Option<f64>,
    found: Vec<KZero>,
}

impl<'a, S: Scatterer + ?Sized> Search<'a, S> {
    fn deflation_set(&self) -> Vec<Complex64> {
        self.found.iter().map(|z| z.k).collect()
    }

    fn acceptable(&self, z: &KZero) -> bool {
        self.rect.contains(z.k)
            && z.residual <= self.opts.residual_tol * self.scale
            && self.origin_radius.is_none_or(|r| z.k.norm() > r)
    }

    fn is_new(&self, k: Complex64) -> bool {
        self.found
            .iter()
            .all(|z| (z.k - k).norm() > self.opts.dedup_tol * k.norm().max(1.0))
    }

    fn newton(&self, seed: Complex64, deflate: &[Complex64]) -> Result<KZero> {
        newton(self.model, seed, deflate, 2.0 * self.cell, self.opts.max_newton)
    }

    // deflated search from a seed, polished on the undeflated F
    fn deflated_attempt(&mut self, seed: Complex64) -> Option<KZero> {
        let deflate = self.deflation_set();
        let z = self.newton(seed, &deflate).ok()?;
        let z = self.newton(z.k, &[]).ok().filter(|p| (p.k - z.k).norm() < self.cell)?;
        if self.acceptable(&z) && self.is_new(z.k) {
            self.found.push(z);
            Some(z)
        } else {
            None
        }
    }

    fn count_in(&self, r: &Rect, origin_order: i64) -> Result<i64> {
        let w = winding_number(self.model, &r.corners(), 64)?;
        let origin_inside = self.origin_radius.is_some() && r.contains(Complex64::new(0.0, 0.0));
        Ok(if origin_inside { w + origin_order } else { w })
    }

    fn found_in(&self, r: &Rect) -> i64 {
        self.found.iter().filter(|z| r.contains(z.k)).count() as i64
    }

    // Subdivide wherever the winding count exceeds the zeros already found.
    fn refine(&mut self, r: Rect, origin_order: i64, level: usize) {
        let Ok(n) = self.count_in(&r, origin_order) else { return };
        if n <= self.found_in(&r) {
            return;
        }
        if level >= self.opts.max_refine || r.size() < self.cell / 64.0 {
            let centre = Complex64::new(0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1));
            self.deflated_attempt(centre);
            return;
        }
        // off-centre split keeps new edges away from symmetric zeros
        let mut children = r.split(0.5 + 0.0137, 0.5 - 0.0211);
        if children.iter().any(|c| self.count_in(c, origin_order).is_err()) {
            children = r.split(0.5 - 0.0311, 0.5 + 0.0173);
        }
        for c in children {
            self.refine(c, origin_order, level + 1);
        }
    }
}

fn local_minima(grid: &FieldGrid, ceiling: f64) -> Vec<Complex64> {
    let (n1, n2) = grid.shape();
    let mut out = Vec::new();
    for j in 1..n2 - 1 {
        for i in 1..n1 - 1 {
            let Some(c) = grid.at(i, j) else { continue };
            let m = c.norm();
            if m > ceiling {
                continue;
            }
            let mut lowest = true;
            for dj in [-1i64, 0, 1] {
                for di in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let v = grid.at((i as i64 + di) as usize, (j as i64 + dj) as usize);
                    if v.is_some_and(|v| v.norm() < m) {
                        lowest = false;
                    }
                }
            }
            if lowest {
                out.push(grid.point(i, j));
            }
        }
    }
    out
}

// Sign changes of Re F along the imaginary axis (F is real there for PT
// potentials), skipping the pole at the origin.
fn axis_seeds<S: Scatterer + ?Sized>(model: &S, rect: &Rect, step: f64, gap: f64) -> Vec<Complex64> {
    if !(rect.x0 < 0.0 && rect.x1 > 0.0) {
        return Vec::new();
    }
    let n = ((rect.y1 - rect.y0) / step).ceil() as usize + 1;
    let ys: Vec<f64> = (0..n)
        .map(|i| rect.y0 + (rect.y1 - rect.y0) * i as f64 / (n - 1) as f64)
        .filter(|y| y.abs() > gap)
        .collect();
    let vals: Vec<Option<f64>> = ys
        .par_iter()
        .map(|&y| model.f_of_k(Complex64::new(0.0, y)).ok().map(|f| f.re))
        .collect();
    let mut seeds = Vec::new();
    for i in 0..ys.len().saturating_sub(1) {
        if ys[i] < 0.0 && ys[i + 1] > 0.0 {
            continue;
        }
        if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
            if (a > 0.0) != (b > 0.0) {
                seeds.push(Complex64::new(0.0, 0.5 * (ys[i] + ys[i + 1])));
            }
        }
    }
    seeds
}

/// All zeros of F inside `window`. When the window starts on the real axis
/// the search rectangle is lowered slightly below it so that spectral
/// singularities are interior; the lowering stays above the nearest
/// singularity of F reported by the model.
pub fn find_zeros<S: Scatterer + ?Sized>(model: &S, window: &Window, opts: &RootOptions) -> Result<ZeroSearch> {
    if !(opts.cell > 0.0 && opts.axis_tol >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "cell",
            reason: "grid cell and axis tolerance must be positive".into(),
        });
    }
    let width = window.k1_max - window.k1_min;
    let target = opts
        .cell
        .max(width / opts.max_points_per_axis.max(16) as f64)
        .max((window.k2_max - window.k2_min) / opts.max_points_per_axis.max(16) as f64);
    let n1 = even_at_least((width / target).ceil() as usize + 1);
    let lowered = if window.k2_min <= opts.axis_tol {
        (0.5 * target).min(0.25 * model.singular_depth())
    } else {
        0.0
    };
    let rect = Rect {
        x0: window.k1_min,
        x1: window.k1_max,
        y0: window.k2_min - lowered,
        y1: window.k2_max,
    };
    let n2 = ((rect.y1 - rect.y0) / target).ceil() as usize + 1;
    let n2 = n2.max(16);
    let cell = (width / (n1 - 1) as f64).max((rect.y1 - rect.y0) / (n2 - 1) as f64);
    let grid = sample_grid(model, (rect.x0, rect.x1, rect.y0, rect.y1), n1, n2);

    let mut warnings = Vec::new();
    let failed = grid.failed_points();
    if failed > 0 {
        warnings.push(Warning::SkippedCells { count: failed });
    }

    let boundary = wind(model, &rect.corners(), opts.boundary_samples);
    let (winding, scale) = match &boundary {
        Ok((w, mags)) => {
            let mut m = mags.clone();
            m.sort_by(f64::total_cmp);
            (Some(*w), m[m.len() / 2])
        }
        Err(e) => {
            warnings.push(Warning::WindingUnavailable { reason: e.to_string() });
            let mut m: Vec<f64> = grid.values.iter().flatten().map(|v| v.norm()).collect();
            m.sort_by(f64::total_cmp);
            (None, m.get(m.len() / 2).copied().unwrap_or(1.0))
        }
    };

    let origin_inside = rect.contains(Complex64::new(0.0, 0.0)) && rect.y0 < 0.0;
    let (origin_radius, origin_order) = if origin_inside {
        let r = (0.25 * cell).min(1e-2);
        match winding_number(model, &circle(Complex64::new(0.0, 0.0), r, 256), 256) {
            Ok(w) => (Some(r), -w),
            Err(e) => {
                warnings.push(Warning::WindingUnavailable { reason: e.to_string() });
                (Some(r), 0)
            }
        }
    } else {
        (None, 0)
    };

    let contours = contours_of(&grid);
    let mut primary: Vec<Complex64> = contours.intersections.clone();
    primary.extend(axis_seeds(model, &rect, cell / 8.0, origin_radius.unwrap_or(0.0)));
    let secondary = local_minima(&grid, scale);

    let mut search = Search {
        model,
        rect,
        opts,
        scale,
        cell,
        origin_radius,
        found: Vec::new(),
    };

    // crossings next to the origin belong to the pole there
    let seeds: Vec<(Complex64, bool)> = primary
        .iter()
        .map(|&s| (s, s.norm() > cell))
        .chain(secondary.iter().map(|&s| (s, false)))
        .collect();
    let first: Vec<Result<KZero>> = seeds.par_iter().map(|&(s, _)| search.newton(s, &[])).collect();
    let mut retry = Vec::new();
    let mut failures = Vec::new();
    for (&(seed, is_primary), res) in seeds.iter().zip(first) {
        match res {
            Ok(z) if search.acceptable(&z) && search.is_new(z.k) => search.found.push(z),
            Ok(z) if search.acceptable(&z) => retry.push(seed),
            Ok(_) => {}
            Err(e) => {
                if is_primary {
                    retry.push(seed);
                    failures.push((seed, e.to_string()));
                }
            }
        }
    }
    for seed in retry {
        // Newton on a PT-symmetric F cannot leave the imaginary axis
        let seed = if seed.re == 0.0 { seed + 1e-3 * cell } else { seed };
        search.deflated_attempt(seed);
    }

    let mut failures_matter = winding.is_none();
    if let Some(w) = winding {
        let expected = w + origin_order;
        if expected > search.found.len() as i64 {
            search.refine(rect, origin_order, 0);
        }
        let found = search.found.len();
        if expected != found as i64 {
            warnings.push(Warning::CountMismatch {
                winding: expected,
                found,
            });
            failures_matter = true;
        }
    }
    if failures_matter {
        for (seed, reason) in failures {
            warnings.push(Warning::NonConvergence { seed, reason });
        }
    }

    let margin = 2.0 * cell;
    let mut zeros = Vec::new();
    let mut below_axis = Vec::new();
    for z in search.found {
        let k = z.k;
        if k.re - window.k1_min < margin || window.k1_max - k.re < margin || window.k2_max - k.im < margin {
            warnings.push(Warning::WindowBoundary { k });
        }
        if k.im >= -opts.axis_tol {
            zeros.push(z);
        } else {
            below_axis.push(z);
        }
    }
    Ok(ZeroSearch {
        zeros,
        below_axis,
        winding: winding.map(|w| w + origin_order),
        origin_pole_order: origin_order,
        boundary_scale: scale,
        grid_shape: (n1, n2),
        warnings,
    })
}
