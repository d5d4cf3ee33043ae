//! Gridded F(k) and marching-squares zero curves of Re F and Im F.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::Scatterer;

use super::Window;

/// F sampled on a tensor grid; `None` marks points where evaluation failed.
#[derive(Clone, Debug)]
pub struct FieldGrid {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub values: Vec<Option<Complex64>>,
}

impl FieldGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.k1.len(), self.k2.len())
    }

    pub fn at(&self, i: usize, j: usize) -> Option<Complex64> {
        self.values[j * self.k1.len() + i]
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.k1[i], self.k2[j])
    }

    pub fn failed_points(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let d = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + d * i as f64 })
        .collect()
}

/// Evaluates F on n1 × n2 points spanning the given bounds (k2_min may be
/// negative here). Points are evaluated in parallel.
pub fn sample_grid<S: Scatterer + ?Sized>(model: &S, bounds: (f64, f64, f64, f64), n1: usize, n2: usize) -> FieldGrid {
    let (x0, x1, y0, y1) = bounds;
    let k1 = linspace(x0, x1, n1);
    let k2 = linspace(y0, y1, n2);
    let values = (0..n1 * n2)
        .into_par_iter()
        .map(|idx| {
            let k = Complex64::new(k1[idx % n1], k2[idx / n1]);
            model.f_of_k(k).ok()
        })
        .collect();
    FieldGrid { k1, k2, values }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    #[serde(rename = "reF")]
    Re,
    #[serde(rename = "imF")]
    Im,
}

impl Field {
    pub fn label(self) -> &'static str {
        match self {
            Field::Re => "reF",
            Field::Im => "imF",
        }
    }

    fn of(self, z: Complex64) -> f64 {
        match self {
            Field::Re => z.re,
            Field::Im => z.im,
        }
    }
}

/// One connected piece of a zero curve, as ordered points (k₁, k₂).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polyline {
    pub field: Field,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourSet {
    pub re: Vec<Polyline>,
    pub im: Vec<Polyline>,
    /// Crossings of a Re F = 0 segment with an Im F = 0 segment.
    pub intersections: Vec<Complex64>,
    /// Cells left out because a corner could not be evaluated.
    pub skipped_cells: usize,
}

// Horizontal edge (i, j)–(i+1, j) or vertical edge (i, j)–(i, j+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    cell: (usize, usize),
    ends: [Edge; 2],
    pts: [(f64, f64); 2],
}

fn edge_point(grid: &FieldGrid, field: Field, e: Edge) -> (f64, f64) {
    let (a, b) = match e {
        Edge::H(i, j) => ((i, j), (i + 1, j)),
        Edge::V(i, j) => ((i, j), (i, j + 1)),
    };
    let fa = field.of(grid.at(a.0, a.1).unwrap());
    let fb = field.of(grid.at(b.0, b.1).unwrap());
    let t = fa / (fa - fb);
    let pa = grid.point(a.0, a.1);
    let pb = grid.point(b.0, b.1);
    let p = pa + (pb - pa) * t;
    (p.re, p.im)
}

fn cell_segments(grid: &FieldGrid, field: Field) -> (Vec<Segment>, usize) {
    let (n1, n2) = grid.shape();
    let mut segs = Vec::new();
    let mut skipped = 0;
    for j in 0..n2 - 1 {
        for i in 0..n1 - 1 {
            let corners = [
                grid.at(i, j),
                grid.at(i + 1, j),
                grid.at(i + 1, j + 1),
                grid.at(i, j + 1),
            ];
            if corners.iter().any(|c| c.is_none()) {
                skipped += 1;
                continue;
            }
            let v: Vec<f64> = corners.iter().map(|c| field.of(c.unwrap())).collect();
            let pos: Vec<bool> = v.iter().map(|&x| x > 0.0).collect();
            // edges in corner order: bottom (0-1), right (1-2), top (3-2), left (0-3)
            let edges = [Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j)];
            let crossing = [pos[0] != pos[1], pos[1] != pos[2], pos[3] != pos[2], pos[0] != pos[3]];
            let n_cross = crossing.iter().filter(|&&c| c).count();
            let pairs: Vec<(usize, usize)> = match n_cross {
                2 => {
                    let idx: Vec<usize> = (0..4).filter(|&e| crossing[e]).collect();
                    vec![(idx[0], idx[1])]
                }
                4 => {
                    let centre = v.iter().sum::<f64>() / 4.0;
                    if (centre > 0.0) == pos[0] {
                        // corners 1 and 3 are cut off
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => Vec::new(),
            };
            for (a, b) in pairs {
                let ends = [edges[a], edges[b]];
                segs.push(Segment {
                    cell: (i, j),
                    ends,
                    pts: [edge_point(grid, field, ends[0]), edge_point(grid, field, ends[1])],
                });
            }
        }
    }
    (segs, skipped)
}

fn chain(segs: &[Segment], field: Field) -> Vec<Polyline> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (s, seg) in segs.iter().enumerate() {
        for e in seg.ends {
            by_edge.entry(e).or_default().push(s);
        }
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();
    let degree = |e: &Edge| by_edge.get(e).map_or(0, |v| v.len());
    // open curves first so that they are walked from an end
    let mut starts: Vec<usize> = (0..segs.len())
        .filter(|&s| segs[s].ends.iter().any(|e| degree(e) == 1))
        .collect();
    starts.extend(0..segs.len());
    for start in starts {
        if used[start] {
            continue;
        }
        used[start] = true;
        let seg = segs[start];
        let reverse = degree(&seg.ends[0]) != 1 && degree(&seg.ends[1]) == 1;
        let (mut tail, mut points) = if reverse {
            (seg.ends[0], vec![seg.pts[1], seg.pts[0]])
        } else {
            (seg.ends[1], vec![seg.pts[0], seg.pts[1]])
        };
        loop {
            let next = by_edge[&tail].iter().copied().find(|&s| !used[s]);
            let Some(n) = next else { break };
            used[n] = true;
            let s = segs[n];
            if s.ends[0] == tail {
                points.push(s.pts[1]);
                tail = s.ends[1];
            } else {
                points.push(s.pts[0]);
                tail = s.ends[0];
            }
        }
        lines.push(Polyline { field, points });
    }
    lines
}

fn segment_crossing(a: [(f64, f64); 2], b: [(f64, f64); 2]) -> Option<Complex64> {
    let (p, r) = (a[0], (a[1].0 - a[0].0, a[1].1 - a[0].1));
    let (q, s) = (b[0], (b[1].0 - b[0].0, b[1].1 - b[0].1));
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return None;
    }
    let qp = (q.0 - p.0, q.1 - p.1);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(Complex64::new(p.0 + t * r.0, p.1 + t * r.1))
    } else {
        None
    }
}

// Winding of the corner values of cell (i, j), counter-clockwise: +1 around
// a zero, −1 around a pole.
fn cell_winding(grid: &FieldGrid, (i, j): (usize, usize)) -> i64 {
    let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let v: Vec<Complex64> = c.iter().map(|&(a, b)| grid.at(a, b).unwrap()).collect();
    let total: f64 = (0..4).map(|n| (v[(n + 1) % 4] / v[n]).arg()).sum();
    (total / std::f64::consts::TAU).round() as i64
}

/// Zero curves of Re F and Im F on a sampled grid, with their crossings.
/// Crossings in cells that wind around a pole of F are dropped.
pub fn contours_of(grid: &FieldGrid) -> ContourSet {
    let (re_segs, skipped) = cell_segments(grid, Field::Re);
    let (im_segs, _) = cell_segments(grid, Field::Im);
    let mut im_by_cell: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (s, seg) in im_segs.iter().enumerate() {
        im_by_cell.entry(seg.cell).or_default().push(s);
    }
    let mut intersections: Vec<Complex64> = Vec::new();
    for seg in &re_segs {
        if cell_winding(grid, seg.cell) < 0 {
            continue;
        }
        if let Some(list) = im_by_cell.get(&seg.cell) {
            for &s in list {
                if let Some(p) = segment_crossing(seg.pts, im_segs[s].pts) {
                    if !intersections.iter().any(|&o| (o - p).norm() < 1e-12) {
                        intersections.push(p);
                    }
                }
            }
        }
    }
    ContourSet {
        re: chain(&re_segs, Field::Re),
        im: chain(&im_segs, Field::Im),
        intersections,
        skipped_cells: skipped,
    }
}

/// Zero curves of Re F and Im F over `window` on an n1 × n2 grid.
pub fn contour_grid<S: Scatterer + ?Sized>(model: &S, window: &Window, n1: usize, n2: usize) -> Result<ContourSet> {
    if n1 < 16 || n2 < 16 {
        return Err(Error::InvalidParameter {
            field: "resolution",
            reason: format!("need at least 16 x 16 points, got {n1} x {n2}"),
        });
    }
    let grid = sample_grid(
        model,
        (window.k1_min, window.k1_max, window.k2_min, window.k2_max),
        n1,
        n2,
    );
    Ok(contours_of(&grid))
}
