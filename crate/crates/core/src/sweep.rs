//! Evolution of the spectrum with the imaginary strength V2 at fixed V1:
//! eigenvalue trajectories, exceptional points, critical strengths at which
//! a zero of F reaches the real k-axis, and the splitting of the resulting
//! spectral singularity.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{imaginary_axis_roots, PotentialModel, Scatterer};
use crate::rootfind::{find_zeros, spectrum_in, EigenKind, EigenRecord, RootOptions, Spectrum, Warning, Window};

/// Spectrum at one V2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSample {
    pub v2: f64,
    pub records: Vec<EigenRecord>,
    pub warnings: Vec<Warning>,
}

impl SweepSample {
    pub fn count(&self, kind: EigenKind) -> usize {
        self.records.iter().filter(|r| r.kind == kind).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub v2: f64,
    pub e: Complex64,
    pub kind: EigenKind,
}

/// A continuity-linked eigenvalue path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub id: usize,
    pub points: Vec<TrajectoryPoint>,
}

/// Strength at which real levels coalesce; `energies` lists the coalescence
/// energy of each pair merging there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalPoint {
    pub v_ep: f64,
    pub energies: Vec<f64>,
}

/// A zero of F crossing the real k-axis at k = k_star when V2 = v_star.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Critical {
    pub m: usize,
    pub v_star: f64,
    pub e_star: f64,
    pub k_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum SweepWarning {
    /// Two samples could not be linked even after step halving.
    LinkGap { v2_from: f64, v2_to: f64, unmatched: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub model: PotentialModel,
    pub window: Window,
    pub samples: Vec<SweepSample>,
    pub trajectories: Vec<Trajectory>,
    pub exceptional_points: Vec<ExceptionalPoint>,
    pub criticals: Vec<Critical>,
    pub warnings: Vec<SweepWarning>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOptions {
    pub roots: RootOptions,
    /// Number of V2 steps when no step is given.
    pub default_steps: usize,
    /// Halvings allowed when two samples cannot be linked.
    pub max_halvings: usize,
    /// Tolerance on V2 for exceptional points.
    pub ep_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            roots: RootOptions::default(),
            default_steps: 400,
            max_halvings: 4,
            ep_tol: 5e-3,
        }
    }
}

fn check_range(v2_min: f64, v2_max: f64) -> Result<()> {
    crate::error::check_finite("v2_min", v2_min)?;
    crate::error::check_finite("v2_max", v2_max)?;
    if v2_max < v2_min {
        return Err(Error::InvalidParameter {
            field: "v2_range",
            reason: format!("upper end {v2_max} is below lower end {v2_min}"),
        });
    }
    Ok(())
}

/// Window used across a sweep: the default window of the strongest member.
pub fn sweep_window(base: &PotentialModel, v2_min: f64, v2_max: f64) -> Result<Window> {
    let strongest = base.with_v2(v2_min.abs().max(v2_max.abs()))?;
    Ok(Window::default_for(&strongest))
}

fn sample_at(base: &PotentialModel, v2: f64, window: &Window, opts: &RootOptions) -> Result<SweepSample> {
    let model = base.with_v2(v2)?;
    let Spectrum { records, warnings } = spectrum_in(&model, window, opts)?;
    Ok(SweepSample { v2, records, warnings })
}

struct Live {
    id: usize,
    last: TrajectoryPoint,
    velocity: Option<Complex64>,
}

// Greedy nearest-neighbour matching of `next` against predicted positions.
// Returns (live index, record index) pairs, or None when a match is further
// than five times the local step-induced change.
fn match_step(live: &[Live], next: &SweepSample) -> Option<Vec<(usize, usize)>> {
    let dv = live.first().map_or(0.0, |l| next.v2 - l.last.v2);
    let speeds: Vec<f64> = live.iter().filter_map(|l| l.velocity.map(|v| v.norm())).collect();
    let typical = if speeds.is_empty() {
        1.0
    } else {
        let mut s = speeds.clone();
        s.sort_by(f64::total_cmp);
        s[s.len() / 2].max(1e-3)
    };
    let predicted: Vec<Complex64> = live
        .iter()
        .map(|l| l.last.e + l.velocity.unwrap_or_default() * dv)
        .collect();
    let mut costs = Vec::new();
    for (i, p) in predicted.iter().enumerate() {
        for (j, r) in next.records.iter().enumerate() {
            costs.push(((r.e - p).norm(), i, j));
        }
    }
    costs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut live_used = vec![false; live.len()];
    let mut rec_used = vec![false; next.records.len()];
    let mut pairs = Vec::new();
    for (cost, i, j) in costs {
        if live_used[i] || rec_used[j] {
            continue;
        }
        let local = live[i].velocity.map_or(typical, |v| v.norm().max(typical));
        let bound = 5.0 * local * dv.abs() + 1e-6 * (1.0 + live[i].last.e.norm());
        if cost > bound {
            // a birth or death is fine; a far jump of a surviving level is not
            if live.len() == next.records.len() {
                return None;
            }
            continue;
        }
        live_used[i] = true;
        rec_used[j] = true;
        pairs.push((i, j));
    }
    Some(pairs)
}

/// Spectra over V2 ∈ [v2_min, v2_max] in steps of `step` (default: range
/// divided by `opts.default_steps`), linked into trajectories.
pub fn trace_eigenvalues(
    base: &PotentialModel,
    v2_min: f64,
    v2_max: f64,
    step: Option<f64>,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    check_range(v2_min, v2_max)?;
    let window = sweep_window(base, v2_min, v2_max)?;
    let range = v2_max - v2_min;
    let n = if range == 0.0 {
        1
    } else {
        let h = step.unwrap_or(range / opts.default_steps.max(1) as f64);
        if !(h > 0.0) {
            return Err(Error::InvalidParameter {
                field: "v2_step",
                reason: format!("must be positive, got {h}"),
            });
        }
        (range / h).round().max(1.0) as usize + 1
    };
    let grid: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                v2_min
            } else {
                v2_min + range * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let coarse: Vec<SweepSample> = grid
        .par_iter()
        .map(|&v2| sample_at(base, v2, &window, &opts.roots))
        .collect::<Result<_>>()?;

    let mut samples: Vec<SweepSample> = Vec::new();
    let mut trajectories: Vec<Trajectory> = Vec::new();
    let mut live: Vec<Live> = Vec::new();
    let mut warnings = Vec::new();

    let start = |s: &SweepSample, trajectories: &mut Vec<Trajectory>, live: &mut Vec<Live>, j: usize| {
        let id = trajectories.len();
        let p = TrajectoryPoint {
            v2: s.v2,
            e: s.records[j].e,
            kind: s.records[j].kind,
        };
        trajectories.push(Trajectory { id, points: vec![p] });
        live.push(Live {
            id,
            last: p,
            velocity: None,
        });
    };

    for j in 0..coarse[0].records.len() {
        start(&coarse[0], &mut trajectories, &mut live, j);
    }
    samples.push(coarse[0].clone());

    for next in coarse.into_iter().skip(1) {
        // halve the step until the levels can be followed
        let mut pending = vec![next];
        let mut depth = 0;
        while let Some(target) = pending.pop() {
            let pairs = match match_step(&live, &target) {
                Some(p) => p,
                None if depth < opts.max_halvings => {
                    let prev_v2 = samples.last().unwrap().v2;
                    let mid = sample_at(base, 0.5 * (prev_v2 + target.v2), &window, &opts.roots)?;
                    pending.push(target);
                    pending.push(mid);
                    depth += 1;
                    continue;
                }
                None => {
                    let prev_v2 = samples.last().unwrap().v2;
                    warnings.push(SweepWarning::LinkGap {
                        v2_from: prev_v2,
                        v2_to: target.v2,
                        unmatched: target.records.len(),
                    });
                    Vec::new()
                }
            };
            let mut next_live = Vec::new();
            let mut taken = vec![false; target.records.len()];
            for (i, j) in pairs {
                let l = &live[i];
                let r = target.records[j];
                let p = TrajectoryPoint {
                    v2: target.v2,
                    e: r.e,
                    kind: r.kind,
                };
                let dv = target.v2 - l.last.v2;
                trajectories[l.id].points.push(p);
                next_live.push(Live {
                    id: l.id,
                    last: p,
                    velocity: (dv != 0.0).then(|| (r.e - l.last.e) / dv),
                });
                taken[j] = true;
            }
            live = next_live;
            for j in 0..target.records.len() {
                if !taken[j] {
                    start(&target, &mut trajectories, &mut live, j);
                }
            }
            samples.push(target);
            if pending.is_empty() {
                depth = 0;
            }
        }
    }

    Ok(SweepResult {
        model: *base,
        window,
        samples,
        trajectories,
        exceptional_points: Vec::new(),
        criticals: Vec::new(),
        warnings,
    })
}

// max over κ ∈ [lo, hi] of σ·F(iκ): positive while the two levels bracketing
// the interval are real, negative once they have coalesced.
fn bridge_height(model: &PotentialModel, lo: f64, hi: f64, sigma: f64) -> Result<(f64, f64)> {
    let g = |kappa: f64| -> Result<f64> { Ok(sigma * model.f_of_k(Complex64::new(0.0, kappa))?.re) };
    let n = 64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let v = g(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    // golden-section refinement around the best scan point
    let d = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best.0 - d).max(lo), (best.0 + d).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut e = a + r * (b - a);
    let (mut gc, mut ge) = (g(c)?, g(e)?);
    for _ in 0..60 {
        if gc > ge {
            b = e;
            e = c;
            ge = gc;
            c = b - r * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = e;
            gc = ge;
            e = a + r * (b - a);
            ge = g(e)?;
        }
    }
    let x = 0.5 * (a + b);
    let v = g(x)?;
    Ok(if v >= best.1 { (x, v) } else { best })
}

fn levels(model: &PotentialModel, kappa_max: f64) -> Result<Vec<f64>> {
    imaginary_axis_roots(model, kappa_max, 4000)
}

// Coalescing pairs among the real levels at `v_base`, each bisected
// between `v_base` (or a later sample) and the first sample in `ahead`
// where the bridge between the pair has gone negative.
fn coalescences(
    base: &PotentialModel,
    v_base: f64,
    samples: &[SweepSample],
    ahead: &[usize],
    kmax: f64,
    opts: &SweepOptions,
) -> Result<Vec<(f64, f64)>> {
    let m0 = base.with_v2(v_base)?;
    let kappas = levels(&m0, kmax)?;
    let mut out = Vec::new();
    for i in 0..kappas.len().saturating_sub(1) {
        let (ka, kb) = (kappas[i], kappas[i + 1]);
        let mid = 0.5 * (ka + kb);
        let sigma = m0.f_of_k(Complex64::new(0.0, mid))?.re.signum();
        // stay clear of the neighbouring levels
        let lo = if i > 0 { 0.5 * (kappas[i - 1] + ka) } else { 0.5 * ka };
        let hi = if i + 2 < kappas.len() {
            0.5 * (kb + kappas[i + 2])
        } else {
            kb + 0.5 * (kb - ka)
        };
        let height = |m: &PotentialModel| bridge_height(m, lo, hi, sigma);
        let mut bracket = None;
        let mut prev = v_base;
        for &j in ahead {
            if height(&base.with_v2(samples[j].v2)?)?.1 < 0.0 {
                bracket = Some((prev, samples[j].v2));
                break;
            }
            prev = samples[j].v2;
        }
        let Some((mut a, mut b)) = bracket else { continue };
        let tol = opts.ep_tol.min(1e-6);
        while b - a > tol {
            let mid_v = 0.5 * (a + b);
            if height(&base.with_v2(mid_v)?)?.1 >= 0.0 {
                a = mid_v;
            } else {
                b = mid_v;
            }
        }
        let v_ep = 0.5 * (a + b);
        let (kappa, _) = height(&base.with_v2(v_ep)?)?;
        out.push((v_ep, -kappa * kappa));
    }
    Ok(out)
}

/// Exceptional points where a pair of real levels turns into a complex
/// conjugate pair. Each coalescing pair is followed by the height of F(iκ)
/// between its two roots, which changes sign at V_EP; the sign change is
/// bisected to `opts.ep_tol` (or tighter). A drop in the real count that is
/// not followed by new complex pairs (a degenerate crossing landing on a
/// sample) is ignored.
pub fn find_exceptional_points(result: &SweepResult, opts: &SweepOptions) -> Result<Vec<ExceptionalPoint>> {
    const LOOKAHEAD: usize = 4;
    let base = result.model;
    let kmax = result.window.k2_max;
    let samples = &result.samples;
    let mut eps: Vec<ExceptionalPoint> = Vec::new();
    for i0 in 0..samples.len().saturating_sub(1) {
        let s0 = &samples[i0];
        let n_real = s0.count(EigenKind::RealBound);
        if samples[i0 + 1].count(EigenKind::RealBound) >= n_real {
            continue;
        }
        // later samples still short of real levels
        let ahead: Vec<usize> = (i0 + 1..samples.len().min(i0 + 1 + LOOKAHEAD))
            .take_while(|&j| samples[j].count(EigenKind::RealBound) < n_real)
            .collect();
        let n_ccpe = s0.count(EigenKind::Ccpe);
        if !ahead.iter().any(|&j| samples[j].count(EigenKind::Ccpe) > n_ccpe) {
            continue;
        }
        let expected = ahead
            .iter()
            .map(|&j| samples[j].count(EigenKind::Ccpe).saturating_sub(n_ccpe))
            .max()
            .unwrap_or(0);
        // a level emerging from threshold inside the step only shows up
        // at intermediate strengths
        let v_next = samples[i0 + 1].v2;
        let mut found: Vec<(f64, f64)> = Vec::new();
        for frac in [0.0, 0.5, 0.75, 0.9, 0.97] {
            let v_base = s0.v2 + frac * (v_next - s0.v2);
            for hit in coalescences(&base, v_base, samples, &ahead, kmax, opts)? {
                let dup = found
                    .iter()
                    .any(|&(v, e)| (v - hit.0).abs() <= opts.ep_tol && (e - hit.1).abs() < 1e-3 * (1.0 + e.abs()));
                if !dup {
                    found.push(hit);
                }
            }
            if found.len() >= expected {
                break;
            }
        }
        for (v_ep, e) in found {
            match eps.iter_mut().find(|p| (p.v_ep - v_ep).abs() <= opts.ep_tol) {
                Some(p) => {
                    if !p.energies.iter().any(|&o| (o - e).abs() < 1e-3 * (1.0 + e.abs())) {
                        p.energies.push(e);
                    }
                }
                None => eps.push(ExceptionalPoint {
                    v_ep,
                    energies: vec![e],
                }),
            }
        }
    }
    for p in &mut eps {
        p.energies.sort_by(f64::total_cmp);
    }
    eps.sort_by(|a, b| a.v_ep.total_cmp(&b.v_ep));
    Ok(eps)
}

/// Solves F(k; V2) = 0 for real k and V2 by Newton iteration in (k, V2),
/// starting from (k0, v0).
pub fn refine_critical(base: &PotentialModel, k0: f64, v0: f64) -> Result<(f64, f64)> {
    let f = |k: f64, v: f64| -> Result<Complex64> { base.with_v2(v)?.f_of_k(Complex64::new(k, 0.0)) };
    let (mut k, mut v) = (k0, v0);
    for _ in 0..60 {
        let fv = f(k, v)?;
        let hk = 1e-6 * k.abs().max(1.0);
        let hv = 1e-6 * v.abs().max(1.0);
        let dk = (f(k + hk, v)? - f(k - hk, v)?) / (2.0 * hk);
        let dv = (f(k, v + hv)? - f(k, v - hv)?) / (2.0 * hv);
        let det = dk.re * dv.im - dv.re * dk.im;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoRoot(format!("singular Jacobian at k = {k}, V2 = {v}")));
        }
        let sk = (fv.re * dv.im - dv.re * fv.im) / det;
        let sv = (dk.re * fv.im - fv.re * dk.im) / det;
        k -= sk;
        v -= sv;
        if !(k.is_finite() && v.is_finite()) {
            break;
        }
        if sk.abs() <= 1e-14 * k.abs().max(1.0) && sv.abs() <= 1e-14 * v.abs().max(1.0) {
            return Ok((k, v));
        }
    }
    let fv = f(k, v)?;
    let scale = f(k, v * 1.01 + 1e-3)?.norm().max(1e-300);
    if k.is_finite() && v.is_finite() && fv.norm() < 1e-9 * scale.max(1.0) {
        return Ok((k, v));
    }
    Err(Error::NoRoot(format!(
        "critical strength iteration stalled near k = {k0}, V2 = {v0}"
    )))
}

// Zeros with k₁ > 0 in a thin strip about the real axis, including those
// just below it.
fn near_axis_zeros(model: &PotentialModel, k_max: f64, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let strip = Window::new(0.05, k_max, 0.0, 0.25)?;
    let opts = RootOptions {
        boundary_samples: opts.boundary_samples.min(500),
        ..*opts
    };
    let s = find_zeros(model, &strip, &opts)?;
    Ok(s.zeros.iter().chain(s.below_axis.iter()).map(|z| z.k).collect())
}

struct CrossingScan<'a> {
    base: &'a PotentialModel,
    k_max: f64,
    opts: &'a RootOptions,
    v2_lo: f64,
    v2_hi: f64,
}

impl CrossingScan<'_> {
    fn near(a: Complex64, b: Complex64) -> bool {
        (b.re - a.re).abs() < 0.05 * (1.0 + a.re)
    }

    // Crossings between two neighbouring samples; a zero that appears just
    // above the axis without a predecessor means the step was too coarse
    // for it, and the interval is split.
    fn bracket(
        &self,
        va: f64,
        za: &[Complex64],
        vb: f64,
        zb: &[Complex64],
        depth: usize,
        found: &mut Vec<Critical>,
    ) -> Result<()> {
        let orphan = zb
            .iter()
            .any(|b| b.im >= 0.0 && b.im < 0.1 && !za.iter().any(|a| Self::near(*a, *b)));
        if orphan && depth > 0 {
            let vm = 0.5 * (va + vb);
            let zm = near_axis_zeros(&self.base.with_v2(vm)?, self.k_max, self.opts)?;
            self.bracket(va, za, vm, &zm, depth - 1, found)?;
            return self.bracket(vm, &zm, vb, zb, depth - 1, found);
        }
        for &a in za {
            if a.im >= 0.0 {
                continue;
            }
            let partner = zb
                .iter()
                .filter(|b| b.im >= 0.0 && Self::near(a, **b))
                .min_by(|x, y| (*x - a).norm().total_cmp(&(*y - a).norm()));
            let Some(&b) = partner else { continue };
            // linear interpolation to the crossing as a starting point
            let t = -a.im / (b.im - a.im);
            let k0 = a.re + t * (b.re - a.re);
            let v0 = va + t * (vb - va);
            let Ok((k, v)) = refine_critical(self.base, k0, v0) else {
                continue;
            };
            if !(v >= self.v2_lo && v <= self.v2_hi && k > 0.0) {
                continue;
            }
            if found
                .iter()
                .any(|c| (c.v_star - v).abs() < 1e-6 && (c.k_star - k).abs() < 1e-6)
            {
                continue;
            }
            found.push(Critical {
                m: 0,
                v_star: v,
                e_star: k * k,
                k_star: k,
            });
        }
        Ok(())
    }
}

/// Critical strengths in [v2_lo, v2_hi]: values of V2 at which a zero of F
/// crosses from below to above the real k-axis. Crossings are bracketed on
/// a V2 grid and solved exactly for (k*, V*). Indexed from m = 0 in
/// increasing V*; at most `m_max + 1` are returned when `m_max` is set.
pub fn find_critical_ss(
    base: &PotentialModel,
    v2_lo: f64,
    v2_hi: f64,
    m_max: Option<usize>,
    opts: &RootOptions,
) -> Result<Vec<Critical>> {
    check_range(v2_lo, v2_hi)?;
    if v2_lo < 0.0 {
        return Err(Error::InvalidParameter {
            field: "v2_window",
            reason: format!("must be non-negative, got lower end {v2_lo}"),
        });
    }
    let k_max = sweep_window(base, v2_lo, v2_hi)?.k1_max;
    let range = v2_hi - v2_lo;
    let n = ((range / 0.2).ceil() as usize).clamp(20, 300);
    let grid: Vec<f64> = (0..=n).map(|i| v2_lo + range * i as f64 / n as f64).collect();
    let zeros: Vec<Vec<Complex64>> = grid
        .par_iter()
        .map(|&v| near_axis_zeros(&base.with_v2(v)?, k_max, opts))
        .collect::<Result<_>>()?;

    let mut found: Vec<Critical> = Vec::new();
    let scan = CrossingScan {
        base,
        k_max,
        opts,
        v2_lo,
        v2_hi,
    };
    for i in 0..n {
        scan.bracket(grid[i], &zeros[i], grid[i + 1], &zeros[i + 1], 3, &mut found)?;
    }
    found.sort_by(|a, b| a.v_star.total_cmp(&b.v_star));
    for (m, c) in found.iter_mut().enumerate() {
        c.m = m;
    }
    if let Some(m) = m_max {
        found.truncate(m + 1);
    }
    Ok(found)
}

/// Sweep with exceptional points and criticals filled in.
pub fn full_sweep(
    base: &PotentialModel,
    v2_min: f64,
    v2_max: f64,
    step: Option<f64>,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let mut r = trace_eigenvalues(base, v2_min, v2_max, step, opts)?;
    r.exceptional_points = find_exceptional_points(&r, opts)?;
    r.criticals = find_critical_ss(base, v2_min.max(0.0), v2_max.max(0.0), None, &opts.roots)?;
    Ok(r)
}

/// Spectra just below, at and just above a critical strength.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    /// Critical strength after polishing the supplied value.
    pub v_star: f64,
    pub e_star: f64,
    pub epsilon: f64,
    pub before: Spectrum,
    pub at: Spectrum,
    pub after: Spectrum,
    /// The conjugate pair born from the singularity, if identified.
    pub born: Option<Complex64>,
    /// Violated expectations; empty when the splitting behaves as claimed.
    pub failures: Vec<String>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the singularity at V* exists only at V*, and that crossing
/// it adds one conjugate pair whose Re E is within 2% of E*. The supplied
/// `v_star` is first polished to the exact crossing nearby.
pub fn split_ss(base: &PotentialModel, v_star: f64, epsilon: f64, opts: &RootOptions) -> Result<SplitReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "epsilon",
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    crate::error::check_finite("v_star", v_star)?;
    let lo = (v_star - 0.5 * epsilon).max(0.0);
    let candidates = find_critical_ss(base, lo, v_star + 0.5 * epsilon, None, opts)?;
    let crit = candidates
        .iter()
        .min_by(|a, b| (a.v_star - v_star).abs().total_cmp(&(b.v_star - v_star).abs()))
        .copied()
        .ok_or_else(|| {
            Error::NoRoot(format!(
                "no zero crosses the real axis within {epsilon}/2 of V2 = {v_star}"
            ))
        })?;
    let window = sweep_window(base, 0.0, crit.v_star + epsilon)?;
    let spec = |v: f64| spectrum_in(&base.with_v2(v)?, &window, opts);
    let before = spec(crit.v_star - epsilon)?;
    let at = spec(crit.v_star)?;
    let after = spec(crit.v_star + epsilon)?;

    let mut failures = Vec::new();
    if before.count(EigenKind::Ss) != 0 {
        failures.push(format!("singularity present at V2 = V* - {epsilon}"));
    }
    if after.count(EigenKind::Ss) != 0 {
        failures.push(format!("singularity present at V2 = V* + {epsilon}"));
    }
    let at_ss: Vec<&EigenRecord> = at.of_kind(EigenKind::Ss).collect();
    if at_ss.len() != 1 {
        failures.push(format!("{} singularities at V*, expected one", at_ss.len()));
    }
    let (nb, na) = (before.count(EigenKind::Ccpe), after.count(EigenKind::Ccpe));
    if na != nb + 1 {
        failures.push(format!("pair count goes {nb} -> {na} across V*, expected one more"));
    }
    let born = after
        .of_kind(EigenKind::Ccpe)
        .min_by(|a, b| (a.e - crit.e_star).norm().total_cmp(&(b.e - crit.e_star).norm()))
        .map(|r| r.e);
    match born {
        Some(e) if (e.re - crit.e_star).abs() <= 0.02 * crit.e_star => {}
        Some(e) => failures.push(format!("new pair at {e} is more than 2% from E* = {}", crit.e_star)),
        None => failures.push("no pair after the crossing".into()),
    }
    Ok(SplitReport {
        v_star: crit.v_star,
        e_star: crit.e_star,
        epsilon,
        before,
        at,
        after,
        born,
        failures,
    })
}
