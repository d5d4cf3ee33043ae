//! Real-energy S-matrix checks: |det S| = 1 away from spectral
//! singularities and its 0/0 limit at them, the transfer-matrix identity
//! M₁₁* = M₂₂, and invisibility energies.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{ScatterAmplitudes, Scatterer};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagnosticOptions {
    /// |t| above this flags the sample as next to a spectral singularity.
    pub divergence_threshold: f64,
    /// Reflectance below this counts as invisible from that side.
    pub invisibility_tol: f64,
}

impl Default for DiagnosticOptions {
    fn default() -> Self {
        DiagnosticOptions {
            divergence_threshold: 1e4,
            invisibility_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub struct ScatterFlags {
    pub near_ss: bool,
    pub invisible_left: bool,
    pub invisible_right: bool,
    pub invisible_both: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatterReport {
    pub e: f64,
    pub amplitudes: ScatterAmplitudes,
    pub det_s: Complex64,
    pub flags: ScatterFlags,
}

impl ScatterReport {
    pub fn transmittance(&self) -> f64 {
        self.amplitudes.transmittance()
    }
}

fn check_energy_range(e_min: f64, e_max: f64, n: usize) -> Result<()> {
    crate::error::check_finite("e_min", e_min)?;
    crate::error::check_finite("e_max", e_max)?;
    if !(e_min > 0.0 && e_max >= e_min) {
        return Err(Error::InvalidParameter {
            field: "e_range",
            reason: format!("need 0 < e_min <= e_max, got [{e_min}, {e_max}]"),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            field: "n_samples",
            reason: "need at least one sample".into(),
        });
    }
    Ok(())
}

fn energies(e_min: f64, e_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![e_min];
    }
    (0..n)
        .map(|i| e_min + (e_max - e_min) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Amplitudes, det S and flags at real energy `e` > 0.
pub fn scatter_report<S: Scatterer + ?Sized>(model: &S, e: f64, opts: &DiagnosticOptions) -> Result<ScatterReport> {
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::Domain(format!("scattering energy must be positive, got {e}")));
    }
    let amp = model.amplitudes(e.sqrt())?;
    let (rl, rr) = (amp.reflectance_left(), amp.reflectance_right());
    let tol = opts.invisibility_tol;
    let unit_t = (amp.transmittance() - 1.0).abs() < tol.sqrt();
    let flags = ScatterFlags {
        near_ss: amp.t.norm() > opts.divergence_threshold,
        invisible_left: unit_t && rl < tol,
        invisible_right: unit_t && rr < tol,
        invisible_both: unit_t && rl < tol && rr < tol,
    };
    Ok(ScatterReport {
        e,
        amplitudes: amp,
        det_s: amp.det_s(),
        flags,
    })
}

/// One sample of a scan; failed evaluations are kept with their message.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub e: f64,
    pub report: Option<ScatterReport>,
    pub error: Option<String>,
}

/// `n` equally spaced energies in [e_min, e_max].
pub fn det_s_scan<S: Scatterer + ?Sized>(
    model: &S,
    e_min: f64,
    e_max: f64,
    n: usize,
    opts: &DiagnosticOptions,
) -> Result<Vec<ScanPoint>> {
    check_energy_range(e_min, e_max, n)?;
    Ok(energies(e_min, e_max, n)
        .into_par_iter()
        .map(|e| match scatter_report(model, e, opts) {
            Ok(r) => ScanPoint {
                e,
                report: Some(r),
                error: None,
            },
            Err(err) => ScanPoint {
                e,
                report: None,
                error: Some(err.to_string()),
            },
        })
        .collect())
}

/// det S from the Jost function alone. With det M = 1 one has
/// det S = M₁₁/M₂₂, and M₁₁(k) = M₂₂(−k) at real k, so det S = F(−k)/F(k).
/// Unlike t² − r_L r_R this stays accurate next to a singularity, where
/// both terms grow like 1/|F|².
pub fn det_s_from_jost<S: Scatterer + ?Sized>(model: &S, k: f64) -> Result<Complex64> {
    let kc = Complex64::new(k, 0.0);
    Ok(model.f_of_k(-kc)? / model.f_of_k(kc)?)
}

/// |det S| at E* ∓ δ by both routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitPoint {
    pub delta: f64,
    /// |F(−k)/F(k)| below and above E*.
    pub below: f64,
    pub above: f64,
    /// |t² − r_L r_R| below and above E*; loses digits as δ shrinks.
    pub below_amplitudes: f64,
    pub above_amplitudes: f64,
}

impl LimitPoint {
    pub fn deviation(&self) -> f64 {
        (self.below - 1.0).abs().max((self.above - 1.0).abs())
    }
}

/// |det S| on both sides of a singularity at `e_star`, at each offset in
/// `deltas`.
pub fn det_s_limit<S: Scatterer + ?Sized>(model: &S, e_star: f64, deltas: &[f64]) -> Result<Vec<LimitPoint>> {
    deltas
        .iter()
        .map(|&d| {
            if !(d > 0.0 && d < e_star) {
                return Err(Error::InvalidParameter {
                    field: "delta",
                    reason: format!("need 0 < delta < E* = {e_star}, got {d}"),
                });
            }
            let (lo, hi) = ((e_star - d).sqrt(), (e_star + d).sqrt());
            Ok(LimitPoint {
                delta: d,
                below: det_s_from_jost(model, lo)?.norm(),
                above: det_s_from_jost(model, hi)?.norm(),
                below_amplitudes: model.amplitudes(lo)?.det_s().norm(),
                above_amplitudes: model.amplitudes(hi)?.det_s().norm(),
            })
        })
        .collect()
}

/// max |M₁₁* − M₂₂| over `n` energies in [e_min, e_max], with
/// M₁₁ = t − r_L r_R / t and M₂₂ = 1/t.
pub fn m_identity_check<S: Scatterer + ?Sized>(model: &S, e_min: f64, e_max: f64, n: usize) -> Result<f64> {
    check_energy_range(e_min, e_max, n)?;
    let residuals: Vec<f64> = energies(e_min, e_max, n)
        .into_par_iter()
        .map(|e| {
            let amp = model.amplitudes(e.sqrt())?;
            Ok((amp.m11().conj() - amp.m22()).norm())
        })
        .collect::<Result<_>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Invisibility {
    pub e: f64,
    pub direction: Direction,
    pub reflectance_left: f64,
    pub reflectance_right: f64,
}

fn golden_min<F: Fn(f64) -> Result<f64>>(g: &F, mut a: f64, mut b: f64) -> Result<f64> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..100 {
        if (b - a) <= 1e-12 * b.abs().max(1.0) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Energies in [e_min, e_max] with T = 1 and a vanishing reflectance.
/// Candidates are sign changes of T − 1 (bisected to 1e-10) and local
/// minima of |T − 1| that touch zero without crossing it.
pub fn invisibility_scan<S: Scatterer + ?Sized>(
    model: &S,
    e_min: f64,
    e_max: f64,
    n: usize,
    tol: f64,
) -> Result<Vec<Invisibility>> {
    check_energy_range(e_min, e_max, n.max(3))?;
    let es = energies(e_min, e_max, n.max(3));
    let excess = |e: f64| -> Result<f64> { Ok(model.amplitudes(e.sqrt())?.transmittance() - 1.0) };
    let vals: Vec<f64> = es.par_iter().map(|&e| excess(e)).collect::<Result<_>>()?;
    if vals.iter().all(|v| v.abs() < 1e-14) {
        return Err(Error::InvalidParameter {
            field: "model",
            reason: "transmission is identically one; the potential vanishes".into(),
        });
    }
    let mut candidates = Vec::new();
    for i in 0..es.len() - 1 {
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            candidates.push(es[i]);
        } else if (a > 0.0) != (b > 0.0) && b != 0.0 {
            candidates.push(crate::models::bisect(&excess, es[i], es[i + 1], a)?);
        }
    }
    for i in 1..es.len() - 1 {
        let (a, b, c) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
        if b <= a && b <= c && (vals[i - 1] > 0.0) == (vals[i + 1] > 0.0) {
            let abs_excess = |e: f64| -> Result<f64> { Ok(excess(e)?.abs()) };
            let e = golden_min(&abs_excess, es[i - 1], es[i + 1])?;
            if abs_excess(e)? < 1e-8 {
                candidates.push(e);
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() < 1e-8 * b.abs().max(1.0));
    let mut out = Vec::new();
    for e in candidates {
        let amp = model.amplitudes(e.sqrt())?;
        let (rl, rr) = (amp.reflectance_left(), amp.reflectance_right());
        let direction = match (rl < tol, rr < tol) {
            (true, true) => Direction::Both,
            (true, false) => Direction::Left,
            (false, true) => Direction::Right,
            (false, false) => continue,
        };
        out.push(Invisibility {
            e,
            direction,
            reflectance_left: rl,
            reflectance_right: rr,
        });
    }
    Ok(out)
}
