//! Zeros of F(k) in a rectangle of the closed upper half k-plane and their
//! classification into bound states, conjugate pairs and spectral
//! singularities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, PotentialModel, Scatterer};

mod contour;
mod search;

pub use contour::{contour_grid, contours_of, sample_grid, ContourSet, Field, FieldGrid, Polyline};
pub use search::{find_zeros, newton, winding_number, ZeroSearch};

/// A located zero of F.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KZero {
    pub k: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EigenKind {
    RealBound,
    #[serde(rename = "CCPE")]
    Ccpe,
    #[serde(rename = "SS")]
    Ss,
}

impl EigenKind {
    pub fn label(self) -> &'static str {
        match self {
            EigenKind::RealBound => "RealBound",
            EigenKind::Ccpe => "CCPE",
            EigenKind::Ss => "SS",
        }
    }
}

/// A classified eigenvalue. For pairs `e` has Im E > 0 and `zero` is the
/// k₁ > 0 member; `partner` holds the mirror −k*.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenRecord {
    pub e: Complex64,
    pub kind: EigenKind,
    pub zero: KZero,
    pub partner: Option<KZero>,
}

/// Rectangle k₁ ∈ [k1_min, k1_max], k₂ ∈ [k2_min, k2_max].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub k1_min: f64,
    pub k1_max: f64,
    pub k2_min: f64,
    pub k2_max: f64,
}

impl Window {
    pub fn new(k1_min: f64, k1_max: f64, k2_min: f64, k2_max: f64) -> Result<Self> {
        for (field, v) in [
            ("k1_min", k1_min),
            ("k1_max", k1_max),
            ("k2_min", k2_min),
            ("k2_max", k2_max),
        ] {
            crate::error::check_finite(field, v)?;
        }
        if k1_max <= k1_min || k2_max <= k2_min {
            return Err(Error::InvalidParameter {
                field: "window",
                reason: format!("empty window [{k1_min}, {k1_max}] x [{k2_min}, {k2_max}]"),
            });
        }
        if k2_min < 0.0 {
            return Err(Error::InvalidParameter {
                field: "k2_min",
                reason: format!("window must lie in the closed upper half plane, got {k2_min}"),
            });
        }
        Ok(Window {
            k1_min,
            k1_max,
            k2_min,
            k2_max,
        })
    }

    /// k₁ ∈ [−K, K], k₂ ∈ [0, K].
    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width, 0.0, half_width)
    }

    /// K = √(3·max(|V1|, V2, 1)), widened for families whose zeros sit
    /// further out: the delta pair (|k| up to about √((V1² + V2²)/2)) and
    /// the square well.
    pub fn default_for(model: &PotentialModel) -> Self {
        let scale = model.v1.abs().max(model.v2).max(1.0);
        let base = (3.0 * scale).sqrt();
        let k = match model.kind {
            ModelKind::Scarf2 | ModelKind::Exponential => base,
            ModelKind::DeltaPair => {
                let r = ((model.v1 * model.v1 + model.v2 * model.v2) / 2.0).sqrt();
                base.max(1.25 * r + 1.0)
            }
            ModelKind::SquareWell => (5.0 * scale).sqrt(),
        };
        Window::symmetric(k).expect("positive half width")
    }

    /// Default for an arbitrary sampled potential with peak modulus `v_max`.
    pub fn default_for_strength(v_max: f64) -> Self {
        Window::symmetric((3.0 * v_max.max(1.0)).sqrt()).expect("positive half width")
    }

    /// Mirror image under k₁ → −k₁.
    pub fn reflected(&self) -> Self {
        Window {
            k1_min: -self.k1_max,
            k1_max: -self.k1_min,
            ..*self
        }
    }

    pub fn contains(&self, k: Complex64) -> bool {
        k.re >= self.k1_min && k.re <= self.k1_max && k.im >= self.k2_min && k.im <= self.k2_max
    }
}

/// Tolerances and resolution for the zero search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RootOptions {
    /// Distance from an axis below which a zero is taken to lie on it.
    pub axis_tol: f64,
    /// Zeros closer than this are the same zero.
    pub dedup_tol: f64,
    /// Accepted |F| at a zero, relative to the median |F| on the boundary.
    pub residual_tol: f64,
    /// Smallest grid spacing in k.
    pub cell: f64,
    /// Cap on grid points along either axis; wide windows get coarser cells.
    pub max_points_per_axis: usize,
    pub max_newton: usize,
    /// Minimum number of samples on the window boundary for the winding count.
    pub boundary_samples: usize,
    /// Number of subdivision levels allowed when the winding count exceeds
    /// the zeros found from grid seeds.
    pub max_refine: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            axis_tol: 1e-6,
            dedup_tol: 1e-6,
            residual_tol: 1e-9,
            cell: 0.12,
            max_points_per_axis: 120,
            max_newton: 100,
            boundary_samples: 2000,
            max_refine: 12,
        }
    }
}

/// Non-fatal findings of a search or classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum Warning {
    NonConvergence { seed: Complex64, reason: String },
    WindowBoundary { k: Complex64 },
    UnpairedRoot { k: Complex64 },
    CountMismatch { winding: i64, found: usize },
    SkippedCells { count: usize },
    WindingUnavailable { reason: String },
}

/// Classified spectrum with whatever warnings were raised on the way.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub records: Vec<EigenRecord>,
    pub warnings: Vec<Warning>,
}

impl Spectrum {
    pub fn of_kind(&self, kind: EigenKind) -> impl Iterator<Item = &EigenRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn count(&self, kind: EigenKind) -> usize {
        self.of_kind(kind).count()
    }
}

/// Groups mirror zeros ±k₁ + ik₂ and labels each eigenvalue. Zeros within
/// `axis_tol` of an axis are snapped onto it; zeros below the real axis
/// beyond that are dropped.
pub fn classify(zeros: &[KZero], axis_tol: f64) -> Spectrum {
    let mut snapped: Vec<KZero> = zeros
        .iter()
        .filter(|z| z.k.im >= -axis_tol)
        .map(|z| {
            let mut k = z.k;
            if k.im.abs() < axis_tol {
                k.im = 0.0;
            }
            if k.re.abs() < axis_tol {
                k.re = 0.0;
            }
            KZero { k, ..*z }
        })
        .filter(|z| z.k != Complex64::new(0.0, 0.0))
        .collect();
    snapped.sort_by(|a, b| b.k.re.total_cmp(&a.k.re).then(a.k.im.total_cmp(&b.k.im)));

    let mut used = vec![false; snapped.len()];
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..snapped.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = snapped[i];
        if z.k.re == 0.0 {
            records.push(EigenRecord {
                e: Complex64::new(-z.k.im * z.k.im, 0.0),
                kind: EigenKind::RealBound,
                zero: z,
                partner: None,
            });
            continue;
        }
        let mirror = Complex64::new(-z.k.re, z.k.im);
        let pair_tol = 1e-6 * z.k.norm().max(1.0);
        let partner = (0..snapped.len())
            .filter(|&j| !used[j] && (snapped[j].k - mirror).norm() < pair_tol)
            .min_by(|&a, &b| {
                (snapped[a].k - mirror)
                    .norm()
                    .total_cmp(&(snapped[b].k - mirror).norm())
            });
        if let Some(j) = partner {
            used[j] = true;
        } else {
            warnings.push(Warning::UnpairedRoot { k: z.k });
        }
        let partner = partner.map(|j| snapped[j]);
        // the k₁ > 0 member is primary; an unpaired k₁ < 0 zero stands in
        // for its missing mirror
        let (zero, partner) = if z.k.re > 0.0 {
            (z, partner)
        } else {
            match partner {
                Some(p) => (p, Some(z)),
                None => (z, None),
            }
        };
        if zero.k.im == 0.0 {
            let k1 = zero.k.re.abs();
            records.push(EigenRecord {
                e: Complex64::new(k1 * k1, 0.0),
                kind: EigenKind::Ss,
                zero,
                partner,
            });
        } else {
            let e = zero.k * zero.k;
            records.push(EigenRecord {
                e: Complex64::new(e.re, e.im.abs()),
                kind: EigenKind::Ccpe,
                zero,
                partner,
            });
        }
    }
    records.sort_by(|a, b| a.e.re.total_cmp(&b.e.re).then(a.e.im.total_cmp(&b.e.im)));
    Spectrum { records, warnings }
}

/// Zeros in `window` followed by classification; search warnings are kept.
pub fn spectrum_in<S: Scatterer + ?Sized>(model: &S, window: &Window, opts: &RootOptions) -> Result<Spectrum> {
    let search = find_zeros(model, window, opts)?;
    let mut spec = classify(&search.zeros, opts.axis_tol);
    let mut warnings = search.warnings;
    warnings.append(&mut spec.warnings);
    spec.warnings = warnings;
    Ok(spec)
}

/// Spectrum of an analytic model in its default window.
pub fn spectrum(model: &PotentialModel, opts: &RootOptions) -> Result<Spectrum> {
    spectrum_in(model, &Window::default_for(model), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> KZero {
        KZero {
            k: Complex64::new(re, im),
            residual: 0.0,
            iterations: 0,
        }
    }

    #[test]
    fn bound_state_energy() {
        let s = classify(&[z(0.0, 1.2)], 1e-6);
        assert_eq!(s.records.len(), 1);
        assert_eq!(s.records[0].kind, EigenKind::RealBound);
        assert!((s.records[0].e.re + 1.44).abs() < 1e-14);
    }

    #[test]
    fn ss_pair() {
        let k = 2.125f64.sqrt();
        let s = classify(&[z(k, 3e-8), z(-k, -2e-7)], 1e-6);
        assert_eq!(s.records.len(), 1);
        let r = s.records[0];
        assert_eq!(r.kind, EigenKind::Ss);
        assert!((r.e.re - 2.125).abs() < 1e-12);
        assert!(r.partner.is_some());
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn ccpe_from_square_root() {
        let k = Complex64::new(1.125, 2.915).sqrt();
        let s = classify(&[z(-k.re, k.im), z(k.re, k.im)], 1e-6);
        assert_eq!(s.records.len(), 1);
        let r = s.records[0];
        assert_eq!(r.kind, EigenKind::Ccpe);
        assert!(r.zero.k.re > 0.0);
        assert!((r.e - Complex64::new(1.125, 2.915)).norm() < 1e-12);
    }

    #[test]
    fn unpaired_is_flagged() {
        let s = classify(&[z(-1.0, 0.5)], 1e-6);
        assert_eq!(s.records[0].kind, EigenKind::Ccpe);
        assert!(s.records[0].e.im > 0.0);
        assert!(matches!(s.warnings[0], Warning::UnpairedRoot { .. }));
    }

    #[test]
    fn below_axis_dropped() {
        let s = classify(&[z(1.0, -1e-3), z(-1.0, -1e-3)], 1e-6);
        assert!(s.records.is_empty());
    }

    #[test]
    fn window_validation() {
        assert!(Window::new(0.0, 1.0, -0.5, 1.0).is_err());
        assert!(Window::new(1.0, 1.0, 0.0, 1.0).is_err());
        let w = Window::new(-1.0, 3.0, 0.0, 2.0).unwrap().reflected();
        assert_eq!((w.k1_min, w.k1_max), (-3.0, 1.0));
    }
}
