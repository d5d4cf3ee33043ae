//! Analytic PT-symmetric scattering models.
//!
//! Every model has the form V(x) = V1·f_even(x) + i·V2·f_odd(x) and exposes
//! F(k) = 1/t(k) continued to complex k, together with the real-k amplitudes.

pub mod delta;
pub mod exponential;
pub mod scarf2;
pub mod sqwell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{check_finite, Error, Result};

pub use delta::delta_ss;
pub use exponential::exp_bound_states;
pub use scarf2::{scarf2_closed_spectrum, scarf2_critical};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "scarf2")]
    Scarf2,
    #[serde(rename = "delta")]
    DeltaPair,
    #[serde(rename = "sqwell")]
    SquareWell,
    #[serde(rename = "exp")]
    Exponential,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Scarf2,
        ModelKind::DeltaPair,
        ModelKind::SquareWell,
        ModelKind::Exponential,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Scarf2 => "scarf2",
            ModelKind::DeltaPair => "delta",
            ModelKind::SquareWell => "sqwell",
            ModelKind::Exponential => "exp",
        }
    }

    pub fn uses_length(self) -> bool {
        !matches!(self, ModelKind::Scarf2)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scarf2" | "scarf" | "scarfii" => Ok(ModelKind::Scarf2),
            "delta" | "deltapair" | "delta-pair" => Ok(ModelKind::DeltaPair),
            "sqwell" | "squarewell" | "square-well" => Ok(ModelKind::SquareWell),
            "exp" | "exponential" => Ok(ModelKind::Exponential),
            _ => Err(Error::InvalidParameter {
                field: "model",
                reason: format!("unknown model kind `{s}`"),
            }),
        }
    }
}

/// Reflection and transmission amplitudes at real k.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatterAmplitudes {
    pub r_left: Complex64,
    pub r_right: Complex64,
    pub t: Complex64,
}

impl ScatterAmplitudes {
    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflectance_left(&self) -> f64 {
        self.r_left.norm_sqr()
    }

    pub fn reflectance_right(&self) -> f64 {
        self.r_right.norm_sqr()
    }

    /// det S = t² − r_L·r_R.
    pub fn det_s(&self) -> Complex64 {
        self.t * self.t - self.r_left * self.r_right
    }

    /// Transfer-matrix element M11 = t − r_L·r_R/t.
    pub fn m11(&self) -> Complex64 {
        self.t - self.r_left * self.r_right / self.t
    }

    /// Transfer-matrix element M22 = 1/t.
    pub fn m22(&self) -> Complex64 {
        1.0 / self.t
    }

    pub(crate) fn mirrored(self) -> Self {
        ScatterAmplitudes {
            r_left: self.r_right,
            r_right: self.r_left,
            t: self.t,
        }
    }
}

/// Anything that can supply F(k) = 1/t(k) and real-k amplitudes.
pub trait Scatterer: Sync {
    fn f_of_k(&self, k: Complex64) -> Result<Complex64>;

    fn amplitudes(&self, k: f64) -> Result<ScatterAmplitudes>;

    /// Pointwise potential (eV) at x (Å).
    fn potential_at(&self, x: f64) -> Complex64;

    /// Distance below the real k-axis of the nearest singularity of F other
    /// than the pole at k = 0.
    fn singular_depth(&self) -> f64 {
        f64::INFINITY
    }
}

/// A step in V or V' at a fixed position: one-sided limits of V and the jump
/// of V' across the point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Discontinuity {
    pub x: f64,
    pub left: Complex64,
    pub right: Complex64,
    pub slope_jump: Complex64,
}

/// One member of a model family. `v2` is stored non-negative; a negative
/// input strength is represented by the spatially mirrored potential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialModel {
    pub kind: ModelKind,
    pub v1: f64,
    pub v2: f64,
    pub a: f64,
    pub mirrored: bool,
}

impl PotentialModel {
    pub fn new(kind: ModelKind, v1: f64, v2: f64, a: f64) -> Result<Self> {
        check_finite("v1", v1)?;
        check_finite("v2", v2)?;
        check_finite("a", a)?;
        let a = if kind.uses_length() {
            if a <= 0.0 {
                return Err(Error::InvalidParameter {
                    field: "a",
                    reason: format!("length scale must be positive, got {a}"),
                });
            }
            a
        } else {
            1.0
        };
        Ok(PotentialModel {
            kind,
            v1,
            v2: v2.abs(),
            a,
            mirrored: v2.is_sign_negative() && v2 != 0.0,
        })
    }

    pub fn scarf2(v1: f64, v2: f64) -> Result<Self> {
        Self::new(ModelKind::Scarf2, v1, v2, 1.0)
    }

    pub fn delta(v1: f64, v2: f64, a: f64) -> Result<Self> {
        Self::new(ModelKind::DeltaPair, v1, v2, a)
    }

    pub fn square_well(v1: f64, v2: f64, a: f64) -> Result<Self> {
        Self::new(ModelKind::SquareWell, v1, v2, a)
    }

    pub fn exponential(v1: f64, v2: f64, a: f64) -> Result<Self> {
        Self::new(ModelKind::Exponential, v1, v2, a)
    }

    /// Same family and V1, a with a new imaginary strength.
    pub fn with_v2(&self, v2: f64) -> Result<Self> {
        Self::new(self.kind, self.v1, v2, self.a)
    }

    /// Signed imaginary strength as originally supplied.
    pub fn signed_v2(&self) -> f64 {
        if self.mirrored {
            -self.v2
        } else {
            self.v2
        }
    }

    pub fn is_free(&self) -> bool {
        self.v1 == 0.0 && self.v2 == 0.0
    }

    /// Points where V or V' jumps; grids for these models put a node on each.
    pub fn discontinuities(&self) -> Vec<Discontinuity> {
        let (v1, v2, a) = (self.v1, self.v2, self.a);
        let zero = Complex64::new(0.0, 0.0);
        let raw = match self.kind {
            ModelKind::Scarf2 | ModelKind::DeltaPair => Vec::new(),
            ModelKind::SquareWell => vec![
                Discontinuity {
                    x: -a,
                    left: zero,
                    right: Complex64::new(v1, -v2),
                    slope_jump: zero,
                },
                Discontinuity {
                    x: 0.0,
                    left: Complex64::new(v1, -v2),
                    right: Complex64::new(v1, v2),
                    slope_jump: zero,
                },
                Discontinuity {
                    x: a,
                    left: Complex64::new(v1, v2),
                    right: zero,
                    slope_jump: zero,
                },
            ],
            ModelKind::Exponential => vec![Discontinuity {
                x: 0.0,
                left: Complex64::new(v1, -v2),
                right: Complex64::new(v1, v2),
                slope_jump: Complex64::new(-4.0 * v1 / a, 0.0),
            }],
        };
        if !self.mirrored {
            return raw;
        }
        let mut out: Vec<Discontinuity> = raw
            .into_iter()
            .map(|d| Discontinuity {
                x: -d.x,
                left: d.right,
                right: d.left,
                slope_jump: d.slope_jump,
            })
            .collect();
        out.reverse();
        out
    }

    fn unmirrored_potential(&self, x: f64) -> Complex64 {
        let (v1, v2, a) = (self.v1, self.v2, self.a);
        match self.kind {
            ModelKind::Scarf2 => {
                let sech = 1.0 / x.cosh();
                Complex64::new(v1 * sech * sech, v2 * sech * x.tanh())
            }
            ModelKind::DeltaPair => delta::regularized(v1, v2, a, a * delta::REGULARIZATION_WIDTH, x),
            ModelKind::SquareWell => {
                let ax = x.abs();
                let sgn = if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                let inside = Complex64::new(v1, v2 * sgn);
                if ax < a {
                    inside
                } else if ax == a {
                    inside * 0.5
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            ModelKind::Exponential => {
                let sgn = if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                Complex64::new(v1, v2 * sgn) * (-2.0 * x.abs() / a).exp()
            }
        }
    }

    fn raw_f(&self, k: Complex64) -> Result<Complex64> {
        match self.kind {
            ModelKind::Scarf2 => scarf2::f_of_k(self.v1, self.v2, k),
            ModelKind::DeltaPair => Ok(delta::f_of_k(self.v1, self.v2, self.a, k)),
            ModelKind::SquareWell => Ok(sqwell::f_of_k(self.v1, self.v2, self.a, k)),
            ModelKind::Exponential => exponential::f_of_k(self.v1, self.v2, self.a, k),
        }
    }
}

impl Scatterer for PotentialModel {
    fn f_of_k(&self, k: Complex64) -> Result<Complex64> {
        if !(k.re.is_finite() && k.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite k = {k}")));
        }
        if k == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole(k));
        }
        let f = self.raw_f(k)?;
        if !(f.re.is_finite() && f.im.is_finite()) {
            return Err(Error::Pole(k));
        }
        Ok(f)
    }

    fn amplitudes(&self, k: f64) -> Result<ScatterAmplitudes> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("amplitudes need real k > 0, got {k}")));
        }
        let amp = match self.kind {
            ModelKind::Scarf2 => scarf2::amplitudes(self.v1, self.v2, k)?,
            ModelKind::DeltaPair => delta::amplitudes(self.v1, self.v2, self.a, k),
            ModelKind::SquareWell => sqwell::amplitudes(self.v1, self.v2, self.a, k),
            ModelKind::Exponential => exponential::amplitudes(self.v1, self.v2, self.a, k)?,
        };
        let finite = [amp.t, amp.r_left, amp.r_right]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::Pole(Complex64::new(k, 0.0)));
        }
        Ok(if self.mirrored { amp.mirrored() } else { amp })
    }

    fn potential_at(&self, x: f64) -> Complex64 {
        if self.mirrored {
            self.unmirrored_potential(-x)
        } else {
            self.unmirrored_potential(x)
        }
    }

    fn singular_depth(&self) -> f64 {
        match self.kind {
            ModelKind::Scarf2 => 0.5,
            ModelKind::Exponential => 1.0 / self.a,
            ModelKind::DeltaPair | ModelKind::SquareWell => f64::INFINITY,
        }
    }
}

/// Bound states of a PT-symmetric scatterer from sign changes of
/// Re F(iκ) on (0, kappa_max]; F is real on the positive imaginary axis.
/// Returns κ values in increasing order.
pub fn imaginary_axis_roots<S: Scatterer + ?Sized>(model: &S, kappa_max: f64, n_scan: usize) -> Result<Vec<f64>> {
    let n_scan = n_scan.max(8);
    let h = kappa_max / n_scan as f64;
    let eval = |kappa: f64| -> Result<f64> { Ok(model.f_of_k(Complex64::new(0.0, kappa))?.re) };
    let mut roots = Vec::new();
    let mut x0 = 0.5 * h;
    let mut f0 = eval(x0)?;
    for i in 1..=n_scan {
        let x1 = (i as f64 + 0.5).min(n_scan as f64) * h;
        if x1 <= x0 {
            break;
        }
        let f1 = eval(x1)?;
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(&eval, x0, x1, f0)?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(roots)
}

pub(crate) fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kinds() {
        assert_eq!("Scarf2".parse::<ModelKind>().unwrap(), ModelKind::Scarf2);
        assert_eq!("exp".parse::<ModelKind>().unwrap(), ModelKind::Exponential);
        assert!("gauss".parse::<ModelKind>().is_err());
    }

    #[test]
    fn negative_v2_is_mirrored() {
        let m = PotentialModel::square_well(1.0, -2.0, 1.5).unwrap();
        assert_eq!(m.v2, 2.0);
        assert!(m.mirrored);
        let plain = PotentialModel::square_well(1.0, 2.0, 1.5).unwrap();
        assert_eq!(m.potential_at(0.7), plain.potential_at(-0.7));
        let (a, b) = (m.amplitudes(1.3).unwrap(), plain.amplitudes(1.3).unwrap());
        assert_eq!(a.r_left, b.r_right);
        assert_eq!(a.t, b.t);
    }

    #[test]
    fn rejects_bad_length() {
        assert!(PotentialModel::delta(0.0, 1.0, 0.0).is_err());
        assert!(PotentialModel::exponential(0.0, f64::NAN, 1.0).is_err());
        assert!(PotentialModel::scarf2(0.0, 1.0).is_ok());
    }

    #[test]
    fn potentials_are_pt_symmetric() {
        for kind in ModelKind::ALL {
            let m = PotentialModel::new(kind, -3.0, 2.5, 1.7).unwrap();
            for i in 0..200 {
                let x = -6.0 + 0.0613 * i as f64;
                assert_eq!(m.potential_at(-x), m.potential_at(x).conj(), "{kind} x={x}");
            }
        }
    }

    #[test]
    fn pole_at_origin() {
        for kind in ModelKind::ALL {
            let m = PotentialModel::new(kind, 1.0, 1.0, 1.0).unwrap();
            assert!(matches!(m.f_of_k(Complex64::new(0.0, 0.0)), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn free_models_transmit_fully() {
        for kind in ModelKind::ALL {
            let m = PotentialModel::new(kind, 0.0, 0.0, 1.3).unwrap();
            for k in [0.3, 1.0, 2.7] {
                let amp = m.amplitudes(k).unwrap();
                assert!((amp.t - 1.0).norm() < 1e-13, "{kind}");
                assert!(amp.r_left.norm() < 1e-13 && amp.r_right.norm() < 1e-13, "{kind}");
                let f = m.f_of_k(Complex64::new(k, 0.0)).unwrap();
                assert!((f.norm() - 1.0).abs() < 1e-13);
            }
        }
    }
}
