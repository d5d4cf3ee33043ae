//! PT-symmetric exponential: V(x) = (V1 + iV2 sgn x) e^{−2|x|/a}.
//!
//! With p² = a²(−V1 + iV2), q² = a²(−V1 − iV2) and s = ka the solutions are
//! Bessel functions J_{±is}(p e^{x/a}) on the left and J_{−is}(q e^{−x/a})
//! on the right. All amplitudes are written with the reduced series
//! (prefactors (z/2)^ν/Γ(ν+1) cancel), which depend on p², q² only.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{bessel_reduced, BesselConfig, ReducedBessel, SpecfunError};

use super::{imaginary_axis_roots, PotentialModel, ScatterAmplitudes};

fn squares(v1: f64, v2: f64, a: f64) -> (Complex64, Complex64) {
    let a2 = a * a;
    (Complex64::new(-v1 * a2, v2 * a2), Complex64::new(-v1 * a2, -v2 * a2))
}

fn reduced(nu: Complex64, z_sq: Complex64, k: Complex64) -> Result<ReducedBessel> {
    bessel_reduced(nu, z_sq, &BesselConfig::default()).map_err(|e| match e {
        SpecfunError::Pole(_) => Error::Pole(k),
        other => Error::Eval(other),
    })
}

// D = S_ν(p²)U_ν(q²) + S_ν(q²)U_ν(p²), ν = −is; F = iD/(2s)
fn denominator(p2: Complex64, q2: Complex64, s: Complex64, k: Complex64) -> Result<Complex64> {
    let nu = -Complex64::i() * s;
    let bp = reduced(nu, p2, k)?;
    let bq = reduced(nu, q2, k)?;
    Ok(bp.s * bq.u + bq.s * bp.u)
}

pub(crate) fn f_of_k(v1: f64, v2: f64, a: f64, k: Complex64) -> Result<Complex64> {
    let (p2, q2) = squares(v1, v2, a);
    let s = k * a;
    let d = denominator(p2, q2, s, k)?;
    Ok(Complex64::i() * d / (2.0 * s))
}

// −[S_{is}(x²)U_{−is}(y²) + S_{−is}(y²)U_{is}(x²)]: r numerator with x the
// incident-side parameter
fn reflection_numerator(x2: Complex64, y2: Complex64, s: Complex64, k: Complex64) -> Result<Complex64> {
    let nu = Complex64::i() * s;
    let plus_x = reduced(nu, x2, k)?;
    let minus_y = reduced(-nu, y2, k)?;
    Ok(-(plus_x.s * minus_y.u + minus_y.s * plus_x.u))
}

pub(crate) fn amplitudes(v1: f64, v2: f64, a: f64, k: f64) -> Result<ScatterAmplitudes> {
    let (p2, q2) = squares(v1, v2, a);
    let kc = Complex64::new(k, 0.0);
    let s = kc * a;
    let d = denominator(p2, q2, s, kc)?;
    let t = -2.0 * Complex64::i() * s / d;
    let r_left = reflection_numerator(p2, q2, s, kc)? / d;
    let r_right = reflection_numerator(q2, p2, s, kc)? / d;
    Ok(ScatterAmplitudes { r_left, r_right, t })
}

/// Real levels E = −κ² from p J_{κa}(q) J'_{κa}(p) + q J_{κa}(p) J'_{κa}(q) = 0,
/// found as sign changes of F(iκ) (real along the axis since q = p*), each
/// bisected to machine precision. Ordered from deepest to shallowest.
pub fn exp_bound_states(v1: f64, v2: f64, a: f64) -> Result<Vec<f64>> {
    let model = PotentialModel::exponential(v1, v2, a)?;
    let kappa_max = v1.abs().max(v2).max(1.0).sqrt() + 1.0;
    let kappas = imaginary_axis_roots(&model, kappa_max, 8000)?;
    Ok(kappas.iter().rev().map(|k| -k * k).collect())
}
