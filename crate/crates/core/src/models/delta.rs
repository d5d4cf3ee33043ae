//! PT-symmetric delta pair: V(x) = (V1 − iV2) δ(x + a) + (V1 + iV2) δ(x − a).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{bisect, ScatterAmplitudes};

/// Gaussian width, as a fraction of `a`, used when the pair has to be
/// sampled on a grid.
pub const REGULARIZATION_WIDTH: f64 = 1.0 / 200.0;

/// The pair with each δ replaced by a unit-area Gaussian of width `sigma`
/// (unmirrored orientation).
pub fn regularized(v1: f64, v2: f64, a: f64, sigma: f64, x: f64) -> Complex64 {
    let g = |y: f64| (-(y * y) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    Complex64::new(v1, -v2) * g(x + a) + Complex64::new(v1, v2) * g(x - a)
}

type Mat = [[Complex64; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

// Maps (A, B) left of a delta of strength g at x0 to the coefficients on the right.
fn delta_transfer(g: Complex64, x0: f64, k: Complex64) -> Mat {
    let beta = g / (2.0 * Complex64::i() * k);
    let ph = (2.0 * Complex64::i() * k * x0).exp();
    [[1.0 + beta, beta / ph], [-beta * ph, 1.0 - beta]]
}

fn transfer(v1: f64, v2: f64, a: f64, k: Complex64) -> Mat {
    let left = delta_transfer(Complex64::new(v1, -v2), -a, k);
    let right = delta_transfer(Complex64::new(v1, v2), a, k);
    mul(&right, &left)
}

/// F = 1 + iV1/k − (V1² + V2²)(1 − e^{4ika}) / (4k²).
pub(crate) fn f_of_k(v1: f64, v2: f64, a: f64, k: Complex64) -> Complex64 {
    let i = Complex64::i();
    let s = v1 * v1 + v2 * v2;
    let one_minus = -((4.0 * i * k * a).exp_m1());
    1.0 + i * v1 / k - s * one_minus / (4.0 * k * k)
}

trait ExpM1 {
    fn exp_m1(self) -> Self;
}

impl ExpM1 for Complex64 {
    // e^z − 1 without cancellation for small |z|
    fn exp_m1(self) -> Complex64 {
        if self.norm() < 1e-3 {
            let z = self;
            z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0))))
        } else {
            self.exp() - 1.0
        }
    }
}

pub(crate) fn amplitudes(v1: f64, v2: f64, a: f64, k: f64) -> ScatterAmplitudes {
    let m = transfer(v1, v2, a, Complex64::new(k, 0.0));
    ScatterAmplitudes {
        r_left: -m[1][0] / m[1][1],
        r_right: m[0][1] / m[1][1],
        t: 1.0 / m[1][1],
    }
}

/// m-th spectral singularity of the pair. On the real axis F = 0 reduces to
/// k cot(2ka) + V1 = 0 together with V2² = 2k² + V1², so E* = (V2² − V1²)/2.
/// Each branch 2ka ∈ (jπ, (j+1)π) holds one root (the first branch only when
/// V1 > −1/(2a)); the root is bracketed on its branch and bisected.
pub fn delta_ss(v1: f64, a: f64, m: u32) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite() && v1.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "a",
            reason: format!("need finite a > 0 and V1, got a = {a}, V1 = {v1}"),
        });
    }
    let first = if 1.0 / (2.0 * a) + v1 > 0.0 { 0 } else { 1 };
    let j = first + m as usize;
    let h = |k: f64| -> Result<f64> {
        let th = 2.0 * k * a;
        Ok(k * th.cos() + v1 * th.sin())
    };
    // k cos θ + V1 sin θ has the sign of sin θ · (k cot θ + V1)
    let eps = 1e-12;
    let lo = ((j as f64) * PI / (2.0 * a)).max(eps) * (1.0 + eps);
    let hi = ((j + 1) as f64) * PI / (2.0 * a) * (1.0 - eps);
    let (flo, fhi) = (h(lo)?, h(hi)?);
    if flo * fhi > 0.0 || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::NoRoot(format!(
            "no sign change of k cot(2ka) + V1 on branch {j} (V1 = {v1}, a = {a})"
        )));
    }
    let k = bisect(&h, lo, hi, flo)?;
    let e_star = k * k;
    let v_star = (2.0 * e_star + v1 * v1).sqrt();
    Ok((v_star, e_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_matches_transfer_matrix() {
        for k in [
            Complex64::new(0.7, 0.0),
            Complex64::new(-1.3, 0.4),
            Complex64::new(2.1, 1.7),
            Complex64::new(0.2, -0.03),
        ] {
            let m = transfer(1.5, 2.5, 1.2, k);
            let f = f_of_k(1.5, 2.5, 1.2, k);
            assert!((m[1][1] - f).norm() < 1e-12 * f.norm().max(1.0), "k={k}");
        }
    }

    #[test]
    fn ss_zero_for_purely_imaginary_pair() {
        let v2 = PI / (2.0 * 2f64.sqrt());
        let f = f_of_k(0.0, v2, 1.0, Complex64::new(PI / 4.0, 0.0));
        assert!(f.norm() < 1e-10);
    }

    #[test]
    fn ss_branches() {
        let (v, e) = delta_ss(0.0, 1.0, 0).unwrap();
        assert!((v - PI / (2.0 * 2f64.sqrt())).abs() < 1e-10);
        assert!((e - PI * PI / 16.0).abs() < 1e-10);
        let (v, e) = delta_ss(5.0, 1.0, 0).unwrap();
        assert!((v - 5.394).abs() < 5e-3 && (e - 2.048).abs() < 5e-3);
        let (v, e) = delta_ss(-5.0, 1.0, 0).unwrap();
        assert!((v - 5.571).abs() < 5e-3 && (e - 3.020).abs() < 5e-3);
        for m in 0..4 {
            let (v, _) = delta_ss(0.0, 1.0, m).unwrap();
            let expect = PI * (2 * m + 1) as f64 / (2.0 * 2f64.sqrt());
            assert!((v - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn ss_values_make_f_vanish() {
        for v1 in [-5.0, -1.0, 0.0, 2.0, 5.0] {
            for m in 0..3 {
                let (v, e) = delta_ss(v1, 1.3, m).unwrap();
                let f = f_of_k(v1, v, 1.3, Complex64::new(e.sqrt(), 0.0));
                assert!(f.norm() < 1e-9, "v1={v1} m={m}");
            }
        }
    }

    #[test]
    fn reflection_rule_and_reciprocity() {
        let (v1, v2, a) = (0.8, 1.9, 1.0);
        for k in [0.4, 1.3, 2.2] {
            let amp = amplitudes(v1, v2, a, k);
            let flipped = amplitudes(v1, -v2, a, k);
            assert!((amp.r_right - flipped.r_left).norm() < 1e-13);
            assert!((amp.t - flipped.t).norm() < 1e-13);
            assert!((amp.det_s().norm() - 1.0).abs() < 1e-12);
        }
    }
}
