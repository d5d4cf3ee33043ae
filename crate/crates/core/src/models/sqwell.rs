//! PT-symmetric square well: V = V1 + iV2 sgn(x) for |x| < a, zero outside.

use num_complex::Complex64;

use super::ScatterAmplitudes;

// sin(w a)/w, finite as w → 0
fn sinc_len(w: Complex64, a: f64) -> Complex64 {
    let z = w * a;
    if z.norm() < 1e-4 {
        a * (1.0 - z * z / 6.0)
    } else {
        z.sin() / w
    }
}

/// Coefficients (A, B) of e^{±ikx} left of the well for a unit outgoing wave
/// on the right, given local wavenumbers `p` (left half) and `q` (right half).
/// Only even functions of p and q appear, so either root of p², q² works.
pub fn jost_with_roots(k: Complex64, p: Complex64, q: Complex64, a: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let ik = i * k;
    // (ψ, ψ') at x = a with the common factor e^{ika} removed
    let (mut psi, mut dpsi) = (Complex64::new(1.0, 0.0), ik);
    for w in [q, p] {
        let c = (w * a).cos();
        let sn = sinc_len(w, a);
        let w2 = w * w;
        let next = (c * psi - sn * dpsi, w2 * sn * psi + c * dpsi);
        psi = next.0;
        dpsi = next.1;
    }
    let e = (ik * a).exp();
    let big_a = (psi + dpsi / ik) * e * e / 2.0;
    let big_b = (psi - dpsi / ik) / 2.0;
    (big_a, big_b)
}

fn roots(v1: f64, v2: f64, k: Complex64) -> (Complex64, Complex64) {
    let e = k * k;
    let p = (e - Complex64::new(v1, -v2)).sqrt();
    let q = (e - Complex64::new(v1, v2)).sqrt();
    (p, q)
}

pub(crate) fn f_of_k(v1: f64, v2: f64, a: f64, k: Complex64) -> Complex64 {
    let (p, q) = roots(v1, v2, k);
    jost_with_roots(k, p, q, a).0
}

pub(crate) fn amplitudes(v1: f64, v2: f64, a: f64, k: f64) -> ScatterAmplitudes {
    let kc = Complex64::new(k, 0.0);
    let (p, q) = roots(v1, v2, kc);
    let (fa, fb) = jost_with_roots(kc, p, q, a);
    let (_, gb) = jost_with_roots(kc, q, p, a);
    ScatterAmplitudes {
        r_left: fb / fa,
        r_right: gb / fa,
        t: 1.0 / fa,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_independence() {
        let (v1, v2, a) = (-5.0, 2.0, 2.0);
        for k in [
            Complex64::new(1.3, 0.0),
            Complex64::new(0.4, 1.1),
            Complex64::new(-2.0, 0.3),
        ] {
            let (p, q) = roots(v1, v2, k);
            let base = jost_with_roots(k, p, q, a);
            for (pp, qq) in [(-p, q), (p, -q), (-p, -q)] {
                let alt = jost_with_roots(k, pp, qq, a);
                assert!((alt.0 - base.0).norm() <= 1e-14 * base.0.norm());
                assert!((alt.1 - base.1).norm() <= 1e-14 * base.1.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn table_critical_zero() {
        let f = f_of_k(-5.0, 10.383, 2.0, Complex64::new(22.578f64.sqrt(), 0.0));
        assert!(f.norm() < 1e-2, "{}", f.norm());
    }

    #[test]
    fn unimodular_det_s() {
        for k in [0.5, 1.7, 3.2] {
            let amp = amplitudes(5.0, 3.685, 2.0, k);
            assert!((amp.det_s().norm() - 1.0).abs() < 1e-10);
        }
    }
}
