//! Scarf II: V(x) = V1 sech²x + i V2 sech x tanh x.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rootfind::{EigenKind, EigenRecord, KZero};
use crate::specfun::{ln_gamma, recip_gamma, SpecfunError};

use super::ScatterAmplitudes;

/// (p, s) with p² = (V2 − V1 + ¼)/4 and s² = (¼ − V1 − V2)/4. Only p² and s²
/// enter the amplitudes, so the principal roots are used.
pub fn p_s(v1: f64, v2: f64) -> (Complex64, Complex64) {
    let p = Complex64::new((v2 - v1 + 0.25) / 4.0, 0.0).sqrt();
    let s = Complex64::new((0.25 - v1 - v2) / 4.0, 0.0).sqrt();
    (p, s)
}

/// q with q² = (V2 + V1 − ¼)/4; k = ±q are the spectral-singularity roots.
pub fn q_param(v1: f64, v2: f64) -> Complex64 {
    Complex64::new((v2 + v1 - 0.25) / 4.0, 0.0).sqrt()
}

fn map_gamma_err(e: SpecfunError, k: Complex64) -> Error {
    match e {
        SpecfunError::Pole(_) => Error::Pole(k),
        other => Error::Eval(other),
    }
}

// F = Γ(−ik)Γ(1−ik)Γ(½−ik)² / Π Γ(½ ± (p+s) − ik)Γ(½ ± (p−s) − ik)
pub(crate) fn f_of_k(v1: f64, v2: f64, k: Complex64) -> Result<Complex64> {
    let (p, s) = p_s(v1, v2);
    let ik = Complex64::i() * k;
    let mut log_sum = Complex64::new(0.0, 0.0);
    for z in [-ik, 1.0 - ik, 0.5 - ik, 0.5 - ik] {
        log_sum += ln_gamma(z).map_err(|e| map_gamma_err(e, k))?;
    }
    let mut product = Complex64::new(1.0, 0.0);
    for sigma in [p + s, -(p + s), p - s, -(p - s)] {
        let z = 0.5 + sigma - ik;
        if z.re >= 0.5 {
            log_sum -= ln_gamma(z).map_err(|e| map_gamma_err(e, k))?;
        } else {
            product *= recip_gamma(z);
        }
    }
    Ok(log_sum.exp() * product)
}

pub(crate) fn amplitudes(v1: f64, v2: f64, k: f64) -> Result<ScatterAmplitudes> {
    let f = f_of_k(v1, v2, Complex64::new(k, 0.0))?;
    let t = 1.0 / f;
    let (p, s) = p_s(v1, v2);
    let cs = (2.0 * PI * s).cos();
    let cp = (2.0 * PI * p).cos();
    let x = PI * k;
    let (sh, ch) = (x.sinh(), x.cosh());
    let sech_plus_csch = (sh + ch) / (sh * ch);
    let sech_minus_csch = -(-x).exp() / (sh * ch);
    // c1 = sin π(p+s) sin π(p−s) / cosh πk, c2 = cos π(p+s) cos π(p−s) / sinh πk
    let c1_minus_c2 = 0.5 * (cs * sech_minus_csch - cp * sech_plus_csch);
    let c1_plus_c2 = 0.5 * (cs * sech_plus_csch - cp * sech_minus_csch);
    let i = Complex64::i();
    Ok(ScatterAmplitudes {
        r_left: i * t * c1_minus_c2,
        r_right: -i * t * c1_plus_c2,
        t,
    })
}

fn record(k: Complex64) -> Option<EigenRecord> {
    let zero = KZero {
        k,
        residual: 0.0,
        iterations: 0,
    };
    if k.re == 0.0 {
        if k.im > 0.0 {
            return Some(EigenRecord {
                e: Complex64::new(-k.im * k.im, 0.0),
                kind: EigenKind::RealBound,
                zero,
                partner: None,
            });
        }
        return None;
    }
    let k = if k.re < 0.0 { -k.conj() } else { k };
    let zero = KZero { k, ..zero };
    let partner = Some(KZero { k: -k.conj(), ..zero });
    if k.im == 0.0 {
        return Some(EigenRecord {
            e: Complex64::new(k.re * k.re, 0.0),
            kind: EigenKind::Ss,
            zero,
            partner,
        });
    }
    Some(EigenRecord {
        e: k * k,
        kind: EigenKind::Ccpe,
        zero,
        partner,
    })
}

/// Closed-form discrete spectrum. Zeros of F sit at k = i(σ − n − ½) for
/// σ ∈ {±(p+s), ±(p−s)} and n = 0, 1, … while Re σ − n − ½ ≥ 0. In the
/// unbroken phase (s real) these are the real levels −(n + ½ − (p ± s))²;
/// past V2 = ¼ − V1 they become the pairs −(n + ½ − (p ± iq))², and a zero
/// landing on the real axis is the spectral singularity.
pub fn scarf2_closed_spectrum(v1: f64, v2: f64) -> Vec<EigenRecord> {
    let v2 = v2.abs();
    let (p, s) = p_s(v1, v2);
    let mut sigmas: Vec<Complex64> = Vec::new();
    for sigma in [p + s, p - s, -(p + s), -(p - s)] {
        if !sigmas.iter().any(|&o| (o - sigma).norm() < 1e-14) {
            sigmas.push(sigma);
        }
    }
    let mut out: Vec<EigenRecord> = Vec::new();
    for sigma in sigmas {
        let mut n = 0.0;
        while sigma.re - n - 0.5 >= -1e-12 {
            let k2 = sigma.re - n - 0.5;
            let k2 = if k2.abs() < 1e-12 { 0.0 } else { k2 };
            let k = Complex64::new(-sigma.im, k2);
            if let Some(r) = record(k) {
                let dup = out.iter().any(|o| (o.e - r.e).norm() < 1e-12 && o.kind == r.kind);
                if !dup {
                    out.push(r);
                }
            }
            n += 1.0;
        }
    }
    out.sort_by(|a, b| a.e.re.total_cmp(&b.e.re).then(a.e.im.total_cmp(&b.e.im)));
    out
}

/// m-th critical strength V* = V1 + 4m² + 4m + ¾ and E* = q² = (V* + V1 − ¼)/4.
pub fn scarf2_critical(v1: f64, m: u32) -> Result<(f64, f64)> {
    let mf = m as f64;
    let v_star = v1 + 4.0 * mf * mf + 4.0 * mf + 0.75;
    if v_star <= 0.0 {
        return Err(Error::Domain(format!(
            "critical strength {v_star} is not positive for V1 = {v1}, m = {m}"
        )));
    }
    let e_star = (v_star + v1 - 0.25) / 4.0;
    if e_star <= 0.0 {
        return Err(Error::Domain(format!(
            "V2 = {v_star} puts the real-axis zero at E = {e_star} <= 0 (V1 = {v1}, m = {m})"
        )));
    }
    Ok((v_star, e_star))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn energies(v1: f64, v2: f64, kind: EigenKind) -> Vec<Complex64> {
        scarf2_closed_spectrum(v1, v2)
            .into_iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.e)
            .collect()
    }

    #[test]
    fn closed_spectrum_broken_phase() {
        let cc = energies(0.0, 8.75, EigenKind::Ccpe);
        assert_eq!(cc.len(), 1);
        assert!((cc[0] - Complex64::new(1.125, 2.915)).norm() < 1e-3);
        let ss = energies(0.0, 8.75, EigenKind::Ss);
        assert_eq!(ss.len(), 1);
        assert!((ss[0].re - 2.125).abs() < 1e-12);
    }

    #[test]
    fn closed_spectrum_unbroken_phase() {
        let real = energies(-5.0, 5.24, EigenKind::RealBound);
        let expect = [-1.367, -1.143, -0.028, -0.004];
        assert_eq!(real.len(), 4);
        for (e, x) in real.iter().zip(expect) {
            assert!((e.re - x).abs() < 1e-3, "{e} vs {x}");
        }
    }

    #[test]
    fn closed_spectrum_v1_minus5_v2_19_75() {
        // printed imaginary part 3.002 of the upper pair does not follow from
        // the level formula; the formula gives 3.808
        let cc = energies(-5.0, 19.75, EigenKind::Ccpe);
        assert_eq!(cc.len(), 2);
        assert!((cc[0] - Complex64::new(-0.375, 7.615)).norm() < 1e-3);
        assert!((cc[1] - Complex64::new(2.625, 3.808)).norm() < 1e-3);
        let ss = energies(-5.0, 19.75, EigenKind::Ss);
        assert!((ss[0].re - 3.625).abs() < 1e-12);
    }

    #[test]
    fn critical_values() {
        let (v, e) = scarf2_critical(0.0, 1).unwrap();
        assert!((v - 8.75).abs() < 1e-12 && (e - 2.125).abs() < 1e-12);
        let (v, e) = scarf2_critical(5.0, 0).unwrap();
        assert!((v - 5.75).abs() < 1e-12 && (e - 2.625).abs() < 1e-12);
        let (v, e) = scarf2_critical(0.0, 2).unwrap();
        assert!((v - 24.75).abs() < 1e-12 && (e - 6.125).abs() < 1e-12);
        let f = f_of_k(0.0, 24.75, Complex64::new(6.125f64.sqrt(), 0.0)).unwrap();
        assert!(f.norm() < 1e-10);
        assert!(scarf2_critical(-5.0, 0).is_err());
        assert!(scarf2_critical(-5.0, 1).is_err());
    }

    #[test]
    fn f_vanishes_at_closed_form_zeros() {
        for (v1, v2) in [(0.0, 8.75), (-5.0, 19.75), (-5.0, 5.24), (5.0, 30.0)] {
            for r in scarf2_closed_spectrum(v1, v2) {
                let f = f_of_k(v1, v2, r.zero.k).unwrap();
                assert!(f.norm() < 1e-9, "({v1},{v2}) k={} |F|={:e}", r.zero.k, f.norm());
            }
        }
    }

    #[test]
    fn unimodular_det_s() {
        for k in [0.3, 1.1, 2.9, 5.0] {
            let a = amplitudes(-5.0, 19.75, k).unwrap();
            assert!((a.det_s().norm() - 1.0).abs() < 1e-10, "k={k}");
        }
    }
}
