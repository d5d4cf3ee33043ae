//! Complex log-gamma, reciprocal gamma and Bessel J of complex order.

mod dd;

use dd::DdComplex;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("gamma pole at z = {0}")]
    Pole(Complex64),
    #[error("branch point: J_nu(0) undefined for nu = {0}")]
    Branch(Complex64),
    #[error("series for J_nu(z) did not converge within {terms} terms (nu = {nu}, z = {z})")]
    Convergence { nu: Complex64, z: Complex64, terms: usize },
    #[error("|z| = {0} exceeds the configured truncation radius")]
    OutOfRange(f64),
    #[error("non-finite result")]
    NonFinite,
}

/// Lanczos parameter g. Paired with `LANCZOS_P` below (the classic n = 9 set),
/// relative error of Γ stays near 1e-15 in the right half-plane.
pub const LANCZOS_G: f64 = 7.0;

pub const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

// Lanczos sum for Re z >= 1/2.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_P[0], 0.0);
    for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
        acc += p / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + LN_SQRT_2PI + acc.ln()
}

// ln sin(pi z) on the branch continuous with lnΓ's, for Im z >= 0.
fn ln_sin_pi_upper(z: Complex64) -> Complex64 {
    let w = Complex64::from_polar((-2.0 * PI * z.im).exp(), 2.0 * PI * z.re);
    Complex64::new(PI * z.im - std::f64::consts::LN_2, PI * (0.5 - z.re)) + (1.0 - w).ln()
}

/// Log-gamma, analytic in the plane cut along the non-positive real axis
/// (the same branch as the standard `loggamma`).
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecfunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    if is_pole(z) {
        return Err(SpecfunError::Pole(z));
    }
    if z.im < 0.0 {
        return ln_gamma(z.conj()).map(|v| v.conj());
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_lanczos(z));
    }
    Ok(LN_PI - ln_sin_pi_upper(z) - ln_gamma_lanczos(1.0 - z))
}

pub fn gamma(z: Complex64) -> Result<Complex64, SpecfunError> {
    ln_gamma(z).map(|v| v.exp())
}

/// 1/Γ(z), entire: returns exact zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        return (-ln_gamma_lanczos(z)).exp();
    }
    (PI * z).sin() / PI * ln_gamma_lanczos(1.0 - z).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselConfig {
    pub max_terms: usize,
    /// Largest |z| accepted by the ascending series.
    pub radius: f64,
    /// Cancellation ratio sum|c_m| / |sum c_m| above which the series is
    /// re-summed in double-double arithmetic.
    pub cancellation_limit: f64,
}

impl Default for BesselConfig {
    fn default() -> Self {
        BesselConfig {
            max_terms: 600,
            radius: 1e3,
            cancellation_limit: 1e3,
        }
    }
}

/// Reduced series of J_nu(z) with the factor (z/2)^nu / Γ(nu+1) removed:
/// `s` = Σ c_m and `u` = Σ c_m (nu+2m), where
/// c_m = (−z²/4)^m / (m! (nu+1)_m). Then J = pref·s and J' = pref·u/z.
/// Both sums depend on z only through z², so callers that hold z² avoid
/// any square-root branch choice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedBessel {
    pub s: Complex64,
    pub u: Complex64,
}

fn check_input(nu: Complex64, z: Complex64, cfg: &BesselConfig) -> Result<(), SpecfunError> {
    let finite = [nu.re, nu.im, z.re, z.im].iter().all(|v| v.is_finite());
    if !finite {
        return Err(SpecfunError::NonFinite);
    }
    let r = z.norm();
    if r > cfg.radius {
        return Err(SpecfunError::OutOfRange(r));
    }
    Ok(())
}

/// Reduced ascending series at z² = `z_sq`; nu must not be a negative integer.
pub fn bessel_reduced(nu: Complex64, z_sq: Complex64, cfg: &BesselConfig) -> Result<ReducedBessel, SpecfunError> {
    check_input(nu, Complex64::new(z_sq.norm().sqrt(), 0.0), cfg)?;
    if !(z_sq.re.is_finite() && z_sq.im.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    if is_pole(nu + 1.0) {
        return Err(SpecfunError::Pole(nu + 1.0));
    }
    let (res, ratio) = reduced_f64(nu, z_sq, cfg)?;
    if ratio <= cfg.cancellation_limit {
        return Ok(res);
    }
    reduced_dd(nu, z_sq, cfg)
}

// Geometric tail bound once term ratios drop below 1/4; the u series carries
// an extra (nu+2m) factor that grows linearly in m.
fn converged(m: usize, nu: Complex64, w_abs: f64, c_abs: f64, s_abs: f64, u_abs: f64, tol: f64) -> bool {
    let mf = m as f64;
    if mf <= nu.norm() + 1.0 {
        return false;
    }
    let rho = w_abs / ((mf + 1.0) * (nu + mf + 1.0).norm());
    if rho >= 0.25 {
        return false;
    }
    let tail_s = c_abs * rho / (1.0 - rho);
    let tail_u = 2.0 * tail_s * ((nu + 2.0 * mf).norm() + 2.0);
    tail_s <= tol * s_abs && tail_u <= tol * u_abs
}

fn reduced_f64(nu: Complex64, z_sq: Complex64, cfg: &BesselConfig) -> Result<(ReducedBessel, f64), SpecfunError> {
    let w = -z_sq / 4.0;
    let w_abs = w.norm();
    let mut c = Complex64::new(1.0, 0.0);
    let mut s = c;
    let mut u = nu;
    if w_abs == 0.0 {
        return Ok((ReducedBessel { s, u }, 1.0));
    }
    let mut mag_s = 1.0;
    let mut mag_u = u.norm();
    for m in 1..cfg.max_terms {
        let mf = m as f64;
        c = c * w / (mf * (nu + mf));
        let cu = c * (nu + 2.0 * mf);
        s += c;
        u += cu;
        mag_s += c.norm();
        mag_u += cu.norm();
        if !(s.re.is_finite() && s.im.is_finite() && u.re.is_finite() && u.im.is_finite()) {
            return Err(SpecfunError::NonFinite);
        }
        if converged(m, nu, w_abs, c.norm(), s.norm(), u.norm(), 1e-17) {
            let ratio_s = mag_s / s.norm();
            let ratio_u = mag_u / u.norm();
            return Ok((ReducedBessel { s, u }, ratio_s.max(ratio_u)));
        }
    }
    Err(SpecfunError::Convergence {
        nu,
        z: z_sq.sqrt(),
        terms: cfg.max_terms,
    })
}

fn reduced_dd(nu: Complex64, z_sq: Complex64, cfg: &BesselConfig) -> Result<ReducedBessel, SpecfunError> {
    let nud = DdComplex::from_c64(nu);
    let w = DdComplex::from_c64(z_sq).scale_f64(-0.25);
    let w_abs = w.norm_f64();
    let mut c = DdComplex::from_c64(Complex64::new(1.0, 0.0));
    let mut s = c;
    let mut u = nud;
    for m in 1..cfg.max_terms {
        let mf = m as f64;
        let den = (nud + DdComplex::from_c64(Complex64::new(mf, 0.0))).scale_f64(mf);
        c = c * w / den;
        let cu = c * (nud + DdComplex::from_c64(Complex64::new(2.0 * mf, 0.0)));
        s = s + c;
        u = u + cu;
        let (sn, un) = (s.norm_f64(), u.norm_f64());
        if !(sn.is_finite() && un.is_finite()) {
            return Err(SpecfunError::NonFinite);
        }
        if converged(m, nu, w_abs, c.norm_f64(), sn, un, 1e-30) {
            return Ok(ReducedBessel {
                s: s.to_c64(),
                u: u.to_c64(),
            });
        }
    }
    Err(SpecfunError::Convergence {
        nu,
        z: z_sq.sqrt(),
        terms: cfg.max_terms,
    })
}

/// (z/2)^nu / Γ(nu+1) on the principal branch of z^nu.
pub fn bessel_prefactor(nu: Complex64, z: Complex64) -> Complex64 {
    let lz = (z / 2.0).ln();
    if (nu + 1.0).re >= 0.5 {
        (nu * lz - ln_gamma_lanczos(nu + 1.0)).exp()
    } else {
        (nu * lz).exp() * recip_gamma(nu + 1.0)
    }
}

/// J_nu(z) and dJ_nu/dz with default configuration.
pub fn bessel_j(nu: Complex64, z: Complex64) -> Result<(Complex64, Complex64), SpecfunError> {
    bessel_j_with(nu, z, &BesselConfig::default())
}

pub fn bessel_j_with(nu: Complex64, z: Complex64, cfg: &BesselConfig) -> Result<(Complex64, Complex64), SpecfunError> {
    check_input(nu, z, cfg)?;
    if z == Complex64::new(0.0, 0.0) {
        return bessel_at_origin(nu);
    }
    // J_{-n} = (-1)^n J_n for integer order
    if is_pole(nu + 1.0) {
        let n = -nu.re;
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let (j, jp) = bessel_j_with(-nu, z, cfg)?;
        return Ok((j * sign, jp * sign));
    }
    let red = bessel_reduced(nu, z * z, cfg)?;
    let pref = bessel_prefactor(nu, z);
    let j = pref * red.s;
    let jp = pref * red.u / z;
    if !(j.re.is_finite() && j.im.is_finite() && jp.re.is_finite() && jp.im.is_finite()) {
        return Err(SpecfunError::NonFinite);
    }
    Ok((j, jp))
}

fn bessel_at_origin(nu: Complex64) -> Result<(Complex64, Complex64), SpecfunError> {
    let zero = Complex64::new(0.0, 0.0);
    if nu == zero {
        return Ok((Complex64::new(1.0, 0.0), zero));
    }
    if nu == Complex64::new(1.0, 0.0) {
        return Ok((zero, Complex64::new(0.5, 0.0)));
    }
    if nu.im == 0.0 && nu.re < 0.0 && nu.re == nu.re.round() {
        let n = -nu.re;
        if n == 1.0 {
            return Ok((zero, Complex64::new(-0.5, 0.0)));
        }
        return Ok((zero, zero));
    }
    if nu.re > 1.0 {
        return Ok((zero, zero));
    }
    Err(SpecfunError::Branch(nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    // 200-digit reference values computed offline.
    const LNGAMMA_REF: [((f64, f64), (f64, f64)); 6] = [
        ((0.3, 0.7), (-0.093170312498134180893, -1.22395736571368873)),
        ((2.5, -1.25), (-0.078254814385115774582, -0.94891176755130349629)),
        ((-3.7, 0.2), (-1.6364330925624564172, -12.663282679635771969)),
        ((12.0, 30.0), (-6.8216171094237581859, 87.948161277706036425)),
        ((-0.5, -4.0), (-6.7582932283688677594, 0.13951844208214773728)),
        ((45.0, -10.0), (124.20299131810537048, -38.038011358613388175)),
    ];

    #[test]
    fn ln_gamma_trivial_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI.sqrt().ln()).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_matches_high_precision_reference() {
        for ((zr, zi), (lr, li)) in LNGAMMA_REF {
            let got = ln_gamma(c(zr, zi)).unwrap();
            let err = (got - c(lr, li)).norm();
            assert!(err < 1e-12, "z = {zr}+{zi}i: err {err:e}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for n in 0..5 {
            assert!(matches!(ln_gamma(c(-(n as f64), 0.0)), Err(SpecfunError::Pole(_))));
            assert_eq!(recip_gamma(c(-(n as f64), 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn reflection_residual() {
        let z = c(0.3, 0.7);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn recip_gamma_is_reciprocal() {
        for z in [c(0.2, -0.4), c(-2.5, 1.0), c(7.0, 3.0), c(-6.3, -0.1)] {
            let g = gamma(z).unwrap();
            assert!(rel(recip_gamma(z) * g, c(1.0, 0.0)) < 1e-13, "{z}");
        }
    }

    const BESSEL_REF: [((f64, f64), (f64, f64), (f64, f64), (f64, f64)); 6] = [
        (
            (0.0, 0.4),
            (3.0, 1.0),
            (-0.28433649502335300849, -0.10572690567854428918),
            (-0.33763146582864610198, 0.16785343828404921435),
        ),
        (
            (-2.5, 1.5),
            (7.0, -2.0),
            (-6.342462966749579895, -17.189719342618465872),
            (16.570205672392753399, -3.756261709667066156),
        ),
        (
            (0.0, 3.0),
            (15.0, 0.5),
            (1.6525435488135746746, 6.6097650432223712458),
            (-6.8032721422157791354, 1.4840571366889714477),
        ),
        (
            (1.25, 0.0),
            (0.5, 0.0),
            (0.15173234506687936441, 0.0),
            (0.3623257074899476518, 0.0),
        ),
        (
            (0.0, -4.0),
            (12.0, 8.0),
            (5922.7260778832485138, 226178.22893662037484),
            (225578.51543691322451, -20490.503647307990662),
        ),
        (
            (0.5, 0.0),
            (2.0, 0.0),
            (0.51301613656182775167, 0.0),
            (-0.36303974454670540709, 0.0),
        ),
    ];

    #[test]
    fn bessel_matches_high_precision_reference() {
        for ((nr, ni), (zr, zi), (jr, ji), (dr, di)) in BESSEL_REF {
            let (j, jp) = bessel_j(c(nr, ni), c(zr, zi)).unwrap();
            assert!(rel(j, c(jr, ji)) < 1e-12, "J nu={nr}+{ni}i: {:e}", rel(j, c(jr, ji)));
            assert!(rel(jp, c(dr, di)) < 1e-12, "J' nu={nr}+{ni}i: {:e}", rel(jp, c(dr, di)));
        }
    }

    #[test]
    fn bessel_half_order_closed_form() {
        let (j, _) = bessel_j(c(0.5, 0.0), c(2.0, 0.0)).unwrap();
        let closed = (2.0 / (PI * 2.0)).sqrt() * 2f64.sin();
        assert!((j.re - closed).abs() < 1e-14);
    }

    #[test]
    fn bessel_at_origin_cases() {
        assert_eq!(bessel_j(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), (c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!(bessel_j(c(1.0, 0.0), c(0.0, 0.0)).unwrap(), (c(0.0, 0.0), c(0.5, 0.0)));
        assert_eq!(bessel_j(c(2.5, 1.0), c(0.0, 0.0)).unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));
        assert!(matches!(
            bessel_j(c(-0.5, 0.0), c(0.0, 0.0)),
            Err(SpecfunError::Branch(_))
        ));
    }

    #[test]
    fn negative_integer_order() {
        let z = c(2.3, -0.7);
        let (j3, d3) = bessel_j(c(3.0, 0.0), z).unwrap();
        let (jm3, dm3) = bessel_j(c(-3.0, 0.0), z).unwrap();
        assert!(rel(jm3, -j3) < 1e-15 && rel(dm3, -d3) < 1e-15);
    }

    #[test]
    fn wronskian_at_documented_point() {
        let nu = c(0.0, 0.4);
        let z = c(3.0, 1.0);
        let (a, ap) = bessel_j(nu, z).unwrap();
        let (b, bp) = bessel_j(-nu, z).unwrap();
        let w = a * bp - b * ap + 2.0 * (nu * PI).sin() / (PI * z);
        assert!(w.norm() < 1e-10);
    }

    #[test]
    fn radius_is_enforced() {
        let cfg = BesselConfig {
            radius: 10.0,
            ..BesselConfig::default()
        };
        assert!(matches!(
            bessel_j_with(c(0.0, 0.0), c(11.0, 0.0), &cfg),
            Err(SpecfunError::OutOfRange(_))
        ));
    }
}
