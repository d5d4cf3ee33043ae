use num_complex::Complex64;
use proptest::prelude::*;
use ptspectra::specfun::{bessel_j, gamma, ln_gamma};
use std::f64::consts::PI;

fn order() -> impl Strategy<Value = Complex64> {
    (0.0f64..5.0, 0.0f64..(2.0 * PI)).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

fn argument() -> impl Strategy<Value = Complex64> {
    (0.1f64..20.0, -3.0f64..3.0).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn wronskian(nu in order(), z in argument()) {
        let (a, ap) = bessel_j(nu, z).unwrap();
        let (b, bp) = bessel_j(-nu, z).unwrap();
        let s = 2.0 * (nu * PI).sin() / (PI * z);
        let scale = (a * bp).norm() + (b * ap).norm() + s.norm();
        let w = a * bp - b * ap + s;
        prop_assert!(w.norm() <= 1e-10 * scale, "nu={nu} z={z} resid={:e}", w.norm() / scale);
    }

    #[test]
    fn recurrence(nu in order(), z in argument()) {
        let (jm, _) = bessel_j(nu - 1.0, z).unwrap();
        let (j, _) = bessel_j(nu, z).unwrap();
        let (jp, _) = bessel_j(nu + 1.0, z).unwrap();
        let rhs = 2.0 * nu / z * j;
        let scale = jm.norm() + jp.norm() + rhs.norm();
        let r = jm + jp - rhs;
        prop_assert!(r.norm() <= 1e-9 * scale, "nu={nu} z={z} resid={:e}", r.norm() / scale);
    }

    #[test]
    fn conjugation_is_bit_exact(nu in order(), z in argument()) {
        let (j, jp) = bessel_j(nu, z).unwrap();
        let (jc, jpc) = bessel_j(nu.conj(), z.conj()).unwrap();
        prop_assert_eq!(jc, j.conj());
        prop_assert_eq!(jpc, jp.conj());
    }

    #[test]
    fn gamma_reflection(re in -8.0f64..8.0, im in -6.0f64..6.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "z={z}");
    }

    #[test]
    fn ln_gamma_recurrence(re in -10.0f64..40.0, im in -30.0f64..30.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        // lnΓ(z+1) = lnΓ(z) + ln z, up to a multiple of 2πi
        let d = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap() - z.ln();
        let wraps = (d.im / (2.0 * PI)).round();
        let resid = d - Complex64::new(0.0, 2.0 * PI * wraps);
        prop_assert!(resid.norm() < 1e-11, "z={z} resid={:e}", resid.norm());
    }
}
