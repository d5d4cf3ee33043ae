//! Cross-checks of the analytic amplitudes against Numerov integration of
//! the sampled potential, with the grid-stability bounds of the integrator.

use serde::Serialize;

use crate::error::Result;
use crate::models::{ModelKind, PotentialModel, ScatterAmplitudes, Scatterer};
use crate::numerov::{SampleOptions, SampledModel};

/// Largest change of t allowed when the step is halved.
pub const STEP_HALVING_TOL: f64 = 1e-5;
/// Largest change of t allowed when the domain half-width is doubled.
pub const DOMAIN_DOUBLING_TOL: f64 = 1e-6;

/// Agreement required between analytic and sampled amplitudes. The delta
/// pair is sampled as narrow Gaussians, hence the looser bound.
pub fn agreement_tol(kind: ModelKind) -> f64 {
    match kind {
        ModelKind::DeltaPair => 1e-2,
        _ => 1e-3,
    }
}

/// max over (r_L, r_R, t) of |Δ| relative to the largest analytic amplitude.
pub fn amplitude_error(reference: &ScatterAmplitudes, other: &ScatterAmplitudes) -> f64 {
    let scale = reference
        .r_left
        .norm()
        .max(reference.r_right.norm())
        .max(reference.t.norm());
    let d = (other.r_left - reference.r_left)
        .norm()
        .max((other.r_right - reference.r_right).norm())
        .max((other.t - reference.t).norm());
    d / scale
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OraclePoint {
    pub model: PotentialModel,
    pub k: f64,
    pub analytic: ScatterAmplitudes,
    pub numeric: ScatterAmplitudes,
    pub rel_error: f64,
    pub tol: f64,
    /// Relative change of t under step halving.
    pub step_halving: f64,
    /// Relative change of t under doubling of the half-width.
    pub domain_doubling: f64,
}

impl OraclePoint {
    pub fn agrees(&self) -> bool {
        self.rel_error < self.tol
    }

    pub fn stable(&self) -> bool {
        self.step_halving < STEP_HALVING_TOL && self.domain_doubling < DOMAIN_DOUBLING_TOL
    }
}

/// Compares the model with its sampled version at real k > 0.
///
/// The delta pair is integrated with Gaussian spikes of width σ and σ/2 and
/// the two results are extrapolated to zero width, which removes the O(σ)
/// error of the regularization.
pub fn oracle_check(model: &PotentialModel, k: f64, sample: &SampleOptions) -> Result<OraclePoint> {
    let (l, h) = SampleOptions::defaults_for_opts(model, sample);
    let numeric_at = |half_width: f64, step: f64, width: Option<f64>| -> Result<ScatterAmplitudes> {
        let opts = SampleOptions {
            half_width: Some(half_width),
            step: Some(step),
            delta_width: width,
        };
        SampledModel::from_model(model, &opts)?.amplitudes(k)
    };
    let analytic = model.amplitudes(k)?;
    let base = numeric_at(l, h, sample.delta_width)?;
    let numeric = if model.kind == ModelKind::DeltaPair {
        let w = sample.delta_width.unwrap_or(crate::models::delta::REGULARIZATION_WIDTH);
        let fine = numeric_at(l, 0.5 * h, Some(0.5 * w))?;
        ScatterAmplitudes {
            r_left: fine.r_left * 2.0 - base.r_left,
            r_right: fine.r_right * 2.0 - base.r_right,
            t: fine.t * 2.0 - base.t,
        }
    } else {
        base
    };
    let halved = numeric_at(l, 0.5 * h, sample.delta_width)?;
    let doubled = numeric_at(2.0 * l, h, sample.delta_width)?;
    let rel_t = |x: &ScatterAmplitudes| (x.t - base.t).norm() / base.t.norm();
    Ok(OraclePoint {
        model: *model,
        k,
        analytic,
        numeric,
        rel_error: amplitude_error(&analytic, &numeric),
        tol: agreement_tol(model.kind),
        step_halving: rel_t(&halved),
        domain_doubling: rel_t(&doubled),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_point() {
        let m = PotentialModel::exponential(-5.0, 3.0, 2.0).unwrap();
        let p = oracle_check(&m, 1.0, &SampleOptions::default()).unwrap();
        assert!(p.rel_error < 1e-4, "{p:?}");
        assert!(p.agrees() && p.stable(), "{p:?}");
    }

    #[test]
    fn error_measure_is_scaled() {
        let a = ScatterAmplitudes {
            r_left: num_complex::Complex64::new(0.0, 0.0),
            r_right: num_complex::Complex64::new(0.5, 0.0),
            t: num_complex::Complex64::new(2.0, 0.0),
        };
        let mut b = a;
        b.r_left.re = 0.02;
        assert!((amplitude_error(&a, &b) - 0.01).abs() < 1e-15);
    }
}
