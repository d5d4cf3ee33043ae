//! Numerov integration of ψ'' = (V(x) − k²)ψ on a uniform grid, used as an
//! independent scattering oracle and as the engine for sampled potentials.
//!
//! The outgoing seed and the left-end decomposition both use the discrete
//! plane wave of the scheme (wavenumber k_h with cos(k_h h) equal to the
//! Numerov free-space ratio), so free propagation is exact on the grid and
//! the extracted amplitudes do not drift with the truncation length.

use num_complex::Complex64;
use serde::Serialize;
use std::io::Read;

use crate::error::{Error, Result};
use crate::models::{Discontinuity, ModelKind, PotentialModel, ScatterAmplitudes, Scatterer};

/// Jump in V and V' at a grid node (right limit minus left limit).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jump {
    pub index: usize,
    pub dv: Complex64,
    pub dv_slope: Complex64,
}

/// Potential on a uniform grid x_j = x_min + j·step. Values at jump nodes
/// hold the average of the one-sided limits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledPotential {
    x_min: f64,
    step: f64,
    values: Vec<Complex64>,
    jumps: Vec<Jump>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WaveSolution {
    /// Coefficient of e^{ikx} at the left end.
    pub a: Complex64,
    /// Coefficient of e^{−ikx} at the left end.
    pub b: Complex64,
    /// Outgoing amplitude on the right (the seed).
    pub c: Complex64,
    /// Relative least-squares residual of the plane-wave fit.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumerovOptions {
    /// Largest |V| tolerated at either grid end.
    pub truncation_tol: f64,
    /// Largest relative residual of the plane-wave fit.
    pub extraction_tol: f64,
    pub rescale_every: usize,
    pub fit_points: usize,
}

impl Default for NumerovOptions {
    fn default() -> Self {
        NumerovOptions {
            truncation_tol: 1e-6,
            extraction_tol: 1e-6,
            rescale_every: 500,
            fit_points: 10,
        }
    }
}

/// Largest potential envelope (eV) left at the ends of a default grid for
/// the smooth models; strong reflection amplifies anything above this.
pub const TAIL_FLOOR: f64 = 1e-10;

/// Grid choice when sampling an analytic model; `None` picks the default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SampleOptions {
    pub half_width: Option<f64>,
    pub step: Option<f64>,
    /// Gaussian width of the sampled delta pair, as a fraction of `a`.
    pub delta_width: Option<f64>,
}

impl SampleOptions {
    /// Default (half-width, step) for sampling `model`.
    pub fn defaults_for(model: &PotentialModel) -> (f64, f64) {
        Self::default().resolve(model)
    }

    /// (half-width, step) for `model` with the unset fields of `opts` filled in.
    pub fn defaults_for_opts(model: &PotentialModel, opts: &SampleOptions) -> (f64, f64) {
        opts.resolve(model)
    }

    fn delta_sigma(&self, model: &PotentialModel) -> f64 {
        model.a * self.delta_width.unwrap_or(crate::models::delta::REGULARIZATION_WIDTH)
    }

    fn resolve(&self, model: &PotentialModel) -> (f64, f64) {
        let strength = model.v1.abs().max(model.v2.abs());
        let (l, h) = match model.kind {
            // 25 Å, extended until the tail envelope is below TAIL_FLOOR
            ModelKind::Scarf2 => (25f64.max((2.0 * strength / TAIL_FLOOR).ln()), 0.005),
            ModelKind::Exponential => (25f64.max(0.5 * model.a * (strength / TAIL_FLOOR).ln()), 0.005),
            ModelKind::SquareWell => (model.a + 10.0, 0.005),
            ModelKind::DeltaPair => (model.a + 10.0, self.delta_sigma(model) / 10.0),
        };
        (self.half_width.unwrap_or(l), self.step.unwrap_or(h))
    }
}

impl SampledPotential {
    pub fn new(x_min: f64, step: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && x_min.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "step",
                reason: format!("need a finite positive step, got {step}"),
            });
        }
        if values.len() < 32 {
            return Err(Error::InvalidParameter {
                field: "values",
                reason: format!("need at least 32 samples, got {}", values.len()),
            });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParameter {
                field: "values",
                reason: "non-finite potential sample".into(),
            });
        }
        Ok(SampledPotential {
            x_min,
            step,
            values,
            jumps: Vec::new(),
        })
    }

    /// Samples `f` on a grid symmetric about x = 0.
    pub fn from_fn<F: Fn(f64) -> Complex64>(half_width: f64, step: f64, f: F) -> Result<Self> {
        let n_half = (half_width / step).round() as usize;
        let values = (0..=2 * n_half).map(|j| f((j as f64 - n_half as f64) * step)).collect();
        Self::new(-(n_half as f64) * step, step, values)
    }

    /// Samples an analytic model. Steps are shrunk so that every
    /// discontinuity of the model falls on a grid node.
    pub fn from_model(model: &PotentialModel, opts: &SampleOptions) -> Result<Self> {
        let (half_width, mut step) = opts.resolve(model);
        let disc = model.discontinuities();
        if model.kind == ModelKind::SquareWell {
            step = model.a / (model.a / step).ceil();
        }
        let mut sampled = if model.kind == ModelKind::DeltaPair {
            let sigma = opts.delta_sigma(model);
            let sign = if model.mirrored { -1.0 } else { 1.0 };
            Self::from_fn(half_width, step, |x| {
                crate::models::delta::regularized(model.v1, model.v2, model.a, sigma, sign * x)
            })?
        } else {
            Self::from_fn(half_width, step, |x| model.potential_at(x))?
        };
        for d in disc {
            sampled = sampled.with_discontinuity(&d)?;
        }
        Ok(sampled)
    }

    /// Records a discontinuity at an existing grid node and stores the
    /// average of the one-sided limits there.
    pub fn with_discontinuity(mut self, d: &Discontinuity) -> Result<Self> {
        let pos = (d.x - self.x_min) / self.step;
        let index = pos.round();
        if (pos - index).abs() > 1e-6 || index < 1.0 || index as usize >= self.values.len() - 1 {
            return Err(Error::InvalidParameter {
                field: "discontinuity",
                reason: format!("x = {} is not an interior grid node", d.x),
            });
        }
        let index = index as usize;
        self.values[index] = (d.left + d.right) * 0.5;
        self.jumps.retain(|j| j.index != index);
        self.jumps.push(Jump {
            index,
            dv: d.right - d.left,
            dv_slope: d.slope_jump,
        });
        self.jumps.sort_by_key(|j| j.index);
        Ok(self)
    }

    /// Reads `x, reV, imV` rows (header optional) on a uniform grid.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Table(e.to_string()))?;
            if rec.len() != 3 {
                return Err(Error::Table(format!(
                    "row {}: expected 3 columns (x, reV, imV), found {}",
                    line + 1,
                    rec.len()
                )));
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(|s| s.parse::<f64>()).collect();
            match parsed {
                Ok(v) => {
                    xs.push(v[0]);
                    vs.push(Complex64::new(v[1], v[2]));
                }
                Err(_) if line == 0 => continue,
                Err(e) => return Err(Error::Table(format!("row {}: {e}", line + 1))),
            }
        }
        if xs.len() < 32 {
            return Err(Error::Table(format!("need at least 32 rows, got {}", xs.len())));
        }
        let step = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (j, &x) in xs.iter().enumerate() {
            let expect = xs[0] + j as f64 * step;
            if (x - expect).abs() > 1e-6 * step.abs() {
                return Err(Error::Table(format!("row {}: grid is not uniform at x = {x}", j + 1)));
            }
        }
        Self::new(xs[0], step, vs)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_at(self.values.len() - 1)
    }

    pub fn x_at(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.step
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// V(−x) on the mirrored grid.
    pub fn reflected(&self) -> Self {
        let n = self.values.len();
        let mut values = self.values.clone();
        values.reverse();
        let mut jumps: Vec<Jump> = self
            .jumps
            .iter()
            .map(|j| Jump {
                index: n - 1 - j.index,
                dv: -j.dv,
                dv_slope: j.dv_slope,
            })
            .collect();
        jumps.sort_by_key(|j| j.index);
        SampledPotential {
            x_min: -self.x_max(),
            step: self.step,
            values,
            jumps,
        }
    }

    /// Whether V(−x) = V(x)* holds on the grid to `tol`.
    pub fn is_pt_symmetric(&self, tol: f64) -> bool {
        if (self.x_min + self.x_max()).abs() > 1e-9 * self.step {
            return false;
        }
        let n = self.values.len();
        (0..n).all(|j| (self.values[n - 1 - j] - self.values[j].conj()).norm() <= tol)
    }

    fn check_decay(&self, tol: f64) -> Result<()> {
        for (j, v) in [
            (0, self.values[0]),
            (self.values.len() - 1, self.values[self.values.len() - 1]),
        ] {
            if v.norm() > tol {
                return Err(Error::Decay {
                    x: self.x_at(j),
                    value: v.norm(),
                });
            }
        }
        Ok(())
    }

    fn value_at(&self, x: f64) -> Complex64 {
        let pos = (x - self.x_min) / self.step;
        if pos <= 0.0 {
            return self.values[0];
        }
        let j = pos.floor() as usize;
        if j + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        let w = pos - j as f64;
        self.values[j] * (1.0 - w) + self.values[j + 1] * w
    }
}

/// Wavenumber of the discrete free wave: sin(k_h h/2) = (hk/2)/√(1 + h²k²/12).
pub fn discrete_wavenumber(k: Complex64, h: f64) -> Complex64 {
    let hk = k * h;
    let arg = hk / 2.0 / (1.0 + hk * hk / 12.0).sqrt();
    small_asin(arg) * 2.0 / h
}

// The log form of the library asin loses digits near zero, which is where
// every usable step lives; use the Maclaurin series there.
fn small_asin(x: Complex64) -> Complex64 {
    if x.norm() > 0.1 {
        return x.asin();
    }
    const C: [f64; 8] = [
        1.0,
        1.0 / 6.0,
        3.0 / 40.0,
        5.0 / 112.0,
        35.0 / 1152.0,
        63.0 / 2816.0,
        231.0 / 13312.0,
        143.0 / 10240.0,
    ];
    let x2 = x * x;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in C.iter().rev() {
        acc = acc * x2 + c;
    }
    acc * x
}

fn check_step(step: f64, k: Complex64) -> Result<()> {
    let kn = k.norm();
    if kn > 0.0 && step > 0.02 * 2.0 * std::f64::consts::PI / kn {
        return Err(Error::StepTooCoarse { step, k });
    }
    Ok(())
}

/// Integrates from the right end leftward with a unit outgoing wave and
/// decomposes the solution at the left end.
pub fn solve_wave(v: &SampledPotential, k: Complex64, opts: &NumerovOptions) -> Result<WaveSolution> {
    if !(k.re.is_finite() && k.im.is_finite()) || k == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(format!("numerov needs finite nonzero k, got {k}")));
    }
    let h = v.step;
    check_step(h, k)?;
    v.check_decay(opts.truncation_tol)?;
    let n = v.values.len();
    let kh = discrete_wavenumber(k, h);
    let i = Complex64::i();
    let k2 = k * k;
    let h2 = h * h;
    let g = |j: usize| 1.0 - h2 * (v.values[j] - k2) / 12.0;

    // ψ_true = exp(log_scale)·ψ, starting from e^{ik_h x} normalized at x_{n−1}
    let mut log_scale = i * kh * v.x_at(n - 1);
    let mut psi_next = Complex64::new(1.0, 0.0);
    let mut psi = (-i * kh * h).exp();
    let mut out = vec![Complex64::new(0.0, 0.0); opts.fit_points.max(2)];
    let fit_n = out.len();
    if fit_n + 2 > n {
        return Err(Error::InvalidParameter {
            field: "fit_points",
            reason: "grid shorter than the extraction window".into(),
        });
    }
    // Relations centred next to a jump node see the one-sided limit of V
    // there: the right limit from the centre above, the left from below.
    let jump_at = |j: usize| v.jumps.iter().find(|jp| jp.index == j);
    let g_side = |j: usize, side: f64| match jump_at(j) {
        Some(jp) => 1.0 - h2 * (v.values[j] + side * 0.5 * jp.dv - k2) / 12.0,
        None => g(j),
    };
    let mut since_rescale = 0usize;
    for j in (1..=n - 2).rev() {
        let f_j = v.values[j] - k2;
        let g_next = g_side(j + 1, -1.0);
        let g_prev = g_side(j - 1, 1.0);
        let mut num = 2.0 * psi * (1.0 + 5.0 * h2 * f_j / 12.0) - psi_next * g_next;
        let mut den = g_prev;
        if let Some(jp) = jump_at(j) {
            let df = jp.dv;
            num += h2 * df / 24.0 * psi_next - h2 * h2 * df * df / 48.0 * psi + h2 * h / 12.0 * jp.dv_slope * psi;
            den += h2 * df / 24.0;
        }
        let psi_prev = num / den;
        psi_next = psi;
        psi = psi_prev;
        if j - 1 < fit_n {
            out[j - 1] = psi;
        }
        since_rescale += 1;
        if since_rescale >= opts.rescale_every {
            since_rescale = 0;
            let scale = psi.norm().max(psi_next.norm());
            if !(scale.is_finite()) || scale == 0.0 {
                return Err(Error::Overflow(v.x_at(j)));
            }
            psi /= scale;
            psi_next /= scale;
            log_scale += scale.ln();
            // samples already stored in the fit window share the old scale
            let stored_from = j.saturating_sub(1);
            for s in out.iter_mut().skip(stored_from.min(fit_n)) {
                *s /= scale;
            }
        }
    }
    if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Overflow(v.x_min));
    }

    // least squares for ψ_j ≈ A' u_j + B' v_j, u_j = e^{ik_h (x_j − x_0)}
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut rhs = [Complex64::new(0.0, 0.0); 2];
    let basis = |j: usize| {
        let ph = (i * kh * (j as f64 * h)).exp();
        (ph, 1.0 / ph)
    };
    for (j, &y) in out.iter().enumerate() {
        let (u, w) = basis(j);
        m[0][0] += u.conj() * u;
        m[0][1] += u.conj() * w;
        m[1][0] += w.conj() * u;
        m[1][1] += w.conj() * w;
        rhs[0] += u.conj() * y;
        rhs[1] += w.conj() * y;
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let a_fit = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let b_fit = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
    let mut res2 = 0.0;
    let mut norm2 = 0.0;
    for (j, &y) in out.iter().enumerate() {
        let (u, w) = basis(j);
        res2 += (y - a_fit * u - b_fit * w).norm_sqr();
        norm2 += y.norm_sqr();
    }
    let residual = (res2 / norm2).sqrt();
    if !(residual <= opts.extraction_tol) {
        return Err(Error::Extraction(residual));
    }
    let x0 = v.x_min;
    let a = (log_scale - i * kh * x0).exp() * a_fit;
    let b = (log_scale + i * kh * x0).exp() * b_fit;
    Ok(WaveSolution {
        a,
        b,
        c: Complex64::new(1.0, 0.0),
        residual,
    })
}

/// F(k) = A/C for the sampled potential, at any k ≠ 0 (complex allowed).
pub fn f_of_k_numeric(v: &SampledPotential, k: Complex64) -> Result<Complex64> {
    let w = solve_wave(v, k, &NumerovOptions::default())?;
    Ok(w.a / w.c)
}

/// Amplitudes at real k > 0; r_R comes from integrating the mirrored grid.
pub fn integrate_scattering(v: &SampledPotential, k: f64) -> Result<ScatterAmplitudes> {
    integrate_scattering_with(v, &v.reflected(), k, &NumerovOptions::default())
}

fn integrate_scattering_with(
    v: &SampledPotential,
    mirror: &SampledPotential,
    k: f64,
    opts: &NumerovOptions,
) -> Result<ScatterAmplitudes> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("amplitudes need real k > 0, got {k}")));
    }
    let kc = Complex64::new(k, 0.0);
    let left = solve_wave(v, kc, opts)?;
    let right = solve_wave(mirror, kc, opts)?;
    Ok(ScatterAmplitudes {
        r_left: left.b / left.a,
        r_right: right.b / right.a,
        t: left.c / left.a,
    })
}

/// A sampled potential wrapped as a scatterer (numerical F and amplitudes).
#[derive(Clone, Debug)]
pub struct SampledModel {
    potential: SampledPotential,
    mirror: SampledPotential,
    pub options: NumerovOptions,
}

impl SampledModel {
    pub fn new(potential: SampledPotential) -> Self {
        let mirror = potential.reflected();
        SampledModel {
            potential,
            mirror,
            options: NumerovOptions::default(),
        }
    }

    pub fn from_model(model: &PotentialModel, opts: &SampleOptions) -> Result<Self> {
        Ok(Self::new(SampledPotential::from_model(model, opts)?))
    }

    pub fn potential(&self) -> &SampledPotential {
        &self.potential
    }
}

impl Scatterer for SampledModel {
    fn f_of_k(&self, k: Complex64) -> Result<Complex64> {
        let w = solve_wave(&self.potential, k, &self.options)?;
        Ok(w.a / w.c)
    }

    fn amplitudes(&self, k: f64) -> Result<ScatterAmplitudes> {
        integrate_scattering_with(&self.potential, &self.mirror, k, &self.options)
    }

    fn potential_at(&self, x: f64) -> Complex64 {
        self.potential.value_at(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn free_particle() {
        let v = SampledPotential::from_fn(10.0, 0.01, |_| Complex64::new(0.0, 0.0)).unwrap();
        let amp = integrate_scattering(&v, 1.0).unwrap();
        assert!(amp.r_left.norm() < 1e-10);
        assert!((amp.t.norm() - 1.0).abs() < 1e-12);
        let f = f_of_k_numeric(&v, Complex64::new(0.7, 2.0)).unwrap();
        assert!((f - 1.0).norm() < 1e-10);
    }

    #[test]
    fn discrete_wavenumber_limit() {
        let k = Complex64::new(2.0, 0.5);
        let kh = discrete_wavenumber(k, 1e-4);
        assert!((kh - k).norm() < 1e-12);
        // cos(k_h h) reproduces the free-space Numerov ratio
        let h = 0.05;
        let kh = discrete_wavenumber(k, h);
        let u = h * h * k * k;
        let ratio = (1.0 - 5.0 * u / 12.0) / (1.0 + u / 12.0);
        assert!(((kh * h).cos() - ratio).norm() < 1e-13);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let v = SampledPotential::from_fn(10.0, 0.1, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(
            f_of_k_numeric(&v, Complex64::new(5.0, 0.0)),
            Err(Error::StepTooCoarse { .. })
        ));
    }

    #[test]
    fn undecayed_potential_is_rejected() {
        let v = SampledPotential::from_fn(5.0, 0.01, |x| Complex64::new((-x * x / 20.0).exp(), 0.0)).unwrap();
        assert!(matches!(integrate_scattering(&v, 1.0), Err(Error::Decay { .. })));
    }

    #[test]
    fn matches_square_well_closed_form() {
        let m = PotentialModel::square_well(-5.0, 2.0, 2.0).unwrap();
        let s = SampledModel::from_model(&m, &SampleOptions::default()).unwrap();
        for k in [0.4, 1.3, 2.9] {
            let (a, b) = (m.amplitudes(k).unwrap(), s.amplitudes(k).unwrap());
            assert!(rel(b.t, a.t) < 1e-6, "k={k} {:e}", rel(b.t, a.t));
            assert!(rel(b.r_left, a.r_left) < 1e-6);
            assert!(rel(b.r_right, a.r_right) < 1e-6);
        }
        let k = Complex64::new(0.8, 0.9);
        assert!(rel(s.f_of_k(k).unwrap(), m.f_of_k(k).unwrap()) < 1e-6);
    }

    #[test]
    fn matches_exponential_closed_form() {
        let m = PotentialModel::exponential(-5.0, 3.0, 2.0).unwrap();
        let s = SampledModel::from_model(&m, &SampleOptions::default()).unwrap();
        let (a, b) = (m.amplitudes(1.0).unwrap(), s.amplitudes(1.0).unwrap());
        assert!(rel(b.t, a.t) < 1e-6, "{:e}", rel(b.t, a.t));
        assert!(rel(b.r_left, a.r_left) < 1e-6);
        assert!(rel(b.r_right, a.r_right) < 1e-6);
    }

    #[test]
    fn matches_scarf_closed_form() {
        let m = PotentialModel::scarf2(-5.0, 19.75).unwrap();
        let s = SampledModel::from_model(&m, &SampleOptions::default()).unwrap();
        for k in [0.5, 1.5, 3.0] {
            let (a, b) = (m.amplitudes(k).unwrap(), s.amplitudes(k).unwrap());
            assert!(rel(b.t, a.t) < 1e-6, "k={k} {:e}", rel(b.t, a.t));
            assert!(rel(b.r_left, a.r_left) < 1e-6);
            assert!(rel(b.r_right, a.r_right) < 1e-6);
        }
    }

    #[test]
    fn matches_delta_closed_form() {
        let m = PotentialModel::delta(1.0, 2.0, 1.0).unwrap();
        let s = SampledModel::from_model(&m, &SampleOptions::default()).unwrap();
        for k in [0.5, 1.5, 3.0] {
            let (a, b) = (m.amplitudes(k).unwrap(), s.amplitudes(k).unwrap());
            assert!(rel(b.t, a.t) < 1e-2, "k={k} {:e}", rel(b.t, a.t));
            assert!(rel(b.r_left, a.r_left) < 1e-2);
        }
    }

    #[test]
    fn reflection_roundtrip() {
        let m = PotentialModel::square_well(1.0, 2.0, 1.0).unwrap();
        let v = SampledPotential::from_model(&m, &SampleOptions::default()).unwrap();
        assert_eq!(v.reflected().reflected(), v);
        assert!(v.is_pt_symmetric(1e-15));
        assert_eq!(v.jumps().len(), 3);
    }

    #[test]
    fn csv_roundtrip() {
        let mut text = String::from("x,reV,imV\n");
        for j in 0..=400 {
            let x = -10.0 + 0.05 * j as f64;
            let v = Complex64::new(-(-x * x).exp(), x * (-x * x).exp());
            text.push_str(&format!("{x},{},{}\n", v.re, v.im));
        }
        let v = SampledPotential::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(v.values().len(), 401);
        assert!((v.step() - 0.05).abs() < 1e-12);
        let bad = "0,1,2\n0.1,1\n";
        assert!(SampledPotential::from_csv_reader(bad.as_bytes()).is_err());
    }
}
