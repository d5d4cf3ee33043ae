//! Dispatch of a validated RunConfig to the library.

use std::fs::File;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use ptspectra::diagnostics::{det_s_limit, det_s_scan, invisibility_scan, DiagnosticOptions, Direction};
use ptspectra::models::{PotentialModel, Scatterer};
use ptspectra::numerov::{SampleOptions, SampledModel, SampledPotential};
use ptspectra::oracle::oracle_check;
use ptspectra::rootfind::{contour_grid, spectrum_in, EigenRecord, KZero, Polyline, Window};
use ptspectra::sweep::{find_critical_ss, full_sweep, split_ss};
use ptspectra::tables::reproduce_table;
use ptspectra::Complex64;

use crate::config::{CommandKind, RunConfig};
use crate::output::{Cell, Table};

/// What a command produced. `failure` is set when a checked expectation
/// did not hold; the artifact is still written.
pub struct Artifact {
    pub json: Value,
    pub table: Table,
    pub failure: Option<String>,
}

pub const DEFAULT_RESOLUTION: [usize; 2] = [201, 101];
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_DET_SAMPLES: usize = 200;
pub const DEFAULT_INVISIBILITY_SAMPLES: usize = 2000;
pub const LIMIT_OFFSETS: [f64; 3] = [1e-3, 1e-4, 1e-5];

enum Target {
    Model(PotentialModel),
    Sampled(SampledModel),
}

impl Target {
    fn scatterer(&self) -> &dyn Scatterer {
        match self {
            Target::Model(m) => m,
            Target::Sampled(s) => s,
        }
    }

    fn default_window(&self) -> Window {
        match self {
            Target::Model(m) => Window::default_for(m),
            Target::Sampled(s) => {
                let v_max = s.potential().values().iter().map(|v| v.norm()).fold(0.0, f64::max);
                Window::default_for_strength(v_max)
            }
        }
    }

    fn describe(&self, cfg: &RunConfig) -> Value {
        match self {
            Target::Model(m) => json!(m),
            Target::Sampled(_) => json!({ "potential_csv": cfg.potential_csv }),
        }
    }
}

fn target(cfg: &RunConfig) -> Result<Target> {
    if let Some(path) = &cfg.potential_csv {
        let file = File::open(path).with_context(|| format!("opening potential table {}", path.display()))?;
        let v = SampledPotential::from_csv_reader(file).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Target::Sampled(SampledModel::new(v)));
    }
    Ok(Target::Model(model(cfg)?))
}

fn model(cfg: &RunConfig) -> Result<PotentialModel> {
    cfg.model.context("config field `model` is required")?.build()
}

fn c(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn zero_json(z: &KZero) -> Value {
    json!({ "k": c(z.k), "residual": z.residual, "iterations": z.iterations })
}

fn record_json(r: &EigenRecord) -> Value {
    json!({
        "kind": r.kind.label(),
        "e": c(r.e),
        "zero": zero_json(&r.zero),
        "partner": r.partner.as_ref().map(zero_json),
    })
}

fn root_row(z: &KZero, kind: &str) -> Vec<Cell> {
    let e = z.k * z.k;
    vec![
        z.k.re.into(),
        z.k.im.into(),
        e.re.into(),
        e.im.into(),
        kind.into(),
        z.residual.into(),
    ]
}

pub fn run(cfg: &RunConfig) -> Result<Artifact> {
    let opts = &cfg.tolerances;
    let cmd = cfg.command;
    let mut failure = None;
    let (body, table) = match cmd {
        CommandKind::Spectrum => {
            let t = target(cfg)?;
            let window = match &cfg.window {
                Some(w) => w.build()?,
                None => t.default_window(),
            };
            let spec = spectrum_in(t.scatterer(), &window, &opts.roots)?;
            let mut table = Table::new(&["k1", "k2", "ReE", "ImE", "kind", "residual"]);
            for r in &spec.records {
                table.push(root_row(&r.zero, r.kind.label()));
                if let Some(p) = &r.partner {
                    table.push(root_row(p, r.kind.label()));
                }
            }
            let body = json!({
                "model": t.describe(cfg),
                "window": window,
                "eigenvalues": spec.records.iter().map(record_json).collect::<Vec<_>>(),
                "warnings": spec.warnings,
            });
            (body, table)
        }
        CommandKind::Contours => {
            let t = target(cfg)?;
            let window = match &cfg.window {
                Some(w) => w.build()?,
                None => t.default_window(),
            };
            let [n1, n2] = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
            let set = contour_grid(t.scatterer(), &window, n1, n2)?;
            let mut table = Table::new(&["curve_type", "segment_id", "k1", "k2"]);
            for lines in [&set.re, &set.im] {
                for (id, line) in lines.iter().enumerate() {
                    for &(k1, k2) in &line.points {
                        table.push(vec![line.field.label().into(), id.into(), k1.into(), k2.into()]);
                    }
                }
            }
            let curves = |lines: &[Polyline]| -> Vec<Value> { lines.iter().map(|l| json!(l.points)).collect() };
            let body = json!({
                "model": t.describe(cfg),
                "window": window,
                "resolution": [n1, n2],
                "reF": curves(&set.re),
                "imF": curves(&set.im),
                "intersections": set.intersections.iter().map(|&z| c(z)).collect::<Vec<_>>(),
                "skipped_cells": set.skipped_cells,
            });
            (body, table)
        }
        CommandKind::Sweep => {
            let m = model(cfg)?;
            let lo = cfg.v2_min.unwrap_or(0.0);
            let hi = cfg.v2_max.context("config field `v2_max` is required")?;
            let r = full_sweep(&m, lo, hi, cfg.v2_step, opts)?;
            let mut table = Table::new(&["V2", "trajectory_id", "ReE", "ImE"]);
            for tr in &r.trajectories {
                for p in &tr.points {
                    table.push(vec![p.v2.into(), tr.id.into(), p.e.re.into(), p.e.im.into()]);
                }
            }
            (json!(r), table)
        }
        CommandKind::SsFind => {
            let m = model(cfg)?;
            let lo = cfg.v2_min.unwrap_or(0.0);
            let hi = cfg.v2_max.context("config field `v2_max` is required")?;
            let crits = find_critical_ss(&m, lo, hi, cfg.m_max, &opts.roots)?;
            let mut table = Table::new(&["m", "V_star", "E_star", "k_star"]);
            for cr in &crits {
                table.push(vec![cr.m.into(), cr.v_star.into(), cr.e_star.into(), cr.k_star.into()]);
            }
            (json!({ "model": m, "v2_range": [lo, hi], "criticals": crits }), table)
        }
        CommandKind::SplitSs => {
            let m = model(cfg)?;
            let v_star = cfg.v_star.context("config field `v_star` is required")?;
            let eps = cfg.epsilon.unwrap_or(DEFAULT_EPSILON);
            let r = split_ss(&m, v_star, eps, &opts.roots)?;
            let mut table = Table::new(&["stage", "V2", "kind", "ReE", "ImE"]);
            for (stage, v, spec) in [
                ("before", r.v_star - eps, &r.before),
                ("at", r.v_star, &r.at),
                ("after", r.v_star + eps, &r.after),
            ] {
                for rec in &spec.records {
                    table.push(vec![
                        stage.into(),
                        v.into(),
                        rec.kind.label().into(),
                        rec.e.re.into(),
                        rec.e.im.into(),
                    ]);
                }
            }
            if !r.passed() {
                failure = Some(format!("split-ss: {}", r.failures.join("; ")));
            }
            (json!({ "model": m, "passed": r.passed(), "report": r }), table)
        }
        CommandKind::Dets => {
            let t = target(cfg)?;
            let (lo, hi) = energy_range(cfg)?;
            let n = cfg.samples.unwrap_or(DEFAULT_DET_SAMPLES);
            let scan = det_s_scan(t.scatterer(), lo, hi, n, &DiagnosticOptions::default())?;
            let mut table = Table::new(&["E", "T", "RL", "RR", "|detS|", "flags"]);
            for p in &scan {
                match &p.report {
                    Some(r) => {
                        let a = &r.amplitudes;
                        let f = r.flags;
                        let flags: Vec<&str> = [
                            (f.near_ss, "near_ss"),
                            (f.invisible_left, "invisible_left"),
                            (f.invisible_right, "invisible_right"),
                            (f.invisible_both, "invisible_both"),
                        ]
                        .iter()
                        .filter(|(on, _)| *on)
                        .map(|&(_, name)| name)
                        .collect();
                        table.push(vec![
                            p.e.into(),
                            a.transmittance().into(),
                            a.reflectance_left().into(),
                            a.reflectance_right().into(),
                            r.det_s.norm().into(),
                            flags.join("|").into(),
                        ]);
                    }
                    None => table.push(vec![
                        p.e.into(),
                        f64::NAN.into(),
                        f64::NAN.into(),
                        f64::NAN.into(),
                        f64::NAN.into(),
                        "error".into(),
                    ]),
                }
            }
            let limit = match cfg.e_star {
                Some(e) => Some(det_s_limit(t.scatterer(), e, &LIMIT_OFFSETS)?),
                None => None,
            };
            let body = json!({ "model": t.describe(cfg), "scan": scan, "limit": limit });
            (body, table)
        }
        CommandKind::Invisibility => {
            let t = target(cfg)?;
            let (lo, hi) = energy_range(cfg)?;
            let n = cfg.samples.unwrap_or(DEFAULT_INVISIBILITY_SAMPLES);
            let tol = cfg
                .invisibility_tol
                .unwrap_or(DiagnosticOptions::default().invisibility_tol);
            let found = invisibility_scan(t.scatterer(), lo, hi, n, tol)?;
            let mut table = Table::new(&["E", "direction", "RL", "RR"]);
            for v in &found {
                let dir = match v.direction {
                    Direction::Left => "left",
                    Direction::Right => "right",
                    Direction::Both => "both",
                };
                table.push(vec![
                    v.e.into(),
                    dir.into(),
                    v.reflectance_left.into(),
                    v.reflectance_right.into(),
                ]);
            }
            (json!({ "model": t.describe(cfg), "points": found }), table)
        }
        CommandKind::OracleCheck => {
            let m = model(cfg)?;
            let points = cfg
                .k
                .iter()
                .map(|&k| oracle_check(&m, k, &SampleOptions::default()))
                .collect::<ptspectra::Result<Vec<_>>>()?;
            let mut table = Table::new(&[
                "k",
                "rel_error",
                "tol",
                "step_halving",
                "domain_doubling",
                "agrees",
                "stable",
            ]);
            let mut bad = Vec::new();
            for p in &points {
                table.push(vec![
                    p.k.into(),
                    p.rel_error.into(),
                    p.tol.into(),
                    p.step_halving.into(),
                    p.domain_doubling.into(),
                    p.agrees().into(),
                    p.stable().into(),
                ]);
                if !(p.agrees() && p.stable()) {
                    bad.push(p.k.to_string());
                }
            }
            if !bad.is_empty() {
                failure = Some(format!(
                    "oracle-check: disagreement or instability at k = {}",
                    bad.join(", ")
                ));
            }
            (json!({ "model": m, "points": points }), table)
        }
        CommandKind::ReproduceTable => {
            let id = cfg.table.context("config field `table` is required")?;
            let r = reproduce_table(id, &opts.roots);
            let mut table = Table::new(&[
                "row",
                "V1",
                "V2",
                "quantity",
                "listed_re",
                "listed_im",
                "computed_re",
                "computed_im",
                "pass",
                "note",
            ]);
            let opt = |z: Option<Complex64>, im: bool| -> Cell {
                match z {
                    Some(z) if im => z.im.into(),
                    Some(z) => z.re.into(),
                    None => "".into(),
                }
            };
            for row in &r.rows {
                let note = row.error.clone().or(row.erratum.map(str::to_owned)).unwrap_or_default();
                for cell in &row.cells {
                    table.push(vec![
                        row.row.into(),
                        row.v1.into(),
                        row.v2.into(),
                        cell.quantity.clone().into(),
                        opt(cell.listed, false),
                        opt(cell.listed, true),
                        opt(cell.computed, false),
                        opt(cell.computed, true),
                        cell.pass.into(),
                        note.clone().into(),
                    ]);
                }
            }
            if !r.passed() {
                failure = Some(format!(
                    "reproduce-table {id}: {} of {} cells deviate beyond tolerance",
                    r.failed_cells(),
                    r.total_cells()
                ));
            }
            (json!({ "passed": r.passed(), "report": r }), table)
        }
    };
    let json = json!({ "command": cmd.name(), "result": body });
    Ok(Artifact { json, table, failure })
}

fn energy_range(cfg: &RunConfig) -> Result<(f64, f64)> {
    Ok((
        cfg.e_min.context("config field `e_min` is required")?,
        cfg.e_max.context("config field `e_max` is required")?,
    ))
}
