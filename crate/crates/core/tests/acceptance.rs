//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p ptspectra --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptspectra::diagnostics::{det_s_limit, det_s_scan, DiagnosticOptions};
use ptspectra::models::{scarf2_closed_spectrum, ModelKind, PotentialModel};
use ptspectra::numerov::SampleOptions;
use ptspectra::oracle::{oracle_check, OraclePoint};
use ptspectra::rootfind::{find_zeros, spectrum, EigenKind, RootOptions, Window};
use ptspectra::specfun::{bessel_j, gamma};
use ptspectra::sweep::{
    find_critical_ss, find_exceptional_points, refine_critical, split_ss, trace_eigenvalues, SweepOptions,
};
use ptspectra::tables::{reproduce_table, TableId};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn table_reproduction() -> Outcome {
    let opts = RootOptions::default();
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for t in TableId::ALL {
        let r = reproduce_table(t, &opts);
        pass &= r.passed();
        parts.push(format!("{t}: {}/{} cells off", r.failed_cells(), r.total_cells()));
        for row in r.rows.iter().filter(|row| !row.passed()) {
            for c in row.cells.iter().filter(|c| !c.pass) {
                println!(
                    "    table {t} row {} {}: listed {:?} computed {:?}",
                    row.row, c.quantity, c.listed, c.computed
                );
            }
            if let Some(e) = &row.error {
                println!("    table {t} row {}: {e}", row.row);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    outcome(pass, format!("{} in {secs:.1} s", parts.join(", ")))
}

fn closed_form_vs_rootfind() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = RootOptions::default();
    let mut bad = Vec::new();
    for i in 0..30 {
        // first half in the exact phase, second half broken
        let (v1, v2) = if i < 15 {
            let v1 = rng.gen_range(-8.0..-1.0);
            (v1, rng.gen_range(0.0..(-v1 + 0.25)))
        } else {
            let v1 = rng.gen_range(-6.0..6.0);
            let lo = (-v1 + 0.25f64).max(0.0);
            (v1, rng.gen_range(lo..lo + 40.0))
        };
        let m = PotentialModel::scarf2(v1, v2).unwrap();
        let w = Window::default_for(&m);
        let found = match spectrum(&m, &opts) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("({v1:.3}, {v2:.3}): {e}"));
                continue;
            }
        };
        let closed: Vec<_> = scarf2_closed_spectrum(v1, v2)
            .into_iter()
            .filter(|r| w.contains(r.zero.k) && r.e.norm() > 1e-6)
            .collect();
        let matched = closed.iter().all(|r| {
            found
                .records
                .iter()
                .any(|g| g.kind == r.kind && (g.e.re - r.e.re).abs() < 1e-3 && (g.e.im - r.e.im).abs() < 1e-3)
        });
        if !matched || found.records.len() != closed.len() {
            bad.push(format!(
                "({v1:.3}, {v2:.3}): {} found vs {} closed",
                found.records.len(),
                closed.len()
            ));
        }
    }
    for b in &bad {
        println!("    {b}");
    }
    outcome(bad.is_empty(), format!("{} of 30 parameter sets disagree", bad.len()))
}

fn oracle_points() -> Vec<Result<OraclePoint, String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut points = Vec::new();
    for kind in ModelKind::ALL {
        let (v2_max, a) = match kind {
            ModelKind::Scarf2 => (50.0, 1.0),
            ModelKind::DeltaPair => (10.0, 1.0),
            ModelKind::SquareWell => (20.0, 2.0),
            ModelKind::Exponential => (50.0, 2.0),
        };
        for _ in 0..20 {
            let v1 = rng.gen_range(-5.0..5.0);
            let v2 = rng.gen_range(0.0..v2_max);
            let k = rng.gen_range(0.3..5.0);
            let m = PotentialModel::new(kind, v1, v2, a).unwrap();
            points.push(oracle_check(&m, k, &SampleOptions::default()).map_err(|e| format!("{m:?} k={k}: {e}")));
        }
    }
    points
}

fn oracle_equivalence(points: &[Result<OraclePoint, String>]) -> Outcome {
    let mut worst = [0.0f64; 4];
    let mut bad = 0;
    for p in points {
        match p {
            Ok(p) => {
                let i = ModelKind::ALL.iter().position(|&k| k == p.model.kind).unwrap();
                worst[i] = worst[i].max(p.rel_error);
                if !p.agrees() {
                    bad += 1;
                    println!(
                        "    {:?} k={}: rel error {:e} (tol {:e})",
                        p.model, p.k, p.rel_error, p.tol
                    );
                }
            }
            Err(e) => {
                bad += 1;
                println!("    {e}");
            }
        }
    }
    let detail = ModelKind::ALL
        .iter()
        .zip(worst)
        .map(|(k, w)| format!("{} max {w:.1e}", k.name()))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(bad == 0, format!("{bad} of {} points off; {detail}", points.len()))
}

fn completeness() -> Outcome {
    let opts = RootOptions::default();
    let mut total = 0;
    let mut bad = Vec::new();
    for t in TableId::ALL {
        for row in t.rows() {
            total += 1;
            let m = t.model(row.v1, row.v2).unwrap();
            match find_zeros(&m, &Window::default_for(&m), &opts) {
                Ok(s) if s.is_complete() => {}
                Ok(s) => bad.push(format!(
                    "table {t} row {}: winding {:?}, located {}",
                    row.row,
                    s.winding,
                    s.zeros.len() + s.below_axis.len()
                )),
                Err(e) => bad.push(format!("table {t} row {}: {e}", row.row)),
            }
        }
    }
    for b in &bad {
        println!("    {b}");
    }
    outcome(
        bad.is_empty(),
        format!("{} of {total} table configurations incomplete", bad.len()),
    )
}

fn conjecture_suite() -> Outcome {
    let opts = SweepOptions::default();
    let mut violations = Vec::new();
    let mut points = 0;
    let mut criticals = 0;
    for (kind, a, v2_max) in [
        (ModelKind::Scarf2, 1.0, 60.0),
        (ModelKind::DeltaPair, 1.0, 10.0),
        (ModelKind::SquareWell, 2.0, 20.0),
    ] {
        for v1 in [-5.0, 0.0, 5.0] {
            let tag = format!("{} V1={v1}", kind.name());
            let base = PotentialModel::new(kind, v1, 0.0, a).unwrap();
            let sweep = match trace_eigenvalues(&base, 0.0, v2_max, Some(v2_max / 39.0), &opts) {
                Ok(s) => s,
                Err(e) => {
                    violations.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            let eps = find_exceptional_points(&sweep, &opts).unwrap_or_default();
            let crits = find_critical_ss(&base, 0.0, v2_max, None, &opts.roots).unwrap_or_default();
            // the grid, plus the criticals where a singularity is present
            let mut samples: Vec<(f64, Vec<EigenKind>)> = sweep
                .samples
                .iter()
                .map(|s| (s.v2, s.records.iter().map(|r| r.kind).collect()))
                .collect();
            for c in &crits {
                criticals += 1;
                let m = base.with_v2(c.v_star).unwrap();
                match spectrum(&m, &opts.roots) {
                    Ok(s) => {
                        let max_re = s
                            .of_kind(EigenKind::Ccpe)
                            .map(|r| r.e.re)
                            .fold(f64::NEG_INFINITY, f64::max);
                        if max_re > 1.02 * c.e_star {
                            violations.push(format!(
                                "{tag}: (d) Re E = {max_re} above E* = {} at V* = {}",
                                c.e_star, c.v_star
                            ));
                        }
                        samples.push((c.v_star, s.records.iter().map(|r| r.kind).collect()));
                    }
                    Err(e) => violations.push(format!("{tag} V*={}: {e}", c.v_star)),
                }
            }
            for (v2, kinds) in &samples {
                points += 1;
                let ss = kinds.iter().filter(|&&k| k == EigenKind::Ss).count();
                if ss > 1 {
                    violations.push(format!("{tag} V2={v2}: (a) {ss} singularities"));
                }
                if ss > 0 && kinds.contains(&EigenKind::RealBound) {
                    violations.push(format!("{tag} V2={v2}: (b) singularity with real levels"));
                }
            }
            let max_ep = eps.iter().map(|e| e.v_ep).fold(f64::NEG_INFINITY, f64::max);
            let min_star = crits.iter().map(|c| c.v_star).fold(f64::INFINITY, f64::min);
            if !eps.is_empty() && !crits.is_empty() && min_star <= max_ep {
                violations.push(format!("{tag}: (c) V* = {min_star} not above V_EP = {max_ep}"));
            }
        }
    }
    for v in &violations {
        println!("    {v}");
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} violations over {points} spectra and {criticals} criticals",
            violations.len()
        ),
    )
}

fn ss_splitting() -> Outcome {
    let opts = RootOptions::default();
    let mut bad = Vec::new();
    let mut n = 0;
    for t in TableId::ALL {
        let rows = t.rows();
        for after in [5u32, 10, 17] {
            n += 1;
            let i = rows.iter().position(|r| r.row == after).unwrap();
            let crit = &rows[i - 1];
            let base = t.model(crit.v1, 0.0).unwrap();
            match split_ss(&base, crit.v2, 0.1, &opts) {
                Ok(r) => {
                    let im_ok = r.born.is_some_and(|e| e.im.abs() < 0.2);
                    if !r.passed() || !im_ok {
                        bad.push(format!("table {t} row {after}: {:?} born {:?}", r.failures, r.born));
                    }
                }
                Err(e) => bad.push(format!("table {t} row {after}: {e}")),
            }
        }
    }
    for b in &bad {
        println!("    {b}");
    }
    outcome(bad.is_empty(), format!("{} of {n} splittings fail", bad.len()))
}

fn det_s_checks() -> Outcome {
    let diag = DiagnosticOptions::default();
    let mut worst = 0.0f64;
    let mut counts = Vec::new();
    let mut bad = Vec::new();
    let mut worst_limit = 0.0f64;
    for t in TableId::ALL {
        let rows = t.rows();
        let per_row = 240usize.div_ceil(rows.len());
        let mut sampled = 0;
        for row in rows {
            let m = t.model(row.v1, row.v2).unwrap();
            let top = row.levels.iter().map(|l| l.0).chain(row.e_star).fold(5.0f64, f64::max);
            let scan = match det_s_scan(&m, 0.05, 2.0 * top, per_row, &diag) {
                Ok(s) => s,
                Err(e) => {
                    bad.push(format!("table {t} row {}: {e}", row.row));
                    continue;
                }
            };
            for p in scan {
                let Some(r) = p.report else {
                    bad.push(format!("table {t} row {} E={}: {:?}", row.row, p.e, p.error));
                    continue;
                };
                let near_star = row.e_star.is_some_and(|e| (p.e - e).abs() < 0.01 * e.max(1.0));
                if r.flags.near_ss || near_star {
                    continue;
                }
                sampled += 1;
                worst = worst.max((r.det_s.norm() - 1.0).abs());
            }
            if let Some(e_star) = row.e_star.filter(|&e| e > 1e-2) {
                let base = t.model(row.v1, 0.0).unwrap();
                let (k, v) = match refine_critical(&base, e_star.sqrt(), row.v2) {
                    Ok(x) => x,
                    Err(e) => {
                        bad.push(format!("table {t} row {}: {e}", row.row));
                        continue;
                    }
                };
                let m = base.with_v2(v).unwrap();
                match det_s_limit(&m, k * k, &[1e-3, 1e-4, 1e-5]) {
                    Ok(rows) => {
                        for p in rows {
                            worst_limit = worst_limit.max(p.deviation());
                        }
                    }
                    Err(e) => bad.push(format!("table {t} row {} limit: {e}", row.row)),
                }
            }
        }
        counts.push(sampled);
        if sampled < 200 {
            bad.push(format!("table {t}: only {sampled} energies away from singularities"));
        }
    }
    for b in &bad {
        println!("    {b}");
    }
    let pass = bad.is_empty() && worst < 1e-6 && worst_limit < 1e-3;
    outcome(
        pass,
        format!("max ||det S|-1| = {worst:.1e} over {counts:?} energies; limit max dev {worst_limit:.1e}"),
    )
}

fn ep_cascade() -> Outcome {
    let printed = [12.82, 12.96, 13.17, 13.63, 14.78];
    let base = PotentialModel::exponential(-60.0, 0.0, 2.0).unwrap();
    let opts = SweepOptions::default();
    let eps = trace_eigenvalues(&base, 0.0, 16.0, Some(0.1), &opts).and_then(|r| find_exceptional_points(&r, &opts));
    let eps = match eps {
        Ok(e) => e,
        Err(e) => return outcome(false, e.to_string()),
    };
    let got: Vec<f64> = eps.iter().map(|e| e.v_ep).collect();
    let pass = got.len() == printed.len() && got.iter().zip(printed).all(|(g, p)| (g - p).abs() <= 0.02);
    let shown: Vec<String> = got.iter().map(|v| format!("{v:.4}")).collect();
    outcome(pass, format!("V_EP = [{}] vs {printed:?}", shown.join(", ")))
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut wr, mut rec, mut refl) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..2000 {
        let nu = Complex64::from_polar(rng.gen_range(0.0..5.0), rng.gen_range(0.0..2.0 * PI));
        let z = Complex64::from_polar(rng.gen_range(0.1..20.0), rng.gen_range(-PI..PI));
        let (a, ap) = bessel_j(nu, z).unwrap();
        let (b, bp) = bessel_j(-nu, z).unwrap();
        let s = 2.0 * (nu * PI).sin() / (PI * z);
        let scale = (a * bp).norm() + (b * ap).norm() + s.norm();
        wr = wr.max((a * bp - b * ap + s).norm() / scale);
        let (jm, _) = bessel_j(nu - 1.0, z).unwrap();
        let (jp, _) = bessel_j(nu + 1.0, z).unwrap();
        let rhs = 2.0 * nu / z * a;
        rec = rec.max((jm + jp - rhs).norm() / (jm.norm() + jp.norm() + rhs.norm()));

        let g = Complex64::new(rng.gen_range(-8.0..8.0), rng.gen_range(-6.0..6.0));
        if (g - g.re.round()).norm() > 1e-3 {
            let exact = PI / (PI * g).sin();
            refl = refl.max((gamma(g).unwrap() * gamma(1.0 - g).unwrap() - exact).norm() / exact.norm());
        }
    }
    let pass = wr < 1e-10 && rec < 1e-9 && refl < 1e-12;
    outcome(
        pass,
        format!("Wronskian {wr:.1e}, recurrence {rec:.1e}, reflection {refl:.1e}"),
    )
}

fn numerics_hygiene(points: &[Result<OraclePoint, String>]) -> Outcome {
    let ok: Vec<&OraclePoint> = points.iter().filter_map(|p| p.as_ref().ok()).collect();
    let halving = ok.iter().map(|p| p.step_halving).fold(0.0, f64::max);
    let doubling = ok.iter().map(|p| p.domain_doubling).fold(0.0, f64::max);
    for p in ok.iter().filter(|p| !p.stable()) {
        println!(
            "    {:?} k={}: halving {:e} doubling {:e}",
            p.model, p.k, p.step_halving, p.domain_doubling
        );
    }
    let pass = ok.len() == points.len() && ok.iter().all(|p| p.stable());
    outcome(
        pass,
        format!(
            "{} points, step halving max {halving:.1e}, domain doubling max {doubling:.1e}",
            ok.len()
        ),
    )
}

fn main() -> ExitCode {
    let oracle = oracle_points();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("table reproduction", Box::new(table_reproduction)),
        ("closed form vs root finder", Box::new(closed_form_vs_rootfind)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&oracle))),
        ("argument-principle completeness", Box::new(completeness)),
        ("conjecture properties", Box::new(conjecture_suite)),
        ("singularity splitting", Box::new(ss_splitting)),
        ("det S unimodularity and limit", Box::new(det_s_checks)),
        ("exceptional-point cascade", Box::new(ep_cascade)),
        ("special-function identities", Box::new(special_functions)),
        ("numerov stability", Box::new(|| numerics_hygiene(&oracle))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{mark} {:>2} {name}: {} [{:.1} s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
