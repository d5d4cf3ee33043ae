//! Reference eigenvalue tables for the four model families and their
//! recomputation.
//!
//! Each row fixes (V1, V2) and its spectrum is computed there. Rows that
//! carry a critical energy E* are also solved for the exact critical
//! strength near the listed V2, which is compared against it. Values are
//! compared cell by cell at 5e-3 absolute, or 1e-3 relative for magnitudes
//! above 10.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelKind, PotentialModel};
use crate::rootfind::{spectrum, EigenKind, EigenRecord, RootOptions, Warning};
use crate::sweep::refine_critical;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    I,
    II,
    III,
    IV,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::I, TableId::II, TableId::III, TableId::IV];

    pub fn model_kind(self) -> ModelKind {
        match self {
            TableId::I => ModelKind::Scarf2,
            TableId::II => ModelKind::DeltaPair,
            TableId::III => ModelKind::SquareWell,
            TableId::IV => ModelKind::Exponential,
        }
    }

    pub fn length(self) -> f64 {
        match self {
            TableId::I | TableId::II => 1.0,
            TableId::III | TableId::IV => 2.0,
        }
    }

    pub fn rows(self) -> &'static [TableRow] {
        match self {
            TableId::I => TABLE_I,
            TableId::II => TABLE_II,
            TableId::III => TABLE_III,
            TableId::IV => TABLE_IV,
        }
    }

    pub fn model(self, v1: f64, v2: f64) -> Result<PotentialModel> {
        PotentialModel::new(self.model_kind(), v1, v2, self.length())
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableId::I => "I",
            TableId::II => "II",
            TableId::III => "III",
            TableId::IV => "IV",
        })
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(TableId::I),
            "II" | "2" => Ok(TableId::II),
            "III" | "3" => Ok(TableId::III),
            "IV" | "4" => Ok(TableId::IV),
            _ => Err(Error::InvalidParameter {
                field: "table",
                reason: format!("expected one of I, II, III, IV, got `{s}`"),
            }),
        }
    }
}

/// One listed configuration. `levels` holds real eigenvalues as (E, 0) and
/// conjugate pairs by their upper member (Re E, Im E > 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub row: u32,
    pub v1: f64,
    pub v2: f64,
    pub e_star: Option<f64>,
    pub levels: &'static [(f64, f64)],
    /// Rows whose complex levels are allowed to exceed E* slightly.
    pub rough_bound: bool,
    /// Correction applied to the listed inputs, if any.
    pub correction: Option<&'static str>,
    /// Known disagreement between the listed and recomputed values.
    pub erratum: Option<&'static str>,
}

const fn row(row: u32, v1: f64, v2: f64, e_star: Option<f64>, levels: &'static [(f64, f64)]) -> TableRow {
    TableRow {
        row,
        v1,
        v2,
        e_star,
        levels,
        rough_bound: false,
        correction: None,
        erratum: None,
    }
}

impl TableRow {
    const fn erratum(mut self, note: &'static str) -> Self {
        self.erratum = Some(note);
        self
    }

    const fn corrected(mut self, note: &'static str) -> Self {
        self.correction = Some(note);
        self
    }

    const fn rough(mut self) -> Self {
        self.rough_bound = true;
        self
    }
}

static TABLE_I: &[TableRow] = &[
    row(1, 0.0, 0.75, Some(0.125), &[]),
    row(2, 0.0, 8.75, Some(2.125), &[(1.125, 2.915)]),
    row(3, 0.0, 24.75, Some(6.125), &[(5.125, 4.949), (2.125, 9.892)])
        .corrected("listed V2 = 24.25 contradicts the critical-strength formula and the listed E* = 6.125; 24.75 used")
        .erratum("closed form gives 2.125 ± 9.899i for the second pair"),
    row(
        4,
        0.0,
        48.75,
        Some(12.125),
        &[(11.125, 6.964), (8.125, 13.982), (3.125, 20.892)],
    )
    .erratum("closed form gives 8.125 ± 13.928i; 13.982 looks like a digit transposition"),
    row(
        5,
        0.0,
        48.85,
        None,
        &[(12.150, 0.024), (11.142, 6.996), (8.135, 13.967), (3.128, 20.939)],
    ),
    row(6, 5.0, 5.75, Some(2.625), &[]),
    row(7, 5.0, 13.75, Some(4.625), &[(3.625, 4.301)]),
    row(8, 5.0, 29.75, Some(8.625), &[(7.625, 5.873), (4.625, 11.747)]),
    row(
        9,
        5.0,
        53.75,
        Some(14.625),
        &[(13.625, 7.648), (10.625, 15.297), (5.625, 22.945)],
    ),
    row(
        10,
        5.0,
        53.85,
        None,
        &[(14.650, 0.027), (13.642, 7.682), (10.635, 15.337), (5.628, 22.992)],
    ),
    row(
        11,
        -5.0,
        5.24,
        None,
        &[(-1.367, 0.0), (-1.143, 0.0), (-0.028, 0.0), (-0.004, 0.0)],
    ),
    row(12, -5.0, 5.50, None, &[(-1.235, 0.569), (0.043, 0.069)]),
    row(13, -5.0, 19.75, Some(3.625), &[(2.625, 3.002), (-0.375, 7.615)])
        .erratum("closed form gives 2.625 ± 3.808i for the first pair"),
    row(
        14,
        -5.0,
        43.75,
        Some(9.625),
        &[(8.625, 6.204), (5.625, 12.409), (0.625, 18.614)],
    ),
    row(
        15,
        -5.0,
        75.75,
        Some(17.625),
        &[(16.625, 8.396), (13.625, 16.792), (8.625, 25.189), (1.625, 33.585)],
    ),
    row(
        16,
        -5.0,
        115.75,
        Some(27.625),
        &[
            (2.625, 52.559),
            (11.625, 42.047),
            (18.625, 31.535),
            (23.625, 21.023),
            (26.625, 10.511),
        ],
    ),
    row(
        17,
        -5.0,
        115.85,
        None,
        &[
            (27.65, 0.023),
            (26.645, 10.540),
            (23.640, 21.057),
            (18.636, 31.573),
            (11.636, 42.090),
            (2.627, 52.607),
        ],
    ),
];

static TABLE_II: &[TableRow] = &[
    row(1, 0.0, 1.110, Some(0.616), &[]),
    row(2, 0.0, 3.332, Some(5.552), &[(1.921, 0.663)]),
    row(3, 0.0, 5.553, Some(15.421), &[(7.550, 1.920), (2.415, 0.291)]),
    row(
        4,
        0.0,
        7.775,
        Some(30.226),
        &[(17.222, 2.965), (9.424, 1.455), (2.457, 0.139)],
    ),
    row(
        5,
        0.0,
        7.875,
        None,
        &[(30.251, 0.137), (17.365, 3.063), (9.460, 1.412), (2.457, 0.135)],
    ),
    row(6, 5.0, 5.394, Some(2.048), &[]),
    row(7, 5.0, 6.449, Some(8.291), &[(2.116, 0.016)])
        .erratum("the critical energy at V1 = 5 near V2 = 6.449 solves to 8.2960"),
    row(8, 5.0, 7.932, Some(18.958), &[(8.606, 0.136), (2.194, 0.0274)]),
    row(
        9,
        5.0,
        9.668,
        Some(34.238),
        &[(19.591, 0.397), (8.908, 0.207), (2.261, 0.031)],
    ),
    row(
        10,
        5.0,
        9.768,
        None,
        &[(34.284, 0.048), (19.627, 0.413), (8.923, 0.208), (2.264, 0.031)],
    ),
    row(11, -5.0, 0.0, None, &[(-6.163, 0.0), (-6.332, 0.0)]),
    row(12, -5.0, 2.0, None, &[(5.250, 5.000)])
        .erratum("the pair at V2 = 2 lies at negative real energy; the listed real part has the wrong sign"),
    row(13, -5.0, 5.571, Some(3.020), &[(1.509, 13.929)]),
    row(14, -5.0, 6.979, Some(11.855), &[(5.928, 17.447), (2.874, 0.037)]),
    row(
        15,
        -5.0,
        8.788,
        Some(26.118),
        &[(11.273, 0.275), (13.058, 21.971), (2.748, 0.046)],
    ),
    row(
        16,
        -5.0,
        10.776,
        Some(45.560),
        &[(25.085, 0.744), (22.781, 26.939), (10.811, 0.316), (2.663, 0.041)],
    ),
    row(
        17,
        -5.0,
        10.876,
        None,
        &[
            (45.510, 0.075),
            (25.032, 0.764),
            (23.323, 27.190),
            (10.793, 0.315),
            (2.659, 0.041),
        ],
    ),
];

static TABLE_III: &[TableRow] = &[
    row(1, 0.0, 0.519, Some(0.284), &[]),
    row(2, 0.0, 3.330, Some(4.674), &[(1.1423, 2.668)])
        .erratum("the second critical at V1 = 0 solves to V* = 3.32685, E* = 4.66179"),
    row(3, 0.0, 6.946, Some(14.172), &[(5.950, 4.244), (1.470, 6.352)]),
    row(
        4,
        0.0,
        11.028,
        Some(28.701),
        &[(15.390, 5.209), (6.642, 8.698), (1.647, 10.464)],
    )
    .erratum("the third pair solves to Im E = 10.494"),
    row(
        5,
        0.0,
        11.128,
        None,
        &[(28.728, 0.139), (15.413, 5.330), (6.654, 8.806), (1.650, 10.595)],
    ),
    row(6, 5.0, 0.915, Some(5.851), &[]),
    row(7, 5.0, 3.685, Some(10.534), &[(6.408, 2.844)])
        .erratum("no critical lies at (3.685, 10.534); the nearest solves to V* = 3.6917, E* = 10.805"),
    row(8, 5.0, 7.259, Some(20.368), &[(11.520, 4.245), (6.593, 6.556)]),
    row(
        9,
        5.0,
        11.289,
        Some(34.845),
        &[(21.124, 5.162), (11.952, 8.731), (6.714, 10.684)],
    ),
    row(
        10,
        5.0,
        11.389,
        None,
        &[(34.864, 0.136), (21.139, 5.284), (11.967, 8.839), (6.717, 10.786)],
    ),
    row(11, -5.0, 2.000, None, &[(-0.083, 0.0), (-0.918, 0.0), (-3.823, 1.601)]),
    row(12, -5.0, 5.900, None, &[(0.621, 3.899), (-3.560, 5.466)]),
    row(13, -5.0, 6.000, Some(8.033), &[(0.646, 3.998), (-3.556, 5.566)]),
    row(
        14,
        -5.0,
        10.383,
        Some(22.578),
        &[(9.732, 5.195), (1.445, 8.429), (-3.381, 9.941)],
    ),
    row(
        15,
        -5.0,
        14.960,
        Some(42.137),
        &[(23.995, 5.826), (10.808, 10.308), (1.947, 13.119), (-3.263, 14.533)],
    ),
    row(
        16,
        -5.0,
        19.738,
        Some(66.662),
        &[
            (43.334, 6.246),
            (25.054, 11.521),
            (11.551, 15.491),
            (2.294, 18.010),
            (-3.179, 19.329),
        ],
    ),
    row(
        17,
        -5.0,
        19.838,
        None,
        &[
            (66.685, 0.137),
            (43.357, 6.372),
            (25.072, 11.638),
            (11.563, 15.598),
            (2.299, 18.112),
            (-3.177, 19.430),
        ],
    ),
];

static TABLE_IV: &[TableRow] = &[
    row(1, 0.0, 1.330, Some(0.225), &[]),
    row(2, 0.0, 14.245, Some(3.400), &[(3.180, 5.606)]),
    row(3, 0.0, 40.250, Some(9.943), &[(10.733, 8.610), (7.760, 21.637)])
        .erratum("the third critical at V1 = 0 solves to V* = 40.2158, E* = 9.9317, with pairs 10.746 ± 8.631i and 7.769 ± 21.670i"),
    row(4, 0.0, 79.253, Some(19.816), &[(21.581, 11.464), (20.199, 27.026), (13.442, 48.951)])
        .erratum("the first pair solves to 21.580 ± 11.646i; 11.464 looks like a digit transposition"),
    row(5, 0.0, 79.353, None, &[(19.487, 0.023), (31.609, 11.681), (20.221, 27.067), (13.455, 49.024)])
        .erratum("recomputed pairs include 19.8486 ± 0.0229i and 21.609 ± 11.681i; the listed 19.487 and 31.609 look like digit slips"),
    row(6, 5.0, 5.534, Some(4.129), &[]),
    row(7, 5.0, 20.470, Some(6.997), &[(7.634, 8.305)]),
    row(8, 5.0, 46.232, Some(13.467), &[(14.028, 10.212), (12.392, 25.488)])
        .erratum("the critical strength solves to 46.932, where the pairs are 14.828 ± 10.212i and 12.392 ± 25.488i; 46.232 and 14.028 look like digit slips"),
    row(9, 5.0, 86.139, Some(23.3298), &[(25.502, 12.769), (24.517, 29.547), (18.154, 53.401)]).rough(),
    row(10, 5.0, 86.239, None, &[(23.362, 0.026), (25.531, 12.807), (24.540, 29.601), (18.168, 53.474)]),
    row(11, -5.0, 3.0, None, &[(-1.2334, 0.0), (-1.554, 0.0)])
        .erratum("the second bound state solves to -1.5880"),
    row(12, -5.0, 3.2, None, &[(-1.390, 0.3611)]),
    row(13, -5.0, 3.381, Some(0.035), &[(-1.370, 0.537)]),
    row(14, -5.0, 32.473, Some(6.441), &[(6.651, 6.796), (3.113, 17.229)]).rough(),
    row(15, -5.0, 71.865, Some(16.326), &[(17.666, 10.449), (15.875, 24.310), (8.720, 44.185)]),
    row(
        16,
        -5.0,
        124.100,
        Some(29.569),
        &[(31.941, 13.782), (31.437, 30.841), (26.837, 52.641), (15.213, 82.867)],
    )
    .rough(),
    row(
        17,
        -5.0,
        124.200,
        None,
        &[(29.601, 0.022), (31.970, 13.814), (31.462, 30.885), (26.856, 52.698), (15.224, 82.943)],
    ),
    row(
        18,
        -60.0,
        10.0,
        None,
        &[
            (-43.25, 0.0),
            (-30.82, 0.0),
            (-20.25, 0.0),
            (-14.95, 0.0),
            (-9.19, 0.0),
            (-6.29, 0.0),
            (-3.16, 0.0),
            (-1.75, 0.0),
            (-0.44, 0.0),
            (-0.065, 0.0),
        ],
    )
    .erratum("the third bound state solves to -20.385"),
    row(
        19,
        -60.0,
        14.0,
        None,
        &[(-39.32, 0.0), (-33.70, 0.0), (-17.64, 1.03), (-7.73, 0.91), (-2.43, 0.52), (-0.20, 0.15)],
    ),
    row(
        20,
        -60.0,
        83.0,
        Some(8.551),
        &[(8.51, 6.75), (5.87, 14.99), (-0.20, 25.17), (-11.235, 38.20), (-30.84, 56.27)],
    )
    .erratum("values are listed to two decimals; the first, second and last pairs solve to 8.518 ± 6.753i, 5.877 ± 14.991i and -30.894 ± 56.274i"),
];

/// Allowed deviation for a listed value.
pub fn tolerance(x: f64) -> f64 {
    if x.abs() > 10.0 {
        1e-3 * x.abs()
    } else {
        5e-3
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub quantity: String,
    pub listed: Option<Complex64>,
    pub computed: Option<Complex64>,
    pub delta: Option<Complex64>,
    pub pass: bool,
}

impl Cell {
    fn compare(quantity: String, listed: Complex64, computed: Complex64) -> Cell {
        let d = computed - listed;
        let pass = d.re.abs() <= tolerance(listed.re) && d.im.abs() <= tolerance(listed.im);
        Cell {
            quantity,
            listed: Some(listed),
            computed: Some(computed),
            delta: Some(d),
            pass,
        }
    }
}

/// Largest real part of the complex levels against E* at a critical row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperBound {
    pub max_re: f64,
    pub e_star: f64,
    pub factor: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub row: u32,
    pub v1: f64,
    pub v2: f64,
    /// Solved critical strength and energy on rows that list E*.
    pub critical: Option<(f64, f64)>,
    pub cells: Vec<Cell>,
    pub upper_bound: Option<UpperBound>,
    pub warnings: Vec<Warning>,
    pub error: Option<String>,
    pub correction: Option<&'static str>,
    pub erratum: Option<&'static str>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.cells.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub table: TableId,
    pub model: ModelKind,
    pub a: f64,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed())
    }

    pub fn failed_cells(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.cells.iter().filter(|c| !c.pass).count() + usize::from(r.error.is_some()))
            .sum()
    }

    pub fn total_cells(&self) -> usize {
        self.rows.iter().map(|r| r.cells.len()).sum()
    }
}

// Greedy nearest matching of listed to computed values of one kind.
fn match_levels(listed: &[(usize, Complex64)], computed: &[Complex64], cells: &mut Vec<(usize, Cell)>) {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (a, &(_, l)) in listed.iter().enumerate() {
        for (b, &c) in computed.iter().enumerate() {
            pairs.push(((l - c).norm(), a, b));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_l = vec![false; listed.len()];
    let mut used_c = vec![false; computed.len()];
    for (_, a, b) in pairs {
        if used_l[a] || used_c[b] {
            continue;
        }
        used_l[a] = true;
        used_c[b] = true;
        let (pos, l) = listed[a];
        cells.push((pos, Cell::compare(format!("E{}", pos + 1), l, computed[b])));
    }
    for (a, &(pos, l)) in listed.iter().enumerate() {
        if !used_l[a] {
            cells.push((
                pos,
                Cell {
                    quantity: format!("E{}", pos + 1),
                    listed: Some(l),
                    computed: None,
                    delta: None,
                    pass: false,
                },
            ));
        }
    }
    for (b, &c) in computed.iter().enumerate() {
        if !used_c[b] {
            cells.push((
                usize::MAX,
                Cell {
                    quantity: "unlisted".into(),
                    listed: None,
                    computed: Some(c),
                    delta: None,
                    pass: false,
                },
            ));
        }
    }
}

fn evaluate_row(table: TableId, r: &TableRow, opts: &RootOptions) -> Result<RowReport> {
    let base = table.model(r.v1, r.v2)?;
    let mut cells = Vec::new();
    let mut critical = None;
    if let Some(e_star) = r.e_star {
        let (k, v) = refine_critical(&base, e_star.sqrt(), r.v2)?;
        critical = Some((v, k * k));
        cells.push(Cell::compare(
            "V*".into(),
            Complex64::new(r.v2, 0.0),
            Complex64::new(v, 0.0),
        ));
        cells.push(Cell::compare(
            "E*".into(),
            Complex64::new(e_star, 0.0),
            Complex64::new(k * k, 0.0),
        ));
    }
    // levels are listed at the rounded strength, so the spectrum is taken
    // there; the singularity itself then sits just off the real axis
    let spec = spectrum(&base, opts)?;
    let mut records: Vec<&EigenRecord> = spec.records.iter().collect();
    if let Some((_, e_star)) = critical {
        let remnant = records
            .iter()
            .enumerate()
            .filter(|(_, rec)| rec.kind != EigenKind::RealBound)
            .map(|(i, rec)| (i, (rec.e - e_star).norm()))
            .filter(|&(_, d)| d <= 0.05 * (1.0 + e_star))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, _)) = remnant {
            records.remove(i);
        }
    }
    let ss: Vec<Complex64> = records
        .iter()
        .filter(|rec| rec.kind == EigenKind::Ss)
        .map(|rec| rec.e)
        .collect();
    for &e in &ss {
        cells.push(Cell {
            quantity: "unlisted SS".into(),
            listed: None,
            computed: Some(e),
            delta: None,
            pass: false,
        });
    }

    let listed_real: Vec<(usize, Complex64)> = r
        .levels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.1 == 0.0)
        .map(|(i, l)| (i, Complex64::new(l.0, 0.0)))
        .collect();
    let listed_pairs: Vec<(usize, Complex64)> = r
        .levels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.1 != 0.0)
        .map(|(i, l)| (i, Complex64::new(l.0, l.1)))
        .collect();
    let of_kind = |kind| -> Vec<Complex64> { records.iter().filter(|rec| rec.kind == kind).map(|rec| rec.e).collect() };
    let real = of_kind(EigenKind::RealBound);
    let pairs = of_kind(EigenKind::Ccpe);
    let mut level_cells = Vec::new();
    match_levels(&listed_real, &real, &mut level_cells);
    match_levels(&listed_pairs, &pairs, &mut level_cells);
    level_cells.sort_by_key(|(pos, _)| *pos);
    cells.extend(level_cells.into_iter().map(|(_, c)| c));

    let upper_bound = match critical {
        Some((_, e_star)) if !pairs.is_empty() => {
            let max_re = pairs.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
            let factor = if r.rough_bound { 1.02 } else { 1.0 };
            Some(UpperBound {
                max_re,
                e_star,
                factor,
                holds: max_re <= factor * e_star + 1e-9,
            })
        }
        _ => None,
    };
    Ok(RowReport {
        row: r.row,
        v1: r.v1,
        v2: r.v2,
        critical,
        cells,
        upper_bound,
        warnings: spec.warnings,
        error: None,
        correction: r.correction,
        erratum: r.erratum,
    })
}

/// Recomputes every row of a table; rows are processed in parallel and a
/// row that fails to evaluate is reported with its error.
pub fn reproduce_table(table: TableId, opts: &RootOptions) -> TableReport {
    let rows = table
        .rows()
        .par_iter()
        .map(|r| {
            evaluate_row(table, r, opts).unwrap_or_else(|e| RowReport {
                row: r.row,
                v1: r.v1,
                v2: r.v2,
                critical: None,
                cells: Vec::new(),
                upper_bound: None,
                warnings: Vec::new(),
                error: Some(e.to_string()),
                correction: r.correction,
                erratum: r.erratum,
            })
        })
        .collect();
    TableReport {
        table,
        model: table.model_kind(),
        a: table.length(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("iii".parse::<TableId>().unwrap(), TableId::III);
        assert_eq!("4".parse::<TableId>().unwrap(), TableId::IV);
        assert!("V".parse::<TableId>().is_err());
    }

    #[test]
    fn row_counts() {
        let n: Vec<usize> = TableId::ALL.iter().map(|t| t.rows().len()).collect();
        assert_eq!(n, vec![17, 17, 17, 20]);
        for t in TableId::ALL {
            for (i, r) in t.rows().iter().enumerate() {
                assert_eq!(r.row as usize, i + 1);
                assert!(r.levels.iter().all(|l| l.1 >= 0.0));
            }
        }
    }

    #[test]
    fn tolerance_switches_to_relative() {
        assert_eq!(tolerance(3.0), 5e-3);
        assert!((tolerance(-40.0) - 0.04).abs() < 1e-15);
    }
}
