//! `ptspectra`: discrete spectra, spectral singularities and scattering
//! diagnostics of PT-symmetric potentials from the command line.

mod config;
mod output;
mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ptspectra::models::ModelKind;
use ptspectra::tables::TableId;

use config::{CommandKind, Format, Manifest, ModelSpec, RunConfig, Versions, WindowSpec, MANIFEST_VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "ptspectra",
    version,
    about = "Eigenvalues and spectral singularities of PT-symmetric potentials"
)]
struct Cli {
    /// JSON RunConfig or run manifest to execute instead of a subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Result file; stdout when absent.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,

    /// Defaults to the extension of --out (.csv, .txt), else json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Manifest path; defaults to <out>.manifest.json when --out is given.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Worker threads. PTSPEC_JOBS takes precedence when set.
    #[arg(short, long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// scarf2, delta, sqwell or exp.
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    v1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    v2: f64,
    /// Length scale in Å (ignored by scarf2).
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    a: f64,
    /// Tabulated potential with columns x, reV, imV.
    #[arg(long, conflicts_with = "model")]
    potential_csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct WindowArgs {
    #[arg(long, allow_hyphen_values = true, requires_all = ["k1_max", "k2_min", "k2_max"])]
    k1_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k1_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k2_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k2_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    v2_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v2_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct EnergyArgs {
    #[arg(long, allow_hyphen_values = true)]
    e_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    e_max: f64,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classified eigenvalues in a window of the k-plane.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Zero curves of Re F and Im F.
    Contours {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = run::DEFAULT_RESOLUTION[0])]
        n1: usize,
        #[arg(long, default_value_t = run::DEFAULT_RESOLUTION[1])]
        n2: usize,
    },
    /// Eigenvalue trajectories, exceptional points and criticals over V2.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, allow_hyphen_values = true)]
        v2_step: Option<f64>,
    },
    /// Critical strengths at which a spectral singularity appears.
    SsFind {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        range: RangeArgs,
        /// Keep criticals m = 0..=m_max.
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Spectra at V* - ε, V*, V* + ε; exit 2 if the splitting is not clean.
    SplitSs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        v_star: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = run::DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// T, R_L, R_R and |det S| at real energies.
    Dets {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        energies: EnergyArgs,
        /// Also evaluate |det S| at E* ± 1e-3, 1e-4, 1e-5.
        #[arg(long, allow_hyphen_values = true)]
        e_star: Option<f64>,
    },
    /// Energies with T = 1 and vanishing reflection.
    Invisibility {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        energies: EnergyArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Analytic amplitudes against Numerov integration; exit 2 on mismatch.
    OracleCheck {
        #[command(flatten)]
        model: ModelArgs,
        /// Real wavenumbers to check (repeatable).
        #[arg(long, required = true, allow_hyphen_values = true)]
        k: Vec<f64>,
    },
    /// Recompute a reference table; exit 2 if any cell deviates.
    ReproduceTable {
        #[arg(value_parser = parse_table)]
        table: TableId,
    },
}

fn parse_table(s: &str) -> std::result::Result<TableId, String> {
    s.parse().map_err(|e: ptspectra::Error| e.to_string())
}

fn apply_model(cfg: &mut RunConfig, m: ModelArgs) {
    cfg.potential_csv = m.potential_csv;
    cfg.model = m.model.map(|kind| ModelSpec {
        kind,
        v1: m.v1,
        v2: m.v2,
        a: m.a,
    });
}

fn window_spec(w: WindowArgs) -> Option<WindowSpec> {
    Some(WindowSpec {
        k1_min: w.k1_min?,
        k1_max: w.k1_max?,
        k2_min: w.k2_min?,
        k2_max: w.k2_max?,
    })
}

fn config_from(cmd: Cmd) -> RunConfig {
    match cmd {
        Cmd::Spectrum { model, window } => {
            let mut c = RunConfig::new(CommandKind::Spectrum);
            apply_model(&mut c, model);
            c.window = window_spec(window);
            c
        }
        Cmd::Contours { model, window, n1, n2 } => {
            let mut c = RunConfig::new(CommandKind::Contours);
            apply_model(&mut c, model);
            c.window = window_spec(window);
            c.resolution = Some([n1, n2]);
            c
        }
        Cmd::Sweep { model, range, v2_step } => {
            let mut c = RunConfig::new(CommandKind::Sweep);
            apply_model(&mut c, model);
            c.v2_min = range.v2_min;
            c.v2_max = range.v2_max;
            c.v2_step = v2_step;
            c
        }
        Cmd::SsFind { model, range, m_max } => {
            let mut c = RunConfig::new(CommandKind::SsFind);
            apply_model(&mut c, model);
            c.v2_min = range.v2_min;
            c.v2_max = range.v2_max;
            c.m_max = m_max;
            c
        }
        Cmd::SplitSs { model, v_star, epsilon } => {
            let mut c = RunConfig::new(CommandKind::SplitSs);
            apply_model(&mut c, model);
            c.v_star = Some(v_star);
            c.epsilon = Some(epsilon);
            c
        }
        Cmd::Dets {
            model,
            energies,
            e_star,
        } => {
            let mut c = RunConfig::new(CommandKind::Dets);
            apply_model(&mut c, model);
            c.e_min = Some(energies.e_min);
            c.e_max = Some(energies.e_max);
            c.samples = energies.samples;
            c.e_star = e_star;
            c
        }
        Cmd::Invisibility { model, energies, tol } => {
            let mut c = RunConfig::new(CommandKind::Invisibility);
            apply_model(&mut c, model);
            c.e_min = Some(energies.e_min);
            c.e_max = Some(energies.e_max);
            c.samples = energies.samples;
            c.invisibility_tol = tol;
            c
        }
        Cmd::OracleCheck { model, k } => {
            let mut c = RunConfig::new(CommandKind::OracleCheck);
            apply_model(&mut c, model);
            c.k = k;
            c
        }
        Cmd::ReproduceTable { table } => {
            let mut c = RunConfig::new(CommandKind::ReproduceTable);
            c.table = Some(table);
            c
        }
    }
}

fn jobs(flag: Option<usize>) -> Result<usize> {
    let n = match std::env::var("PTSPEC_JOBS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .with_context(|| format!("PTSPEC_JOBS must be a positive integer, got `{s}`"))?,
        _ => match flag {
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        bail!("--jobs must be positive");
    }
    Ok(n)
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn manifest_path(explicit: Option<PathBuf>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.or_else(|| {
        out.map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

fn execute(cli: Cli) -> Result<u8> {
    let start = Instant::now();
    let mut cfg = match (cli.config, cli.command) {
        (Some(_), Some(_)) => bail!("give either --config or a subcommand, not both"),
        (Some(path), None) => config::load(&path)?,
        (None, Some(cmd)) => config_from(cmd),
        (None, None) => bail!("no subcommand given; see --help"),
    };
    if cli.out.is_some() {
        cfg.output = cli.out;
    }
    if cli.format.is_some() {
        cfg.format = cli.format;
    }
    cfg.validate()?;
    let jobs = jobs(cli.jobs)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .context("starting worker pool")?;

    let artifact = run::run(&cfg)?;
    let bytes = match cfg.format() {
        Format::Json => output::to_json(&artifact.json)?,
        Format::Csv => artifact.table.to_csv()?,
        Format::Text => artifact.table.to_text().into_bytes(),
    };
    write_to(cfg.output.as_deref(), &bytes)?;
    let code = if let Some(msg) = &artifact.failure {
        eprintln!("check failed: {msg}");
        2
    } else {
        0
    };
    if let Some(path) = manifest_path(cli.manifest, cfg.output.as_deref()) {
        let manifest = Manifest {
            manifest_version: MANIFEST_VERSION,
            config: cfg,
            versions: Versions {
                ptspectra: ptspectra::VERSION.into(),
                cli: env!("CARGO_PKG_VERSION").into(),
            },
            jobs,
            elapsed_seconds: start.elapsed().as_secs_f64(),
            exit_code: code,
        };
        write_to(Some(&path), &output::to_json(&serde_json::to_value(&manifest)?)?)?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
