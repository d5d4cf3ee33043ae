//! Run configuration: built from command-line flags or read from JSON.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ptspectra::models::{ModelKind, PotentialModel};
use ptspectra::rootfind::Window;
use ptspectra::sweep::SweepOptions;
use ptspectra::tables::TableId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Contours,
    Sweep,
    SsFind,
    SplitSs,
    Dets,
    Invisibility,
    OracleCheck,
    ReproduceTable,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Contours => "contours",
            CommandKind::Sweep => "sweep",
            CommandKind::SsFind => "ss-find",
            CommandKind::SplitSs => "split-ss",
            CommandKind::Dets => "dets",
            CommandKind::Invisibility => "invisibility",
            CommandKind::OracleCheck => "oracle-check",
            CommandKind::ReproduceTable => "reproduce-table",
        }
    }

    /// Commands that can work on a tabulated potential.
    fn accepts_samples(self) -> bool {
        matches!(
            self,
            CommandKind::Spectrum | CommandKind::Contours | CommandKind::Dets | CommandKind::Invisibility
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    /// Aligned table with 6 significant digits.
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    #[serde(default)]
    pub v1: f64,
    #[serde(default)]
    pub v2: f64,
    #[serde(default = "unit_length")]
    pub a: f64,
}

fn unit_length() -> f64 {
    1.0
}

impl ModelSpec {
    pub fn build(&self) -> Result<PotentialModel> {
        Ok(PotentialModel::new(self.kind, self.v1, self.v2, self.a)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub k1_min: f64,
    pub k1_max: f64,
    pub k2_min: f64,
    pub k2_max: f64,
}

impl WindowSpec {
    pub fn build(&self) -> Result<Window> {
        Ok(Window::new(self.k1_min, self.k1_max, self.k2_min, self.k2_max)?)
    }
}

/// Everything a run depends on. Serialized verbatim into the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    /// Tabulated potential with columns x, reV, imV on a uniform grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
    /// Contour grid points along k₁ and k₂.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Singular energy for the det S limit sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invisibility_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableId>,
    #[serde(default)]
    pub tolerances: SweepOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            model: None,
            potential_csv: None,
            window: None,
            resolution: None,
            v2_min: None,
            v2_max: None,
            v2_step: None,
            m_max: None,
            v_star: None,
            epsilon: None,
            e_min: None,
            e_max: None,
            samples: None,
            e_star: None,
            invisibility_tol: None,
            k: Vec::new(),
            table: None,
            tolerances: SweepOptions::default(),
            output: None,
            format: None,
        }
    }

    /// Output format: explicit, else from the output extension, else JSON.
    pub fn format(&self) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        match self
            .output
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some("csv") => Format::Csv,
            Some("txt") => Format::Text,
            _ => Format::Json,
        }
    }

    /// Checks that every field the command needs is present and sane.
    /// Errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let finite = |field: &str, v: Option<f64>| -> Result<()> {
            match v {
                Some(x) if !x.is_finite() => bail!("config field `{field}` must be finite, got {x}"),
                _ => Ok(()),
            }
        };
        if let Some(m) = &self.model {
            finite("model.v1", Some(m.v1))?;
            finite("model.v2", Some(m.v2))?;
            finite("model.a", Some(m.a))?;
            m.build().context("config field `model`")?;
        }
        if let Some(w) = &self.window {
            w.build().context("config field `window`")?;
        }
        for (field, v) in [
            ("v2_min", self.v2_min),
            ("v2_max", self.v2_max),
            ("v2_step", self.v2_step),
            ("v_star", self.v_star),
            ("epsilon", self.epsilon),
            ("e_min", self.e_min),
            ("e_max", self.e_max),
            ("e_star", self.e_star),
            ("invisibility_tol", self.invisibility_tol),
        ] {
            finite(field, v)?;
        }
        for &k in &self.k {
            finite("k", Some(k))?;
        }

        let cmd = self.command;
        match (&self.model, &self.potential_csv) {
            (Some(_), Some(_)) => bail!("config fields `model` and `potential_csv` are mutually exclusive"),
            (None, Some(_)) if !cmd.accepts_samples() => {
                bail!("config field `potential_csv` is not supported by `{}`", cmd.name())
            }
            (None, None) if cmd != CommandKind::ReproduceTable => {
                bail!("config field `model` is required by `{}`", cmd.name())
            }
            _ => {}
        }
        let need = |field: &str, v: Option<f64>| -> Result<f64> {
            v.with_context(|| format!("config field `{field}` is required by `{}`", cmd.name()))
        };
        match cmd {
            CommandKind::Spectrum => {}
            CommandKind::Contours => {
                if let Some([n1, n2]) = self.resolution {
                    if n1 < 16 || n2 < 16 {
                        bail!("config field `resolution` needs at least 16 x 16 points, got {n1} x {n2}");
                    }
                }
            }
            CommandKind::Sweep | CommandKind::SsFind => {
                let hi = need("v2_max", self.v2_max)?;
                let lo = self.v2_min.unwrap_or(0.0);
                if hi <= lo {
                    bail!("config field `v2_max` must exceed v2_min = {lo}, got {hi}");
                }
                if cmd == CommandKind::SsFind && lo < 0.0 {
                    bail!("config field `v2_min` must be non-negative, got {lo}");
                }
                if let Some(h) = self.v2_step {
                    if h <= 0.0 {
                        bail!("config field `v2_step` must be positive, got {h}");
                    }
                }
            }
            CommandKind::SplitSs => {
                need("v_star", self.v_star)?;
                if let Some(e) = self.epsilon {
                    if e <= 0.0 {
                        bail!("config field `epsilon` must be positive, got {e}");
                    }
                }
            }
            CommandKind::Dets | CommandKind::Invisibility => {
                let lo = need("e_min", self.e_min)?;
                let hi = need("e_max", self.e_max)?;
                if lo <= 0.0 || hi <= lo {
                    bail!("config fields `e_min`, `e_max` need 0 < e_min < e_max, got [{lo}, {hi}]");
                }
                if self.samples == Some(0) {
                    bail!("config field `samples` must be positive");
                }
                if let Some(e) = self.e_star {
                    if e <= 0.0 {
                        bail!("config field `e_star` must be positive, got {e}");
                    }
                }
            }
            CommandKind::OracleCheck => {
                if self.k.is_empty() {
                    bail!("config field `k` is required by `oracle-check`");
                }
                if let Some(k) = self.k.iter().find(|&&k| k <= 0.0) {
                    bail!("config field `k` must hold positive wavenumbers, got {k}");
                }
            }
            CommandKind::ReproduceTable => {
                if self.table.is_none() {
                    bail!("config field `table` is required by `reproduce-table`");
                }
            }
        }
        Ok(())
    }
}

/// Run manifest: the config plus what is needed to audit the run.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub manifest_version: u32,
    pub config: RunConfig,
    pub versions: Versions,
    pub jobs: usize,
    pub elapsed_seconds: f64,
    pub exit_code: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Versions {
    pub ptspectra: String,
    pub cli: String,
}

pub const MANIFEST_VERSION: u32 = 1;

/// Reads a JSON file holding either a RunConfig or a run manifest.
pub fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    let is_manifest = value.get("manifest_version").is_some();
    let config = if is_manifest {
        serde_json::from_value::<Manifest>(value)
            .with_context(|| format!("invalid manifest {}", path.display()))?
            .config
    } else {
        serde_json::from_value::<RunConfig>(value).with_context(|| format!("invalid config {}", path.display()))?
    };
    config.validate()?;
    Ok(config)
}
