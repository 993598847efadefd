//! Output files and their provenance.

use std::path::{Path, PathBuf};

use bcclab::alist::Sidecar;
use bcclab::montecarlo::SimResult;
use bcclab::secrecy::{FrameLayout, SecurityReport};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const TOOL: &str = "bcclab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
}

impl Provenance {
    pub fn of(config: &ExperimentConfig) -> Self {
        Provenance {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            config_hash: config.hash(),
            seed: config.seed,
        }
    }

    /// `# key=value` header lines for CSV files.
    pub fn csv_header(&self) -> String {
        format!(
            "# tool={} version={}\n# config_hash={}\n# seed={}\n",
            self.tool, self.version, self.config_hash, self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarFile {
    #[serde(flatten)]
    pub sidecar: Sidecar,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvesFile {
    pub provenance: Provenance,
    pub config: ExperimentConfig,
    /// Fingerprints of the simulated codes, public code first.
    pub code_hashes: Vec<String>,
    pub layout: LayoutSummary,
    pub result: SimResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSummary {
    pub scheme: bcclab::Scheme,
    pub n: usize,
    pub k: usize,
    pub k_p: usize,
    pub k_s: usize,
}

impl From<&FrameLayout> for LayoutSummary {
    fn from(l: &FrameLayout) -> Self {
        LayoutSummary {
            scheme: l.scheme,
            n: l.n,
            k: l.k,
            k_p: l.k_p(),
            k_s: l.k_s(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub provenance: Provenance,
    pub code_hashes: Vec<String>,
    pub report: SecurityReport,
}

/// Paths of every file an experiment writes.
pub struct Paths {
    dir: PathBuf,
    name: String,
}

impl Paths {
    pub fn new(dir: PathBuf, name: &str) -> Self {
        Paths {
            dir,
            name: name.to_string(),
        }
    }

    fn file(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}.{suffix}", self.name))
    }

    /// `role` is `code` for a UEP code, `public` or `secret` for two codes.
    pub fn alist(&self, role: &str) -> PathBuf {
        if role == "code" {
            self.file("alist")
        } else {
            self.file(&format!("{role}.alist"))
        }
    }

    pub fn curves_csv(&self) -> PathBuf {
        self.file("curves.csv")
    }

    pub fn curves_json(&self) -> PathBuf {
        self.file("curves.json")
    }

    pub fn checkpoint(&self) -> PathBuf {
        self.file("checkpoint.json")
    }

    pub fn report(&self) -> PathBuf {
        self.file("report.json")
    }

    pub fn plot(&self) -> PathBuf {
        self.file("plot.csv")
    }

    pub fn ensure_dir(&self) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// One summary table row.
pub fn table_row(r: &SecurityReport) -> String {
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.2}"));
    let scheme = match r.scheme {
        bcclab::Scheme::UepSingleCode => "UEP",
        bcclab::Scheme::TwoCodes => "non-UEP",
    };
    format!(
        "{:<8} {:>6} {:>6} {:>7} {:>7} {:>7} {:>6} {}",
        scheme,
        r.n,
        r.l,
        format!("{:.2}", r.beta_p_db),
        opt(r.alpha_s_db),
        opt(r.beta_s_db),
        opt(r.security_gap_db),
        if r.feasible { "feasible" } else { "infeasible" }
    )
}

pub const TABLE_HEADER: &str = "scheme        n      L  beta_p alpha_s  beta_s     Sg";
