//! Experiment configuration files.

use std::path::{Path, PathBuf};

use bcclab::construct::{assign_protection_classes, uniform_classes};
use bcclab::degree_dist::ExponentConvention;
use bcclab::montecarlo::{SimConfig, StopRule};
use bcclab::secrecy::check_targets;
use bcclab::{
    alist, build_zigzag_random, BuildOptions, ClassAssignment, DegreePolynomial, EnsembleSpec, LdpcCode, NodeKind,
    Perspective, Placement, ProtectionClass, SnrPoint,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Prefix of every output file.
    pub name: String,
    pub scheme: SchemeConfig,
    pub snr_db: SnrGrid,
    #[serde(default)]
    pub stop: StopRule,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_l_max")]
    pub l_max: u32,
    pub seed: u64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_chunk_frames")]
    pub chunk_frames: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

fn default_delta() -> f64 {
    1e-4
}

fn default_eta() -> f64 {
    0.1
}

fn default_l_max() -> u32 {
    100_000
}

fn default_max_iterations() -> usize {
    bcclab::codec::DEFAULT_MAX_ITERATIONS
}

fn default_chunk_frames() -> u64 {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeConfig {
    /// One UEP code; PC1 carries the public bits.
    Uep { code: CodeConfig, pc1_fraction: f64 },
    /// Two codes of equal length carrying the public and secret bits.
    TwoCodes { public: CodeConfig, secret: CodeConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub n: usize,
    pub rate: f64,
    pub variable: PolynomialConfig,
    /// Check distribution; the concentrated one when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<PolynomialConfig>,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub min_girth: u32,
    /// Use this alist instead of constructing; a `.sidecar.json` next to it
    /// supplies the class map when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alist: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolynomialConfig {
    /// `{"text": "0.8815 x^2 + 0.1185 x", "convention": "edge_exponent", "perspective": "edge"}`
    Text {
        text: String,
        convention: ExponentConvention,
        perspective: Perspective,
    },
    /// `{"perspective": "node", "coefficients": [[2, 0.5], [3, 0.5]]}`
    Pairs {
        perspective: Perspective,
        coefficients: Vec<(u32, f64)>,
    },
}

impl PolynomialConfig {
    fn to_node(&self, kind: NodeKind) -> bcclab::Result<DegreePolynomial> {
        let poly = match self {
            PolynomialConfig::Text {
                text,
                convention,
                perspective,
            } => DegreePolynomial::parse(text, *convention, *perspective, kind)?,
            PolynomialConfig::Pairs {
                perspective,
                coefficients,
            } => DegreePolynomial::from_rounded(*perspective, kind, coefficients.iter().copied())?.0,
        };
        match poly.perspective() {
            Perspective::Node => Ok(poly),
            Perspective::Edge => poly.to_node(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnrGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl SnrGrid {
    pub fn points(&self) -> Result<Vec<SnrPoint>, String> {
        let dbs = match self {
            SnrGrid::List(v) => v.clone(),
            SnrGrid::Range { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    return Err(format!("bad SNR range {start}..{stop} step {step}"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                // rounded to micro-dB so decimal steps give clean grid values
                (0..count).map(|i| ((start + i as f64 * step) * 1e6).round() / 1e6).collect()
            }
        };
        dbs.into_iter()
            .map(|d| SnrPoint::from_db(d).map_err(|e| e.to_string()))
            .collect()
    }
}

/// A code of the scheme with its role in the frame.
pub struct BuiltCode {
    pub role: &'static str,
    pub code: LdpcCode,
    pub spec: Option<EnsembleSpec>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Ok(config)
    }

    /// Checks everything that can be checked without constructing codes.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            anyhow::bail!("name must be a non-empty file-name prefix");
        }
        check_targets(self.delta, self.eta)?;
        if self.l_max < 1 {
            anyhow::bail!("l_max must be at least 1");
        }
        self.sim_config(1)?.validate()?;
        match &self.scheme {
            SchemeConfig::Uep { code, pc1_fraction } => {
                if !(*pc1_fraction > 0.0 && *pc1_fraction < 1.0) {
                    anyhow::bail!("pc1_fraction must lie in (0, 1), got {pc1_fraction}");
                }
                code.validate()?;
            }
            SchemeConfig::TwoCodes { public, secret } => {
                public.validate()?;
                secret.validate()?;
                if public.n != secret.n {
                    anyhow::bail!("two-code scheme needs equal lengths, got {} and {}", public.n, secret.n);
                }
            }
        }
        Ok(())
    }

    pub fn sim_config(&self, workers: usize) -> anyhow::Result<SimConfig> {
        let grid = self.snr_db.points().map_err(anyhow::Error::msg)?;
        let mut config = SimConfig::new(grid, self.stop, self.seed);
        config.workers = workers;
        config.max_iterations = self.max_iterations;
        config.chunk_frames = self.chunk_frames;
        Ok(config)
    }

    /// SHA-256 of the configuration, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = None;
        let json = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }

    /// Constructs (or loads) the codes of the scheme. Public code first.
    pub fn build_codes(&self) -> anyhow::Result<Vec<BuiltCode>> {
        match &self.scheme {
            SchemeConfig::Uep { code, pc1_fraction } => Ok(vec![code.build(
                "code",
                ClassAssignment::Uep {
                    pc1_fraction: *pc1_fraction,
                },
                self.seed,
            )?]),
            SchemeConfig::TwoCodes { public, secret } => Ok(vec![
                public.build(
                    "public",
                    ClassAssignment::Uniform {
                        class: ProtectionClass::Pc1,
                    },
                    self.seed,
                )?,
                secret.build(
                    "secret",
                    ClassAssignment::Uniform {
                        class: ProtectionClass::Pc2,
                    },
                    self.seed.wrapping_add(1),
                )?,
            ]),
        }
    }
}

impl CodeConfig {
    fn validate(&self) -> anyhow::Result<()> {
        if let Some(path) = &self.alist {
            if !path.is_file() {
                anyhow::bail!("alist file {} does not exist", path.display());
            }
            return Ok(());
        }
        self.ensemble()?;
        Ok(())
    }

    pub fn ensemble(&self) -> bcclab::Result<EnsembleSpec> {
        let variable = self.variable.to_node(NodeKind::Variable)?;
        match &self.check {
            None => EnsembleSpec::with_concentrated_checks(self.n, self.rate, variable),
            Some(check) => EnsembleSpec::new(self.n, self.rate, variable, check.to_node(NodeKind::Check)?),
        }
    }

    fn build(&self, role: &'static str, classes: ClassAssignment, seed: u64) -> anyhow::Result<BuiltCode> {
        if let Some(path) = &self.alist {
            let text = std::fs::read_to_string(path)?;
            let sidecar_path = sidecar_path(path);
            let code = if sidecar_path.is_file() {
                let sidecar: alist::Sidecar = serde_json::from_str(&std::fs::read_to_string(&sidecar_path)?)?;
                sidecar.attach(&text)?
            } else {
                let code = alist::parse_alist(&text)?;
                let map = match classes {
                    ClassAssignment::Uep { pc1_fraction } => assign_protection_classes(&code, pc1_fraction)?,
                    ClassAssignment::Uniform { class } => uniform_classes(&code, class)?,
                };
                code.with_classes(map)?
            };
            return Ok(BuiltCode { role, code, spec: None });
        }
        let spec = self.ensemble()?;
        let options = BuildOptions {
            placement: self.placement,
            min_girth: self.min_girth,
            ..Default::default()
        };
        let code = build_zigzag_random(&spec, classes, seed, &options)?;
        Ok(BuiltCode {
            role,
            code,
            spec: Some(spec),
        })
    }
}

/// `foo.alist` → `foo.sidecar.json`.
pub fn sidecar_path(alist: &Path) -> PathBuf {
    alist.with_extension("sidecar.json")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ExperimentConfig {
        serde_json::from_str(
            r#"{
                "name": "t",
                "scheme": {"kind": "uep", "pc1_fraction": 0.2, "code": {
                    "n": 64, "rate": 0.5,
                    "variable": {"perspective": "node", "coefficients": [[2, 0.5], [3, 0.4], [8, 0.1]]}
                }},
                "snr_db": {"start": 1.0, "stop": 2.0, "step": 0.5},
                "seed": 3
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_and_range_grid() {
        let c = minimal();
        assert_eq!((c.delta, c.eta, c.max_iterations), (1e-4, 0.1, 100));
        let dbs: Vec<f64> = c.snr_db.points().unwrap().iter().map(|p| p.db()).collect();
        assert_eq!(dbs, vec![1.0, 1.5, 2.0]);
        c.validate().unwrap();
    }

    #[test]
    fn decimal_steps_land_on_grid_values() {
        let g = SnrGrid::Range {
            start: 1.5,
            stop: 6.5,
            step: 0.1,
        };
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 51);
        assert_eq!(pts[7].db(), 2.2);
    }

    #[test]
    fn hash_ignores_output_dir_only() {
        let a = minimal();
        let mut b = a.clone();
        b.output_dir = Some("elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 4;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = minimal();
        c.scheme = match c.scheme {
            SchemeConfig::Uep { code, .. } => SchemeConfig::Uep { code, pc1_fraction: 1.5 },
            other => other,
        };
        assert!(c.validate().is_err());
        let mut c = minimal();
        c.delta = 0.5;
        c.eta = 0.5;
        assert!(c.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"name": "x", "bogus": 1}"#).is_err());
    }

    #[test]
    fn text_polynomials_parse() {
        let p = PolynomialConfig::Text {
            text: "0.8815 x^2 + 0.1185 x".into(),
            convention: ExponentConvention::EdgeExponent,
            perspective: Perspective::Edge,
        };
        let nu = p.to_node(NodeKind::Variable).unwrap();
        assert_eq!(nu.degrees().collect::<Vec<_>>(), vec![2, 3]);
    }
}
