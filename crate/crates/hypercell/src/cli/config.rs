//! Experiment configuration: parsing (TOML or JSON), validation diagnostics
//! and the canonical hash that stamps every run.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::directions::{DirectionalDistribution, ProcessParams};
use crate::functionals::SizeFunctional;
use crate::geometry::UnitVector;

use super::RunError;

/// Tagged directional-distribution specification as written in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistSpec {
    Isotropic,
    Discrete { atoms: Vec<AtomSpec> },
    Density { kind: String, amplitude: f64, bound: f64 },
    Mixture { parts: Vec<MixturePartSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub dir: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePartSpec {
    pub weight: f64,
    pub dist: DistSpec,
}

impl DistSpec {
    pub fn build(&self) -> Result<DirectionalDistribution, RunError> {
        match self {
            DistSpec::Isotropic => Ok(DirectionalDistribution::isotropic()),
            DistSpec::Discrete { atoms } => {
                let mut pairs = Vec::with_capacity(atoms.len());
                for a in atoms {
                    let u = UnitVector::new(&a.dir)
                        .map_err(|e| RunError::Config(format!("bad atom direction: {e}")))?;
                    pairs.push((u, a.mass));
                }
                DirectionalDistribution::discrete(pairs).map_err(|e| RunError::Config(e.to_string()))
            }
            DistSpec::Density { kind, amplitude, bound } => {
                if kind != "cos2theta" {
                    return Err(RunError::Config(format!("unknown density kind '{kind}'")));
                }
                DirectionalDistribution::density_cos2theta(*amplitude, *bound)
                    .map_err(|e| RunError::Config(e.to_string()))
            }
            DistSpec::Mixture { parts } => {
                let mut built = Vec::with_capacity(parts.len());
                for p in parts {
                    built.push((p.weight, p.dist.build()?));
                }
                DirectionalDistribution::mixture(built).map_err(|e| RunError::Config(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Complementary,
    SmallCells,
    Speed,
    LimitShape,
    Atoms,
    TailLemma,
    SampleDump,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Complementary => "complementary",
            ExperimentKind::SmallCells => "small_cells",
            ExperimentKind::Speed => "speed",
            ExperimentKind::LimitShape => "limit_shape",
            ExperimentKind::Atoms => "atoms",
            ExperimentKind::TailLemma => "tail_lemma",
            ExperimentKind::SampleDump => "sample_dump",
        }
    }
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub dim: usize,
    pub gamma: f64,
    pub dist: DistSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_grid: Option<Vec<f64>>,
    pub n_samples: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_r: Option<f64>,
    pub output_dir: String,
}

impl ExperimentConfig {
    /// Loads a config file; `.json` parses as JSON, everything else as TOML.
    pub fn load(path: &std::path::Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().map_or(false, |e| e == "json") {
            serde_json::from_str(&text).map_err(|e| RunError::Config(format!("json: {e}")))
        } else {
            toml::from_str(&text).map_err(|e| RunError::Config(format!("toml: {e}")))
        }
    }

    /// Canonical JSON used for hashing and provenance.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hash of the statistical content of the experiment. Worker count and
    /// output location are execution details and do not enter: identical
    /// (config, seed) runs carry the same identity whatever the parallelism.
    pub fn config_hash(&self) -> String {
        let mut normalized = self.clone();
        normalized.workers = 1;
        normalized.output_dir = String::new();
        let mut h = Sha256::new();
        h.update(normalized.canonical_json().as_bytes());
        hex::encode(h.finalize())
    }

    /// Short run identifier derived from the config hash.
    pub fn run_id(&self) -> String {
        self.config_hash()[..12].to_string()
    }

    pub fn sigma_functional(&self) -> Result<SizeFunctional, RunError> {
        let name = self
            .sigma
            .as_deref()
            .ok_or_else(|| RunError::Config("this experiment needs a 'sigma' functional name".into()))?;
        let sigma = SizeFunctional::parse(name)
            .ok_or_else(|| RunError::Config(format!("unknown size functional '{name}'")))?;
        if !sigma.defined_in_dim(self.dim) {
            return Err(RunError::Config(format!(
                "functional '{name}' is not defined in dimension {}",
                self.dim
            )));
        }
        Ok(sigma)
    }

    /// Geometric conditioning grid `a_j = 0.2 * 2^-j / gamma`, `j = 0..=5`,
    /// unless the config overrides it.
    pub fn conditioning_grid(&self) -> Vec<f64> {
        match &self.a_grid {
            Some(g) => g.clone(),
            None => (0..6).map(|j| 0.2 / 2f64.powi(j) / self.gamma).collect(),
        }
    }

    /// Default tail grid for the tangent-simplex phi-content.
    pub fn tail_grid(&self) -> Vec<f64> {
        match &self.a_grid {
            Some(g) => g.clone(),
            None => vec![2.0, 4.0, 8.0, 16.0, 32.0],
        }
    }

    /// Builds and cross-checks the process parameters for this experiment.
    pub fn build_params(&self) -> Result<ProcessParams, RunError> {
        let dist = self.dist.build()?;
        let params = ProcessParams::new(self.gamma, self.dim, dist)
            .map_err(|e| RunError::Config(e.to_string()))?;
        if !(2..=3).contains(&self.dim) {
            return Err(RunError::Config("cell experiments support dim 2 and 3".into()));
        }
        match self.experiment {
            ExperimentKind::Complementary
            | ExperimentKind::SmallCells
            | ExperimentKind::Speed
            | ExperimentKind::LimitShape
            | ExperimentKind::TailLemma => {
                if !params.dist.is_absolutely_continuous() {
                    return Err(RunError::Config(format!(
                        "experiment '{}' needs an absolutely continuous directional distribution",
                        self.experiment.name()
                    )));
                }
            }
            ExperimentKind::Atoms => {
                if self.dim != 2 {
                    return Err(RunError::Config("the atoms experiment runs the planar window sampler".into()));
                }
                if !params.dist.has_atoms() {
                    return Err(RunError::Config("the atoms experiment needs an atom pair".into()));
                }
                let cond = params
                    .dist
                    .supp_condition_atoms(self.dim)
                    .map_err(|e| RunError::Config(e.to_string()))?;
                if !cond {
                    return Err(RunError::Config(
                        "support condition fails: no d+1 support points escape a half sphere \
                         (minimal cells are not simplices, the small-inradius dichotomy is void)"
                            .into(),
                    ));
                }
                if self.window_r.is_none() {
                    return Err(RunError::Config("the atoms experiment needs window_r".into()));
                }
            }
            ExperimentKind::SampleDump => {
                if !params.dist.is_absolutely_continuous() {
                    if self.dim != 2 {
                        return Err(RunError::Config("window dumps are planar".into()));
                    }
                    if self.window_r.is_none() {
                        return Err(RunError::Config(
                            "dumping a non-continuous distribution needs window_r".into(),
                        ));
                    }
                }
            }
        }
        Ok(params)
    }

    /// Structural diagnostics; never fails, reports what it can compute.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let dist = match self.dist.build() {
            Ok(d) => d,
            Err(e) => {
                out.push(format!("ERROR distribution: {e}"));
                return out;
            }
        };
        match dist.validate_support(self.dim) {
            Ok(()) => out.push("support: even, spans the space (not in a great circle)".into()),
            Err(e) => out.push(format!("ERROR support: {e}")),
        }
        match dist.n_min(self.dim) {
            Ok(n) => out.push(format!("n_min = {n}")),
            Err(e) => out.push(format!("ERROR n_min: {e}")),
        }
        out.push(format!("delta_max = {:.12}", dist.delta_max(self.dim)));
        match dist.supp_condition_atoms(self.dim) {
            Ok(c) => out.push(format!("supp_condition_atoms = {c}")),
            Err(e) => out.push(format!("ERROR supp_condition_atoms: {e}")),
        }
        out.push(format!("has_atoms = {}", dist.has_atoms()));
        out.push(format!(
            "absolutely_continuous = {}",
            dist.is_absolutely_continuous()
        ));
        for a in self.conditioning_grid() {
            if a * self.gamma >= 1.0 {
                out.push(format!(
                    "WARN a = {a}: gamma a >= 1, conditioning is not rare; radius truncation disabled for this entry"
                ));
            } else {
                out.push(format!(
                    "a = {a}: expected conditioning probability ~ {:.3e}",
                    1.0 - (-self.gamma * a).exp()
                ));
            }
        }
        if let Some(w) = self.window_r {
            if w * self.gamma < 20.0 {
                out.push(format!(
                    "WARN window_r = {w}: gamma window_r = {} below the recommended 20",
                    w * self.gamma
                ));
            }
        }
        if let Err(e) = self.build_params() {
            out.push(format!("ERROR experiment compatibility: {e}"));
        } else {
            out.push("experiment/distribution compatibility: ok".into());
        }
        out
    }
}
