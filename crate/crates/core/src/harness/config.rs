//! Experiment configuration: compiled-in presets or a flat TOML file.
//!
//! ```toml
//! # either a preset ...
//! preset = "sim2"
//! # ... or an inline instance
//! family = "bernoulli"        # bernoulli | gaussian | poisson | exponential | finite
//! means = [0.7, 0.6, 0.5]
//! costs = [1.0, 1.0, 2.0]
//! budget = 2.0
//! rho = 0.1
//! # sigma2 = 1.0                    (gaussian only)
//! # supports = [[0.0, 0.5, 1.0], …] (finite only, one list per arm)
//! # weights  = [[0.2, 0.3, 0.5], …]
//!
//! horizon = 20000
//! replications = 200
//! seed = 1
//! algorithms = ["klucb:1", "klucb:3", "ts", "oracle"]
//! checkpoints = 50
//! workers = 4
//! out = "results"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::presets::Preset;
use crate::arms::{FiniteSupport, RewardFamily};
use crate::error::{Error, Result};
use crate::oracle::{Arm, BanditInstance};
use crate::policies::PolicyKind;
use crate::simulator::DEFAULT_CHECKPOINTS;

pub const DEFAULT_HORIZON: u64 = 20_000;
pub const DEFAULT_REPLICATIONS: usize = 200;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub instance: BanditInstance,
    pub horizon: u64,
    pub replications: usize,
    pub seed: u64,
    pub algorithms: Vec<PolicyKind>,
    pub checkpoints: usize,
    pub workers: usize,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        ExperimentConfig {
            name: preset.name().to_string(),
            instance: preset.instance(),
            horizon: DEFAULT_HORIZON,
            replications: DEFAULT_REPLICATIONS,
            seed: DEFAULT_SEED,
            algorithms: preset.default_algorithms(),
            checkpoints: DEFAULT_CHECKPOINTS,
            workers: default_workers(),
            out_dir: PathBuf::from("results"),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from("<config>"),
            message: e.to_string(),
        })?;
        file.into_config()
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.replications == 0 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "list is empty"));
        }
        if self.checkpoints == 0 {
            return Err(Error::config("checkpoints", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        Ok(())
    }
}

/// Where a configuration comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigSource {
    Preset(String),
    File(PathBuf),
}

pub fn load_config(source: &ConfigSource) -> Result<ExperimentConfig> {
    let config = match source {
        ConfigSource::Preset(name) => ExperimentConfig::preset(name.parse()?),
        ConfigSource::File(path) => ExperimentConfig::from_file(path)?,
    };
    config.validate()?;
    Ok(config)
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    name: Option<String>,
    preset: Option<String>,
    family: Option<String>,
    sigma2: Option<f64>,
    means: Option<Vec<f64>>,
    costs: Option<Vec<f64>>,
    supports: Option<Vec<Vec<f64>>>,
    weights: Option<Vec<Vec<f64>>>,
    budget: Option<f64>,
    rho: Option<f64>,
    horizon: Option<i64>,
    replications: Option<i64>,
    seed: Option<i64>,
    algorithms: Option<Vec<String>>,
    checkpoints: Option<i64>,
    workers: Option<i64>,
    out: Option<PathBuf>,
}

fn positive_int(field: &str, value: i64) -> Result<u64> {
    if value < 1 {
        Err(Error::config(
            field,
            format!("must be at least 1, got {value}"),
        ))
    } else {
        Ok(value as u64)
    }
}

impl ConfigFile {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut config = match &self.preset {
            Some(name) => {
                let preset: Preset = name.parse()?;
                let inline = [
                    ("family", self.family.is_some()),
                    ("means", self.means.is_some()),
                    ("costs", self.costs.is_some()),
                    ("budget", self.budget.is_some()),
                    ("rho", self.rho.is_some()),
                    ("supports", self.supports.is_some()),
                    ("weights", self.weights.is_some()),
                    ("sigma2", self.sigma2.is_some()),
                ];
                if let Some((field, _)) = inline.iter().find(|(_, set)| *set) {
                    return Err(Error::config(*field, "cannot be combined with `preset`"));
                }
                ExperimentConfig::preset(preset)
            }
            None => {
                let instance = self.inline_instance()?;
                ExperimentConfig {
                    name: "custom".to_string(),
                    instance,
                    horizon: DEFAULT_HORIZON,
                    replications: DEFAULT_REPLICATIONS,
                    seed: DEFAULT_SEED,
                    algorithms: vec![PolicyKind::KlUcb { d: 1.0 }, PolicyKind::KlUcb { d: 3.0 }],
                    checkpoints: DEFAULT_CHECKPOINTS,
                    workers: default_workers(),
                    out_dir: PathBuf::from("results"),
                }
            }
        };

        if let Some(name) = self.name {
            config.name = name;
        }
        if let Some(h) = self.horizon {
            config.horizon = positive_int("horizon", h)?;
        }
        if let Some(r) = self.replications {
            config.replications = positive_int("replications", r)? as usize;
        }
        if let Some(s) = self.seed {
            if s < 0 {
                return Err(Error::config("seed", "must be nonnegative"));
            }
            config.seed = s as u64;
        }
        if let Some(algs) = self.algorithms {
            config.algorithms = algs
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<PolicyKind>>>()?;
        }
        if let Some(c) = self.checkpoints {
            config.checkpoints = positive_int("checkpoints", c)? as usize;
        }
        if let Some(w) = self.workers {
            config.workers = positive_int("workers", w)? as usize;
        }
        if let Some(out) = self.out {
            config.out_dir = out;
        }
        config.validate()?;
        Ok(config)
    }

    fn inline_instance(&self) -> Result<BanditInstance> {
        let budget = self
            .budget
            .ok_or_else(|| Error::config("budget", "missing (or set `preset`)"))?;
        if budget.is_nan() || budget <= 0.0 {
            return Err(Error::config(
                "budget",
                format!("must be positive, got {budget}"),
            ));
        }
        let rho = self.rho.unwrap_or(0.0);
        if rho.is_nan() || rho < 0.0 {
            return Err(Error::config(
                "rho",
                format!("must be nonnegative, got {rho}"),
            ));
        }
        let costs = self
            .costs
            .as_ref()
            .ok_or_else(|| Error::config("costs", "missing"))?;
        for (i, c) in costs.iter().enumerate() {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Error::config(
                    format!("costs[{i}]"),
                    format!("must be positive, got {c}"),
                ));
            }
        }

        let family = self.family.as_deref().unwrap_or("bernoulli");
        let families: Vec<RewardFamily> = if family == "finite" {
            let supports = self
                .supports
                .as_ref()
                .ok_or_else(|| Error::config("supports", "required for family = \"finite\""))?;
            let weights = self
                .weights
                .as_ref()
                .ok_or_else(|| Error::config("weights", "required for family = \"finite\""))?;
            if weights.len() != supports.len() {
                return Err(Error::config("weights", "needs one list per arm"));
            }
            supports
                .iter()
                .zip(weights)
                .enumerate()
                .map(|(i, (p, w))| {
                    FiniteSupport::new(p.clone(), w.clone())
                        .map(RewardFamily::FiniteSupport)
                        .map_err(|e| Error::config(format!("supports[{i}]"), e.to_string()))
                })
                .collect::<Result<_>>()?
        } else {
            let means = self
                .means
                .as_ref()
                .ok_or_else(|| Error::config("means", "missing"))?;
            means
                .iter()
                .enumerate()
                .map(|(i, &mean)| {
                    let fam = match family {
                        "bernoulli" => RewardFamily::Bernoulli { mean },
                        "gaussian" => RewardFamily::Gaussian {
                            mean,
                            sigma2: self.sigma2.ok_or_else(|| {
                                Error::config("sigma2", "required for family = \"gaussian\"")
                            })?,
                        },
                        "poisson" => RewardFamily::Poisson { mean },
                        "exponential" => RewardFamily::Exponential { mean },
                        other => {
                            return Err(Error::config(
                                "family",
                                format!("unknown family `{other}`"),
                            ))
                        }
                    };
                    fam.validate()
                        .map_err(|e| Error::config(format!("means[{i}]"), e.to_string()))?;
                    Ok(fam)
                })
                .collect::<Result<_>>()?
        };
        if families.len() != costs.len() {
            return Err(Error::config(
                "costs",
                format!(
                    "has {} entries but there are {} arms",
                    costs.len(),
                    families.len()
                ),
            ));
        }
        let arms = families
            .into_iter()
            .zip(costs)
            .map(|(f, &c)| Arm::new(f, c))
            .collect();
        BanditInstance::new(arms, budget, rho).map_err(|e| Error::config("instance", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_file() {
        let c = ExperimentConfig::from_toml_str(
            "preset = \"sim4\"\nhorizon = 500\nreplications = 3\nalgorithms = [\"ts\", \"oracle\"]\n",
        )
        .unwrap();
        assert_eq!(c.name, "sim4");
        assert_eq!(c.horizon, 500);
        assert_eq!(c.replications, 3);
        assert_eq!(
            c.algorithms,
            vec![PolicyKind::Thompson, PolicyKind::StaticOracle]
        );
        assert_eq!(c.instance, Preset::Sim4.instance());
    }

    #[test]
    fn inline_instance() {
        let c = ExperimentConfig::from_toml_str(
            "means = [0.5, 0.2]\ncosts = [1.0, 0.5]\nbudget = 1.0\nrho = 0.1\n",
        )
        .unwrap();
        assert_eq!(c.instance.len(), 2);
        assert_eq!(c.instance.rho(), 0.1);

        let g = ExperimentConfig::from_toml_str(
            "family = \"gaussian\"\nsigma2 = 0.25\nmeans = [0.5, -0.2]\ncosts = [1.0, 1.0]\nbudget = 1.0\n",
        )
        .unwrap();
        assert_eq!(
            g.instance.arms()[1].family,
            RewardFamily::Gaussian {
                mean: -0.2,
                sigma2: 0.25
            }
        );

        let f = ExperimentConfig::from_toml_str(
            "family = \"finite\"\nsupports = [[0.0, 1.0], [0.2, 0.9]]\nweights = [[0.5, 0.5], [0.3, 0.7]]\ncosts = [1.0, 1.0]\nbudget = 1.0\n",
        )
        .unwrap();
        assert!((f.instance.means()[1] - 0.69).abs() < 1e-12);
    }

    fn field_of(text: &str) -> String {
        match ExperimentConfig::from_toml_str(text) {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected a field error, got {other:?}"),
        }
    }

    #[test]
    fn field_level_errors() {
        assert_eq!(
            field_of("means = [0.5, 0.2]\ncosts = [1.0, -0.5]\nbudget = 1.0\n"),
            "costs[1]"
        );
        assert_eq!(field_of("means = [0.5]\ncosts = [1.0]\n"), "budget");
        assert_eq!(
            field_of("means = [0.5, 1.5]\ncosts = [1.0, 1.0]\nbudget = 1.0\n"),
            "means[1]"
        );
        assert_eq!(field_of("preset = \"sim1\"\nhorizon = 0\n"), "horizon");
        assert_eq!(
            field_of("preset = \"sim1\"\nalgorithms = [\"ucb\"]\n"),
            "algorithms"
        );
        assert_eq!(field_of("preset = \"sim1\"\nbudget = 3.0\n"), "budget");
        assert_eq!(
            field_of("means = [0.5]\ncosts = [1.0, 1.0]\nbudget = 1.0\n"),
            "costs"
        );
        assert!(matches!(
            ExperimentConfig::from_toml_str("preset = \"sim9\"\n"),
            Err(Error::UnknownPreset(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_toml_str("presett = \"sim1\"\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn load_preset_source() {
        let c = load_config(&ConfigSource::Preset("sim1".into())).unwrap();
        assert_eq!(c.horizon, DEFAULT_HORIZON);
        assert_eq!(c.replications, DEFAULT_REPLICATIONS);
        assert!(c.algorithms.contains(&PolicyKind::Escb { d: 8.0 }));
        assert!(load_config(&ConfigSource::Preset("nope".into())).is_err());
        assert!(load_config(&ConfigSource::File("/definitely/missing.toml".into())).is_err());
    }
}
