use std::path::PathBuf;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::output::write_outputs;
use crate::error::{Error, Result};
use crate::oracle::{lower_bound_constant, BanditInstance, LowerBound, OracleSolution};
use crate::policies::PolicyKind;
use crate::rng::StreamKey;
use crate::simulator::{aggregate, run_episode, Aggregate, BudgetAudit, RunConfig, RunTrace};

/// Reduced output of an experiment, one aggregate per algorithm in
/// configuration order.
#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub instance: BanditInstance,
    pub solution: OracleSolution,
    pub lower_bound: LowerBound,
    pub per_algorithm: Vec<(PolicyKind, Aggregate)>,
    pub audits: Vec<(PolicyKind, BudgetAudit)>,
}

impl ExperimentResults {
    pub fn get(&self, kind: PolicyKind) -> Option<&Aggregate> {
        self.per_algorithm
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, a)| a)
    }
}

fn merge_audits(traces: &[RunTrace]) -> BudgetAudit {
    let mut merged = BudgetAudit {
        max_excess: f64::NEG_INFINITY,
        ..Default::default()
    };
    for t in traces {
        merged.rounds += t.audit.rounds;
        merged.saturating_rounds += t.audit.saturating_rounds;
        merged.max_excess = merged.max_excess.max(t.audit.max_excess);
        merged.max_saturation_gap = merged.max_saturation_gap.max(t.audit.max_saturation_gap);
    }
    merged
}

/// Runs every `(algorithm, replication)` episode on a pool of
/// `config.workers` threads and reduces the traces.
///
/// Replication `r` of algorithm `g` (0-based position in the list) uses
/// stream key `(seed, g, r)`, so results do not depend on the pool size.
pub fn simulate(config: &ExperimentConfig) -> Result<ExperimentResults> {
    config.validate()?;
    let run = RunConfig::geometric(config.horizon, config.checkpoints);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))?;

    let jobs: Vec<(usize, u64)> = (0..config.algorithms.len())
        .flat_map(|g| (0..config.replications as u64).map(move |r| (g, r)))
        .collect();
    let traces: Vec<RunTrace> = pool.install(|| {
        jobs.par_iter()
            .map(|&(g, r)| {
                let kind = config.algorithms[g];
                let key = StreamKey::new(config.seed, g as u64, r);
                run_episode(&config.instance, kind, &run, key)
                    .map_err(|e| Error::InvalidRun(format!("{kind}, replication {r}: {e}")))
            })
            .collect::<Result<_>>()
    })?;

    let reps = config.replications;
    let mut per_algorithm = Vec::with_capacity(config.algorithms.len());
    let mut audits = Vec::with_capacity(config.algorithms.len());
    for (g, chunk) in traces.chunks(reps).enumerate() {
        let kind = config.algorithms[g];
        per_algorithm.push((kind, aggregate(chunk)?));
        audits.push((kind, merge_audits(chunk)));
    }

    Ok(ExperimentResults {
        instance: config.instance.clone(),
        solution: config.instance.solve(),
        lower_bound: lower_bound_constant(&config.instance)?,
        per_algorithm,
        audits,
    })
}

/// [`simulate`], then write the CSVs and summary into `config.out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(ExperimentResults, Vec<PathBuf>)> {
    let results = simulate(config)?;
    let paths = write_outputs(&config.out_dir, &results)?;
    Ok((results, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::presets::Preset;

    fn small(preset: Preset, algs: Vec<PolicyKind>) -> ExperimentConfig {
        ExperimentConfig {
            horizon: 300,
            replications: 4,
            checkpoints: 5,
            workers: 2,
            algorithms: algs,
            ..ExperimentConfig::preset(preset)
        }
    }

    #[test]
    fn oracle_has_zero_regret() {
        let r = simulate(&small(Preset::Sim1, vec![PolicyKind::StaticOracle])).unwrap();
        let agg = r.get(PolicyKind::StaticOracle).unwrap();
        assert!(agg.regret.mean.iter().all(|&x| x.abs() < 1e-9));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let algs = vec![PolicyKind::KlUcb { d: 1.0 }, PolicyKind::Thompson];
        let a = simulate(&small(Preset::Sim2, algs.clone())).unwrap();
        let b = simulate(&ExperimentConfig {
            workers: 1,
            ..small(Preset::Sim2, algs)
        })
        .unwrap();
        for ((ka, aa), (kb, ab)) in a.per_algorithm.iter().zip(&b.per_algorithm) {
            assert_eq!(ka, kb);
            assert_eq!(aa, ab);
        }
    }

    #[test]
    fn episode_failure_surfaces() {
        let mut config = small(Preset::Sim3, vec![PolicyKind::Escb { d: 8.0 }]);
        config.replications = 1;
        assert!(simulate(&config).is_err());
    }

    #[test]
    fn writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig {
            out_dir: dir.path().join("out"),
            ..small(Preset::Sim4, vec![PolicyKind::KlUcb { d: 1.0 }])
        };
        let (_, paths) = run_experiment(&config).unwrap();
        assert_eq!(paths.len(), 4);
        let curves = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(curves.starts_with("algorithm,checkpoint_t,mean_regret,stderr,lower_bound_value\n"));
        assert_eq!(curves.lines().count(), 1 + 5);
        let counts = std::fs::read_to_string(&paths[1]).unwrap();
        assert_eq!(counts.lines().count(), 1 + 5 * 5);
    }
}
