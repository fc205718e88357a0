//! Episodes, pseudo-regret accounting and Monte-Carlo aggregation.
//!
//! Per-round pseudo-regret is `G* - sum_a q_a (mu_a - c_a rho)`, split into
//! three nonnegative parts: the shortfall on arms above the threshold, the
//! spend on arms below it, and the unspent budget valued at `rho* - rho`.

use crate::error::{Error, Result};
use crate::oracle::{ArmClass, BanditInstance, OracleSolution};
use crate::policies::{draw_subset, InclusionVector, Policy, PolicyKind};
use crate::rng::{EpisodeRng, StreamKey};

/// Largest tolerated excess of expected spend over the budget.
pub const BUDGET_TOLERANCE: f64 = 1e-12;
/// Largest tolerated gap to the budget when the threshold exceeds `rho`.
pub const SATURATION_TOLERANCE: f64 = 1e-9;

/// Default number of geometrically spaced checkpoints.
pub const DEFAULT_CHECKPOINTS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub horizon: u64,
    pub checkpoints: Vec<u64>,
}

impl RunConfig {
    pub fn new(horizon: u64, checkpoints: Vec<u64>) -> Result<Self> {
        if checkpoints.iter().any(|&t| t == 0 || t > horizon) {
            return Err(Error::InvalidRun(format!(
                "checkpoints must lie in [1, {horizon}]"
            )));
        }
        if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRun(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        Ok(RunConfig {
            horizon,
            checkpoints,
        })
    }

    /// `count` geometrically spaced checkpoints from 10 to `horizon`.
    pub fn geometric(horizon: u64, count: usize) -> Self {
        RunConfig {
            horizon,
            checkpoints: geometric_checkpoints(horizon, count),
        }
    }
}

/// Rounded geometric grid from `min(10, horizon)` to `horizon`, deduplicated,
/// always ending at `horizon`.
pub fn geometric_checkpoints(horizon: u64, count: usize) -> Vec<u64> {
    if horizon == 0 {
        return Vec::new();
    }
    let start = 10.min(horizon) as f64;
    let end = horizon as f64;
    let mut points: Vec<u64> = (0..count.max(1))
        .map(|i| {
            let frac = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                1.0
            };
            (start * (end / start).powf(frac)).round() as u64
        })
        .map(|t| t.clamp(1, horizon))
        .collect();
    points.push(horizon);
    points.dedup();
    points
}

/// Per-round budget bookkeeping of one episode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BudgetAudit {
    pub rounds: u64,
    /// Rounds whose allocation threshold exceeded `rho`.
    pub saturating_rounds: u64,
    /// Largest `sum c q - B` seen (may be negative).
    pub max_excess: f64,
    /// Largest `|sum c q - B|` over saturating rounds.
    pub max_saturation_gap: f64,
}

impl BudgetAudit {
    fn new() -> Self {
        BudgetAudit {
            max_excess: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    fn check(
        &mut self,
        round: u64,
        q: &InclusionVector,
        costs: &[f64],
        budget: f64,
        rho: f64,
    ) -> Result<()> {
        let spend = q.spend(costs);
        self.rounds += 1;
        self.max_excess = self.max_excess.max(spend - budget);
        if spend > budget + BUDGET_TOLERANCE {
            return Err(Error::BudgetViolation {
                round,
                spend,
                budget,
            });
        }
        if q.threshold.is_some_and(|t| t > rho) {
            self.saturating_rounds += 1;
            let gap = (spend - budget).abs();
            self.max_saturation_gap = self.max_saturation_gap.max(gap);
            if gap > SATURATION_TOLERANCE {
                return Err(Error::Unsaturated {
                    round,
                    spend,
                    budget,
                });
            }
        }
        Ok(())
    }
}

/// Cumulative quantities of one episode at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub checkpoints: Vec<u64>,
    pub regret: Vec<f64>,
    /// Cumulative decomposition terms: above-threshold shortfall,
    /// below-threshold spend, unspent budget.
    pub terms: Vec<[f64; 3]>,
    /// Realized pull counts `N_a(t)`.
    pub pulls: Vec<Vec<u64>>,
    /// Cumulative inclusion probabilities `sum_s q_a(s)`.
    pub inclusion: Vec<Vec<f64>>,
    /// Cumulative pseudo-arm mass `sum_s q_pseudo(s)`.
    pub pseudo_mass: Vec<f64>,
    /// Cumulative realized gain `sum_s sum_{a drawn} (Y_a - c_a rho)`.
    pub realized_gain: Vec<f64>,
    pub audit: BudgetAudit,
}

impl RunTrace {
    fn with_capacity(n: usize) -> Self {
        RunTrace {
            checkpoints: Vec::with_capacity(n),
            regret: Vec::with_capacity(n),
            terms: Vec::with_capacity(n),
            pulls: Vec::with_capacity(n),
            inclusion: Vec::with_capacity(n),
            pseudo_mass: Vec::with_capacity(n),
            realized_gain: Vec::with_capacity(n),
            audit: BudgetAudit::new(),
        }
    }

    pub fn final_regret(&self) -> f64 {
        self.regret.last().copied().unwrap_or(0.0)
    }
}

/// One round's pseudo-regret and its three-way decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretIncrement {
    pub total: f64,
    pub terms: [f64; 3],
}

pub fn pseudo_regret_increment(
    q: &InclusionVector,
    instance: &BanditInstance,
    solution: &OracleSolution,
) -> RegretIncrement {
    let ratios = instance.ratios();
    pseudo_regret_parts(
        &q.q,
        &ratios,
        &instance.costs(),
        instance.budget(),
        instance.rho(),
        solution,
    )
}

fn pseudo_regret_parts(
    q: &[f64],
    ratios: &[f64],
    costs: &[f64],
    budget: f64,
    rho: f64,
    solution: &OracleSolution,
) -> RegretIncrement {
    let rho_star = solution.rho_star;
    let mut above = 0.0;
    let mut below = 0.0;
    let mut spend = 0.0;
    for (a, class) in solution.classes.iter().enumerate() {
        let (c, r, qa) = (costs[a], ratios[a], q[a]);
        spend += c * qa;
        match class {
            ArmClass::Leading => above += c * (r - rho_star) * (1.0 - qa),
            ArmClass::Below | ArmClass::Unreachable => below += c * (rho_star - r) * qa,
            ArmClass::Margin => {}
        }
    }
    let unspent = (rho_star - rho) * (budget - spend).max(0.0);
    let terms = [above, below, unspent];
    RegretIncrement {
        total: above + below + unspent,
        terms,
    }
}

/// Runs one episode of `horizon` rounds.
///
/// Every round: choose an allocation, check it against the budget (a
/// violation aborts the episode), draw the subset, deliver rewards for the
/// drawn arms, and accumulate pseudo-regret. Deterministic given `key`.
pub fn run_episode(
    instance: &BanditInstance,
    kind: PolicyKind,
    config: &RunConfig,
    key: StreamKey,
) -> Result<RunTrace> {
    let solution = instance.solve();
    let mut policy = Policy::new(kind, instance)?;
    let mut rng = EpisodeRng::new(key);

    let k = instance.len();
    let costs = instance.costs();
    let ratios = instance.ratios();
    let budget = instance.budget();
    let rho = instance.rho();

    let mut trace = RunTrace::with_capacity(config.checkpoints.len());
    let mut regret = 0.0;
    let mut terms = [0.0; 3];
    let mut pulls = vec![0u64; k];
    let mut inclusion = vec![0.0; k];
    let mut pseudo_mass = 0.0;
    let mut realized = 0.0;
    let mut next_checkpoint = config.checkpoints.iter().peekable();

    for t in 1..=config.horizon {
        let round_rng = rng.round(t);
        let q = policy.choose(round_rng)?;
        trace.audit.check(t, &q, &costs, budget, rho)?;

        let subset = draw_subset(&q, round_rng);
        for &a in &subset.arms {
            let arm = &instance.arms()[a];
            let y = arm.family.sample(round_rng);
            policy.update(a, y)?;
            pulls[a] += 1;
            realized += y - arm.cost * rho;
        }
        policy.finish_round();

        let inc = pseudo_regret_parts(&q.q, &ratios, &costs, budget, rho, &solution);
        regret += inc.total;
        for (acc, x) in terms.iter_mut().zip(inc.terms) {
            *acc += x;
        }
        for (acc, x) in inclusion.iter_mut().zip(&q.q) {
            *acc += x;
        }
        pseudo_mass += q.q_pseudo;

        if next_checkpoint.peek() == Some(&&t) {
            next_checkpoint.next();
            trace.checkpoints.push(t);
            trace.regret.push(regret);
            trace.terms.push(terms);
            trace.pulls.push(pulls.clone());
            trace.inclusion.push(inclusion.clone());
            trace.pseudo_mass.push(pseudo_mass);
            trace.realized_gain.push(realized);
        }
    }
    Ok(trace)
}

/// Pointwise mean and standard error across replications.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStats {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl CurveStats {
    fn from_columns(columns: impl Iterator<Item = Vec<f64>>) -> Self {
        let (mean, stderr) = columns.map(|xs| mean_stderr(&xs)).unzip();
        CurveStats { mean, stderr }
    }

    pub fn last_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn last_stderr(&self) -> f64 {
        self.stderr.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub checkpoints: Vec<u64>,
    pub replications: usize,
    pub regret: CurveStats,
    pub terms: [CurveStats; 3],
    /// Realized pull counts, per arm.
    pub pulls: Vec<CurveStats>,
    pub pseudo_mass: CurveStats,
    pub realized_gain: CurveStats,
}

pub fn aggregate(traces: &[RunTrace]) -> Result<Aggregate> {
    let first = traces
        .first()
        .ok_or_else(|| Error::InvalidRun("no traces to aggregate".into()))?;
    if traces.iter().any(|t| t.checkpoints != first.checkpoints) {
        return Err(Error::CheckpointMismatch);
    }
    let points = first.checkpoints.len();
    let k = first.pulls.first().map_or(0, Vec::len);
    let column = |f: &dyn Fn(&RunTrace, usize) -> f64| {
        CurveStats::from_columns((0..points).map(|i| traces.iter().map(|t| f(t, i)).collect()))
    };
    Ok(Aggregate {
        checkpoints: first.checkpoints.clone(),
        replications: traces.len(),
        regret: column(&|t, i| t.regret[i]),
        terms: [
            column(&|t, i| t.terms[i][0]),
            column(&|t, i| t.terms[i][1]),
            column(&|t, i| t.terms[i][2]),
        ],
        pulls: (0..k)
            .map(|a| column(&|t, i| t.pulls[i][a] as f64))
            .collect(),
        pseudo_mass: column(&|t, i| t.pseudo_mass[i]),
        realized_gain: column(&|t, i| t.realized_gain[i]),
    })
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim1() -> BanditInstance {
        BanditInstance::bernoulli(&[0.5, 0.45, 0.45, 0.4, 0.3], &[1.0; 5], 2.0, 0.0).unwrap()
    }

    fn q(values: &[f64], inst: &BanditInstance) -> InclusionVector {
        InclusionVector::new(values.to_vec(), &inst.costs(), inst.budget(), None)
    }

    #[test]
    fn increment_examples() {
        let inst = sim1();
        let sol = inst.solve();
        let inc = pseudo_regret_increment(&q(&[1.0, 1.0, 0.0, 0.0, 0.0], &inst), &inst, &sol);
        assert!(inc.total.abs() < 1e-15);
        let inc = pseudo_regret_increment(&q(&[1.0, 0.0, 0.0, 1.0, 0.0], &inst), &inst, &sol);
        assert!((inc.total - 0.05).abs() < 1e-15);
        assert!((inc.terms[1] - 0.05).abs() < 1e-15);
        let inc = pseudo_regret_increment(&q(&sol.q_star, &inst), &inst, &sol);
        assert_eq!(inc.total, 0.0);
    }

    #[test]
    fn checkpoint_grid() {
        let c = geometric_checkpoints(20_000, 50);
        assert_eq!(c[0], 10);
        assert_eq!(*c.last().unwrap(), 20_000);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(c.len() <= 51);
        assert_eq!(geometric_checkpoints(0, 50), Vec::<u64>::new());
        assert_eq!(geometric_checkpoints(3, 50), vec![3]);
        assert!(RunConfig::new(10, vec![0, 5]).is_err());
        assert!(RunConfig::new(10, vec![5, 5]).is_err());
        assert!(RunConfig::new(10, vec![11]).is_err());
    }

    #[test]
    fn empty_horizon() {
        let trace = run_episode(
            &sim1(),
            PolicyKind::Thompson,
            &RunConfig::geometric(0, 50),
            StreamKey::new(1, 0, 0),
        )
        .unwrap();
        assert!(trace.regret.is_empty());
        assert_eq!(trace.final_regret(), 0.0);
    }

    #[test]
    fn aggregate_examples() {
        let mk = |r: f64| RunTrace {
            checkpoints: vec![5],
            regret: vec![r],
            terms: vec![[r, 0.0, 0.0]],
            pulls: vec![vec![1, 2]],
            inclusion: vec![vec![1.0, 2.0]],
            pseudo_mass: vec![0.0],
            realized_gain: vec![0.0],
            audit: BudgetAudit::default(),
        };
        let one = aggregate(&[mk(1.0)]).unwrap();
        assert_eq!(one.regret.mean, vec![1.0]);
        assert_eq!(one.regret.stderr, vec![0.0]);
        let two = aggregate(&[mk(1.0), mk(3.0)]).unwrap();
        assert_eq!(two.regret.mean, vec![2.0]);
        assert!((two.regret.stderr[0] - 1.0).abs() < 1e-15);

        let mut other = mk(1.0);
        other.checkpoints = vec![6];
        assert!(matches!(
            aggregate(&[mk(1.0), other]),
            Err(Error::CheckpointMismatch)
        ));
        assert!(aggregate(&[]).is_err());
    }
}
