//! Stateful policies mapping history to per-round inclusion probabilities.
//!
//! KL-UCB and Thompson sampling both feed per-arm indices into the oracle's
//! allocation step: arms whose index ratio beats the estimated threshold are
//! included with probability one, arms on the estimated margin share the
//! leftover budget, and nothing is spent on the margin when the threshold
//! equals the indifference point. ESCB instead scores every feasible subset
//! of a multiple-play instance. The static oracle replays the true optimum.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::Rng;

use crate::arms::{FamilyKind, RewardFamily};
use crate::error::{Error, Result};
use crate::indices::{escb_index, exploration_rate, ts_posterior_draw, ArmStats};
use crate::oracle::{allocate, BanditInstance};

/// Which algorithm a [`Policy`] runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyKind {
    /// KL-UCB with exploration rate `ln t + d ln ln t`.
    KlUcb {
        d: f64,
    },
    Thompson,
    /// ESCB with exploration rate `ln t + d ln ln t`.
    Escb {
        d: f64,
    },
    StaticOracle,
}

impl PolicyKind {
    fn is_index_policy(&self) -> bool {
        matches!(self, PolicyKind::KlUcb { .. } | PolicyKind::Escb { .. })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::KlUcb { d } => write!(f, "klucb:{d}"),
            PolicyKind::Thompson => f.write_str("ts"),
            PolicyKind::Escb { d } => write!(f, "escb:{d}"),
            PolicyKind::StaticOracle => f.write_str("oracle"),
        }
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::config("algorithms", format!("`{s}`: {msg}"));
        let parse_d = |d: &str| -> Result<f64> {
            let d: f64 = d
                .parse()
                .map_err(|_| bad("exploration constant is not a number"))?;
            if d >= 0.0 && d.is_finite() {
                Ok(d)
            } else {
                Err(bad("exploration constant must be >= 0"))
            }
        };
        match s.split_once(':') {
            Some(("klucb", d)) => Ok(PolicyKind::KlUcb { d: parse_d(d)? }),
            Some(("escb", d)) => Ok(PolicyKind::Escb { d: parse_d(d)? }),
            None if s == "ts" => Ok(PolicyKind::Thompson),
            None if s == "oracle" => Ok(PolicyKind::StaticOracle),
            _ => Err(bad("expected klucb:<d>, ts, escb:<d> or oracle")),
        }
    }
}

/// Per-round inclusion probabilities over the real arms plus the pseudo-arm.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionVector {
    pub q: Vec<f64>,
    /// `(B - sum_a c_a q_a) / B`: the budget share left to the pseudo-arm.
    pub q_pseudo: f64,
    /// Estimated threshold ratio behind this allocation, when the policy
    /// allocates by threshold.
    pub threshold: Option<f64>,
}

impl InclusionVector {
    pub fn new(q: Vec<f64>, costs: &[f64], budget: f64, threshold: Option<f64>) -> Self {
        let spend: f64 = q.iter().zip(costs).map(|(q, c)| q * c).sum();
        InclusionVector {
            q,
            q_pseudo: ((budget - spend) / budget).max(0.0),
            threshold,
        }
    }

    /// Expected per-round spend `sum_a c_a q_a`.
    pub fn spend(&self, costs: &[f64]) -> f64 {
        self.q.iter().zip(costs).map(|(q, c)| q * c).sum()
    }

    fn single(k: usize, arm: usize, costs: &[f64], budget: f64) -> Self {
        let mut q = vec![0.0; k];
        q[arm] = 1.0;
        Self::new(q, costs, budget, None)
    }
}

/// Arms drawn in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    /// 0-based ids of the real arms drawn, ascending.
    pub arms: Vec<usize>,
    /// Whether the pseudo-arm was (hypothetically) drawn.
    pub pseudo: bool,
}

/// Draws each arm independently with its inclusion probability.
pub fn draw_subset<R: Rng + ?Sized>(q: &InclusionVector, rng: &mut R) -> Subset {
    let arms =
        q.q.iter()
            .enumerate()
            .filter_map(|(a, &p)| (rng.random::<f64>() < p).then_some(a))
            .collect();
    let pseudo = rng.random::<f64>() < q.q_pseudo;
    Subset { arms, pseudo }
}

#[derive(Debug, Clone)]
pub struct Policy {
    kind: PolicyKind,
    families: Vec<RewardFamily>,
    costs: Vec<f64>,
    budget: f64,
    rho: f64,
    stats: Vec<ArmStats>,
    round: u64,
    oracle: Option<InclusionVector>,
}

impl Policy {
    pub fn new(kind: PolicyKind, instance: &BanditInstance) -> Result<Self> {
        let unsupported = |reason: &str| Error::UnsupportedPolicy {
            policy: kind.to_string(),
            reason: reason.into(),
        };
        let families: Vec<RewardFamily> =
            instance.arms().iter().map(|a| a.family.clone()).collect();
        let costs = instance.costs();
        let budget = instance.budget();

        match kind {
            PolicyKind::Thompson => {
                if families.iter().any(|f| f.kind() != FamilyKind::Bernoulli) {
                    return Err(unsupported("Thompson sampling needs Bernoulli arms"));
                }
            }
            PolicyKind::Escb { .. } => {
                if !instance.is_multiple_play() {
                    return Err(unsupported(
                        "ESCB needs unit costs, an integer budget in [1, K] and rho = 0",
                    ));
                }
                if families.iter().any(|f| f.kind() != FamilyKind::Bernoulli) {
                    return Err(unsupported("ESCB needs Bernoulli arms"));
                }
            }
            PolicyKind::KlUcb { .. } => {
                if families
                    .iter()
                    .any(|f| matches!(f, RewardFamily::PointMass { .. }))
                {
                    return Err(unsupported("KL-UCB cannot index a point-mass arm"));
                }
            }
            PolicyKind::StaticOracle => {}
        }
        if kind.is_index_policy() {
            if let Some(a) = costs.iter().position(|&c| c > budget) {
                return Err(unsupported(&format!(
                    "arm {} costs more than the budget, so it cannot be initialized",
                    a + 1
                )));
            }
        }

        let oracle = (kind == PolicyKind::StaticOracle).then(|| {
            let solution = instance.solve();
            InclusionVector::new(solution.q_star, &costs, budget, Some(solution.rho_star))
        });
        let stats = families.iter().map(|f| ArmStats::new(f.kind())).collect();
        Ok(Policy {
            kind,
            families,
            costs,
            budget,
            rho: instance.rho(),
            stats,
            round: 0,
            oracle,
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    /// Number of completed rounds.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    /// Arm to pull during the round-robin initialization, if still in it.
    pub fn initialization_arm(&self) -> Option<usize> {
        if !self.kind.is_index_policy() {
            return None;
        }
        let k = self.stats.len() as u64;
        (self.round < k).then_some(self.round as usize)
    }

    /// Next round's allocation, including the initialization phase of the
    /// index policies.
    pub fn choose<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<InclusionVector> {
        if let Some(arm) = self.initialization_arm() {
            return Ok(InclusionVector::single(
                self.stats.len(),
                arm,
                &self.costs,
                self.budget,
            ));
        }
        self.select(rng)
    }

    /// Allocation from the current statistics.
    pub fn select<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<InclusionVector> {
        match self.kind {
            PolicyKind::StaticOracle => Ok(self.oracle.clone().expect("built with the policy")),
            PolicyKind::Escb { .. } => self.escb_select(),
            PolicyKind::KlUcb { d } => {
                self.check_initialized()?;
                let f_t = exploration_rate(d, self.round);
                let ratios = self
                    .stats
                    .iter()
                    .zip(&self.costs)
                    .map(|(s, c)| Ok(s.upper_index(f_t / s.n() as f64)? / c))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.allocate(&ratios))
            }
            PolicyKind::Thompson => {
                let ratios: Vec<f64> = self
                    .stats
                    .iter()
                    .zip(&self.costs)
                    .map(|(s, c)| ts_posterior_draw(s.successes(), s.failures(), rng) / c)
                    .collect();
                Ok(self.allocate(&ratios))
            }
        }
    }

    fn allocate(&self, ratios: &[f64]) -> InclusionVector {
        let (threshold, _, q) = allocate(ratios, &self.costs, self.budget, self.rho);
        InclusionVector::new(q, &self.costs, self.budget, Some(threshold))
    }

    fn check_initialized(&self) -> Result<()> {
        match self.stats.iter().position(|s| s.n() == 0) {
            Some(a) => Err(Error::UninitializedArm(a + 1)),
            None => Ok(()),
        }
    }

    /// ESCB: the indicator of the first size-`B` subset, in lexicographic
    /// order, with the largest subset index.
    pub fn escb_select(&self) -> Result<InclusionVector> {
        let d = match self.kind {
            PolicyKind::Escb { d } => d,
            _ => {
                return Err(Error::UnsupportedPolicy {
                    policy: self.kind.to_string(),
                    reason: "escb_select called on a non-ESCB policy".into(),
                })
            }
        };
        self.check_initialized()?;
        let f_t = exploration_rate(d, self.round);
        let (best, _) = escb_best_subset(&self.stats, self.budget as usize, f_t)?;
        let mut q = vec![0.0; self.stats.len()];
        for a in best {
            q[a] = 1.0;
        }
        Ok(InclusionVector::new(q, &self.costs, self.budget, None))
    }

    /// Records one observed reward for `arm` (0-based).
    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        let family = self.families.get(arm).ok_or(Error::DimensionMismatch {
            expected: self.families.len(),
            found: arm + 1,
        })?;
        if !family.supports(reward) {
            return Err(Error::RewardOutOfSupport {
                arm: arm + 1,
                reward,
            });
        }
        self.stats[arm].record(reward);
        Ok(())
    }

    pub fn finish_round(&mut self) {
        self.round += 1;
    }
}

/// Scores every subset of `size` arms; returns the first maximizer in
/// lexicographic order and the number of subsets evaluated.
pub(crate) fn escb_best_subset(
    stats: &[ArmStats],
    size: usize,
    f_t: f64,
) -> Result<(Vec<usize>, usize)> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut evaluated = 0;
    let mut subset_stats = Vec::with_capacity(size);
    for subset in (0..stats.len()).combinations(size) {
        subset_stats.clear();
        subset_stats.extend(
            subset
                .iter()
                .map(|&a| (stats[a].mean().clamp(0.0, 1.0), stats[a].n())),
        );
        let value = escb_index(&subset_stats, f_t)?;
        evaluated += 1;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, subset));
        }
    }
    Ok((best.map(|(_, s)| s).unwrap_or_default(), evaluated))
}
