//! Fractional-knapsack oracle, arm classification, optimal gain, the
//! pseudo-arm extension and the asymptotic regret lower bound.
//!
//! Arms are ranked by their reward-to-cost ratio `rho_a = mu_a / c_a`. The
//! threshold ratio is
//!
//! ```text
//! rho* = rho                                     if sum_{rho_a > rho} c_a < B
//! rho* = sup { r >= 0 : sum_{rho_a > r} c_a >= B }  otherwise
//! ```
//!
//! Arms strictly above `rho*` are always pulled, arms strictly below never,
//! and arms exactly at `rho*` (the margin) share whatever budget is left.

use std::fmt;

use crate::arms::{kinf, RewardFamily};
use crate::error::{Error, Result};

/// One arm of a budgeted bandit: a reward distribution and a pulling cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub family: RewardFamily,
    pub cost: f64,
}

impl Arm {
    pub fn new(family: RewardFamily, cost: f64) -> Self {
        Arm { family, cost }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<Arm>,
    budget: f64,
    rho: f64,
    /// The last arm is the zero-gain pseudo-arm added by
    /// [`extend_with_pseudo_arm`].
    has_pseudo_arm: bool,
}

impl BanditInstance {
    pub fn new(arms: Vec<Arm>, budget: f64, rho: f64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidInstance("no arms".into()));
        }
        if !(budget > 0.0 && budget.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "budget must be positive, got {budget}"
            )));
        }
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "indifference point must be nonnegative, got {rho}"
            )));
        }
        for (a, arm) in arms.iter().enumerate() {
            if !(arm.cost > 0.0 && arm.cost.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "arm {}: cost must be positive, got {}",
                    a + 1,
                    arm.cost
                )));
            }
            arm.family.validate()?;
            if matches!(arm.family, RewardFamily::PointMass { .. }) {
                continue;
            }
            let upper = arm.family.kind().mean_upper();
            if arm.family.mean() >= upper {
                return Err(Error::InvalidInstance(format!(
                    "arm {}: mean {} must lie below the upper end {upper} of its family",
                    a + 1,
                    arm.family.mean()
                )));
            }
        }
        Ok(BanditInstance {
            arms,
            budget,
            rho,
            has_pseudo_arm: false,
        })
    }

    /// Instance with Bernoulli arms.
    pub fn bernoulli(means: &[f64], costs: &[f64], budget: f64, rho: f64) -> Result<Self> {
        if means.len() != costs.len() {
            return Err(Error::DimensionMismatch {
                expected: means.len(),
                found: costs.len(),
            });
        }
        let arms = means
            .iter()
            .zip(costs)
            .map(|(&mean, &cost)| Ok(Arm::new(RewardFamily::bernoulli(mean)?, cost)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arms, budget, rho)
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn has_pseudo_arm(&self) -> bool {
        self.has_pseudo_arm
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.family.mean()).collect()
    }

    pub fn costs(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.cost).collect()
    }

    /// Reward-to-cost ratios. The pseudo-arm's ratio is exactly `rho`.
    pub fn ratios(&self) -> Vec<f64> {
        let k = self.arms.len();
        self.arms
            .iter()
            .enumerate()
            .map(|(a, arm)| {
                if self.has_pseudo_arm && a + 1 == k {
                    self.rho
                } else {
                    arm.family.mean() / arm.cost
                }
            })
            .collect()
    }

    /// Whether every cost is one, the budget is an integer in `[1, K]` and
    /// `rho = 0`.
    pub fn is_multiple_play(&self) -> bool {
        self.rho == 0.0
            && self.arms.iter().all(|a| a.cost == 1.0)
            && self.budget.fract() == 0.0
            && self.budget >= 1.0
            && self.budget <= self.arms.len() as f64
    }

    /// Solves the oracle problem and splits the suboptimal arms by whether
    /// `c_a rho*` is reachable inside their family's mean interval.
    pub fn solve(&self) -> OracleSolution {
        let ratios = self.ratios();
        let costs = self.costs();
        let (rho_star, mut classes, q_star) = allocate(&ratios, &costs, self.budget, self.rho);
        let k = self.arms.len();
        for (a, class) in classes.iter_mut().enumerate() {
            if *class == ArmClass::Below && !(self.has_pseudo_arm && a + 1 == k) {
                let upper = self.arms[a].family.kind().mean_upper();
                if self.arms[a].cost * rho_star >= upper {
                    *class = ArmClass::Unreachable;
                }
            }
        }
        let mut solution = OracleSolution {
            rho_star,
            classes,
            q_star,
            g_star: 0.0,
            pseudo_arm_class: pseudo_class(rho_star, self.rho),
        };
        solution.g_star = optimal_gain(&solution, self);
        solution
    }
}

/// Label of an arm relative to the threshold ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArmClass {
    /// Strictly above the threshold; always pulled.
    Leading,
    /// Exactly at the threshold.
    Margin,
    /// Below the threshold, and `c_a rho*` lies inside the mean interval.
    Below,
    /// Below the threshold, with `c_a rho*` at or beyond the family's upper
    /// mean, so no plausible model makes the arm worth pulling.
    Unreachable,
}

impl ArmClass {
    pub fn label(&self) -> &'static str {
        match self {
            ArmClass::Leading => "L",
            ArmClass::Margin => "M",
            ArmClass::Below => "N_under",
            ArmClass::Unreachable => "N_over",
        }
    }

    pub fn is_suboptimal(&self) -> bool {
        matches!(self, ArmClass::Below | ArmClass::Unreachable)
    }
}

impl fmt::Display for ArmClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub rho_star: f64,
    pub classes: Vec<ArmClass>,
    /// Optimal inclusion probabilities. Margin arms share the leftover budget
    /// equally when `rho_star > rho` and get zero otherwise.
    pub q_star: Vec<f64>,
    pub g_star: f64,
    /// Where the pseudo-arm (ratio `rho`) would sit: [`ArmClass::Margin`] iff
    /// `rho_star == rho`, else [`ArmClass::Below`].
    pub pseudo_arm_class: ArmClass,
}

impl OracleSolution {
    /// 1-based arm ids with the given label.
    pub fn arms_in(&self, class: ArmClass) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == class)
            .map(|(a, _)| a + 1)
            .collect()
    }
}

/// Greedy solution of the fractional knapsack for arbitrary means and costs.
///
/// Every suboptimal arm is labeled [`ArmClass::Below`]; use
/// [`BanditInstance::solve`] to split off unreachable arms.
pub fn solve_fractional_knapsack(
    means: &[f64],
    costs: &[f64],
    budget: f64,
    rho: f64,
) -> Result<OracleSolution> {
    if means.len() != costs.len() {
        return Err(Error::DimensionMismatch {
            expected: means.len(),
            found: costs.len(),
        });
    }
    if costs.iter().any(|c| c.is_nan() || *c <= 0.0) {
        return Err(Error::InvalidInstance("costs must be positive".into()));
    }
    if means.iter().any(|m| m.is_nan()) {
        return Err(Error::InvalidInstance("NaN mean".into()));
    }
    let ratios: Vec<f64> = means.iter().zip(costs).map(|(m, c)| m / c).collect();
    let (rho_star, classes, q_star) = allocate(&ratios, costs, budget, rho);
    let g_star = gain(means, costs, &classes, rho_star, budget, rho);
    Ok(OracleSolution {
        rho_star,
        classes,
        q_star,
        g_star,
        pseudo_arm_class: pseudo_class(rho_star, rho),
    })
}

/// Threshold and inclusion probabilities for a vector of (index) ratios.
///
/// This is the allocation step shared by the oracle and the index policies:
/// ratios are grouped by exact equality, the threshold is the ratio of the
/// first group whose cumulative cost reaches the budget, and the margin
/// group fills the remaining budget with equal probabilities.
pub fn allocate(
    ratios: &[f64],
    costs: &[f64],
    budget: f64,
    rho: f64,
) -> (f64, Vec<ArmClass>, Vec<f64>) {
    let mut order: Vec<usize> = (0..ratios.len()).filter(|&a| ratios[a] > rho).collect();
    order.sort_by(|&a, &b| ratios[b].total_cmp(&ratios[a]));

    let mut rho_star = rho;
    let mut cumulative = 0.0;
    let mut i = 0;
    while i < order.len() {
        let r = ratios[order[i]];
        let mut j = i;
        while j < order.len() && ratios[order[j]] == r {
            cumulative += costs[order[j]];
            j += 1;
        }
        if cumulative >= budget {
            rho_star = r;
            break;
        }
        i = j;
    }

    let classes: Vec<ArmClass> = ratios
        .iter()
        .map(|&r| {
            if r > rho_star {
                ArmClass::Leading
            } else if r == rho_star {
                ArmClass::Margin
            } else {
                ArmClass::Below
            }
        })
        .collect();

    let mut q = vec![0.0; ratios.len()];
    let mut leading_cost = 0.0;
    let mut margin_cost = 0.0;
    for (a, class) in classes.iter().enumerate() {
        match class {
            ArmClass::Leading => {
                q[a] = 1.0;
                leading_cost += costs[a];
            }
            ArmClass::Margin => margin_cost += costs[a],
            _ => {}
        }
    }
    if rho_star > rho && margin_cost > 0.0 {
        let share = ((budget - leading_cost) / margin_cost).clamp(0.0, 1.0);
        for (a, class) in classes.iter().enumerate() {
            if *class == ArmClass::Margin {
                q[a] = share;
            }
        }
    }
    (rho_star, classes, q)
}

/// `G* = sum_{a in L} mu_a + rho* (B - sum_{a in L} c_a) - B rho`.
pub fn optimal_gain(solution: &OracleSolution, instance: &BanditInstance) -> f64 {
    gain(
        &instance.means(),
        &instance.costs(),
        &solution.classes,
        solution.rho_star,
        instance.budget(),
        instance.rho(),
    )
}

fn gain(
    means: &[f64],
    costs: &[f64],
    classes: &[ArmClass],
    rho_star: f64,
    budget: f64,
    rho: f64,
) -> f64 {
    let mut leading_mean = 0.0;
    let mut leading_cost = 0.0;
    for ((m, c), class) in means.iter().zip(costs).zip(classes) {
        if *class == ArmClass::Leading {
            leading_mean += m;
            leading_cost += c;
        }
    }
    leading_mean + rho_star * (budget - leading_cost) - budget * rho
}

fn pseudo_class(rho_star: f64, rho: f64) -> ArmClass {
    if rho_star == rho {
        ArmClass::Margin
    } else {
        ArmClass::Below
    }
}

/// Appends the pseudo-arm: a point mass at `B rho` with cost `B`, whose gain
/// `mu - c rho` is zero.
pub fn extend_with_pseudo_arm(instance: &BanditInstance) -> BanditInstance {
    if instance.has_pseudo_arm {
        return instance.clone();
    }
    let mut arms = instance.arms.clone();
    arms.push(Arm::new(
        RewardFamily::PointMass {
            value: instance.budget * instance.rho,
        },
        instance.budget,
    ));
    BanditInstance {
        arms,
        budget: instance.budget,
        rho: instance.rho,
        has_pseudo_arm: true,
    }
}

/// Coefficient of `log T` in the regret lower bound, with the per-arm draw
/// coefficients `1 / K_inf(nu_a, c_a rho*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub coefficient: f64,
    /// Nonzero only for [`ArmClass::Below`] arms (pseudo-arm excluded).
    pub per_arm: Vec<f64>,
}

impl LowerBound {
    /// Lower-bound regret value `coefficient * ln t`.
    pub fn at(&self, t: f64) -> f64 {
        if t <= 1.0 {
            0.0
        } else {
            self.coefficient * t.ln()
        }
    }
}

pub fn lower_bound_constant(instance: &BanditInstance) -> Result<LowerBound> {
    let solution = instance.solve();
    let ratios = instance.ratios();
    let k = instance.len();
    let mut coefficient = 0.0;
    let mut per_arm = vec![0.0; k];
    for (a, arm) in instance.arms().iter().enumerate() {
        if solution.classes[a] != ArmClass::Below || (instance.has_pseudo_arm && a + 1 == k) {
            continue;
        }
        let info = kinf(&arm.family, arm.cost * solution.rho_star)?;
        if info.is_infinite() {
            continue;
        }
        per_arm[a] = 1.0 / info;
        coefficient += arm.cost * (solution.rho_star - ratios[a]) / info;
    }
    Ok(LowerBound {
        coefficient,
        per_arm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sim(means: &[f64], costs: &[f64], budget: f64, rho: f64) -> BanditInstance {
        BanditInstance::bernoulli(means, costs, budget, rho).unwrap()
    }

    #[test]
    fn thick_margin_example() {
        let s =
            solve_fractional_knapsack(&[0.5, 0.45, 0.45, 0.4, 0.3], &[1.0; 5], 2.0, 0.0).unwrap();
        assert_eq!(s.rho_star, 0.45);
        assert_eq!(s.arms_in(ArmClass::Leading), vec![1]);
        assert_eq!(s.arms_in(ArmClass::Margin), vec![2, 3]);
        assert_eq!(s.arms_in(ArmClass::Below), vec![4, 5]);
        assert_eq!(s.q_star, vec![1.0, 0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn uneven_costs_example() {
        let s = solve_fractional_knapsack(
            &[0.7, 0.6, 0.5, 0.3, 0.2],
            &[1.5, 1.0, 1.0, 1.0, 2.5],
            3.0,
            0.4,
        )
        .unwrap();
        assert!((s.rho_star - 0.7 / 1.5).abs() < 1e-15);
        assert_eq!(s.arms_in(ArmClass::Leading), vec![2, 3]);
        assert_eq!(s.arms_in(ArmClass::Margin), vec![1]);
        assert!((s.q_star[0] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nothing_worth_pulling() {
        let s = solve_fractional_knapsack(&[0.1, 0.1], &[1.0, 1.0], 1.0, 0.5).unwrap();
        assert_eq!(s.rho_star, 0.5);
        assert!(s.arms_in(ArmClass::Leading).is_empty());
        assert!(s.arms_in(ArmClass::Margin).is_empty());
        assert_eq!(s.q_star, vec![0.0, 0.0]);
        assert_eq!(s.g_star, 0.0);
        assert_eq!(s.pseudo_arm_class, ArmClass::Margin);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_fractional_knapsack(&[0.1, 0.2], &[1.0], 1.0, 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn optimal_gain_examples() {
        let sim1 = sim(&[0.5, 0.45, 0.45, 0.4, 0.3], &[1.0; 5], 2.0, 0.0);
        let s = sim1.solve();
        assert!((optimal_gain(&s, &sim1) - 0.95).abs() < 1e-15);

        let sim3 = sim(
            &[0.5, 0.45, 0.45, 0.4, 0.3],
            &[0.8, 1.0, 1.0, 0.8, 0.6],
            2.0,
            0.5,
        );
        let s = sim3.solve();
        assert_eq!(s.rho_star, 0.5);
        assert!((s.g_star - 0.1).abs() < 1e-15);
        assert_eq!(s.arms_in(ArmClass::Margin), vec![4, 5]);
    }

    #[test]
    fn pseudo_arm_membership() {
        let sim3 = sim(
            &[0.5, 0.45, 0.45, 0.4, 0.3],
            &[0.8, 1.0, 1.0, 0.8, 0.6],
            2.0,
            0.5,
        );
        let ext = extend_with_pseudo_arm(&sim3);
        let s = ext.solve();
        assert_eq!(s.arms_in(ArmClass::Margin), vec![4, 5, 6]);
        assert_eq!(s.rho_star, sim3.solve().rho_star);

        let sim1 = sim(&[0.5, 0.45, 0.45, 0.4, 0.3], &[1.0; 5], 2.0, 0.0);
        let ext = extend_with_pseudo_arm(&sim1);
        let s = ext.solve();
        assert_eq!(s.classes[5], ArmClass::Below);
        assert_eq!(s.q_star[..5], sim1.solve().q_star[..]);
        assert_eq!(s.rho_star, 0.45);
    }

    #[test]
    fn unreachable_split() {
        let sim4 = sim(
            &[0.7, 0.6, 0.5, 0.3, 0.2],
            &[1.5, 1.0, 1.0, 1.0, 2.5],
            3.0,
            0.4,
        );
        let s = sim4.solve();
        assert_eq!(s.arms_in(ArmClass::Below), vec![4]);
        assert_eq!(s.arms_in(ArmClass::Unreachable), vec![5]);
        let lb = lower_bound_constant(&sim4).unwrap();
        assert_eq!(lb.per_arm[4], 0.0);
        assert!(lb.per_arm[3] > 0.0);
    }

    #[test]
    fn lower_bound_constants() {
        let kl = crate::arms::bernoulli_kl;
        let sim1 = sim(&[0.5, 0.45, 0.45, 0.4, 0.3], &[1.0; 5], 2.0, 0.0);
        let lb = lower_bound_constant(&sim1).unwrap();
        let by_hand = 0.05 / kl(0.4, 0.45) + 0.15 / kl(0.3, 0.45);
        assert!((lb.coefficient - by_hand).abs() < 1e-9);
        assert!((lb.coefficient - 12.996).abs() < 0.01);

        let sim2 = sim(&[0.7, 0.6, 0.5, 0.3, 0.2], &[1.0; 5], 3.0, 0.0);
        let lb = lower_bound_constant(&sim2).unwrap();
        assert!((lb.coefficient - 3.99).abs() < 0.01);

        let lonely = sim(&[0.4, 0.3], &[1.0, 1.0], 2.0, 0.0);
        assert_eq!(lower_bound_constant(&lonely).unwrap().coefficient, 0.0);
    }

    #[test]
    fn instance_validation() {
        assert!(BanditInstance::bernoulli(&[0.5], &[-1.0], 1.0, 0.0).is_err());
        assert!(BanditInstance::bernoulli(&[0.5], &[1.0], 0.0, 0.0).is_err());
        assert!(BanditInstance::bernoulli(&[0.5], &[1.0], 1.0, -0.1).is_err());
        assert!(BanditInstance::bernoulli(&[1.0], &[1.0], 1.0, 0.0).is_err());
        assert!(BanditInstance::bernoulli(&[0.5, 0.2], &[1.0], 1.0, 0.0).is_err());
    }
}
