//! Stochastic bandits with a per-round budget on expected spend.
//!
//! Every round the learner picks inclusion probabilities `q_a` with
//! `sum_a c_a q_a <= B`, a random subset with those marginals is drawn, and
//! each drawn arm pays its reward `Y_a` minus `c_a rho`. The crate provides
//! the fractional-knapsack oracle and lower-bound constants ([`oracle`]),
//! reward models with KL and `K_inf` ([`arms`]), confidence indices
//! ([`indices`]), the policies ([`policies`]), a pseudo-regret simulator
//! ([`simulator`]) and a replication harness ([`harness`]).
//!
//! ```
//! use budgeted_bandits::{lower_bound_constant, ArmClass, BanditInstance};
//!
//! let inst = BanditInstance::bernoulli(
//!     &[0.7, 0.6, 0.5, 0.3, 0.2],
//!     &[1.0; 5],
//!     3.0,
//!     0.0,
//! )
//! .unwrap();
//! let sol = inst.solve();
//! assert_eq!(sol.rho_star, 0.5);
//! assert_eq!(sol.arms_in(ArmClass::Margin), vec![3]);
//! let lb = lower_bound_constant(&inst).unwrap();
//! assert!((lb.coefficient - 3.99).abs() < 0.01);
//! ```

pub mod arms;
pub mod error;
pub mod harness;
pub mod indices;
pub mod oracle;
pub mod policies;
pub mod rng;
mod roots;
pub mod simulator;

pub use arms::{
    kinf, kinf_discrete, kinf_empirical, kl_mean, EmpiricalDist, FamilyKind, FiniteSupport,
    RewardFamily,
};
pub use error::{Error, Result};
pub use harness::{load_config, run_experiment, simulate, ConfigSource, ExperimentConfig, Preset};
pub use indices::{
    beta_survival, escb_index, exploration_rate, klucb_index, klucb_index_finite_support,
    ts_posterior_draw, ArmStats,
};
pub use oracle::{
    allocate, extend_with_pseudo_arm, lower_bound_constant, optimal_gain,
    solve_fractional_knapsack, Arm, ArmClass, BanditInstance, LowerBound, OracleSolution,
};
pub use policies::{draw_subset, InclusionVector, Policy, PolicyKind, Subset};
pub use rng::{EpisodeRng, StreamKey};
pub use simulator::{
    aggregate, pseudo_regret_increment, run_episode, Aggregate, BudgetAudit, RunConfig, RunTrace,
};
