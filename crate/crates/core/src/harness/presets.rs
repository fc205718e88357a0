use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::BanditInstance;
use crate::policies::PolicyKind;

/// The four Bernoulli simulation settings with `K = 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Multiple play, two-arm margin.
    Sim1,
    /// Multiple play, single-arm margin.
    Sim2,
    /// Uneven costs, threshold at the indifference point.
    Sim3,
    /// Uneven costs, one suboptimal arm that can never be worth its cost.
    Sim4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Sim1, Preset::Sim2, Preset::Sim3, Preset::Sim4];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Sim1 => "sim1",
            Preset::Sim2 => "sim2",
            Preset::Sim3 => "sim3",
            Preset::Sim4 => "sim4",
        }
    }

    /// `(means, costs, budget, rho)`.
    pub fn parameters(&self) -> (&'static [f64], &'static [f64], f64, f64) {
        const MEANS_A: [f64; 5] = [0.5, 0.45, 0.45, 0.4, 0.3];
        const MEANS_B: [f64; 5] = [0.7, 0.6, 0.5, 0.3, 0.2];
        const UNIT: [f64; 5] = [1.0; 5];
        match self {
            Preset::Sim1 => (&MEANS_A, &UNIT, 2.0, 0.0),
            Preset::Sim2 => (&MEANS_B, &UNIT, 3.0, 0.0),
            Preset::Sim3 => (&MEANS_A, &[0.8, 1.0, 1.0, 0.8, 0.6], 2.0, 0.5),
            Preset::Sim4 => (&MEANS_B, &[1.5, 1.0, 1.0, 1.0, 2.5], 3.0, 0.4),
        }
    }

    pub fn instance(&self) -> BanditInstance {
        let (means, costs, budget, rho) = self.parameters();
        BanditInstance::bernoulli(means, costs, budget, rho).expect("preset parameters are valid")
    }

    /// KL-UCB 1, KL-UCB 3 and Thompson sampling, plus ESCB with
    /// `d = 4B` on the multiple-play presets.
    pub fn default_algorithms(&self) -> Vec<PolicyKind> {
        let mut algs = vec![
            PolicyKind::KlUcb { d: 1.0 },
            PolicyKind::KlUcb { d: 3.0 },
            PolicyKind::Thompson,
        ];
        if matches!(self, Preset::Sim1 | Preset::Sim2) {
            let (_, _, budget, _) = self.parameters();
            algs.push(PolicyKind::Escb { d: 4.0 * budget });
        }
        algs
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}
