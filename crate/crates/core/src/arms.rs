//! Reward models: sampling, mean-parameterized KL divergence and `K_inf`.
//!
//! Exponential families are handled through their mean parameterization:
//! `kl_mean(kind, m1, m2)` is the divergence between the family members with
//! means `m1` and `m2`, with the usual limit conventions at the ends of the
//! closed mean interval. Distributions on `[0, 1]` with finite support get
//! their `K_inf` from the one-dimensional concave dual
//!
//! ```text
//! K_inf(nu, mu) = max_{0 <= lambda <= 1/(1-mu)} E_nu[ ln(1 - lambda (X - mu)) ]
//! ```

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal, Poisson};

use crate::error::{Error, Result};
use crate::roots;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Identifies a model family without its mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    Bernoulli,
    /// Gaussian with known variance `sigma2`.
    Gaussian {
        sigma2: f64,
    },
    Poisson,
    Exponential,
    /// Distributions on `[0, 1]` with finite support.
    FiniteSupport,
    /// The degenerate one-member family used for the pseudo-arm.
    PointMass {
        value: f64,
    },
}

impl FamilyKind {
    /// Closed mean interval `[mu_minus, mu_plus]` of the family.
    pub fn mean_bounds(&self) -> (f64, f64) {
        match *self {
            FamilyKind::Bernoulli | FamilyKind::FiniteSupport => (0.0, 1.0),
            FamilyKind::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            FamilyKind::Poisson | FamilyKind::Exponential => (0.0, f64::INFINITY),
            FamilyKind::PointMass { value } => (value, value),
        }
    }

    pub fn mean_upper(&self) -> f64 {
        self.mean_bounds().1
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Bernoulli => "bernoulli",
            FamilyKind::Gaussian { .. } => "gaussian",
            FamilyKind::Poisson => "poisson",
            FamilyKind::Exponential => "exponential",
            FamilyKind::FiniteSupport => "finite",
            FamilyKind::PointMass { .. } => "point-mass",
        }
    }

    /// Whether the divergence is a function of the two means alone.
    pub fn is_mean_parameterized(&self) -> bool {
        !matches!(self, FamilyKind::FiniteSupport)
    }

    pub(crate) fn check_mean(&self, mu: f64) -> Result<()> {
        let (lo, hi) = self.mean_bounds();
        if mu.is_nan() || !mu.is_finite() || mu < lo || mu > hi {
            return Err(Error::Domain(format!(
                "mean {mu} outside [{lo}, {hi}] for the {} family",
                self.name()
            )));
        }
        Ok(())
    }

    /// Variance function `V(mu)`; `d/dm2 KL(m1, m2) = (m2 - m1) / V(m2)`.
    pub(crate) fn variance_at(&self, mu: f64) -> f64 {
        match *self {
            FamilyKind::Bernoulli | FamilyKind::FiniteSupport => mu * (1.0 - mu),
            FamilyKind::Gaussian { sigma2 } => sigma2,
            FamilyKind::Poisson => mu,
            FamilyKind::Exponential => mu * mu,
            FamilyKind::PointMass { .. } => 0.0,
        }
    }
}

/// A probability vector on strictly increasing points of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSupport {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl FiniteSupport {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if points.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidDistribution(
                "support points must lie in [0, 1]".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDistribution(
                "support points must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(FiniteSupport { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean(&self) -> f64 {
        dot(&self.points, &self.weights)
    }
}

/// Reward distribution of one arm.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardFamily {
    Bernoulli { mean: f64 },
    Gaussian { mean: f64, sigma2: f64 },
    Poisson { mean: f64 },
    Exponential { mean: f64 },
    FiniteSupport(FiniteSupport),
    PointMass { value: f64 },
}

impl RewardFamily {
    pub fn bernoulli(mean: f64) -> Result<Self> {
        let family = RewardFamily::Bernoulli { mean };
        family.validate()?;
        Ok(family)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RewardFamily::Bernoulli { mean } => FamilyKind::Bernoulli.check_mean(mean),
            RewardFamily::Gaussian { mean, sigma2 } => {
                if !(sigma2 > 0.0 && sigma2.is_finite()) {
                    return Err(Error::InvalidDistribution(format!(
                        "gaussian variance must be positive, got {sigma2}"
                    )));
                }
                FamilyKind::Gaussian { sigma2 }.check_mean(mean)
            }
            RewardFamily::Poisson { mean } | RewardFamily::Exponential { mean } => {
                if !(mean > 0.0 && mean.is_finite()) {
                    return Err(Error::Domain(format!(
                        "{} mean must be positive, got {mean}",
                        self.kind().name()
                    )));
                }
                Ok(())
            }
            // Invariants are enforced by the constructor.
            RewardFamily::FiniteSupport(_) => Ok(()),
            RewardFamily::PointMass { value } => {
                if value.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("point mass at {value}")))
                }
            }
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match *self {
            RewardFamily::Bernoulli { .. } => FamilyKind::Bernoulli,
            RewardFamily::Gaussian { sigma2, .. } => FamilyKind::Gaussian { sigma2 },
            RewardFamily::Poisson { .. } => FamilyKind::Poisson,
            RewardFamily::Exponential { .. } => FamilyKind::Exponential,
            RewardFamily::FiniteSupport(_) => FamilyKind::FiniteSupport,
            RewardFamily::PointMass { value } => FamilyKind::PointMass { value },
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            RewardFamily::Bernoulli { mean }
            | RewardFamily::Gaussian { mean, .. }
            | RewardFamily::Poisson { mean }
            | RewardFamily::Exponential { mean } => *mean,
            RewardFamily::FiniteSupport(dist) => dist.mean(),
            RewardFamily::PointMass { value } => *value,
        }
    }

    /// One i.i.d. draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            RewardFamily::Bernoulli { mean } => {
                if rng.random::<f64>() < *mean {
                    1.0
                } else {
                    0.0
                }
            }
            RewardFamily::Gaussian { mean, sigma2 } => Normal::new(*mean, sigma2.sqrt())
                .expect("validated variance")
                .sample(rng),
            RewardFamily::Poisson { mean } => {
                Poisson::new(*mean).expect("validated mean").sample(rng)
            }
            RewardFamily::Exponential { mean } => {
                Exp::new(1.0 / mean).expect("validated mean").sample(rng)
            }
            RewardFamily::FiniteSupport(dist) => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for (x, w) in dist.points.iter().zip(&dist.weights) {
                    acc += w;
                    if u < acc {
                        return *x;
                    }
                }
                // Rounding left the cumulative sum just short of one.
                *dist.points.last().expect("non-empty support")
            }
            RewardFamily::PointMass { value } => *value,
        }
    }

    /// Whether `reward` can be produced by this distribution's model.
    pub fn supports(&self, reward: f64) -> bool {
        if !reward.is_finite() {
            return false;
        }
        match self {
            RewardFamily::Bernoulli { .. } => reward == 0.0 || reward == 1.0,
            RewardFamily::Gaussian { .. } => true,
            RewardFamily::Poisson { .. } => reward >= 0.0 && reward.fract() == 0.0,
            RewardFamily::Exponential { .. } => reward >= 0.0,
            RewardFamily::FiniteSupport(_) => (0.0..=1.0).contains(&reward),
            RewardFamily::PointMass { value } => reward == *value,
        }
    }
}

/// Observed rewards of one arm, stored as distinct sorted values with counts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmpiricalDist {
    points: Vec<f64>,
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalDist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Self {
        let mut dist = Self::new();
        for x in samples {
            dist.push(x);
        }
        dist
    }

    pub fn push(&mut self, x: f64) {
        match self.points.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => self.counts[i] += 1,
            Err(i) => {
                self.points.insert(i, x);
                self.counts.insert(i, 1);
            }
        }
        self.n += 1;
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn weights(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Count-weighted average of the points; `None` before any observation.
    pub fn mean(&self) -> Option<f64> {
        if self.n == 0 {
            return None;
        }
        let total: f64 = self
            .points
            .iter()
            .zip(&self.counts)
            .map(|(x, &c)| x * c as f64)
            .sum();
        Some(total / self.n as f64)
    }
}

/// KL divergence between the members of `kind` with means `mu1` and `mu2`.
///
/// Returns `+inf` where absolute continuity fails, e.g. Bernoulli `KL(x, 0)`
/// for `x > 0`.
pub fn kl_mean(kind: FamilyKind, mu1: f64, mu2: f64) -> Result<f64> {
    if !kind.is_mean_parameterized() {
        return Err(Error::Domain(
            "finite-support models are not parameterized by their mean; use kinf_discrete".into(),
        ));
    }
    kind.check_mean(mu1)?;
    kind.check_mean(mu2)?;
    Ok(kl_unchecked(kind, mu1, mu2))
}

pub(crate) fn kl_unchecked(kind: FamilyKind, mu1: f64, mu2: f64) -> f64 {
    if mu1 == mu2 {
        return 0.0;
    }
    match kind {
        FamilyKind::Bernoulli | FamilyKind::FiniteSupport => bernoulli_kl(mu1, mu2),
        FamilyKind::Gaussian { sigma2 } => (mu1 - mu2).powi(2) / (2.0 * sigma2),
        FamilyKind::Poisson => {
            if mu1 == 0.0 {
                mu2
            } else if mu2 == 0.0 {
                f64::INFINITY
            } else {
                (mu2 - mu1 + mu1 * (mu1 / mu2).ln()).max(0.0)
            }
        }
        FamilyKind::Exponential => {
            if mu1 == 0.0 || mu2 == 0.0 {
                f64::INFINITY
            } else {
                let r = mu1 / mu2;
                (r - 1.0 - r.ln()).max(0.0)
            }
        }
        FamilyKind::PointMass { .. } => f64::INFINITY,
    }
}

pub(crate) fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let mut kl = 0.0;
    if p > 0.0 {
        if q <= 0.0 {
            return f64::INFINITY;
        }
        kl += p * (p / q).ln();
    }
    if p < 1.0 {
        if q >= 1.0 {
            return f64::INFINITY;
        }
        kl += (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
    }
    kl.max(0.0)
}

/// `K_inf(nu, mu)`: the smallest divergence from `nu` to a model distribution
/// whose mean exceeds `mu`.
///
/// Exponential families reduce to `kl_mean(E(nu), mu)` above the mean;
/// finite-support distributions use the dual over `Supp(nu) ∪ {1}`.
pub fn kinf(family: &RewardFamily, mu: f64) -> Result<f64> {
    if mu.is_nan() {
        return Err(Error::Domain("target mean is NaN".into()));
    }
    match family {
        RewardFamily::FiniteSupport(dist) => kinf_discrete(dist.points(), dist.weights(), mu),
        _ => {
            let kind = family.kind();
            let mean = family.mean();
            if mu < mean {
                return Ok(0.0);
            }
            if mu >= kind.mean_upper() {
                return Ok(f64::INFINITY);
            }
            if mu == mean {
                return Ok(0.0);
            }
            kl_mean(kind, mean, mu)
        }
    }
}

/// Finite-support `K_inf` of an empirical distribution.
pub fn kinf_empirical(dist: &EmpiricalDist, mu: f64) -> Result<f64> {
    if dist.n() == 0 {
        return Err(Error::InvalidDistribution(
            "empty empirical distribution".into(),
        ));
    }
    kinf_discrete(dist.points(), &dist.weights(), mu)
}

/// Finite-support `K_inf` of the distribution putting `weights` on `points`
/// (all in `[0, 1]`). Returns `+inf` for `mu >= 1`.
pub fn kinf_discrete(points: &[f64], weights: &[f64], mu: f64) -> Result<f64> {
    Ok(kinf_dual(points, weights, mu)?.value)
}

/// Value and maximizing multiplier of the `K_inf` dual.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KinfDual {
    pub value: f64,
    /// Derivative of `K_inf(nu, .)` at the target mean.
    pub slope: f64,
}

pub(crate) fn kinf_dual(points: &[f64], weights: &[f64], mu: f64) -> Result<KinfDual> {
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: weights.len(),
        });
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::Domain(format!(
            "target mean {mu} outside [0, 1] for a finite-support model"
        )));
    }
    if points.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Domain("support points must lie in [0, 1]".into()));
    }
    if mu >= 1.0 {
        return Ok(KinfDual {
            value: f64::INFINITY,
            slope: f64::INFINITY,
        });
    }
    let mean = dot(points, weights);
    if mu <= mean {
        return Ok(KinfDual {
            value: 0.0,
            slope: 0.0,
        });
    }

    let lambda_max = 1.0 / (1.0 - mu);
    // -phi'(lambda) and its derivative; phi is the concave dual objective.
    let neg_grad = |lambda: f64| {
        let mut g = 0.0;
        let mut h = 0.0;
        for (&x, &w) in points.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let y = x - mu;
            let denom = 1.0 - lambda * y;
            g += w * y / denom;
            h += w * y * y / (denom * denom);
        }
        (g, h)
    };

    let (at_max, _) = neg_grad(lambda_max);
    let lambda = if at_max.is_nan() || at_max > 0.0 {
        roots::increasing_root(
            neg_grad,
            0.0,
            lambda_max,
            0.5 * lambda_max,
            1e-12 * lambda_max.max(1.0),
        )
    } else {
        lambda_max
    };

    let mut value = 0.0;
    let mut inv_mean = 0.0;
    for (&x, &w) in points.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let arg = 1.0 - lambda * (x - mu);
        value += w * arg.ln();
        inv_mean += w / arg;
    }
    Ok(KinfDual {
        value: value.max(0.0),
        slope: lambda * inv_mean,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn means() {
        assert_eq!(RewardFamily::Bernoulli { mean: 0.45 }.mean(), 0.45);
        let fs = FiniteSupport::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(RewardFamily::FiniteSupport(fs).mean(), 0.5);
        assert_eq!(RewardFamily::Exponential { mean: 2.0 }.mean(), 2.0);
    }

    #[test]
    fn degenerate_bernoulli_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zero = RewardFamily::Bernoulli { mean: 0.0 };
        let one = RewardFamily::Bernoulli { mean: 1.0 };
        for _ in 0..1000 {
            assert_eq!(zero.sample(&mut rng), 0.0);
            assert_eq!(one.sample(&mut rng), 1.0);
        }
    }

    #[test]
    fn bernoulli_sample_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let arm = RewardFamily::Bernoulli { mean: 0.3 };
        let n = 1_000_000;
        let total: f64 = (0..n).map(|_| arm.sample(&mut rng)).sum();
        assert!((total / n as f64 - 0.3).abs() < 0.002);
    }

    #[test]
    fn sampling_is_reproducible() {
        let arm = RewardFamily::Gaussian {
            mean: 0.2,
            sigma2: 2.0,
        };
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64).map(|_| arm.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
    }

    #[test]
    fn finite_support_sample_frequencies() {
        let dist = FiniteSupport::new(vec![0.0, 0.25, 1.0], vec![0.2, 0.3, 0.5]).unwrap();
        let arm = RewardFamily::FiniteSupport(dist);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 200_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let x = arm.sample(&mut rng);
            let i = [0.0, 0.25, 1.0].iter().position(|p| *p == x).unwrap();
            counts[i] += 1;
        }
        for (c, w) in counts.iter().zip([0.2, 0.3, 0.5]) {
            assert!((*c as f64 / n as f64 - w).abs() < 0.005);
        }
    }

    #[test]
    fn finite_support_validation() {
        assert!(FiniteSupport::new(vec![0.5, 0.2], vec![0.5, 0.5]).is_err());
        assert!(FiniteSupport::new(vec![0.0, 1.5], vec![0.5, 0.5]).is_err());
        assert!(FiniteSupport::new(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(FiniteSupport::new(vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(RewardFamily::Gaussian {
            mean: 0.0,
            sigma2: 0.0
        }
        .validate()
        .is_err());
        assert!(RewardFamily::bernoulli(1.2).is_err());
        assert!(RewardFamily::Poisson { mean: 0.0 }.validate().is_err());
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_mean(FamilyKind::Bernoulli, 0.5, 0.5).unwrap(), 0.0);
        let direct = 0.3 * (0.3f64 / 0.45).ln() + 0.7 * (0.7f64 / 0.55).ln();
        let kl = kl_mean(FamilyKind::Bernoulli, 0.3, 0.45).unwrap();
        assert!((kl - direct).abs() < 1e-15);
        assert!((kl - 0.047173).abs() < 1e-5);
        assert_eq!(
            kl_mean(FamilyKind::Gaussian { sigma2: 1.0 }, 0.0, 1.0).unwrap(),
            0.5
        );
    }

    #[test]
    fn kl_boundary_conventions() {
        let b = FamilyKind::Bernoulli;
        assert_eq!(kl_mean(b, 0.3, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_mean(b, 0.3, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(kl_mean(b, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(kl_mean(b, 1.0, 1.0).unwrap(), 0.0);
        assert!((kl_mean(b, 1.0, 0.25).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!((kl_mean(b, 0.0, 0.75).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!(kl_mean(b, 1.1, 0.5).is_err());
        assert!(kl_mean(FamilyKind::Poisson, -1.0, 0.5).is_err());
        assert!(kl_mean(FamilyKind::FiniteSupport, 0.2, 0.5).is_err());
        assert_eq!(kl_mean(FamilyKind::Poisson, 0.0, 2.5).unwrap(), 2.5);
    }

    #[test]
    fn exponential_family_kl_matches_direct_integrals() {
        // Poisson: sum_k p1(k) ln(p1(k)/p2(k)).
        let (m1, m2) = (1.3f64, 2.1f64);
        let mut direct = 0.0;
        let mut p1 = (-m1).exp();
        let mut p2 = (-m2).exp();
        for k in 0..200 {
            if k > 0 {
                p1 *= m1 / k as f64;
                p2 *= m2 / k as f64;
            }
            if p1 > 0.0 {
                direct += p1 * (p1 / p2).ln();
            }
        }
        assert!((kl_mean(FamilyKind::Poisson, m1, m2).unwrap() - direct).abs() < 1e-12);

        // Exponential: closed form ln(m2/m1) + m1/m2 - 1 checked by quadrature.
        let (m1, m2) = (0.7f64, 1.9f64);
        let n = 400_000;
        let upper = 60.0 * m1;
        let h = upper / n as f64;
        let mut quad = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            let f1 = (-x / m1).exp() / m1;
            let f2 = (-x / m2).exp() / m2;
            quad += f1 * (f1 / f2).ln() * h;
        }
        assert!((kl_mean(FamilyKind::Exponential, m1, m2).unwrap() - quad).abs() < 1e-6);
    }

    #[test]
    fn kinf_examples() {
        let fam = RewardFamily::Bernoulli { mean: 0.6 };
        assert_eq!(kinf(&fam, 0.5).unwrap(), 0.0);

        let dirac0 = FiniteSupport::new(vec![0.0], vec![1.0]).unwrap();
        let k = kinf(&RewardFamily::FiniteSupport(dirac0), 0.5).unwrap();
        assert!((k - 2f64.ln()).abs() < 1e-9);

        let k = kinf(&RewardFamily::Bernoulli { mean: 0.3 }, 0.45).unwrap();
        assert!((k - 0.047173).abs() < 1e-5);
    }

    #[test]
    fn kinf_infinite_and_domain() {
        let fs = FiniteSupport::new(vec![0.2, 0.7], vec![0.5, 0.5]).unwrap();
        let fam = RewardFamily::FiniteSupport(fs);
        assert_eq!(kinf(&fam, 1.0).unwrap(), f64::INFINITY);
        assert!(kinf(&fam, 1.2).is_err());
        assert!(kinf(&fam, -0.1).is_err());
        assert_eq!(
            kinf(&RewardFamily::Bernoulli { mean: 0.3 }, 1.0).unwrap(),
            f64::INFINITY
        );
        assert!(kinf(&RewardFamily::Bernoulli { mean: 0.3 }, f64::NAN).is_err());
    }

    #[test]
    fn kinf_point_mass_at_zero_is_log_odds() {
        for &mu in &[0.1, 0.3, 0.5, 0.9, 0.99] {
            let k = kinf_discrete(&[0.0], &[1.0], mu).unwrap();
            assert!((k + (1.0 - mu).ln()).abs() < 1e-9, "mu = {mu}");
        }
    }

    #[test]
    fn empirical_counts_and_mean() {
        let d = EmpiricalDist::from_samples([1.0, 0.0, 1.0, 0.3, 0.3]);
        assert_eq!(d.points(), &[0.0, 0.3, 1.0]);
        assert_eq!(d.counts(), &[1, 2, 2]);
        assert_eq!(d.n(), 5);
        assert!((d.mean().unwrap() - 2.6 / 5.0).abs() < 1e-15);
        assert_eq!(EmpiricalDist::new().mean(), None);
        assert!(kinf_empirical(&EmpiricalDist::new(), 0.5).is_err());
    }
}
