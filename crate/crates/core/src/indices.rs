//! Exploration rates, KL-UCB upper confidence indices, Thompson posterior
//! draws and the ESCB subset index.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::arms::{bernoulli_kl, kinf_dual, kl_unchecked, EmpiricalDist, FamilyKind};
use crate::error::{Error, Result};
use crate::roots::{self, TOLERANCE};

/// `f(t) = ln t + d ln ln t`, held constant below the first valid round.
///
/// With `d > 0` the rate is frozen at its value at `t_min` for `t < t_min`,
/// where `t_min = 2` for `d = 1` and `t_min = 3` otherwise. With `d = 0` it
/// is plain `ln t`.
pub fn exploration_rate(d: f64, t: u64) -> f64 {
    let t = t.max(1);
    if d == 0.0 {
        return (t as f64).ln();
    }
    let t_min = if d == 1.0 { 2 } else { 3 };
    let t = t.max(t_min) as f64;
    t.ln() + d * t.ln().ln()
}

/// Sufficient statistics of one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmStats {
    kind: FamilyKind,
    n: u64,
    sum: f64,
    successes: u64,
    empirical: Option<EmpiricalDist>,
}

impl ArmStats {
    pub fn new(kind: FamilyKind) -> Self {
        ArmStats {
            kind,
            n: 0,
            sum: 0.0,
            successes: 0,
            empirical: matches!(kind, FamilyKind::FiniteSupport).then(EmpiricalDist::new),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Empirical mean; zero before the first observation.
    pub fn mean(&self) -> f64 {
        match &self.empirical {
            Some(dist) => dist.mean().unwrap_or(0.0),
            None if self.n == 0 => 0.0,
            None => self.sum / self.n as f64,
        }
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn failures(&self) -> u64 {
        self.n - self.successes
    }

    pub fn empirical(&self) -> Option<&EmpiricalDist> {
        self.empirical.as_ref()
    }

    /// Records one reward. The caller checks it against the arm's support.
    pub fn record(&mut self, reward: f64) {
        self.n += 1;
        self.sum += reward;
        if reward == 1.0 {
            self.successes += 1;
        }
        if let Some(dist) = &mut self.empirical {
            dist.push(reward);
        }
    }

    /// KL-UCB index at confidence radius `delta`.
    pub fn upper_index(&self, delta: f64) -> Result<f64> {
        match &self.empirical {
            Some(dist) => klucb_index_finite_support(dist, delta),
            None => {
                // Accumulated sums can leave the mean a hair outside the
                // closed interval.
                let (lo, hi) = self.kind.mean_bounds();
                klucb_index(self.kind, self.mean().clamp(lo, hi), delta)
            }
        }
    }
}

/// `sup { mu in [mu_-, mu_+] : KL(mean, mu) <= delta }` for a
/// mean-parameterized family.
pub fn klucb_index(kind: FamilyKind, mean: f64, delta: f64) -> Result<f64> {
    if !kind.is_mean_parameterized() {
        return Err(Error::Domain(
            "finite-support arms need klucb_index_finite_support".into(),
        ));
    }
    kind.check_mean(mean)?;
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain(format!(
            "confidence radius {delta} must be >= 0"
        )));
    }
    let upper = kind.mean_upper();
    if delta == 0.0 || mean >= upper {
        return Ok(mean);
    }
    if delta.is_infinite() {
        return Ok(upper);
    }

    let g = |x: f64| {
        let value = kl_unchecked(kind, mean, x) - delta;
        (value, (x - mean) / kind.variance_at(x))
    };
    let hi = match kind {
        FamilyKind::Gaussian { sigma2 } => return Ok(mean + (2.0 * sigma2 * delta).sqrt()),
        FamilyKind::PointMass { value } => return Ok(value),
        FamilyKind::Bernoulli => {
            // Pinsker: KL(p, q) >= 2 (p - q)^2 bounds the crossing.
            let hi = (mean + (0.5 * delta).sqrt()).min(1.0);
            if hi >= 1.0 && bernoulli_kl(mean, 1.0) <= delta {
                return Ok(1.0);
            }
            hi
        }
        _ => {
            let mut hi = (2.0 * mean).max(mean + 1.0);
            while kl_unchecked(kind, mean, hi) <= delta {
                hi *= 2.0;
            }
            hi
        }
    };
    let x0 = mean + 0.5 * (hi - mean);
    Ok(roots::increasing_root(g, mean, hi, x0, TOLERANCE))
}

/// KL-UCB index for finite-support models: the largest mean reachable from
/// the empirical distribution within divergence `delta`, with the extra
/// support point 1 available.
pub fn klucb_index_finite_support(empirical: &EmpiricalDist, delta: f64) -> Result<f64> {
    let mean = empirical
        .mean()
        .ok_or_else(|| Error::InvalidDistribution("empty empirical distribution".into()))?;
    if empirical.points().iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Domain(
            "finite-support rewards must lie in [0, 1]".into(),
        ));
    }
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain(format!(
            "confidence radius {delta} must be >= 0"
        )));
    }
    let mean = mean.clamp(0.0, 1.0);
    if delta == 0.0 || mean >= 1.0 {
        return Ok(mean);
    }
    if delta.is_infinite() {
        return Ok(1.0);
    }
    let points = empirical.points();
    let weights = empirical.weights();
    let g = |mu: f64| match kinf_dual(points, &weights, mu) {
        Ok(dual) => (dual.value - delta, dual.slope),
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };
    let hi = 1.0;
    let x0 = mean + 0.5 * (hi - mean);
    Ok(roots::increasing_root(g, mean, hi, x0, TOLERANCE))
}

/// One draw from `Beta(successes + 1, failures + 1)`, the posterior of a
/// Bernoulli mean under a uniform prior.
pub fn ts_posterior_draw<R: Rng + ?Sized>(successes: u64, failures: u64, rng: &mut R) -> f64 {
    Beta::new(successes as f64 + 1.0, failures as f64 + 1.0)
        .expect("shape parameters are at least one")
        .sample(rng)
}

/// `P(Beta(s + 1, f + 1) > y)`, evaluated exactly as the binomial tail
/// `P(Binomial(s + f + 1, y) <= s)`.
pub fn beta_survival(successes: u64, failures: u64, y: f64) -> f64 {
    if y <= 0.0 {
        return 1.0;
    }
    if y >= 1.0 {
        return 0.0;
    }
    let n = successes + failures + 1;
    // Accumulate pmf terms k = 0..=s in log space to avoid underflow.
    let ln_y = y.ln();
    let ln_1my = (-y).ln_1p();
    let mut ln_choose = 0.0;
    let mut total = 0.0;
    for k in 0..=successes {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        total += (ln_choose + k as f64 * ln_y + (n - k) as f64 * ln_1my).exp();
    }
    total.min(1.0)
}

/// ESCB index of a subset of Bernoulli arms:
///
/// ```text
/// sup sum_a mu_a  subject to  sum_a N_a KL(mean_a, mu_a) <= f_t,  mu in [0, 1]^S
/// ```
///
/// `stats` holds `(empirical mean, pull count)` per arm of the subset.
pub fn escb_index(stats: &[(f64, u64)], f_t: f64) -> Result<f64> {
    for &(mean, n) in stats {
        FamilyKind::Bernoulli.check_mean(mean)?;
        if n == 0 {
            return Err(Error::Domain(
                "ESCB needs every arm pulled at least once".into(),
            ));
        }
    }
    if f_t.is_nan() || f_t < 0.0 {
        return Err(Error::Domain(format!(
            "exploration level {f_t} must be >= 0"
        )));
    }
    let base: f64 = stats.iter().map(|s| s.0).sum();
    if f_t == 0.0 || stats.is_empty() {
        return Ok(base);
    }
    if stats.iter().all(|s| s.0 >= 1.0) {
        return Ok(stats.len() as f64);
    }
    if f_t.is_infinite() {
        return Ok(stats.len() as f64);
    }

    // For a multiplier lambda = 1/s, each coordinate maximizes
    // mu - lambda N KL(mean, mu); its stationarity condition is a quadratic
    // in mu. The constraint sum N KL(mean, mu(s)) grows with s.
    let spent = |s: f64| -> (f64, f64) {
        let mut total = 0.0;
        let mut slope = 0.0;
        for &(mean, n) in stats {
            let n = n as f64;
            let (mu, dmu_dk) = escb_coordinate(mean, s / n);
            total += n * bernoulli_kl(mean, mu);
            // d/ds [N KL(mean, mu)] = N KL'(mu) dmu/dk / N = s dmu/dk / N
            slope += s * dmu_dk / n;
        }
        (total - f_t, slope)
    };

    let mut hi = 1.0;
    while spent(hi).0 <= 0.0 {
        hi *= 4.0;
        if hi > 1e300 {
            break;
        }
    }
    let mut lo = 0.0;
    let mut s = 0.5 * hi;
    for _ in 0..200 {
        let (value, slope) = spent(s);
        if value <= 0.0 {
            lo = s;
            if value >= -ESCB_CONSTRAINT_TOLERANCE {
                break;
            }
        } else {
            hi = s;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
        // Aim just inside the constraint so one-sided Newton convergence
        // still lands in the acceptance window.
        let next = s - (value + 0.5 * ESCB_CONSTRAINT_TOLERANCE) / slope;
        s = if next > lo && next < hi && next.is_finite() {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(stats
        .iter()
        .map(|&(mean, n)| escb_coordinate(mean, lo / n as f64).0)
        .sum())
}

const ESCB_CONSTRAINT_TOLERANCE: f64 = 1e-8;

/// Maximizer of `mu - KL(mean, mu) / k` over `[0, 1]` and its derivative in
/// `k`. Stationarity gives `k mu^2 + (1 - k) mu - mean = 0`.
fn escb_coordinate(mean: f64, k: f64) -> (f64, f64) {
    if k <= 0.0 {
        return (mean, 0.0);
    }
    let b = 1.0 - k;
    let root = (b * b + 4.0 * k * mean).sqrt();
    let mu = if b < 0.0 {
        (root - b) / (2.0 * k)
    } else if root + b > 0.0 {
        2.0 * mean / (root + b)
    } else {
        0.0
    };
    let mu = mu.clamp(mean, 1.0);
    let dmu_dk = if root > 0.0 {
        mu * (1.0 - mu) / root
    } else {
        0.0
    };
    (mu, dmu_dk)
}
