//! Parametric reservation-price distributions and the large-market model.
//!
//! A large market is described by a value distribution for buyers, a cost
//! distribution for sellers, and the abundance ratio `alpha = m/n`. Demand
//! and supply become fractions of the trader populations:
//! `G(p) = prob(v >= p)` and `F(p) = prob(c <= p)`.

use crate::error::MarketError;
use crate::schedule::MarketSchedule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Distribution family for one side's reservation prices.
///
/// `Exponential` is parameterized by the mean of the exponential part and a
/// left shift of the support, so the support is `[shift, inf)` and the
/// distribution mean is `shift + mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistributionSpec {
    Exponential {
        mean: f64,
        #[serde(default)]
        shift: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
}

impl DistributionSpec {
    pub fn exponential(mean: f64) -> Self {
        DistributionSpec::Exponential { mean, shift: 0.0 }
    }

    pub fn shifted_exponential(mean: f64, shift: f64) -> Self {
        DistributionSpec::Exponential { mean, shift }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        DistributionSpec::Uniform { lo, hi }
    }

    pub fn validate(&self, field: &'static str) -> Result<(), MarketError> {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if !(mean.is_finite() && mean > 0.0) {
                    return Err(MarketError::invalid(field, format!("mean must be > 0, got {mean}")));
                }
                if !(shift.is_finite() && shift >= 0.0) {
                    return Err(MarketError::invalid(
                        field,
                        format!("shift must be finite and >= 0, got {shift}"),
                    ));
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(MarketError::invalid(field, format!("need lo < hi, got [{lo}, {hi}]")));
                }
                if lo < 0.0 {
                    return Err(MarketError::invalid(field, format!("lo must be >= 0, got {lo}")));
                }
            }
        }
        Ok(())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if x <= shift {
                    0.0
                } else {
                    1.0 - (-(x - shift) / mean).exp()
                }
            }
            DistributionSpec::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
        }
    }

    /// Upper tail `prob(X >= x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if x <= shift {
                    1.0
                } else {
                    (-(x - shift) / mean).exp()
                }
            }
            DistributionSpec::Uniform { .. } => 1.0 - self.cdf(x),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if x < shift {
                    0.0
                } else {
                    (-(x - shift) / mean).exp() / mean
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if x < lo || x > hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
        }
    }

    /// Inverse CDF for `q` in `[0, 1)`.
    pub fn quantile(&self, q: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&q));
        match *self {
            DistributionSpec::Exponential { mean, shift } => shift - mean * (1.0 - q).ln(),
            DistributionSpec::Uniform { lo, hi } => lo + q * (hi - lo),
        }
    }

    pub fn lower_support(&self) -> f64 {
        match *self {
            DistributionSpec::Exponential { shift, .. } => shift,
            DistributionSpec::Uniform { lo, .. } => lo,
        }
    }

    /// Upper support point; `inf` for the exponential family.
    pub fn upper_support(&self) -> f64 {
        match *self {
            DistributionSpec::Exponential { .. } => f64::INFINITY,
            DistributionSpec::Uniform { hi, .. } => hi,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => shift + mean,
            DistributionSpec::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    /// Partial expectation above a threshold, `E[(X - p)+]`.
    pub fn mean_excess_above(&self, p: f64) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if p <= shift {
                    shift + mean - p
                } else {
                    mean * (-(p - shift) / mean).exp()
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if p <= lo {
                    self.mean() - p
                } else if p >= hi {
                    0.0
                } else {
                    (hi - p) * (hi - p) / (2.0 * (hi - lo))
                }
            }
        }
    }

    /// Partial expectation below a threshold, `E[(p - X)+]`.
    pub fn mean_shortfall_below(&self, p: f64) -> f64 {
        match *self {
            DistributionSpec::Exponential { mean, shift } => {
                if p <= shift {
                    0.0
                } else {
                    (p - shift) - mean * (1.0 - (-(p - shift) / mean).exp())
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if p <= lo {
                    0.0
                } else if p >= hi {
                    p - self.mean()
                } else {
                    (p - lo) * (p - lo) / (2.0 * (hi - lo))
                }
            }
        }
    }

    /// Draw one sample by inverse transform, so determinism depends only on
    /// the RNG stream.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// Large-market description: value and cost distributions plus abundance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousMarket {
    value_dist: DistributionSpec,
    cost_dist: DistributionSpec,
    alpha: f64,
}

impl ContinuousMarket {
    pub fn new(
        value_dist: DistributionSpec,
        cost_dist: DistributionSpec,
        alpha: f64,
    ) -> Result<Self, MarketError> {
        value_dist.validate("value_dist")?;
        cost_dist.validate("cost_dist")?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(MarketError::invalid(
                "alpha",
                format!("abundance must be finite and > 0, got {alpha}"),
            ));
        }
        Ok(ContinuousMarket {
            value_dist,
            cost_dist,
            alpha,
        })
    }

    pub fn value_dist(&self) -> &DistributionSpec {
        &self.value_dist
    }

    pub fn cost_dist(&self) -> &DistributionSpec {
        &self.cost_dist
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same distributions at a different abundance.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, MarketError> {
        ContinuousMarket::new(self.value_dist, self.cost_dist, alpha)
    }

    /// Demand fraction `G(p) = prob(v >= p)`.
    pub fn demand_fraction(&self, p: f64) -> f64 {
        self.value_dist.survival(p)
    }

    /// Supply fraction `F(p) = prob(c <= p)`.
    pub fn supply_fraction(&self, p: f64) -> f64 {
        self.cost_dist.cdf(p)
    }

    /// Excess demand per buyer: `G(p) - alpha F(p)`.
    pub fn excess_fraction(&self, p: f64) -> f64 {
        self.demand_fraction(p) - self.alpha * self.supply_fraction(p)
    }

    /// Price-value distance per buyer: `E[(v - p)+] + alpha E[(p - c)+]`.
    ///
    /// This is the large-market analogue of the discrete distance; its
    /// derivative in `p` is `-(G - alpha F)`, so it falls exactly when the
    /// price moves with excess demand.
    pub fn price_value_distance(&self, p: f64) -> f64 {
        self.value_dist.mean_excess_above(p) + self.alpha * self.cost_dist.mean_shortfall_below(p)
    }

    /// Draw a finite schedule: `n` buyer values and `round(alpha * n)`
    /// seller costs. Deterministic given `(self, n, seed)`.
    pub fn sample_schedule(&self, n: usize, seed: u64) -> Result<MarketSchedule, MarketError> {
        let m = (self.alpha * n as f64).round() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| self.value_dist.sample(&mut rng)).collect();
        let costs: Vec<f64> = (0..m).map(|_| self.cost_dist.sample(&mut rng)).collect();
        MarketSchedule::new(values, costs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_family() -> ContinuousMarket {
        ContinuousMarket::new(
            DistributionSpec::exponential(5.0),
            DistributionSpec::exponential(11.0),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(DistributionSpec::exponential(0.0).validate("d").is_err());
        assert!(DistributionSpec::uniform(3.0, 3.0).validate("d").is_err());
        assert!(ContinuousMarket::new(
            DistributionSpec::exponential(1.0),
            DistributionSpec::exponential(1.0),
            -1.0,
        )
        .is_err());
    }

    #[test]
    fn exponential_tails_and_partial_means() {
        let d = DistributionSpec::shifted_exponential(11.0, 2.0);
        assert_eq!(d.cdf(1.0), 0.0);
        assert!((d.cdf(13.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((d.survival(2.0) - 1.0).abs() < 1e-15);
        assert!((d.mean() - 13.0).abs() < 1e-15);
        // memorylessness: mean excess above any point in the support is the scale
        assert!((d.mean_excess_above(2.0) - 11.0).abs() < 1e-12);
        assert!((d.mean_excess_above(13.0) - 11.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert_eq!(d.mean_shortfall_below(2.0), 0.0);
    }

    #[test]
    fn uniform_partial_means_match_quadrature() {
        let d = DistributionSpec::uniform(2.0, 6.0);
        // crude midpoint quadrature as an independent check
        let steps = 200_000;
        let h = 4.0 / steps as f64;
        let p = 3.5;
        let mut above = 0.0;
        let mut below = 0.0;
        for k in 0..steps {
            let x = 2.0 + (k as f64 + 0.5) * h;
            above += (x - p).max(0.0) * 0.25 * h;
            below += (p - x).max(0.0) * 0.25 * h;
        }
        assert!((d.mean_excess_above(p) - above).abs() < 1e-6);
        assert!((d.mean_shortfall_below(p) - below).abs() < 1e-6);
    }

    #[test]
    fn sampling_is_deterministic_and_canonical() {
        let cm = figure_family();
        let a = cm.sample_schedule(1000, 7).unwrap();
        let b = cm.sample_schedule(1000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_buyers(), 1000);
        assert_eq!(a.num_sellers(), 1000);
        // canonical ordering
        assert!(a.values().windows(2).all(|w| w[0] >= w[1]));
        assert!(a.costs().windows(2).all(|w| w[0] <= w[1]));

        let empty = cm.sample_schedule(0, 7).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn sample_mean_approaches_distribution_mean() {
        // law of large numbers against the analytic mean
        let cm = figure_family();
        let s = cm.sample_schedule(100_000, 42).unwrap();
        let mean = s.values().iter().sum::<f64>() / s.num_buyers() as f64;
        assert!(
            (mean - 5.0).abs() < 0.1,
            "sample mean {mean} should be within 0.1 of 5"
        );
    }

    #[test]
    fn fractional_alpha_rounds_seller_count() {
        let cm = ContinuousMarket::new(
            DistributionSpec::exponential(5.0),
            DistributionSpec::exponential(11.0),
            0.01,
        )
        .unwrap();
        let s = cm.sample_schedule(250, 3).unwrap();
        assert_eq!(s.num_buyers(), 250);
        assert_eq!(s.num_sellers(), 3, "round(0.01 * 250) = 3");
    }
}
