//! Competitive clearing of discrete markets.
//!
//! Quantity follows the short-side rule `Q = min(D, S)`; the clearing
//! interval is the set of prices that support maximum trade while minimizing
//! the price-value distance. Generic discrete markets clear on an interval,
//! so the whole interval is reported and a canonical point (its midpoint)
//! is offered for convenience.

use crate::error::MarketError;
use crate::schedule::MarketSchedule;
use serde::{Deserialize, Serialize};

/// Closed price interval. `hi` may be `inf` for one-sided markets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceInterval {
    pub lo: f64,
    pub hi: f64,
}

impl PriceInterval {
    pub fn point(p: f64) -> Self {
        PriceInterval { lo: p, hi: p }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Distance from `p` to the interval; zero inside.
    pub fn gap(&self, p: f64) -> f64 {
        if p < self.lo {
            self.lo - p
        } else if p > self.hi {
            p - self.hi
        } else {
            0.0
        }
    }
}

/// Outcome of clearing a discrete market.
///
/// `interval` is `None` exactly when no mutually beneficial trade exists
/// (max value below min cost, or one side empty); quantity and surplus are
/// zero in that case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClearingResult {
    pub interval: Option<PriceInterval>,
    pub quantity: usize,
    pub max_surplus: f64,
}

impl ClearingResult {
    pub fn price_lo(&self) -> Option<f64> {
        self.interval.map(|i| i.lo)
    }

    pub fn price_hi(&self) -> Option<f64> {
        self.interval.map(|i| i.hi)
    }

    /// Midpoint of the clearing interval.
    pub fn canonical_price(&self) -> Option<f64> {
        self.interval.map(|i| i.midpoint())
    }
}

/// Clear a discrete market: maximum trade, the full interval of supporting
/// prices, and the maximum total surplus.
///
/// With values sorted descending and costs ascending, the traded quantity is
/// the largest `k` with `v_(k) >= c_(k)`; the supporting prices are bounded
/// below by the highest traded cost and the best untraded value, and above
/// by the lowest traded value and the best untraded cost. Surplus is the sum
/// of `v_(k) - c_(k)` over traded pairs, independent of where the price
/// falls inside the interval.
pub fn clear_discrete(market: &MarketSchedule) -> Result<ClearingResult, MarketError> {
    if market.is_empty() {
        return Err(MarketError::DegenerateMarket(
            "clearing needs at least one trader",
        ));
    }
    let values = market.values();
    let costs = market.costs();

    let mut quantity = 0;
    let mut max_surplus = 0.0;
    while quantity < values.len().min(costs.len()) && values[quantity] >= costs[quantity] {
        max_surplus += values[quantity] - costs[quantity];
        quantity += 1;
    }

    if quantity == 0 {
        return Ok(ClearingResult {
            interval: None,
            quantity: 0,
            max_surplus: 0.0,
        });
    }

    let next_value = values.get(quantity).copied().unwrap_or(0.0);
    let next_cost = costs.get(quantity).copied().unwrap_or(f64::INFINITY);
    let lo = costs[quantity - 1].max(next_value);
    let hi = values[quantity - 1].min(next_cost);
    debug_assert!(lo <= hi);

    Ok(ClearingResult {
        interval: Some(PriceInterval { lo, hi }),
        quantity,
        max_surplus,
    })
}
