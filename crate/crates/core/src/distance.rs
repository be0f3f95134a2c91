//! The price-value distance `V(p)` and realized surplus.
//!
//! `V(p)` sums the gaps between the standing price and every in-the-money
//! reservation: values at or above `p` and costs at or below `p`. It is
//! piecewise linear and convex in `p`, with slope `S(p) - D(p)` between
//! breakpoints, so it can also be written as `V(0)` plus the integral of
//! excess supply — both routes are implemented and must agree. Its argmin
//! interval is the clearing interval: a competitive equilibrium price is a
//! generalized median of the traders' reservations.

use crate::error::MarketError;
use crate::schedule::MarketSchedule;
use crate::session::SessionLog;

/// Direct evaluation of the distance: the two reservation-gap sums.
pub fn v_direct(market: &MarketSchedule, p: f64) -> f64 {
    let demand_gap: f64 = market
        .values()
        .iter()
        .filter(|&&v| v >= p)
        .map(|&v| (v - p).abs())
        .sum();
    let supply_gap: f64 = market
        .costs()
        .iter()
        .filter(|&&c| c <= p)
        .map(|&c| (c - p).abs())
        .sum();
    demand_gap + supply_gap
}

/// Integral evaluation of the distance: `V(0)` plus the integral of
/// `S(x) - D(x)` over `[0, p]`, summed exactly between breakpoints.
pub fn v_integral(market: &MarketSchedule, p: f64) -> f64 {
    debug_assert!(p >= 0.0);
    // At p = 0 no cost term contributes weight, so V(0) is the sum of values.
    let mut total: f64 = market.values().iter().sum();
    if p <= 0.0 {
        return total;
    }
    let mut ends: Vec<f64> = market
        .values()
        .iter()
        .chain(market.costs())
        .copied()
        .filter(|&b| b > 0.0 && b < p)
        .collect();
    ends.sort_by(f64::total_cmp);
    ends.push(p);

    let mut left = 0.0;
    for right in ends {
        if right > left {
            // S and D are constant on the open segment (left, right)
            let supply = market.supply_at(left) as f64;
            let demand = market.demand_at(right) as f64;
            total += (supply - demand) * (right - left);
            left = right;
        }
    }
    total
}

/// Exact argmin interval of `V`, found where the slope `S - D` changes sign.
/// The upper end is `inf` when the market has no sellers.
pub fn v_argmin(market: &MarketSchedule) -> Result<(f64, f64), MarketError> {
    let profile = VProfile::new(market)?;
    Ok(profile.argmin())
}

/// Total surplus realized by a session's executed trades: the sum of
/// `value - cost` over transactions, independent of how each price split it.
pub fn realized_surplus(log: &SessionLog) -> f64 {
    log.transactions
        .iter()
        .map(|t| t.buyer_value - t.seller_cost)
        .sum()
}

/// Prepared evaluation of `V`: sorted breakpoints with prefix sums for
/// `O(log n)` queries, plus the exact argmin interval.
#[derive(Debug, Clone)]
pub struct VProfile {
    breakpoints: Vec<f64>,
    v_at: Vec<f64>,
    argmin_lo: f64,
    argmin_hi: f64,
    // values descending / costs ascending with prefix sums
    values: Vec<f64>,
    value_prefix: Vec<f64>,
    costs: Vec<f64>,
    cost_prefix: Vec<f64>,
}

impl VProfile {
    pub fn new(market: &MarketSchedule) -> Result<Self, MarketError> {
        if market.is_empty() {
            return Err(MarketError::DegenerateMarket(
                "price-value distance of an empty market is identically zero",
            ));
        }
        let values = market.values().to_vec();
        let costs = market.costs().to_vec();
        let prefix = |xs: &[f64]| {
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(xs.len() + 1);
            out.push(0.0);
            for &x in xs {
                acc += x;
                out.push(acc);
            }
            out
        };
        let value_prefix = prefix(&values);
        let cost_prefix = prefix(&costs);

        let mut breakpoints: Vec<f64> = values.iter().chain(&costs).copied().collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        // Slopes around a candidate price: the right slope counts supply at p
        // against demand strictly above p, the left slope counts supply
        // strictly below p against demand at p. V is convex, so the argmin is
        // the closed set where the left slope is <= 0 and the right is >= 0.
        let right_slope =
            |p: f64| market.supply_at(p) as i64 - market.demand_above(p) as i64;
        let left_slope =
            |p: f64| market.supply_below(p) as i64 - market.demand_at(p) as i64;

        let mut candidates = Vec::with_capacity(breakpoints.len() + 1);
        if breakpoints.first().copied() != Some(0.0) {
            candidates.push(0.0);
        }
        candidates.extend_from_slice(&breakpoints);

        let argmin_lo = candidates
            .iter()
            .copied()
            .find(|&p| right_slope(p) >= 0)
            .expect("supply saturates, so the right slope ends nonnegative");
        let argmin_hi = if costs.is_empty() {
            f64::INFINITY
        } else {
            candidates
                .iter()
                .copied()
                .rev()
                .find(|&p| left_slope(p) <= 0)
                .expect("the left slope starts at -n <= 0")
        };
        debug_assert!(argmin_lo <= argmin_hi);

        let mut profile = VProfile {
            breakpoints,
            v_at: Vec::new(),
            argmin_lo,
            argmin_hi,
            values,
            value_prefix,
            costs,
            cost_prefix,
        };
        profile.v_at = profile.breakpoints.iter().map(|&b| profile.value(b)).collect();
        Ok(profile)
    }

    /// `V(p)` via prefix sums; exact for any price.
    pub fn value(&self, p: f64) -> f64 {
        let k = self.values.partition_point(|&v| v >= p);
        let t = self.costs.partition_point(|&c| c <= p);
        (self.value_prefix[k] - k as f64 * p) + (t as f64 * p - self.cost_prefix[t])
    }

    /// Merged, deduplicated reservation prices.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `V` evaluated at each breakpoint.
    pub fn v_at_breakpoints(&self) -> &[f64] {
        &self.v_at
    }

    pub fn argmin(&self) -> (f64, f64) {
        (self.argmin_lo, self.argmin_hi)
    }

    pub fn min_value(&self) -> f64 {
        self.value(self.argmin_lo)
    }
}
