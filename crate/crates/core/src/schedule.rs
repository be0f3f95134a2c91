//! Market state as reservation-price schedules.
//!
//! A market is nothing more than the multiset of buyer unit valuations and
//! seller unit costs. Demand and supply at a price are counts over those
//! multisets: `D(p) = #{i : v_i >= p}`, `S(p) = #{j : c_j <= p}`. A trader
//! indifferent at `p` counts as willing on both definitions, so the boundary
//! is inclusive on each side. Multi-unit traders are represented by repeated
//! entries; the counts are over units, not persons.

use crate::error::MarketError;
use serde::{Deserialize, Serialize};

/// Discrete market state: buyer values sorted descending, seller costs
/// sorted ascending (canonical form). Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSchedule {
    values: Vec<f64>,
    costs: Vec<f64>,
}

fn check_money(field: &'static str, xs: &[f64]) -> Result<(), MarketError> {
    for &x in xs {
        if !x.is_finite() {
            return Err(MarketError::invalid(field, format!("non-finite entry {x}")));
        }
        if x < 0.0 {
            return Err(MarketError::invalid(field, format!("negative entry {x}")));
        }
    }
    Ok(())
}

impl MarketSchedule {
    /// Build a schedule from raw (unordered) values and costs.
    ///
    /// Entries must be finite and non-negative. Input order is irrelevant;
    /// the stored form is canonical, so permutations of the same multisets
    /// produce identical schedules.
    pub fn new(values: Vec<f64>, costs: Vec<f64>) -> Result<Self, MarketError> {
        check_money("values", &values)?;
        check_money("costs", &costs)?;
        let mut values = values;
        let mut costs = costs;
        values.sort_by(|a, b| b.total_cmp(a));
        costs.sort_by(|a, b| a.total_cmp(b));
        Ok(MarketSchedule { values, costs })
    }

    /// Number of demanded units `n`.
    pub fn num_buyers(&self) -> usize {
        self.values.len()
    }

    /// Number of supplied units `m`.
    pub fn num_sellers(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty() && self.costs.is_empty()
    }

    /// Buyer valuations, sorted descending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Seller costs, sorted ascending.
    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn max_value(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn min_cost(&self) -> Option<f64> {
        self.costs.first().copied()
    }

    /// Quantity demanded at price `p`: the count of values at or above `p`.
    /// Nonincreasing in `p`; `demand_at(0) = n`.
    pub fn demand_at(&self, p: f64) -> usize {
        // values are descending, so the qualifying entries form a prefix
        self.values.partition_point(|&v| v >= p)
    }

    /// Quantity supplied at price `p`: the count of costs at or below `p`.
    /// Nondecreasing in `p`.
    pub fn supply_at(&self, p: f64) -> usize {
        self.costs.partition_point(|&c| c <= p)
    }

    /// Count of values strictly above `p`.
    pub fn demand_above(&self, p: f64) -> usize {
        self.values.partition_point(|&v| v > p)
    }

    /// Count of costs strictly below `p`.
    pub fn supply_below(&self, p: f64) -> usize {
        self.costs.partition_point(|&c| c < p)
    }

    /// Excess demand `D(p) - S(p)` in units.
    pub fn excess_demand_at(&self, p: f64) -> i64 {
        self.demand_at(p) as i64 - self.supply_at(p) as i64
    }

    /// Abundance ratio `alpha = m / n`: maximum supply over maximum demand.
    /// Its inverse is the scarcity of the good.
    pub fn abundance(&self) -> Result<f64, MarketError> {
        if self.values.is_empty() {
            return Err(MarketError::DegenerateMarket(
                "abundance needs at least one buyer",
            ));
        }
        Ok(self.costs.len() as f64 / self.values.len() as f64)
    }

    /// Remove one unit from each side by exact reservation price.
    /// Used to form residual markets transaction by transaction.
    pub(crate) fn remove_pair(&mut self, value: f64, cost: f64) -> Result<(), MarketError> {
        let vi = self
            .values
            .iter()
            .position(|&v| v == value)
            .ok_or_else(|| {
                MarketError::InconsistentLog(format!("buyer value {value} not in residual market"))
            })?;
        self.values.remove(vi);
        let ci = self.costs.iter().position(|&c| c == cost).ok_or_else(|| {
            MarketError::InconsistentLog(format!("seller cost {cost} not in residual market"))
        })?;
        self.costs.remove(ci);
        Ok(())
    }
}
