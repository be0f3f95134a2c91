//! Large-market clearing and the scarcity curve.
//!
//! The equilibrium price of a large market solves `G(p*) = alpha F(p*)`,
//! with `G` the demand fraction and `F` the supply fraction. `G - alpha F`
//! crosses zero monotonically but need not be differentiable, so the root
//! finder is plain bracketing bisection. Along the abundance axis the
//! equilibrium traces `p* = f(alpha)` with
//! `f'(alpha) = F(p*) / (G'(p*) - alpha F'(p*))`, which is negative wherever
//! supply is in the money: prices fall with abundance, from the maximum
//! value under extreme scarcity to the minimum cost under extreme abundance.

use crate::dist::ContinuousMarket;
use crate::error::MarketError;

/// Bisection tolerances: `residual` bounds `|G - alpha F|` at the reported
/// root, `width` bounds the final bracket width.
#[derive(Debug, Clone, Copy)]
pub struct RootTol {
    pub residual: f64,
    pub width: f64,
}

impl Default for RootTol {
    fn default() -> Self {
        // The residual bound is the contract; the bracket is driven well
        // below it so that finite differences across nearby alphas stay
        // meaningful.
        RootTol {
            residual: 1e-9,
            width: 1e-12,
        }
    }
}

/// Upper end of the search bracket: the far tail of the value distribution
/// or the top of the cost support, whichever is higher.
fn bracket_hi(cm: &ContinuousMarket) -> f64 {
    let value_tail = cm.value_dist().quantile(0.99999);
    let cost_top = cm.cost_dist().upper_support();
    if cost_top.is_finite() {
        value_tail.max(cost_top)
    } else {
        value_tail
    }
}

/// Market-clearing price of a large market, by bisection on
/// `G(p) - alpha F(p)` over `[0, hi]`.
pub fn clear_continuous(cm: &ContinuousMarket) -> Result<f64, MarketError> {
    clear_continuous_with(cm, RootTol::default())
}

pub fn clear_continuous_with(cm: &ContinuousMarket, tol: RootTol) -> Result<f64, MarketError> {
    let mut lo = 0.0;
    let mut hi = bracket_hi(cm);
    let f_lo = cm.excess_fraction(lo);
    let f_hi = cm.excess_fraction(hi);
    if f_lo < 0.0 || f_hi > 0.0 {
        return Err(MarketError::NoCrossing { lo, hi, f_lo, f_hi });
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let f_mid = cm.excess_fraction(mid);
        if f_mid >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol.width && cm.excess_fraction(mid).abs() <= tol.residual {
            break;
        }
    }
    Ok(mid)
}

/// One point of a scarcity sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub alpha: f64,
    pub price: Result<f64, MarketError>,
}

/// Equilibrium price across an abundance grid, one clearing solve per alpha.
/// Points are returned in ascending alpha order; a point that fails to
/// bracket is reported as failed without aborting the sweep.
pub fn scarcity_curve(family: &ContinuousMarket, alphas: &[f64]) -> Vec<SweepPoint> {
    let mut grid: Vec<f64> = alphas.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.iter()
        .map(|&alpha| {
            let price = family
                .with_alpha(alpha)
                .and_then(|cm| clear_continuous(&cm));
            SweepPoint { alpha, price }
        })
        .collect()
}

/// Slope of the scarcity curve at one abundance, by the implicit function
/// theorem: `p'(alpha) = F(p*) / (G'(p*) - alpha F'(p*))`. Nonpositive, and
/// strictly negative wherever `F(p*) > 0`.
pub fn scarcity_derivative(family: &ContinuousMarket, alpha: f64) -> Result<f64, MarketError> {
    let cm = family.with_alpha(alpha)?;
    let p_star = clear_continuous(&cm)?;
    // A root within bracket resolution of the bottom of the cost support is
    // pinned there: the supply share vanishes and the curve is flat.
    if p_star <= cm.cost_dist().lower_support() + 1e-9 {
        return Ok(0.0);
    }
    let supply_share = cm.supply_fraction(p_star);
    // G' is minus the value density; F' is the cost density.
    let g_prime = -cm.value_dist().pdf(p_star);
    let f_prime = cm.cost_dist().pdf(p_star);
    let denom = g_prime - alpha * f_prime;
    if denom.abs() < 1e-300 {
        return Err(MarketError::DerivativeUndefined { price: p_star });
    }
    Ok(supply_share / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistributionSpec;

    fn figure_family(alpha: f64) -> ContinuousMarket {
        ContinuousMarket::new(
            DistributionSpec::exponential(5.0),
            DistributionSpec::exponential(11.0),
            alpha,
        )
        .unwrap()
    }

    fn scarce_family(alpha: f64) -> ContinuousMarket {
        ContinuousMarket::new(
            DistributionSpec::exponential(5.0),
            DistributionSpec::shifted_exponential(11.0, 2.0),
            alpha,
        )
        .unwrap()
    }

    #[test]
    fn balanced_exponential_market_clears_near_five() {
        let p = clear_continuous(&figure_family(1.0)).unwrap();
        assert!((p - 5.0).abs() < 0.05, "p* = {p}");
        let cm = figure_family(1.0);
        assert!(cm.excess_fraction(p).abs() <= 1e-9);
    }

    #[test]
    fn scarce_shifted_market_clears_near_oracle_root() {
        // independent bisection on the closed-form residual
        let f = |p: f64| (-p / 5.0).exp() - 0.01 * (1.0 - (-(p - 2.0) / 11.0).exp());
        let (mut lo, mut hi) = (2.0, 60.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((oracle - 23.8).abs() < 0.1, "oracle sits near 23.8, got {oracle}");

        let p = clear_continuous(&scarce_family(0.01)).unwrap();
        assert!(
            (p - oracle).abs() <= 0.01 * oracle,
            "p* = {p} vs oracle {oracle}"
        );
    }

    #[test]
    fn identical_sides_clear_at_the_median() {
        let d = DistributionSpec::exponential(7.0);
        let cm = ContinuousMarket::new(d, d, 1.0).unwrap();
        let p = clear_continuous(&cm).unwrap();
        // G(p*) = F(p*) forces both to 1/2, i.e. the common median
        let median = d.quantile(0.5);
        assert!((p - median).abs() < 1e-9, "p* = {p}, median = {median}");
        assert!((cm.demand_fraction(p) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn no_crossing_is_reported_with_bracket_values() {
        // costs sit entirely above any value the buyers could hold
        let cm = ContinuousMarket::new(
            DistributionSpec::uniform(0.0, 1.0),
            DistributionSpec::uniform(100.0, 101.0),
            5.0,
        )
        .unwrap();
        // G(hi) = 0 and F(hi) = ... both vanish on [0, hi]: residual never
        // turns negative, so there is no crossing to report.
        match clear_continuous(&cm) {
            Err(MarketError::NoCrossing { .. }) => {}
            other => panic!("expected NoCrossing, got {other:?}"),
        }
    }

    #[test]
    fn sweep_is_sorted_and_strictly_decreasing() {
        let family = figure_family(1.0);
        let alphas = [100.0, 0.01, 1.0, 10.0, 0.1];
        let sweep = scarcity_curve(&family, &alphas);
        let prices: Vec<f64> = sweep.iter().map(|p| *p.price.as_ref().unwrap()).collect();
        assert!(sweep.windows(2).all(|w| w[0].alpha < w[1].alpha));
        assert!(
            prices.windows(2).all(|w| w[0] > w[1]),
            "prices must fall with abundance: {prices:?}"
        );
    }

    #[test]
    fn extreme_abundance_pins_price_at_min_cost() {
        let family = scarce_family(1.0);
        let p = clear_continuous(&family.with_alpha(1e4).unwrap()).unwrap();
        let min_cost = family.cost_dist().lower_support();
        assert!(
            (p - min_cost).abs() <= 0.01 * min_cost,
            "p* = {p} should sit within 1% of min cost {min_cost}"
        );
    }

    #[test]
    fn extreme_scarcity_pins_price_at_max_value() {
        let family = ContinuousMarket::new(
            DistributionSpec::uniform(0.0, 9.0),
            DistributionSpec::uniform(1.0, 4.0),
            1.0,
        )
        .unwrap();
        let p = clear_continuous(&family.with_alpha(1e-4).unwrap()).unwrap();
        let max_value = family.value_dist().upper_support();
        assert!(
            (p - max_value).abs() <= 0.01 * max_value,
            "p* = {p} should sit within 1% of max value {max_value}"
        );
    }

    #[test]
    fn derivative_is_negative_and_matches_finite_differences() {
        let family = figure_family(1.0);
        let slope = scarcity_derivative(&family, 1.0).unwrap();
        assert!(slope < 0.0);

        // central finite difference of the clearing price, relative step
        let h = 1e-4;
        let up = clear_continuous(&family.with_alpha(1.0 + h).unwrap()).unwrap();
        let down = clear_continuous(&family.with_alpha(1.0 - h).unwrap()).unwrap();
        let fd = (up - down) / (2.0 * h);
        assert!(
            (slope - fd).abs() <= 1e-3 * fd.abs(),
            "implicit slope {slope} vs finite difference {fd}"
        );
    }

    #[test]
    fn derivative_vanishes_when_supply_is_out_of_the_money() {
        // alpha so large the price is pinned at the bottom of the cost
        // support, where F(p*) = 0
        let family = ContinuousMarket::new(
            DistributionSpec::uniform(0.0, 1.0),
            DistributionSpec::uniform(0.5, 2.0),
            1.0,
        )
        .unwrap();
        let slope = scarcity_derivative(&family, 1e6).unwrap();
        assert_eq!(slope, 0.0);
    }
}
