//! The least common period of a set of sampling rates.

use num_integer::Integer;
use num_rational::Ratio;

use crate::scalar::Scalar;

/// Denominator granularity used when a rate is not a small rational.
const ROUNDING_GRID: f64 = 1000.0;
const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodChoice<S> {
    pub period: S,
    /// False when some rate had to be rounded up to a rational.
    pub exact: bool,
}

fn as_ratio(x: f64) -> Option<Ratio<i64>> {
    let r = Ratio::<i64>::approximate_float(x)?;
    let back = *r.numer() as f64 / *r.denom() as f64;
    (*r.denom() <= MAX_DENOMINATOR && (back - x).abs() <= 1e-12 * x.abs().max(1.0)).then_some(r)
}

/// Least `T > 0` with every `rate·T` integral; zero rates are ignored and an
/// empty set gives `T = 1`.
pub fn least_period<S: Scalar>(rates: &[S]) -> PeriodChoice<S> {
    let mut exact = true;
    let mut num_gcd: i64 = 0;
    let mut den_lcm: i64 = 1;
    for &r in rates {
        let x = r.to_f64_lossy();
        if x <= 0.0 {
            continue;
        }
        let ratio = as_ratio(x).unwrap_or_else(|| {
            exact = false;
            log::warn!("rate {x} is not a small rational; rounding up to a multiple of 1/{ROUNDING_GRID}");
            Ratio::new((x * ROUNDING_GRID).ceil() as i64, ROUNDING_GRID as i64)
        });
        num_gcd = num_gcd.gcd(ratio.numer());
        den_lcm = den_lcm.lcm(ratio.denom());
    }
    let period = if num_gcd == 0 {
        S::one()
    } else {
        S::lit(den_lcm as f64 / num_gcd as f64)
    };
    PeriodChoice { period, exact }
}

/// `rate·period` as an integer count, if it is one.
pub fn points_per_period<S: Scalar>(rate: S, period: S) -> Option<usize> {
    let x = rate * period;
    let r = x.round();
    ((x - r).abs() <= S::lit(1e-9) * x.abs().max(S::one()) && r >= S::zero()).then(|| r.to_usize().unwrap_or(0))
}
