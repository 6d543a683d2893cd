//! Counting bounds on `m*` and the entropy-based rate formulas.
//!
//! Integer bounds use exact big-integer set sizes. Rates are `f64`; compare
//! them with [`RATE_TOLERANCE`].

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sets::{class_size, sumset_weights, weight_set_size, SymmetricClass, WeightSet};

pub const RATE_TOLERANCE: f64 = 1e-9;

/// Label attached to every rate that stands in for the unknown optimal code rate.
pub const RATE_PROXY: &str = "GV-proxy";

fn big_to_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    #[serde(serialize_with = "big_to_string")]
    pub set_size: BigUint,
    #[serde(serialize_with = "big_to_string")]
    pub sumset_size: BigUint,
    pub lower: usize,
    pub upper: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rates: Option<RateReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjectured_rate: Option<f64>,
    pub proxy: &'static str,
}

/// `floor(log2 x)` for `x >= 1`.
pub fn floor_log2(x: &BigUint) -> usize {
    debug_assert!(!x.is_zero());
    (x.bits() - 1) as usize
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: &BigUint) -> usize {
    let f = floor_log2(x);
    if x.count_ones() == 1 {
        f
    } else {
        f + 1
    }
}

/// Injectivity bounds for a class `S`:
/// `ceil(log2 |S|) <= m*(S) <= floor(log2(|S+S| - 1)) + 1`.
///
/// When `|S+S| = 1` (the singleton) the upper bound is clamped to the lower one.
pub fn lemma1_bounds(s: &SymmetricClass) -> Result<BoundsReport> {
    if s.weights().is_empty() {
        return Err(Error::EmptySet);
    }
    let n = s.n();
    let set_size = class_size(s);
    let sums = sumset_weights(s.weights(), s.weights(), n)?;
    let sumset_size = weight_set_size(&sums);
    let lower = ceil_log2(&set_size);
    let upper = if sumset_size > BigUint::one() { floor_log2(&(&sumset_size - 1u32)) + 1 } else { lower };
    Ok(BoundsReport { n, set_size, sumset_size, lower, upper, rates: None })
}

/// Bounds on the least rank of a matrix whose kernel misses every vector
/// with weight in `forbidden`.
///
/// Upper: the greedy argument gives `m* <= floor(log2 |F|) + 1` (capped at `n`).
/// Lower: if `{1..t}` is forbidden, such a matrix is injective on
/// `B(0^n, floor(t/2))`, so `m* >= ceil(log2 |B(0^n, floor(t/2))|)`; any
/// nonempty forbidden set needs at least one row.
///
/// `set_size` is `|F|`; `sumset_size` is the size of the ball used for the lower bound.
pub fn distinguishing_bounds(forbidden: &WeightSet) -> BoundsReport {
    let n = forbidden.n();
    let size = weight_set_size(forbidden);
    if size.is_zero() {
        return BoundsReport { n, set_size: size, sumset_size: BigUint::one(), lower: 0, upper: 0, rates: None };
    }
    let upper = (floor_log2(&size) + 1).min(n);
    let t = (1..=n).take_while(|&w| forbidden.contains(w)).count();
    let ball = weight_set_size(&WeightSet::interval(0, t / 2, n).expect("t <= n"));
    let lower = ceil_log2(&ball).max(1);
    BoundsReport { n, set_size: size, sumset_size: ball, lower, upper, rates: None }
}

fn check_unit(x: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::DomainError(format!("{name}={x}")));
    }
    Ok(())
}

/// Binary entropy without flattening; symmetric about `1/2`.
pub fn raw_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Binary entropy on `[0, 1/2]`, flattened to `1` on `(1/2, 1]`.
pub fn entropy(x: f64) -> Result<f64> {
    check_unit(x, "x")?;
    if x > 0.5 {
        return Ok(1.0);
    }
    Ok(raw_entropy(x))
}

/// `(1 - alpha) * H(beta / (1 - alpha))` with the flattened entropy as a
/// stand-in for the optimal code rate; equals `1 - alpha` once the ratio passes `1/2`.
pub fn conjecture_rate(alpha: f64, beta: f64) -> Result<f64> {
    check_unit(alpha, "alpha")?;
    check_unit(beta, "beta")?;
    if alpha >= beta {
        return Err(Error::DomainError(format!("alpha={alpha} must be below beta={beta}")));
    }
    if alpha == 0.0 {
        return entropy(beta);
    }
    let scale = 1.0 - alpha;
    Ok(scale * entropy((beta / scale).min(1.0))?)
}

pub fn rate_report(delta: Option<f64>, alpha_beta: Option<(f64, f64)>) -> Result<RateReport> {
    let entropy_value = delta.map(entropy).transpose()?;
    let conjectured = alpha_beta.map(|(a, b)| conjecture_rate(a, b)).transpose()?;
    Ok(RateReport {
        delta,
        entropy: entropy_value,
        alpha: alpha_beta.map(|p| p.0),
        beta: alpha_beta.map(|p| p.1),
        conjectured_rate: conjectured,
        proxy: RATE_PROXY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_bounds() {
        let s = SymmetricClass::exact_weight(6, 0).unwrap();
        let r = lemma1_bounds(&s).unwrap();
        assert_eq!((r.lower, r.upper), (0, 0));
    }

    #[test]
    fn ball_bounds() {
        let s = SymmetricClass::ball_at_zero(10, 1).unwrap();
        let r = lemma1_bounds(&s).unwrap();
        assert_eq!(r.set_size, BigUint::from(11u32));
        assert_eq!(r.sumset_size, BigUint::from(56u32));
        assert_eq!((r.lower, r.upper), (4, 6));
    }

    #[test]
    fn empty_class_rejected() {
        let s = SymmetricClass::new(WeightSet::empty(4).unwrap());
        assert_eq!(lemma1_bounds(&s), Err(Error::EmptySet));
    }

    #[test]
    fn log_helpers() {
        let b = |x: u32| BigUint::from(x);
        assert_eq!((floor_log2(&b(1)), ceil_log2(&b(1))), (0, 0));
        assert_eq!((floor_log2(&b(8)), ceil_log2(&b(8))), (3, 3));
        assert_eq!((floor_log2(&b(55)), ceil_log2(&b(55))), (5, 6));
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(0.5).unwrap() - 1.0).abs() < RATE_TOLERANCE);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        let h = entropy(0.25).unwrap();
        assert!((h - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!(h < 7.0 / 8.0 - RATE_TOLERANCE);
        assert_eq!(entropy(0.75).unwrap(), 1.0);
        assert!(entropy(-0.1).is_err());
        assert!(entropy(1.5).is_err());
    }

    #[test]
    fn raw_entropy_is_symmetric() {
        for i in 0..=500 {
            let x = i as f64 / 1000.0;
            assert!((raw_entropy(x) - raw_entropy(1.0 - x)).abs() < RATE_TOLERANCE);
        }
    }

    #[test]
    fn conjecture_rate_values() {
        for i in 1..=100 {
            let beta = i as f64 / 100.0;
            assert_eq!(conjecture_rate(0.0, beta).unwrap(), entropy(beta).unwrap());
        }
        // ratio 2/3 lies on the flat branch
        assert!((conjecture_rate(0.25, 0.5).unwrap() - 0.75).abs() < RATE_TOLERANCE);
        assert!((conjecture_rate(0.2, 0.6).unwrap() - 0.8).abs() < RATE_TOLERANCE);
        assert!((conjecture_rate(0.1, 0.3).unwrap() - 0.9 * raw_entropy(0.3 / 0.9)).abs() < RATE_TOLERANCE);
        assert!(conjecture_rate(0.5, 0.5).is_err());
        assert!(conjecture_rate(0.6, 0.5).is_err());
    }

    #[test]
    fn conjecture_rate_nonincreasing_in_alpha() {
        for bi in 1..=100 {
            let beta = bi as f64 / 100.0;
            let mut prev = f64::INFINITY;
            for ai in 0..100 {
                let alpha = ai as f64 / 100.0 * beta;
                let r = conjecture_rate(alpha, beta).unwrap();
                assert!(r <= prev + RATE_TOLERANCE, "alpha={alpha} beta={beta}");
                prev = r;
            }
        }
    }

    #[test]
    fn distinguishing_bounds_examples() {
        let r = distinguishing_bounds(&WeightSet::interval(3, 3, 4).unwrap());
        assert_eq!((r.lower, r.upper), (1, 3));
        let r = distinguishing_bounds(&WeightSet::interval(1, 2, 7).unwrap());
        // ball of radius 1 has 8 points; |F| = 28
        assert_eq!((r.lower, r.upper), (3, 5));
        let r = distinguishing_bounds(&WeightSet::empty(5).unwrap());
        assert_eq!((r.lower, r.upper), (0, 0));
    }
}
