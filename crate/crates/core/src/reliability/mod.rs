//! System-assumption-coverage arithmetic.
//!
//! All exact tail probabilities are computed in exact rational arithmetic;
//! composite reliabilities (products of large powers) are enclosed in
//! rational intervals so that every asserted inequality is rigorous. The
//! quantities of interest are failure rates `nu = 1 - R` in the 1e-9..1e-40
//! range, so `nu` is what gets computed and reported, never `R` itself.

mod coverage;
mod interval;
mod tails;

pub use coverage::{
    broadcast_reliability, securecomm_reliability, BroadcastReliability, LayerFactor,
    SecurecommReliability, StackReliabilityParams,
};
pub use interval::RatInterval;
pub use tails::{q_exact_interval, 
    generic_third_bound, p_exact, q_exact, q_exact_truncated, stirling_tail_approx, tail_bound,
    tail_result, TailBound, TailResult,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReliabilityError {
    #[error("failure rate p = {0} must lie strictly between 0 and 1")]
    BadFailureRate(String),
    #[error("fault count t = {t} out of range 0..={s}")]
    BadFaultCount { t: u64, s: u64 },
    #[error("beta = {0} must exceed 1")]
    BadBeta(String),
    #[error("n = {n} not divisible by s = {s}")]
    NonDivisible { n: u64, s: u64 },
    #[error("inconsistent stack descriptor: {0}")]
    BadStack(String),
}

/// Model ceiling on the per-node failure rate; larger values are accepted
/// but flagged so callers can surface a warning.
pub fn p_within_model_range(p: &BigRational) -> bool {
    *p <= rational(1, 10_000)
}

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a failure rate given as a decimal string such as "1e-4" or "0.0001"
/// into an exact rational.
pub fn rational_from_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return None;
    }
    let digits: String = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let scale = |e: u32| num_traits::pow::pow(ten.clone(), e as usize);
    Some(if shift >= 0 {
        BigRational::new(num * scale(shift as u32), BigInt::one())
    } else {
        BigRational::new(num, scale((-shift) as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing() {
        assert_eq!(rational_from_decimal("1e-4").unwrap(), rational(1, 10_000));
        assert_eq!(rational_from_decimal("0.0001").unwrap(), rational(1, 10_000));
        assert_eq!(rational_from_decimal("0.729").unwrap(), rational(729, 1000));
        assert_eq!(rational_from_decimal("2.5e1").unwrap(), rational(25, 1));
        assert!(rational_from_decimal("abc").is_none());
    }

    #[test]
    fn model_range_flag() {
        assert!(p_within_model_range(&rational(1, 10_000)));
        assert!(p_within_model_range(&rational(1, 1_000_000)));
        assert!(!p_within_model_range(&rational(1, 100)));
    }
}
