//! Binomial tail probabilities: exact partial sums, the geometric ratio
//! bound, and the Stirling single-term approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{rational, ReliabilityError};

fn check_p(p: &BigRational) -> Result<(), ReliabilityError> {
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(ReliabilityError::BadFailureRate(p.to_string()));
    }
    Ok(())
}

/// Exact `Q(t, s) = sum_{i=0}^{t} C(s,i) p^i (1-p)^{s-i}`: the probability of
/// at most `t` faults among `s` nodes under independent per-node failure
/// rate `p`. Monotone nondecreasing in `t`.
pub fn q_exact(t: u64, s: u64, p: &BigRational) -> Result<BigRational, ReliabilityError> {
    q_exact_terms(t, s, p, t + 1)
}

/// The truncation shortcut for very large `s`: sums only the first
/// `ceil(beta*p*s) + 1` terms (indices `0..=ceil(beta*p*s)`), which is where
/// essentially all of the mass sits when `p <= 1/(beta*s+1)`. Slightly
/// underestimates `Q`; callers opt in, the default everywhere is the full
/// sum.
pub fn q_exact_truncated(
    t: u64,
    s: u64,
    p: &BigRational,
    beta: &BigRational,
) -> Result<BigRational, ReliabilityError> {
    let bps = (beta * p * BigRational::from_integer(BigInt::from(s))).ceil();
    let cap = bps.to_integer().to_u64().unwrap_or(u64::MAX).saturating_add(1);
    q_exact_terms(t, s, p, cap.max(1))
}

fn q_exact_terms(
    t: u64,
    s: u64,
    p: &BigRational,
    max_terms: u64,
) -> Result<BigRational, ReliabilityError> {
    check_p(p)?;
    if t > s {
        return Err(ReliabilityError::BadFaultCount { t, s });
    }
    // Integer arithmetic over the common denominator b^s with p = a/b:
    // term_i = C(s,i) a^i (b-a)^{s-i}. Walking the terms with exact integer
    // steps avoids a rational gcd reduction per iteration, which dominates
    // the cost at large s.
    let a = p.numer().clone();
    let b = p.denom().clone();
    let b_minus_a = &b - &a;
    let mut term = pow_int(&b_minus_a, s);
    let mut sum = term.clone();
    for i in 1..=t.min(max_terms.saturating_sub(1)) {
        // term_i = term_{i-1} * (s-i+1) * a / (i * (b-a)), exactly divisible
        term = term * BigInt::from(s - i + 1) * &a / (BigInt::from(i) * &b_minus_a);
        sum += &term;
    }
    Ok(BigRational::new(sum, pow_int(&b, s)))
}

fn pow_int(base: &BigInt, mut e: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut acc = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result *= &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    result
}

/// Exact `P(t, s) = 1 - Q(t, s)`: probability of more than `t` faults.
pub fn p_exact(t: u64, s: u64, p: &BigRational) -> Result<BigRational, ReliabilityError> {
    Ok(BigRational::one() - q_exact(t, s, p)?)
}

/// `Q(t, s, p)` over an interval-valued `p` in (0, 1). `Q` is nonincreasing
/// in `p`, so the enclosure is `[Q(p.hi), Q(p.lo)]`.
pub fn q_exact_interval(
    t: u64,
    s: u64,
    p: &super::RatInterval,
) -> Result<super::RatInterval, ReliabilityError> {
    Ok(super::RatInterval::new(
        q_exact(t, s, &p.hi)?,
        q_exact(t, s, &p.lo)?,
    ))
}

fn pow_rat(base: &BigRational, mut e: u64) -> BigRational {
    let mut result = BigRational::one();
    let mut acc = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result *= &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    result
}

/// Exact binomial coefficient.
pub fn binomial(s: u64, k: u64) -> BigInt {
    if k > s {
        return BigInt::zero();
    }
    let k = k.min(s - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(s - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// The geometric-ratio tail bound: `P(t,s) < C(s,t) p^t (1-p)^{s-t} / (beta-1)`,
/// valid when `p <= 1/(beta*s + 1)`. `regime_ok` records whether that
/// precondition held; the bound value is reported either way.
#[derive(Debug, Clone)]
pub struct TailBound {
    pub bound: BigRational,
    pub regime_ok: bool,
}

pub fn tail_bound(
    t: u64,
    s: u64,
    p: &BigRational,
    beta: &BigRational,
) -> Result<TailBound, ReliabilityError> {
    check_p(p)?;
    if beta <= &BigRational::one() {
        return Err(ReliabilityError::BadBeta(beta.to_string()));
    }
    if t > s {
        return Err(ReliabilityError::BadFaultCount { t, s });
    }
    let q = BigRational::one() - p;
    let term = BigRational::from_integer(binomial(s, t)) * pow_rat(p, t) * pow_rat(&q, s - t);
    let bound = term / (beta - BigRational::one());
    let regime_ok =
        p <= &(BigRational::one() / (beta * BigRational::from_integer(BigInt::from(s)) + BigRational::one()));
    Ok(TailBound { bound, regime_ok })
}

/// Stirling single-term form `sqrt(1/(2 pi t)) (e s p / t)^t (1-p)^{s-t}`,
/// the shape used for all the closed-form displays. `t = 0` degenerates to
/// the exact `(1-p)^s`.
pub fn stirling_tail_approx(t: u64, s: u64, p: f64) -> f64 {
    let q = 1.0 - p;
    if t == 0 {
        return q.powi(s as i32);
    }
    let t_f = t as f64;
    let s_f = s as f64;
    (1.0 / (2.0 * std::f64::consts::PI * t_f)).sqrt()
        * (std::f64::consts::E * s_f * p / t_f).powf(t_f)
        * q.powf(s_f - t_f)
}

/// The generic-form specializations: `(3 e p)^{s/3}` for scale `s`, and
/// `(6 e p)^{s/3}` for the doubled scale `2s`.
pub fn generic_third_bound(s: u64, p: f64, doubled: bool) -> f64 {
    let base = if doubled { 6.0 } else { 3.0 };
    (base * std::f64::consts::E * p).powf(s as f64 / 3.0)
}

/// Bundled exact / approximation / bound views of one tail.
#[derive(Debug, Clone)]
pub struct TailResult {
    pub exact: BigRational,
    pub approx: f64,
    pub upper_bound: BigRational,
    pub regime_ok: bool,
}

pub fn tail_result(
    t: u64,
    s: u64,
    p: &BigRational,
    beta: &BigRational,
) -> Result<TailResult, ReliabilityError> {
    let exact = p_exact(t, s, p)?;
    let b = tail_bound(t, s, p, beta)?;
    Ok(TailResult {
        exact,
        approx: stirling_tail_approx(t, s, p.to_f64().unwrap_or(f64::NAN)),
        upper_bound: b.bound,
        regime_ok: b.regime_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reliability::rational_from_decimal;

    fn p4() -> BigRational {
        rational(1, 10_000)
    }

    #[test]
    fn full_sum_is_one() {
        for s in [3u64, 7, 16] {
            let q = q_exact(s, s, &rational(1, 10)).unwrap();
            assert_eq!(q, BigRational::one());
        }
    }

    #[test]
    fn zero_tolerance_is_q_power() {
        let q = q_exact(0, 3, &rational(1, 10)).unwrap();
        assert_eq!(q, rational_from_decimal("0.729").unwrap());
    }

    #[test]
    fn q_plus_p_is_one() {
        let p = rational(3, 1000);
        for (t, s) in [(0u64, 5u64), (2, 7), (5, 16), (4, 9)] {
            let q = q_exact(t, s, &p).unwrap();
            let tail = p_exact(t, s, &p).unwrap();
            assert_eq!(q + tail, BigRational::one());
        }
    }

    #[test]
    fn exact_small_tail_matches_oracle() {
        // independent route: complement sum over the high terms
        let s = 7u64;
        let t = 2u64;
        let p = p4();
        let q = BigRational::one() - &p;
        let mut oracle = BigRational::zero();
        for i in (t + 1)..=s {
            oracle += BigRational::from_integer(binomial(s, i))
                * pow_rat(&p, i)
                * pow_rat(&q, s - i);
        }
        let tail = p_exact(t, s, &p).unwrap();
        assert_eq!(tail, oracle);
        // frozen decimal: 3.49895e-11, and under the 40 p^2 display
        let v = tail.to_f64().unwrap();
        assert!((v - 3.49895012599e-11).abs() < 1e-16);
        assert!(tail < rational(40, 1) * &p * &p);
    }

    #[test]
    fn monotonicity() {
        let p = p4();
        // nonincreasing in t
        let mut prev = p_exact(0, 16, &p).unwrap();
        for t in 1..=16 {
            let cur = p_exact(t, 16, &p).unwrap();
            assert!(cur <= prev);
            prev = cur;
        }
        // nondecreasing in s for fixed t
        assert!(p_exact(2, 7, &p).unwrap() <= p_exact(2, 14, &p).unwrap());
        // nondecreasing in p
        assert!(
            p_exact(2, 7, &rational(1, 100_000)).unwrap() <= p_exact(2, 7, &p).unwrap()
        );
    }

    #[test]
    fn ratio_bound_dominates_exact() {
        let beta = rational(2, 1);
        let p = p4();
        let b = tail_bound(2, 7, &p, &beta).unwrap();
        assert!(b.regime_ok);
        assert!(p_exact(2, 7, &p).unwrap() < b.bound);
        // bound itself sits under the paper-style 160 p^2 display at 2s
        let b14 = tail_bound(2, 14, &p, &beta).unwrap();
        assert!(b14.bound < rational(160, 1) * &p * &p);
    }

    #[test]
    fn regime_flag_follows_precondition() {
        let beta = rational(2, 1);
        // p > 1/(2s+1) clears the flag
        let big_p = rational(1, 10);
        let b = tail_bound(2, 7, &big_p, &beta).unwrap();
        assert!(!b.regime_ok);
    }

    #[test]
    fn stirling_forms() {
        // t = 0 is exact
        assert!((stirling_tail_approx(0, 5, 0.01) - 0.99f64.powi(5)).abs() < 1e-15);
        // the t-th-term form tracks the exact t-th term within a small factor
        let p = 1e-4;
        let term = binomial(7, 2).to_f64().unwrap() * p * p * (1.0 - p).powi(5);
        let approx = stirling_tail_approx(2, 7, p);
        let ratio = approx / term;
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
        // and dominates the exact tail, which starts one term later
        let exact = p_exact(2, 7, &p4()).unwrap().to_f64().unwrap();
        assert!(approx > exact);
    }

    #[test]
    fn third_power_bounds_dominate_stirling() {
        for s in [9u64, 15, 30, 60] {
            let p = 1e-4;
            let t = s / 3;
            assert!(stirling_tail_approx(t, s, p) <= generic_third_bound(s, p, false));
            assert!(stirling_tail_approx(t, 2 * s, p) <= generic_third_bound(s, p, true));
        }
    }

    #[test]
    fn truncated_sum_underestimates() {
        let p = p4();
        let beta = rational(2, 1);
        let full = q_exact(5, 16, &p).unwrap();
        let truncated = q_exact_truncated(5, 16, &p, &beta).unwrap();
        assert!(truncated <= full);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(q_exact(8, 7, &p4()).is_err());
        assert!(q_exact(2, 7, &rational(0, 1)).is_err());
        assert!(q_exact(2, 7, &rational(1, 1)).is_err());
        assert!(tail_bound(2, 7, &p4(), &rational(1, 1)).is_err());
    }
}
