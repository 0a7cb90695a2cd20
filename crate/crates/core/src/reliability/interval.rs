//! Rational interval arithmetic for rigorous enclosure of reliability
//! expressions. Only what the coverage formulas need: add, sub, mul,
//! one-minus, and integer powers (exact by squaring when cheap, truncated
//! alternating binomial series with a remainder pad when the exponent is
//! huge and the base is close to 1).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn exact(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn one() -> Self {
        Self::exact(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::exact(BigRational::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().expect("nonempty").clone();
        let hi = candidates.iter().max().expect("nonempty").clone();
        RatInterval { lo, hi }
    }

    pub fn one_minus(&self) -> Self {
        RatInterval {
            lo: BigRational::one() - &self.hi,
            hi: BigRational::one() - &self.lo,
        }
    }

    /// Clamp into [0, 1]; the coverage quantities all live there.
    pub fn clamp_unit(&self) -> Self {
        let clamp = |v: &BigRational| {
            if v.is_negative() {
                BigRational::zero()
            } else if *v > BigRational::one() {
                BigRational::one()
            } else {
                v.clone()
            }
        };
        RatInterval {
            lo: clamp(&self.lo),
            hi: clamp(&self.hi),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `self^exp` for a nonnegative base interval.
    ///
    /// Exact squaring is used when the operand size times the exponent stays
    /// small; otherwise the base is rewritten as `1 - p` and the alternating
    /// binomial series in `p` is summed with a rigorous remainder pad. The
    /// series path requires `exp * p < 1/2`, which holds in every coverage
    /// regime where exact squaring is too expensive (p tiny, huge exponent);
    /// if it does not hold, exact squaring is used regardless of cost.
    pub fn pow(&self, exp: u64) -> Self {
        debug_assert!(!self.lo.is_negative());
        if exp == 0 {
            return Self::one();
        }
        // keep exact results under ~0.5 Mbit: rational reduction cost is
        // quadratic in the operand size
        let operand_bits = self.hi.numer().bits() + self.hi.denom().bits();
        let exact_cost = operand_bits.saturating_mul(exp);
        if exact_cost <= 1 << 19 {
            return self.pow_exact(exp);
        }

        let p = self.one_minus().clamp_unit();
        let exp_rat = BigRational::from_integer(BigInt::from(exp));
        if !p.hi.is_negative() && &p.hi * &exp_rat < super::rational(1, 2) {
            return pow_one_minus_series(&p, exp).one_minus().clamp_unit();
        }
        self.pow_exact(exp)
    }

    /// Outward-round both bounds to `sig` significant decimal digits.
    /// Widens the interval, so every enclosure stays rigorous; keeps the
    /// denominators small enough that rational reduction stays cheap.
    pub fn round_outward(&self, sig: u32) -> Self {
        RatInterval {
            lo: round_decimal(&self.lo, sig, false),
            hi: round_decimal(&self.hi, sig, true),
        }
    }

    fn pow_exact(&self, exp: u64) -> Self {
        let pow = |base: &BigRational| -> BigRational {
            let mut result = BigRational::one();
            let mut acc = base.clone();
            let mut e = exp;
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
        };
        // x^n monotone for x >= 0
        RatInterval {
            lo: pow(&self.lo),
            hi: pow(&self.hi),
        }
    }
}

/// Enclosure of `(1 - p)^exp` as `1 - result`, i.e. returns an enclosure of
/// `1 - (1-p)^exp = sum_{k>=1} (-1)^{k+1} C(exp,k) p^k`.
///
/// Requires `exp * p.hi < 1/2`, so consecutive terms at least halve and the
/// remainder after truncation is bounded by the first omitted term.
fn pow_one_minus_series(p: &RatInterval, exp: u64) -> RatInterval {
    let mut sum = RatInterval::zero();
    // term_k = C(exp, k) * p^k as an interval; stop once negligible
    let mut coeff = BigRational::one(); // C(exp, k)
    let mut p_pow = RatInterval::one();
    let mut k: u64 = 0;
    let eps = tiny_threshold();
    loop {
        k += 1;
        coeff *= BigRational::new(BigInt::from(exp - (k - 1)), BigInt::from(k));
        p_pow = p_pow.mul(p);
        let term = RatInterval {
            lo: &coeff * &p_pow.lo,
            hi: &coeff * &p_pow.hi,
        };
        if k % 2 == 1 {
            sum = sum.add(&term);
        } else {
            sum = sum.sub(&term);
        }
        // next term bound: C(exp,k+1) p^{k+1} <= term.hi * exp * p.hi
        let next_bound = &term.hi * BigRational::from_integer(BigInt::from(exp)) * &p.hi;
        if next_bound < eps || k >= exp {
            if k < exp {
                // pad by the remainder enclosure
                sum = RatInterval {
                    lo: &sum.lo - &next_bound,
                    hi: &sum.hi + &next_bound,
                };
            }
            return sum.clamp_unit();
        }
    }
}

/// Absolute truncation threshold: far below anything the coverage
/// comparisons can distinguish.
fn tiny_threshold() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow::pow(BigInt::from(10), 80))
}

fn ten_pow(e: u32) -> BigInt {
    num_traits::pow::pow(BigInt::from(10), e as usize)
}

/// Floor of log10(|x|) for nonzero x.
fn decimal_exponent(x: &BigRational) -> i64 {
    debug_assert!(!x.is_zero());
    let abs = x.abs();
    // bit-length estimate, then correct
    let mut e = ((abs.numer().bits() as i64 - abs.denom().bits() as i64) as f64
        * std::f64::consts::LOG10_2)
        .floor() as i64;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(ten_pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), ten_pow((-e) as u32))
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }
    e
}

/// Round `x >= 0` to `sig` significant decimal digits, toward zero
/// (`up = false`) or away from zero (`up = true`).
fn round_decimal(x: &BigRational, sig: u32, up: bool) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    debug_assert!(!x.is_negative());
    let e = decimal_exponent(x);
    // scale so that x * 10^k has `sig` integer digits
    let k = sig as i64 - 1 - e;
    let (scaled_num, scaled_den) = if k >= 0 {
        (x.numer() * ten_pow(k as u32), x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() * ten_pow((-k) as u32))
    };
    let mut m = &scaled_num / &scaled_den;
    if up && &m * &scaled_den != scaled_num {
        m += BigInt::one();
    }
    if k >= 0 {
        BigRational::new(m, ten_pow(k as u32))
    } else {
        BigRational::from_integer(m * ten_pow((-k) as u32))
    }
}
