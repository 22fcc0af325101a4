//! Exact rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision exact rational.
pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `floor(q * 2^64)` for `q` in `[0, 1]`, used as an inclusive-exclusive
/// threshold against a uniformly drawn `u64`.
pub(crate) fn u64_threshold(q: &Rational) -> u128 {
    if q.is_zero() || q.is_negative() {
        return 0;
    }
    let scaled = q * Rational::from_integer(BigInt::one() << 64u32);
    let floor = scaled.floor().to_integer();
    floor.to_u128().unwrap_or(1u128 << 64).min(1u128 << 64)
}
