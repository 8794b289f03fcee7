//! The exact scalar abstraction every slope, degree and bound is computed in.
//!
//! All formulas in this crate are field operations over ℚ, so the library is
//! written against [`Scalar`] rather than a concrete fraction type. The crate
//! root fixes the default instantiation to arbitrary-precision rationals; the
//! fixed-width `Ratio<i64>` / `Ratio<i128>` impls exist for fast fuzzing on
//! small inputs and panic if a value leaves their range.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// An exact ordered field element.
pub trait Scalar: Num + Signed + Clone + Ord + Debug + Send + Sync + 'static {
    /// Embeds an arbitrary-precision integer.
    fn from_bigint(n: &BigInt) -> Self;

    /// Builds `num / den`, reducing to lowest terms. `None` when `den == 0`
    /// or the value does not fit the representation.
    fn from_fraction(num: BigInt, den: BigInt) -> Option<Self>;

    /// Reduced numerator and positive denominator.
    fn to_fraction(&self) -> (BigInt, BigInt);

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn from_u64(n: u64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_fraction(BigInt::from(num), BigInt::from(den)).expect("zero denominator")
    }

    fn is_integer_valued(&self) -> bool {
        let (_, d) = self.to_fraction();
        d == BigInt::from(1)
    }

    fn max_with_zero(&self) -> Self {
        if self.is_negative() {
            Self::zero()
        } else {
            self.clone()
        }
    }
}

impl Scalar for Ratio<BigInt> {
    fn from_bigint(n: &BigInt) -> Self {
        Ratio::from_integer(n.clone())
    }

    fn from_fraction(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Ratio::new(num, den))
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

macro_rules! fixed_width_scalar {
    ($int:ty, $to:ident) => {
        impl Scalar for Ratio<$int> {
            fn from_bigint(n: &BigInt) -> Self {
                let v = n
                    .$to()
                    .unwrap_or_else(|| panic!("{n} out of range for Ratio<{}>", stringify!($int)));
                Ratio::from_integer(v)
            }

            fn from_fraction(num: BigInt, den: BigInt) -> Option<Self> {
                if den.is_zero() {
                    return None;
                }
                let r = Ratio::new(num, den);
                Some(Ratio::new_raw(r.numer().$to()?, r.denom().$to()?))
            }

            fn to_fraction(&self) -> (BigInt, BigInt) {
                (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }
        }
    };
}

fixed_width_scalar!(i64, to_i64);
fixed_width_scalar!(i128, to_i128);

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn fraction_is_reduced_with_positive_denominator() {
        let r = <Ratio<BigInt> as Scalar>::ratio(6, -4);
        let (n, d) = r.to_fraction();
        assert_eq!(n, BigInt::from(-3));
        assert_eq!(d, BigInt::from(2));

        let s = <Ratio<i128> as Scalar>::ratio(6, -4);
        assert_eq!(s.to_fraction(), (BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(<Ratio<BigInt> as Scalar>::from_fraction(BigInt::from(1), BigInt::from(0)).is_none());
        assert!(<Ratio<i64> as Scalar>::from_fraction(BigInt::from(1), BigInt::from(0)).is_none());
    }

    #[test]
    fn fixed_width_overflow_is_reported() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        assert!(<Ratio<i64> as Scalar>::from_fraction(big.clone(), BigInt::from(1)).is_none());
        assert!(<Ratio<i128> as Scalar>::from_fraction(big, BigInt::from(1)).is_some());
    }

    #[test]
    fn clamp_at_zero() {
        let neg = <Ratio<BigInt> as Scalar>::ratio(-1, 3);
        assert!(neg.max_with_zero().is_zero());
        let pos = <Ratio<BigInt> as Scalar>::ratio(5, 3);
        assert_eq!(pos.max_with_zero(), pos);
    }
}
