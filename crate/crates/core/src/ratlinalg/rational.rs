//! Exact rationals with an `i64` fast path.
//!
//! Values that fit in a pair of machine words are kept inline; anything larger
//! spills to `BigInt`. The representation is canonical (lowest terms, positive
//! denominator, inline whenever it fits), so derived equality and hashing are
//! value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(Box<(BigInt, BigInt)>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// Builds `num / den`. Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut num, mut den) = (num, den);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() && !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        if num.is_zero() {
            return Self::zero();
        }
        match (num.to_i64(), den.to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new((num, den)))),
        }
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num == 0 {
            return Self::zero();
        }
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new((BigInt::from(num), BigInt::from(den))))),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.0.clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.1.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.1.is_one(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.0.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Bits in numerator plus bits in denominator; the pivot heuristic
    /// prefers small values.
    pub fn bit_size(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => {
                (64 - n.unsigned_abs().leading_zeros()) as u64
                    + (64 - d.unsigned_abs().leading_zeros()) as u64
            }
            Repr::Big(b) => b.0.bits() + b.1.bits(),
        }
    }

    pub fn recip(&self) -> Rational {
        Rational::one() / self
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

fn big_parts(r: &Rational) -> (BigInt, BigInt) {
    (r.numer(), r.denom())
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rational::from_i128(a + c, b)
                } else {
                    Rational::from_i128(a * d + c * b, b * d)
                }
            }
            _ => {
                let (a, b) = big_parts(self);
                let (c, d) = big_parts(rhs);
                Rational::from_bigints(&a * &d + &c * &b, b * d)
            }
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => {
                let (a, b) = big_parts(self);
                let (c, d) = big_parts(rhs);
                Rational::from_bigints(a * c, b * d)
            }
        }
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Rational::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => {
                let (a, b) = big_parts(self);
                let (c, d) = big_parts(rhs);
                Rational::from_bigints(a * d, b * c)
            }
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_i128(-(*n as i128), *d as i128),
            Repr::Big(b) => Rational::from_bigints(-b.0.clone(), b.1.clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => {
                let (a, b) = big_parts(self);
                let (c, d) = big_parts(other);
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.1.is_one() => write!(f, "{}", b.0),
            Repr::Big(b) => write!(f, "{}/{}", b.0, b.1),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = d.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_bigints(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
        assert_eq!(Rational::new(0, -7), Rational::zero());
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(-6, 4).to_string(), "-3/2");
    }

    #[test]
    fn overflow_spills_to_bigint_and_back() {
        let big = Rational::from_integer(i64::MAX);
        let sq = &big * &big;
        assert!(sq.bit_size() > 64);
        let back = &sq / &big;
        assert_eq!(back, big);
        let min = Rational::from_integer(i64::MIN);
        assert_eq!(-(-min.clone()), min);
        assert_eq!((-&min).to_string(), "9223372036854775808");
    }

    #[test]
    fn parses_fraction_strings() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!(
            " -4 ".parse::<Rational>().unwrap(),
            Rational::from_integer(-4)
        );
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let huge = "123456789012345678901234567891/7";
        assert_eq!(huge.parse::<Rational>().unwrap().to_string(), huge);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms_hold(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn display_round_trips(a in small(), b in small()) {
            let x = &a * &b;
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
