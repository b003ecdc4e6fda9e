//! Arbitrary-precision integers with an inline fast path for values that fit
//! in an `i64`. Almost every coefficient produced by the trek rule is tiny, so
//! the heap-backed representation is only reached on overflow.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub enum Integer {
    Small(i64),
    /// Invariant: never holds a value that fits in `i64`.
    Big(BigInt),
}

impl Integer {
    pub const ZERO: Integer = Integer::Small(0);
    pub const ONE: Integer = Integer::Small(1);

    fn from_big(b: BigInt) -> Integer {
        match b.to_i64() {
            Some(v) => Integer::Small(v),
            None => Integer::Big(b),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Integer::Small(v) => BigInt::from(*v),
            Integer::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Integer::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Integer::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Integer::Small(v) => *v < 0,
            Integer::Big(b) => b.is_negative(),
        }
    }

    pub fn abs(&self) -> Integer {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Integer::Small(v) => *v as f64,
            Integer::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// `self / d` when `d` divides `self` exactly; `None` otherwise or if `d == 0`.
    pub fn div_exact(&self, d: &Integer) -> Option<Integer> {
        if d.is_zero() {
            return None;
        }
        match (self, d) {
            (Integer::Small(a), Integer::Small(b)) => {
                if let Some(r) = a.checked_rem(*b) {
                    if r != 0 {
                        return None;
                    }
                    if let Some(q) = a.checked_div(*b) {
                        return Some(Integer::Small(q));
                    }
                }
                self.div_exact_big(d)
            }
            _ => self.div_exact_big(d),
        }
    }

    fn div_exact_big(&self, d: &Integer) -> Option<Integer> {
        let (q, r) = self.to_big().div_rem(&d.to_big());
        r.is_zero().then(|| Integer::from_big(q))
    }

    /// Non-negative greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Integer) -> Integer {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => {
                let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
                while y != 0 {
                    (x, y) = (y, x % y);
                }
                match i64::try_from(x) {
                    Ok(v) => Integer::Small(v),
                    Err(_) => Integer::from_big(BigInt::from(x)),
                }
            }
            _ => Integer::from_big(self.to_big().gcd(&other.to_big())),
        }
    }

    pub fn pow(&self, e: u32) -> Integer {
        let mut acc = Integer::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Integer::Small(v)
    }
}

impl From<i32> for Integer {
    fn from(v: i32) -> Self {
        Integer::Small(v as i64)
    }
}

impl From<BigInt> for Integer {
    fn from(b: BigInt) -> Self {
        Integer::from_big(b)
    }
}

impl Add for &Integer {
    type Output = Integer;
    fn add(self, rhs: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_add(*b) {
                return Integer::Small(s);
            }
        }
        Integer::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &Integer {
    type Output = Integer;
    fn sub(self, rhs: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, rhs) {
            if let Some(s) = a.checked_sub(*b) {
                return Integer::Small(s);
            }
        }
        Integer::from_big(self.to_big() - rhs.to_big())
    }
}

impl Mul for &Integer {
    type Output = Integer;
    fn mul(self, rhs: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, rhs) {
            if let Some(p) = a.checked_mul(*b) {
                return Integer::Small(p);
            }
        }
        Integer::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        match self {
            Integer::Small(v) => match v.checked_neg() {
                Some(n) => Integer::Small(n),
                None => Integer::from_big(-BigInt::from(*v)),
            },
            Integer::Big(b) => Integer::from_big(-b),
        }
    }
}

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        -&self
    }
}

impl PartialEq for Integer {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a == b,
            (Integer::Big(a), Integer::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Integer {}

impl Hash for Integer {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Integer::Small(v) => v.hash(state),
            Integer::Big(b) => b.hash(state),
        }
    }
}

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Integer {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integer::Small(v) => write!(f, "{v}"),
            Integer::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Integer {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<BigInt>().map(Integer::from_big)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = &Integer::from(i64::MAX) + &Integer::ONE;
        assert!(matches!(big, Integer::Big(_)));
        let back = &big - &Integer::ONE;
        assert_eq!(back, Integer::from(i64::MAX));
        assert!(matches!(back, Integer::Small(_)));
        let sq = &big * &big;
        assert_eq!(sq.div_exact(&big), Some(big.clone()));
        assert_eq!(-&Integer::from(i64::MIN), &Integer::from(i64::MAX) + &Integer::ONE);
    }

    #[test]
    fn exact_division_and_gcd() {
        assert_eq!(Integer::from(12).div_exact(&Integer::from(-4)), Some(Integer::from(-3)));
        assert_eq!(Integer::from(12).div_exact(&Integer::from(5)), None);
        assert_eq!(Integer::from(12).div_exact(&Integer::ZERO), None);
        assert_eq!(Integer::from(-12).gcd(&Integer::from(18)), Integer::from(6));
        assert_eq!(Integer::ZERO.gcd(&Integer::from(-7)), Integer::from(7));
        assert_eq!(Integer::from(i64::MIN).gcd(&Integer::ZERO).to_string(), "9223372036854775808");
    }
}
