//! Exact integers with an `i64` fast path.
//!
//! Every operation is checked; on overflow the value is promoted to a
//! [`BigInt`] and demoted again whenever the result fits back into a machine
//! word. Wraparound can never occur.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact integer of unbounded magnitude.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Integer {
    Small(i64),
    Big(Box<BigInt>),
}

impl Integer {
    pub const ZERO: Integer = Integer::Small(0);
    pub const ONE: Integer = Integer::Small(1);

    fn from_big(b: BigInt) -> Integer {
        match b.to_i64() {
            Some(v) => Integer::Small(v),
            None => Integer::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Integer::Small(v) => BigInt::from(*v),
            Integer::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Integer::Small(v) => Some(*v),
            Integer::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Integer::Small(0))
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Integer::Small(1) | Integer::Small(-1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Integer::Small(v) => *v < 0,
            Integer::Big(b) => b.is_negative(),
        }
    }

    pub fn is_big(&self) -> bool {
        matches!(self, Integer::Big(_))
    }

    pub fn abs(&self) -> Integer {
        match self {
            Integer::Small(v) => match v.checked_abs() {
                Some(a) => Integer::Small(a),
                None => Integer::from_big(BigInt::from(*v).abs()),
            },
            Integer::Big(b) => Integer::from_big(b.abs()),
        }
    }

    /// Number of bits in the magnitude.
    pub fn bits(&self) -> u64 {
        match self {
            Integer::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Integer::Big(b) => b.bits(),
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(&self, other: &Integer) -> Ordering {
        match (self, other) {
            (Integer::Small(a), Integer::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            _ => self.to_big().magnitude().cmp(other.to_big().magnitude()),
        }
    }

    /// Quotient rounded to the nearest integer, so that the remainder
    /// `self - q * d` satisfies `|r| <= |d| / 2`.
    ///
    /// Panics if `d` is zero.
    pub fn div_round(&self, d: &Integer) -> Integer {
        assert!(!d.is_zero(), "division by zero");
        if let (Integer::Small(a), Integer::Small(b)) = (self, d) {
            if let (Some(q), Some(r)) = (a.checked_div_euclid(*b), a.checked_rem_euclid(*b)) {
                // 0 <= r < |b|
                let babs = b.unsigned_abs();
                let r = r as u64;
                if 2 * (r as u128) > babs as u128 {
                    let step = if *b > 0 { 1 } else { -1 };
                    if let Some(q2) = q.checked_add(step) {
                        return Integer::Small(q2);
                    }
                } else {
                    return Integer::Small(q);
                }
            }
        }
        let (a, b) = (self.to_big(), d.to_big());
        let (q, r) = a.div_mod_floor(&b);
        // floor remainder has the sign of b
        let r2 = &r * BigInt::from(2);
        let q = if r2.abs() > b.abs() {
            q + BigInt::one()
        } else {
            q
        };
        Integer::from_big(q)
    }

    /// Exact division; `None` if `d` does not divide `self` (or `d` is zero).
    pub fn div_exact(&self, d: &Integer) -> Option<Integer> {
        if d.is_zero() {
            return None;
        }
        if let (Integer::Small(a), Integer::Small(b)) = (self, d) {
            if let Some(r) = a.checked_rem(*b) {
                if r != 0 {
                    return None;
                }
                if let Some(q) = a.checked_div(*b) {
                    return Some(Integer::Small(q));
                }
            }
        }
        let (q, r) = self.to_big().div_rem(&d.to_big());
        if r.is_zero() {
            Some(Integer::from_big(q))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Integer) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_exact(self).is_some()
    }

    /// Non-negative remainder modulo a positive `m`.
    pub fn rem_euclid(&self, m: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, m) {
            if let Some(r) = a.checked_rem_euclid(*b) {
                return Integer::Small(r);
            }
        }
        Integer::from_big(self.to_big().mod_floor(&m.to_big().abs()))
    }

    pub fn gcd(&self, other: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b)) = (self, other) {
            let g = a.unsigned_abs().gcd(&b.unsigned_abs());
            if let Ok(g) = i64::try_from(g) {
                return Integer::Small(g);
            }
        }
        Integer::from_big(self.to_big().gcd(&other.to_big()))
    }

    /// `self - q * other`, the workhorse of elimination.
    pub fn sub_mul(&self, q: &Integer, other: &Integer) -> Integer {
        if let (Integer::Small(a), Integer::Small(b), Integer::Small(c)) = (self, q, other) {
            if let Some(v) = b.checked_mul(*c).and_then(|m| a.checked_sub(m)) {
                return Integer::Small(v);
            }
        }
        Integer::from_big(self.to_big() - q.to_big() * other.to_big())
    }
}

impl Default for Integer {
    fn default() -> Self {
        Integer::ZERO
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
    fn from(v: BigInt) -> Self {
        Integer::from_big(v)
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

impl PartialOrd for Integer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! checked_binop {
    ($trait:ident, $method:ident, $checked:ident, $op:tt) => {
        impl<'a> $trait<&'a Integer> for &'a Integer {
            type Output = Integer;
            fn $method(self, rhs: &'a Integer) -> Integer {
                if let (Integer::Small(a), Integer::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Integer::Small(v);
                    }
                }
                Integer::from_big(self.to_big() $op rhs.to_big())
            }
        }

        impl $trait for Integer {
            type Output = Integer;
            fn $method(self, rhs: Integer) -> Integer {
                (&self).$method(&rhs)
            }
        }
    };
}

checked_binop!(Add, add, checked_add, +);
checked_binop!(Sub, sub, checked_sub, -);
checked_binop!(Mul, mul, checked_mul, *);

impl Neg for &Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        match self {
            Integer::Small(v) => match v.checked_neg() {
                Some(n) => Integer::Small(n),
                None => Integer::from_big(-BigInt::from(*v)),
            },
            Integer::Big(b) => Integer::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Integer {
    type Output = Integer;
    fn neg(self) -> Integer {
        -(&self)
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

impl FromStr for Integer {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.parse::<i64>() {
            Ok(v) => Ok(Integer::Small(v)),
            Err(_) => s.parse::<BigInt>().map(Integer::from_big),
        }
    }
}

impl serde::Serialize for Integer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Integer::Small(v) => s.serialize_i64(*v),
            Integer::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn overflow_escalates_instead_of_wrapping() {
        let a = Integer::from(i64::MAX);
        let b = &a + &Integer::ONE;
        assert!(b.is_big());
        assert_eq!(b.to_string(), "9223372036854775808");
        let back = &b - &Integer::ONE;
        assert_eq!(back, Integer::Small(i64::MAX));

        let m = Integer::from(i64::MIN);
        assert!((-&m).is_big());
        assert!(m.abs().is_big());
        let sq = &a * &a;
        assert_eq!(sq.to_big(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
    }

    #[test]
    fn rounded_division() {
        let q = Integer::from(7).div_round(&Integer::from(2));
        assert_eq!(q, Integer::from(3));
        let q = Integer::from(-7).div_round(&Integer::from(3));
        assert_eq!(q, Integer::from(-2));
        let q = Integer::from(5).div_round(&Integer::from(-3));
        assert_eq!(q, Integer::from(-2));
        assert_eq!(Integer::from(6).div_exact(&Integer::from(4)), None);
        assert_eq!(
            Integer::from(-8).div_exact(&Integer::from(4)),
            Some(Integer::from(-2))
        );
    }

    proptest! {
        #[test]
        fn small_and_big_paths_agree(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let (x, y, z) = (Integer::from(a), Integer::from(b), Integer::from(c));
            let (bx, by, bz) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!(x.sub_mul(&y, &z).to_big(), &bx - &by * &bz);
            if b != 0 {
                let q = x.div_round(&y);
                let r = &bx - q.to_big() * &by;
                prop_assert!(r.abs() * BigInt::from(2) <= by.abs());
            }
            prop_assert_eq!(x.gcd(&y).to_big(), bx.gcd(&by));
        }
    }
}
