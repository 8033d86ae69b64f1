//! Rationals with an inline `i64` fast path and a `BigRational` fallback.
//!
//! Values whose reduced numerator and denominator fit in `i64` (numerator
//! above `i64::MIN`) are always stored inline, so derived equality and
//! hashing agree with value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive, numerator not `i64::MIN`.
    Small(i64, i64),
    /// Reduced and not representable as `Small`.
    Big(Box<BigRational>),
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    let mut a = a >> a.trailing_zeros();
    let mut b = b;
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn small_from_i128(n: i128, d: i128) -> Option<Rational> {
    let fits = |v: i128| v > i64::MIN as i128 && v <= i64::MAX as i128;
    (fits(n) && fits(d)).then_some(Rational(Repr::Small(n as i64, d as i64)))
}

impl Rational {
    /// `p / q`, reduced. Panics when `q` is zero.
    pub fn new(p: BigInt, q: BigInt) -> Self {
        Rational::from_big(BigRational::new(p, q))
    }

    pub fn from_integer(n: i64) -> Self {
        if n == i64::MIN {
            return Rational(Repr::Big(Box::new(BigRational::from_integer(n.into()))));
        }
        Rational(Repr::Small(n, 1))
    }

    /// `p / q` from machine integers. Panics when `q` is zero.
    pub fn from_i64_pair(p: i64, q: i64) -> Self {
        Rational::new(p.into(), q.into())
    }

    pub fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(q))),
        }
    }

    /// Exact value of a finite float; `None` for NaN or infinity.
    pub fn from_float(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Rational::from_big)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw((*n).into(), (*d).into()),
            Repr::Big(q) => (**q).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => (*n).into(),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    /// Always positive.
    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => (*d).into(),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(q) => q.is_integer(),
        }
    }

    fn big_op(&self, rhs: &Self, op: impl FnOnce(BigRational, BigRational) -> BigRational) -> Self {
        Rational::from_big(op(self.to_big(), rhs.to_big()))
    }
}

impl From<BigRational> for Rational {
    fn from(q: BigRational) -> Self {
        Rational::from_big(q)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a, *b, *c, *d);
            if b == 1 && d == 1 {
                if let Some(s) = a.checked_add(c) {
                    return Rational::from_integer(s);
                }
            }
            let g = gcd(b as u64, d as u64) as i64;
            let t = a as i128 * (d / g) as i128 + c as i128 * (b / g) as i128;
            let g2 = gcd((t % g as i128).unsigned_abs() as u64, g as u64) as i128;
            let n = t / g2;
            let den = (b / g) as i128 * (d as i128 / g2);
            if n == 0 {
                return Rational::zero();
            }
            if let Some(r) = small_from_i128(n, den) {
                return r;
            }
        }
        self.big_op(&rhs, |x, y| x + y)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a, *b, *c, *d);
            if a == 0 || c == 0 {
                return Rational::zero();
            }
            if b == 1 && d == 1 {
                if let Some(p) = a.checked_mul(c) {
                    return Rational::from_integer(p);
                }
            }
            let g1 = gcd(a.unsigned_abs(), d as u64) as i64;
            let g2 = gcd(c.unsigned_abs(), b as u64) as i64;
            let n = (a / g1) as i128 * (c / g2) as i128;
            let den = (b / g2) as i128 * (d / g1) as i128;
            if let Some(r) = small_from_i128(n, den) {
                return r;
            }
        }
        self.big_op(&rhs, |x, y| x * y)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let Repr::Small(c, d) = rhs.0 {
            let (c, d) = if c < 0 { (-c, -d) } else { (c, d) };
            return self * Rational(Repr::Small(d, c));
        }
        self.big_op(&rhs, |x, y| x / y)
    }
}

impl Rem for Rational {
    type Output = Rational;
    fn rem(self, rhs: Rational) -> Rational {
        self.big_op(&rhs, |x, y| x % y)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => Rational(Repr::Small(-n, d)),
            Repr::Big(q) => Rational::from_big(-*q),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Num for Rational {
    type FromStrRadixErr = <BigRational as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Rational::from_big)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Signed for Rational {
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn abs_sub(&self, other: &Self) -> Self {
        if self <= other {
            Rational::zero()
        } else {
            self.clone() - other.clone()
        }
    }

    fn signum(&self) -> Self {
        match self.cmp(&Rational::zero()) {
            Ordering::Less => -Rational::one(),
            Ordering::Equal => Rational::zero(),
            Ordering::Greater => Rational::one(),
        }
    }

    fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(q) => q.is_positive(),
        }
    }

    fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }
}

impl ToPrimitive for Rational {
    fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            Repr::Small(..) => None,
            Repr::Big(q) => q.is_integer().then(|| q.to_integer().to_i64()).flatten(),
        }
    }

    fn to_u64(&self) -> Option<u64> {
        self.to_i64().and_then(|v| u64::try_from(v).ok())
    }

    fn to_f64(&self) -> Option<f64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n as f64),
            _ => self.to_big().to_f64(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn edge() -> impl Strategy<Value = i64> {
        prop_oneof![
            -20i64..20,
            any::<i64>(),
            Just(i64::MAX),
            Just(i64::MIN),
            Just(i64::MIN + 1),
            (1i64..4).prop_map(|k| i64::MAX / k),
        ]
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        edge().prop_filter("nonzero", |v| *v != 0)
    }

    proptest! {
        #[test]
        fn agrees_with_big_rational(a in edge(), b in nonzero(), c in edge(), d in nonzero()) {
            let (x, y) = (Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!(x.clone() + y.clone(), Rational::from_big(bx.clone() + by.clone()));
            prop_assert_eq!(x.clone() - y.clone(), Rational::from_big(bx.clone() - by.clone()));
            prop_assert_eq!(x.clone() * y.clone(), Rational::from_big(bx.clone() * by.clone()));
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if !y.is_zero() {
                prop_assert_eq!(x.clone() / y.clone(), Rational::from_big(bx.clone() / by.clone()));
            }
            prop_assert_eq!((-x.clone()).to_big(), -bx);
        }
    }

    #[test]
    fn canonical_storage() {
        let x = Rational::from_i64_pair(2, -4);
        assert_eq!(x, Rational::from_i64_pair(-1, 2));
        assert_eq!(x.denom(), BigInt::from(2));
        let huge = Rational::from_integer(i64::MAX) + Rational::one();
        assert!(matches!(huge.0, Repr::Big(_)));
        assert!(matches!((huge - Rational::one()).0, Repr::Small(..)));
        assert!(matches!(Rational::from_integer(i64::MIN).0, Repr::Big(_)));
        assert_eq!(Rational::from_i64_pair(3, 1).to_string(), "3");
        assert_eq!(Rational::from_i64_pair(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn float_conversion() {
        assert_eq!(Rational::from_float(0.375), Some(Rational::from_i64_pair(3, 8)));
        assert_eq!(Rational::from_float(f64::NAN), None);
        assert_eq!(Rational::from_i64_pair(-5, 4).to_f64(), Some(-1.25));
    }
}
