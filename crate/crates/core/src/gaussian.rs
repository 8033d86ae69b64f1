//! Gaussian rationals `(re + im·i) / den` with an inline `i64` fast path
//! and a `Complex<BigRational>` fallback.
//!
//! Values representable with a shared positive `i64` denominator are always
//! stored inline and fully reduced, so derived equality is value equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `gcd(re, im, den) = 1`, `den > 0`, no component equal to `i64::MIN`.
    Small { re: i64, im: i64, den: i64 },
    /// Not representable as `Small`.
    Big(Box<Complex<BigRational>>),
}

fn gcd(a: u128, b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd64(a as u64, b as u64) as u128;
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

fn gcd64(a: u64, b: u64) -> u64 {
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

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

fn small(re: i64, im: i64, den: i64) -> GaussianRational {
    GaussianRational(Repr::Small { re, im, den })
}

fn int_pair(re: i64, im: i64) -> GaussianRational {
    if re == i64::MIN || im == i64::MIN {
        return GaussianRational::from_big(Complex::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        ));
    }
    small(re, im, 1)
}

/// Reduce `(re + im·i) / den` with `den > 0`.
fn from_i128(re: i128, im: i128, den: i128) -> GaussianRational {
    let g = gcd(gcd(re.unsigned_abs(), im.unsigned_abs()), den as u128) as i128;
    let (re, im, den) = (re / g, im / g, den / g);
    if fits(re) && fits(im) && fits(den) {
        return small(re as i64, im as i64, den as i64);
    }
    let d = BigInt::from(den);
    GaussianRational(Repr::Big(Box::new(Complex::new(
        BigRational::new(re.into(), d.clone()),
        BigRational::new(im.into(), d),
    ))))
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational::from_big(Complex::new(re.to_big(), im.to_big()))
    }

    pub fn from_big(z: Complex<BigRational>) -> Self {
        let den = num_integer::Integer::lcm(z.re.denom(), z.im.denom());
        let re = z.re.numer() * (&den / z.re.denom());
        let im = z.im.numer() * (&den / z.im.denom());
        match (re.to_i64(), im.to_i64(), den.to_i64()) {
            (Some(r), Some(i), Some(d)) if r != i64::MIN && i != i64::MIN => small(r, i, d),
            _ => GaussianRational(Repr::Big(Box::new(z))),
        }
    }

    pub fn to_big(&self) -> Complex<BigRational> {
        match &self.0 {
            Repr::Small { re, im, den } => {
                let d = BigInt::from(*den);
                Complex::new(
                    BigRational::new((*re).into(), d.clone()),
                    BigRational::new((*im).into(), d),
                )
            }
            Repr::Big(z) => (**z).clone(),
        }
    }

    pub fn re(&self) -> Rational {
        match &self.0 {
            Repr::Small { re, den, .. } if *den == 1 => Rational::from_integer(*re),
            Repr::Small { re, den, .. } => Rational::from_i64_pair(*re, *den),
            Repr::Big(z) => Rational::from_big(z.re.clone()),
        }
    }

    pub fn im(&self) -> Rational {
        match &self.0 {
            Repr::Small { im, den, .. } if *den == 1 => Rational::from_integer(*im),
            Repr::Small { im, den, .. } => Rational::from_i64_pair(*im, *den),
            Repr::Big(z) => Rational::from_big(z.im.clone()),
        }
    }

    pub fn from_gaussian(re: i64, im: i64) -> Self {
        int_pair(re, im)
    }

    /// Exact value of a finite float pair; `None` for NaN or infinity.
    pub fn try_from_c64(z: Complex64) -> Option<Self> {
        Some(GaussianRational::from_big(Complex::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        )))
    }

    pub fn to_c64(&self) -> Complex64 {
        match &self.0 {
            Repr::Small { re, im, den: 1 } => Complex64::new(*re as f64, *im as f64),
            _ => {
                let (re, im) = (self.re().to_f64(), self.im().to_f64());
                Complex64::new(re.unwrap_or(f64::NAN), im.unwrap_or(f64::NAN))
            }
        }
    }

    pub fn conj(&self) -> Self {
        match &self.0 {
            Repr::Small { re, im, den } => small(*re, -*im, *den),
            Repr::Big(z) => GaussianRational::from_big(z.conj()),
        }
    }

    pub fn is_real(&self) -> bool {
        match &self.0 {
            Repr::Small { im, .. } => *im == 0,
            Repr::Big(z) => z.im.is_zero(),
        }
    }

    fn big_op(
        &self,
        rhs: &Self,
        op: impl FnOnce(Complex<BigRational>, Complex<BigRational>) -> Complex<BigRational>,
    ) -> Self {
        GaussianRational::from_big(op(self.to_big(), rhs.to_big()))
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        if let (Repr::Small { re: a, im: b, den: d1 }, Repr::Small { re: c, im: e, den: d2 }) = (&self.0, &rhs.0) {
            let (a, b, d1, c, e, d2) = (*a, *b, *d1, *c, *e, *d2);
            if d1 == 1 && d2 == 1 {
                if let (Some(re), Some(im)) = (a.checked_add(c), b.checked_add(e)) {
                    return int_pair(re, im);
                }
            }
            let g = gcd64(d1 as u64, d2 as u64) as i64;
            let (m1, m2) = ((d2 / g) as i128, (d1 / g) as i128);
            return from_i128(a as i128 * m1 + c as i128 * m2, b as i128 * m1 + e as i128 * m2, d1 as i128 * m1);
        }
        self.big_op(&rhs, |x, y| x + y)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        self + (-rhs)
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        if let (Repr::Small { re: a, im: b, den: d1 }, Repr::Small { re: c, im: e, den: d2 }) = (&self.0, &rhs.0) {
            let (a, b, d1, c, e, d2) = (*a as i128, *b as i128, *d1 as i128, *c as i128, *e as i128, *d2 as i128);
            let (re, im) = (a * c - b * e, a * e + b * c);
            if d1 == 1 && d2 == 1
                && fits(re) && fits(im) {
                    return small(re as i64, im as i64, 1);
                }
            return from_i128(re, im, d1 * d2);
        }
        self.big_op(&rhs, |x, y| x * y)
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: GaussianRational) -> GaussianRational {
        assert!(!rhs.is_zero(), "division by zero");
        if let Repr::Small { re, im, den } = rhs.0 {
            // 1 / ((re + im·i) / den) = den (re - im·i) / (re² + im²).
            let (r, i, d) = (re as i128, im as i128, den as i128);
            if let Some(norm) = (r * r).checked_add(i * i) {
                if let (Some(nr), Some(ni)) = (d.checked_mul(r), d.checked_mul(-i)) {
                    return self * from_i128(nr, ni, norm);
                }
            }
        }
        self.big_op(&rhs, |x, y| x / y)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        match self.0 {
            Repr::Small { re, im, den } => small(-re, -im, den),
            Repr::Big(z) => GaussianRational::from_big(-*z),
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        small(0, 0, 1)
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { re: 0, im: 0, .. })
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        small(1, 0, 1)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re(), self.im());
        if im.is_zero() {
            write!(f, "{re}")
        } else if re.is_zero() {
            write!(f, "{im}i")
        } else if im.is_negative() {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
