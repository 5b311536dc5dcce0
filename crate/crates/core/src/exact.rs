//! Complex scalars that carry an exact Gaussian-rational shadow when one exists.
//!
//! Residues, exponents and quantum numbers in the catalog are frequently simple
//! fractions such as `1/4`, `3/4` or `M/2`. A [`Scalar`] keeps the floating-point
//! value for numerics and, alongside it, an exact value in `Q(i)` whenever every
//! operation that produced it stayed inside the rationals. Overflow or an
//! irrational square root silently drops the exact shadow.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest denominator accepted when recognising a float as a rational.
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Exact element of `Q(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QComplex {
    pub re: Rational64,
    pub im: Rational64,
}

impl QComplex {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational64) -> Self {
        Self { re, im: Rational64::zero() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(Rational64::new(n, d))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Non-negative integer value, if this is one.
    pub fn as_nonnegative_integer(&self) -> Option<u32> {
        if self.is_real() && self.re.is_integer() && !self.re.is_negative() {
            u32::try_from(*self.re.numer()).ok()
        } else {
            None
        }
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(Self::new(self.re.checked_add(&o.re)?, self.im.checked_add(&o.im)?))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(Self::new(self.re.checked_sub(&o.re)?, self.im.checked_sub(&o.im)?))
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let rr = self.re.checked_mul(&o.re)?;
        let ii = self.im.checked_mul(&o.im)?;
        let ri = self.re.checked_mul(&o.im)?;
        let ir = self.im.checked_mul(&o.re)?;
        Some(Self::new(rr.checked_sub(&ii)?, ri.checked_add(&ir)?))
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let den = o.re.checked_mul(&o.re)?.checked_add(&o.im.checked_mul(&o.im)?)?;
        let conj = Self::new(o.re, -o.im);
        let num = self.checked_mul(&conj)?;
        Some(Self::new(num.re.checked_div(&den)?, num.im.checked_div(&den)?))
    }

    /// Principal square root, exact only for real perfect squares of either sign.
    pub fn sqrt(&self) -> Option<Self> {
        if !self.is_real() {
            return None;
        }
        if self.re.is_negative() {
            let r = ratio_sqrt(&(-self.re))?;
            Some(Self::new(Rational64::zero(), r))
        } else {
            Some(Self::real(ratio_sqrt(&self.re)?))
        }
    }
}

impl fmt::Display for QComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", Imag(self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}", self.re, Imag(-self.im))
                } else {
                    write!(f, "{}+{}", self.re, Imag(self.im))
                }
            }
        }
    }
}

/// Imaginary coefficient, parenthesised when it is a fraction.
struct Imag(Rational64);

impl fmt::Display for Imag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}i", self.0)
        } else {
            write!(f, "({})i", self.0)
        }
    }
}

fn ratio_to_f64(r: &Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn isqrt_exact(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt().round() as i64;
    while r > 0 && r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    (r * r == n).then_some(r)
}

fn ratio_sqrt(r: &Rational64) -> Option<Rational64> {
    Some(Rational64::new(isqrt_exact(*r.numer())?, isqrt_exact(*r.denom())?))
}

/// Recognise a float as a small-denominator rational that reproduces it bit for bit.
pub fn recognise_rational(x: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    let r = Rational64::approximate_float(x)?;
    if r.denom().abs() > MAX_DENOMINATOR {
        return None;
    }
    (r.to_f64()? == x).then_some(r)
}

/// Parse `"7/2"`, `"-3"` or a decimal literal into a rational.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational64::new(n, d));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Some(Rational64::from_integer(n));
    }
    recognise_rational(s.parse::<f64>().ok()?)
}

/// Complex number with an optional exact shadow.
#[derive(Clone, Copy, Debug)]
pub struct Scalar {
    pub value: Complex64,
    pub exact: Option<QComplex>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Self::exact(QComplex::real(Rational64::zero()))
    }

    pub fn one() -> Self {
        Self::exact(QComplex::real(Rational64::one()))
    }

    pub fn exact(q: QComplex) -> Self {
        Self { value: q.to_c64(), exact: Some(q) }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::exact(QComplex::from_ratio(n, d))
    }

    pub fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    pub fn i() -> Self {
        Self::exact(QComplex::new(Rational64::zero(), Rational64::one()))
    }

    /// Float value, exact when it is a small-denominator rational.
    pub fn real(x: f64) -> Self {
        match recognise_rational(x) {
            Some(r) => Self::exact(QComplex::real(r)),
            None => Self::approx(Complex64::new(x, 0.0)),
        }
    }

    pub fn approx(value: Complex64) -> Self {
        Self { value, exact: None }
    }

    pub fn from_rational(r: Rational64) -> Self {
        Self::exact(QComplex::real(r))
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn is_zero(&self) -> bool {
        match self.exact {
            Some(q) => q.is_zero(),
            None => self.value == Complex64::new(0.0, 0.0),
        }
    }

    /// Zero to within `tol` (absolute), or exactly zero.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self.exact {
            Some(q) => q.is_zero(),
            None => self.value.norm() <= tol,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.conj(),
            exact: self.exact.map(|q| QComplex::new(q.re, -q.im)),
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Scalar::one(), |acc, _| acc * *self)
    }

    /// Principal square root. Negative reals map to the positive imaginary axis.
    pub fn sqrt(&self) -> Self {
        let z = if self.value.im == 0.0 {
            Complex64::new(self.value.re, 0.0)
        } else {
            self.value
        };
        Scalar {
            value: z.sqrt(),
            exact: self.exact.and_then(|q| q.sqrt()),
        }
    }

    /// Closest integer when the value is a non-negative integer within `tol`.
    pub fn as_nonnegative_integer(&self, tol: f64) -> Option<u32> {
        if let Some(q) = self.exact {
            return q.as_nonnegative_integer();
        }
        let r = self.value.re.round();
        let close = (self.value.re - r).abs() <= tol && self.value.im.abs() <= tol;
        (close && r >= 0.0 && r <= u32::MAX as f64).then_some(r as u32)
    }

    /// True when the value is an integer (of any sign) to within `tol`.
    pub fn is_integer(&self, tol: f64) -> bool {
        if let Some(q) = self.exact {
            return q.is_real() && q.re.is_integer();
        }
        (self.value.re - self.value.re.round()).abs() <= tol && self.value.im.abs() <= tol
    }

    pub fn approx_eq(&self, other: &Scalar, rel: f64) -> bool {
        if let (Some(a), Some(b)) = (self.exact, other.exact) {
            return a == b;
        }
        let scale = 1.0_f64.max(self.value.norm()).max(other.value.norm());
        (self.value - other.value).norm() <= rel * scale
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(q) => write!(f, "{q}"),
            None if self.value.im == 0.0 => write!(f, "{}", self.value.re),
            None => write!(f, "{}", self.value),
        }
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                let exact = match (self.exact, o.exact) {
                    (Some(a), Some(b)) => a.$checked(&b),
                    _ => None,
                };
                match exact {
                    Some(q) => Scalar::exact(q),
                    None => Scalar::approx(self.value.$m(o.value)),
                }
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);
scalar_binop!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: -self.value,
            exact: self.exact.map(|q| QComplex::new(-q.re, -q.im)),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        match (recognise_rational(z.re), recognise_rational(z.im)) {
            (Some(a), Some(b)) => Scalar::exact(QComplex::new(a, b)),
            _ => Scalar::approx(z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_recognised_only_when_bit_exact() {
        assert_eq!(recognise_rational(0.3), Some(Rational64::new(3, 10)));
        assert_eq!(recognise_rational(0.1 + 0.2), None);
        assert_eq!(parse_rational("7/2"), Some(Rational64::new(7, 2)));
        assert_eq!(parse_rational("-0.25"), Some(Rational64::new(-1, 4)));
    }

    #[test]
    fn exact_shadow_survives_arithmetic() {
        let a = Scalar::ratio(1, 4);
        let b = Scalar::ratio(3, 4);
        let s = a + b * Scalar::int(2);
        assert_eq!(s.exact, Some(QComplex::from_ratio(7, 4)));
        let r = Scalar::ratio(9, 16).sqrt();
        assert_eq!(r.exact, Some(QComplex::from_ratio(3, 4)));
        let neg = Scalar::ratio(-1, 4).sqrt();
        assert_eq!(neg.exact, Some(QComplex::new(Rational64::zero(), Rational64::new(1, 2))));
        assert!(Scalar::int(2).sqrt().exact.is_none());
    }

    #[test]
    fn negative_zero_imaginary_part_takes_upper_branch() {
        let z = Scalar::approx(Complex64::new(-4.0, -0.0)).sqrt();
        assert!((z.value - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }
}
