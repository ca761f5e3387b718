//! Points of ℂ, either exact Gaussian rationals or floats with a tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Cyclotomic, FieldError, Rational};

/// Default tolerance for approximate points.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// `re + im·i` with rational parts, an element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Rational::from(re), Rational::from(im))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root in ℚ(i), if one exists. Returns the root with
    /// nonnegative real part (positive imaginary part when purely imaginary).
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let modulus = self.norm_sqr().sqrt_exact()?;
        let two = Rational::from(2);
        let x2 = (&modulus + &self.re) / &two;
        let y2 = (&modulus - &self.re) / &two;
        let x = x2.sqrt_exact()?;
        let mut y = y2.sqrt_exact()?;
        // 2xy must equal im
        if (&x * &y * &two) != self.im {
            y = -y;
        }
        let root = Self::new(x, y);
        debug_assert_eq!(&root * &root, *self);
        Some(root)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Image in ℚ(ζ_order); requires 4 | order.
    pub fn to_cyclotomic(&self, order: u32) -> Result<Cyclotomic, FieldError> {
        if order % 4 != 0 {
            return Err(FieldError::OrderMismatch(4, order));
        }
        let i = Cyclotomic::zeta_pow(order, (order / 4) as i64);
        let re = Cyclotomic::from_rational(order, self.re.clone());
        re.checked_add(&i.scale(&self.im))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{:?}", self.re)
        } else {
            write!(f, "({:?} + {:?}i)", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

/// A point of ℂ. Exact points compare by equality; approximate points carry
/// their own tolerance and compare within the larger of the two tolerances.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ComplexPoint {
    Exact { re: Rational, im: Rational },
    Approx { re: f64, im: f64, eps: f64 },
}

impl ComplexPoint {
    pub fn exact(z: GaussianRational) -> Self {
        ComplexPoint::Exact { re: z.re, im: z.im }
    }

    pub fn exact_int(re: i64, im: i64) -> Self {
        Self::exact(GaussianRational::from_ints(re, im))
    }

    pub fn exact_real(re: Rational) -> Self {
        Self::exact(GaussianRational::real(re))
    }

    pub fn approx(z: Complex64, eps: f64) -> Result<Self, FieldError> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(FieldError::InvalidTolerance(eps));
        }
        Ok(ComplexPoint::Approx {
            re: z.re,
            im: z.im,
            eps,
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexPoint::Exact { .. })
    }

    pub fn as_exact(&self) -> Option<GaussianRational> {
        match self {
            ComplexPoint::Exact { re, im } => Some(GaussianRational::new(re.clone(), im.clone())),
            ComplexPoint::Approx { .. } => None,
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            ComplexPoint::Exact { re, im } => Complex64::new(re.to_f64(), im.to_f64()),
            ComplexPoint::Approx { re, im, .. } => Complex64::new(*re, *im),
        }
    }

    /// Tolerance attached to the point, `None` in exact mode.
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            ComplexPoint::Exact { .. } => None,
            ComplexPoint::Approx { eps, .. } => Some(*eps),
        }
    }

    /// Tolerance governing a comparison between `self` and `other`, or `None`
    /// when both are exact.
    pub fn joint_epsilon(&self, other: &ComplexPoint) -> Option<f64> {
        match (self.epsilon(), other.epsilon()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    /// Equality: exact when both points are exact, otherwise `|z - w| ≤ ε`.
    pub fn coincides(&self, other: &ComplexPoint) -> bool {
        match (self.as_exact(), other.as_exact()) {
            (Some(a), Some(b)) => a == b,
            _ => {
                let eps = self.joint_epsilon(other).expect("one side approximate");
                (self.to_complex64() - other.to_complex64()).norm() <= eps
            }
        }
    }

    /// Drops exactness, keeping the value.
    pub fn to_approx(&self, eps: f64) -> Result<ComplexPoint, FieldError> {
        ComplexPoint::approx(self.to_complex64(), eps)
    }
}

impl fmt::Debug for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexPoint::Exact { .. } => write!(f, "{:?}", self.as_exact().unwrap()),
            ComplexPoint::Approx { re, im, eps } => write!(f, "({re} + {im}i ±{eps})"),
        }
    }
}

impl From<GaussianRational> for ComplexPoint {
    fn from(z: GaussianRational) -> Self {
        ComplexPoint::exact(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussianRational {
        GaussianRational::new(Rational::frac(a, b), Rational::frac(c, d))
    }

    #[test]
    fn i_squared() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_ints(-1, 0));
        assert_eq!(i.inv().unwrap(), GaussianRational::from_ints(0, -1));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            GaussianRational::from_ints(-1, 0).sqrt_exact(),
            Some(GaussianRational::i())
        );
        assert_eq!(
            GaussianRational::from_ints(3, 4).sqrt_exact(),
            Some(GaussianRational::from_ints(2, 1))
        );
        assert_eq!(GaussianRational::from_ints(2, 0).sqrt_exact(), None);
        let z = g(3, 2, -5, 7);
        let sq = &z * &z;
        let r = sq.sqrt_exact().unwrap();
        assert!(r == z || r == -&z);
    }

    #[test]
    fn cyclotomic_image() {
        let z = g(1, 2, -3, 1);
        let c = z.to_cyclotomic(12).unwrap();
        assert!((c.to_complex64() - z.to_complex64()).norm() < 1e-12);
        assert!(z.to_cyclotomic(6).is_err());
    }

    #[test]
    fn approx_requires_positive_tolerance() {
        assert!(ComplexPoint::approx(Complex64::new(0.0, 0.0), 0.0).is_err());
        assert!(ComplexPoint::approx(Complex64::new(0.0, 0.0), -1.0).is_err());
        assert!(ComplexPoint::approx(Complex64::new(0.0, 0.0), DEFAULT_EPSILON).is_ok());
    }

    #[test]
    fn json_modes() {
        let p = ComplexPoint::exact(g(1, 2, 0, 1));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"mode":"exact","re":"1/2","im":"0/1"}"#);
        let a = ComplexPoint::approx(Complex64::new(0.5, 1.0), 1e-9).unwrap();
        let back: ComplexPoint = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    proptest! {
        // exact and approximate equality agree whenever points are either
        // identical or separated by more than 2ε
        #[test]
        fn exact_and_approx_equality_agree(
            a in -50i64..50, b in 1i64..8, c in -50i64..50, d in 1i64..8,
            e in -50i64..50, f in 1i64..8, h in -50i64..50, k in 1i64..8,
        ) {
            let eps = DEFAULT_EPSILON;
            let z = ComplexPoint::exact(g(a, b, c, d));
            let w = ComplexPoint::exact(g(e, f, h, k));
            let dist = (z.to_complex64() - w.to_complex64()).norm();
            prop_assume!(z == w || dist > 2.0 * eps);
            let za = z.to_approx(eps).unwrap();
            let wa = w.to_approx(eps).unwrap();
            prop_assert_eq!(z.coincides(&w), za.coincides(&wa));
        }

        #[test]
        fn field_inverse(a in -30i64..30, b in 1i64..9, c in -30i64..30, d in 1i64..9) {
            let z = g(a, b, c, d);
            prop_assume!(!z.is_zero());
            prop_assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        }
    }
}
