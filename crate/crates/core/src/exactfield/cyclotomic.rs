//! Elements of the cyclotomic field ℚ(ζ_m) in the power basis modulo Φ_m.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly;
use super::{FieldError, Rational};

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m % d == 0).collect()
}

fn compute_cyclotomic_poly(m: u32) -> Vec<Rational> {
    // Φ_m = (x^m - 1) / Π_{d | m, d < m} Φ_d
    let mut num = vec![Rational::zero(); m as usize + 1];
    num[0] = Rational::from(-1);
    num[m as usize] = Rational::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let (q, r) = poly::div_rem(&num, &cyclotomic_poly(d));
        debug_assert!(poly::is_zero(&r));
        num = q;
    }
    num
}

/// The m-th cyclotomic polynomial, ascending coefficients, cached per order.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let p = Arc::new(compute_cyclotomic_poly(m));
    cache
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&p))
        .clone()
}

/// An element of ℚ(ζ_m). `coeffs` always has exactly φ(m) entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    fn check_order(m: i64) -> Result<u32, FieldError> {
        if m <= 0 || m > u32::MAX as i64 {
            Err(FieldError::InvalidOrder(m))
        } else {
            Ok(m as u32)
        }
    }

    /// Reduces an arbitrary polynomial in ζ modulo Φ_m.
    pub fn from_poly(m: u32, p: &[Rational]) -> Result<Self, FieldError> {
        let m = Self::check_order(m as i64)?;
        let phi = cyclotomic_poly(m);
        let mut coeffs = poly::rem(p, &phi);
        coeffs.resize(euler_phi(m) as usize, Rational::zero());
        Ok(Cyclotomic { order: m, coeffs })
    }

    pub fn from_rational(m: u32, r: Rational) -> Self {
        Self::from_poly(m, &[r]).expect("valid order")
    }

    pub fn zero(m: u32) -> Self {
        Self::from_rational(m, Rational::zero())
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, Rational::one())
    }

    /// ζ_m^k, for any integer k.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        Self::from_poly(m, &p).expect("valid order")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_order(&self, other: &Self) -> Result<(), FieldError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(FieldError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_order(other)?;
        if self.coeffs.len() == 1 {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        Self::from_poly(self.order, &poly::mul(&self.coeffs, &other.coeffs))
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Inverse by the extended Euclidean algorithm against Φ_m.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: vec![self.coeffs[0].inv()?],
            });
        }
        let phi = cyclotomic_poly(self.order);
        let (s, g) = poly::inverse_mod(&self.coeffs, &phi);
        // Φ_m is irreducible, so any nonzero residue is a unit
        debug_assert!(g.len() == 1 && g[0].is_one());
        Self::from_poly(self.order, &s)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("same order");
            }
            base = base.checked_mul(&base).expect("same order");
            e >>= 1;
        }
        acc
    }

    /// Image under ℚ(ζ_m) ↪ ℚ(ζ_target), ζ_m ↦ ζ_target^{target/m}.
    pub fn embed(&self, target: u32) -> Result<Self, FieldError> {
        if target == 0 || target % self.order != 0 {
            return Err(FieldError::OrderMismatch(self.order, target));
        }
        let step = (target / self.order) as usize;
        let mut p = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * step] = c.clone();
        }
        Self::from_poly(target, &p)
    }

    /// Numerical value with ζ_m = exp(2πi/m).
    pub fn to_complex64(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI / self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(c.to_f64(), theta * k as f64))
            .sum()
    }
}

/// ζ_m; errors on m ≤ 0.
pub fn primitive_root(m: i64) -> Result<Cyclotomic, FieldError> {
    let m = Cyclotomic::check_order(m)?;
    Ok(Cyclotomic::zeta_pow(m, 1))
}

pub fn cyclo_mul(a: &Cyclotomic, b: &Cyclotomic) -> Result<Cyclotomic, FieldError> {
    a.checked_mul(b)
}

pub fn cyclo_inverse(a: &Cyclotomic) -> Result<Cyclotomic, FieldError> {
    a.inverse()
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c:?}"),
                1 => format!("{c:?}·ζ{}", self.order),
                _ => format!("{c:?}·ζ{}^{k}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    m: u32,
    coeffs: Vec<Rational>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            m: self.order,
            coeffs: self.coeffs.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(deserializer)?;
        Cyclotomic::from_poly(repr.m, &repr.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_ints = |m| -> Vec<i64> {
            cyclotomic_poly(m)
                .iter()
                .map(|c| c.to_f64() as i64)
                .collect()
        };
        assert_eq!(as_ints(1), vec![-1, 1]);
        assert_eq!(as_ints(2), vec![1, 1]);
        assert_eq!(as_ints(3), vec![1, 1, 1]);
        assert_eq!(as_ints(4), vec![1, 0, 1]);
        assert_eq!(as_ints(6), vec![1, -1, 1]);
        assert_eq!(as_ints(12), vec![1, 0, -1, 0, 1]);
        for m in 1..=30 {
            assert_eq!(cyclotomic_poly(m).len() as u32, euler_phi(m) + 1);
        }
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = primitive_root(4).unwrap();
        let sq = cyclo_mul(&z, &z).unwrap();
        assert_eq!(sq, Cyclotomic::from_rational(4, q(-1, 1)));
    }

    #[test]
    fn zeta3_cubed_is_one() {
        // x^3 mod x^2 + x + 1 = 1 by long division
        let z = primitive_root(3).unwrap();
        let cube = cyclo_mul(&cyclo_mul(&z, &z).unwrap(), &z).unwrap();
        assert!(cube.is_one());
    }

    #[test]
    fn multiplying_by_one() {
        let a = Cyclotomic::from_poly(5, &[q(1, 2), q(-3, 1), q(0, 1), q(7, 5)]).unwrap();
        assert_eq!(cyclo_mul(&a, &Cyclotomic::one(5)).unwrap(), a);
    }

    #[test]
    fn mismatched_orders() {
        let a = primitive_root(3).unwrap();
        let b = primitive_root(4).unwrap();
        assert_eq!(cyclo_mul(&a, &b), Err(FieldError::OrderMismatch(3, 4)));
    }

    #[test]
    fn inverses() {
        for m in 1..=12 {
            let z = primitive_root(m).unwrap();
            let expected = Cyclotomic::zeta_pow(m as u32, m - 1);
            assert_eq!(cyclo_inverse(&z).unwrap(), expected);
        }
        let two = Cyclotomic::from_rational(7, q(2, 1));
        assert_eq!(
            cyclo_inverse(&two).unwrap(),
            Cyclotomic::from_rational(7, q(1, 2))
        );
        // (1 + ζ_3)(-ζ_3) = -ζ_3 - ζ_3^2 = 1
        let one_plus = Cyclotomic::from_poly(3, &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(
            cyclo_inverse(&one_plus).unwrap(),
            primitive_root(3).unwrap().neg()
        );
        assert_eq!(
            cyclo_inverse(&Cyclotomic::zero(5)),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn primitive_roots() {
        assert!(primitive_root(1).unwrap().is_one());
        assert_eq!(
            primitive_root(2).unwrap(),
            Cyclotomic::from_rational(2, q(-1, 1))
        );
        assert_eq!(primitive_root(0), Err(FieldError::InvalidOrder(0)));
        assert_eq!(primitive_root(-3), Err(FieldError::InvalidOrder(-3)));
        // powers of ζ_6 are pairwise distinct for k = 0..5
        let z = primitive_root(6).unwrap();
        let powers: Vec<_> = (0..6).map(|k| z.pow(k)).collect();
        for i in 0..6 {
            for j in 0..i {
                assert_ne!(powers[i], powers[j]);
            }
        }
        assert!(z.pow(6).is_one());
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in 2..=12u32 {
            let z = Cyclotomic::zeta_pow(m, 1);
            assert!(z.pow(m).is_one());
            let mut sum = Cyclotomic::zero(m);
            for k in 0..m {
                sum = sum.checked_add(&z.pow(k)).unwrap();
            }
            assert!(sum.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn embedding_preserves_arithmetic() {
        let a = Cyclotomic::from_poly(3, &[q(1, 2), q(2, 3)]).unwrap();
        let b = Cyclotomic::from_poly(3, &[q(-1, 1), q(5, 1)]).unwrap();
        let ab = a.checked_mul(&b).unwrap().embed(12).unwrap();
        let ab2 = a
            .embed(12)
            .unwrap()
            .checked_mul(&b.embed(12).unwrap())
            .unwrap();
        assert_eq!(ab, ab2);
        let r = Cyclotomic::from_rational(1, q(3, 4)).embed(8).unwrap();
        assert_eq!(r.as_rational(), Some(q(3, 4)));
    }

    #[test]
    fn complex_value() {
        let z = primitive_root(4).unwrap().to_complex64();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn json_form() {
        let z = primitive_root(3).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"m":3,"coeffs":["0/1","1/1"]}"#);
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        // non-reduced input is canonicalised: x^2 -> -1 - x for m = 3
        let raw: Cyclotomic =
            serde_json::from_str(r#"{"m":3,"coeffs":["0","0","1"]}"#).unwrap();
        assert_eq!(raw, z.pow(2));
    }
}
