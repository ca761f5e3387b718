//! Exact coefficient fields: ℚ, cyclotomic fields ℚ(ζ_m), and points of ℂ.

mod complex;
mod cyclotomic;
mod poly;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

pub use complex::{ComplexPoint, GaussianRational, DEFAULT_EPSILON};
pub use cyclotomic::{
    cyclo_inverse, cyclo_mul, cyclotomic_poly, euler_phi, primitive_root, Cyclotomic,
};
pub use rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("invalid cyclotomic order {0}; must be at least 1")]
    InvalidOrder(i64),
    #[error("tolerance must be a positive finite number, got {0}")]
    InvalidTolerance(f64),
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// The operations exact linear algebra needs from a coefficient field.
///
/// `zero_like`/`one_like` exist because cyclotomic elements carry their
/// order; the arithmetic methods panic if two cyclotomic operands have
/// different orders, which callers rule out when building a matrix.
pub trait Field: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self, FieldError>;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self, FieldError> {
        self.inv()
    }
}

impl Field for Cyclotomic {
    fn zero_like(&self) -> Self {
        Cyclotomic::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one(self.order())
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.checked_add(other).expect("matching cyclotomic orders")
    }
    fn minus(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("matching cyclotomic orders")
    }
    fn times(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matching cyclotomic orders")
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn inverse(&self) -> Result<Self, FieldError> {
        Cyclotomic::inverse(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn element(m: u32) -> impl Strategy<Value = Cyclotomic> {
        let n = euler_phi(m) as usize;
        proptest::collection::vec((-6i64..6, 1i64..5), n).prop_map(move |cs| {
            let coeffs: Vec<Rational> = cs.into_iter().map(|(a, b)| Rational::frac(a, b)).collect();
            Cyclotomic::from_poly(m, &coeffs).unwrap()
        })
    }

    fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
        (1u32..=12).prop_flat_map(|m| (element(m), element(m), element(m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn field_laws((a, b, c) in triple()) {
            prop_assert_eq!(a.times(&b), b.times(&a));
            prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
            prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
            prop_assert_eq!(a.plus(&b).minus(&b), a.clone());
            if !Field::is_zero(&a) {
                prop_assert!(a.times(&Field::inverse(&a).unwrap()).is_one());
            }
        }

        #[test]
        fn rational_embedding_is_a_homomorphism(
            m in 1u32..=12, a in -20i64..20, b in 1i64..9, c in -20i64..20, d in 1i64..9,
        ) {
            let x = Rational::frac(a, b);
            let y = Rational::frac(c, d);
            let ex = Cyclotomic::from_rational(m, x.clone());
            let ey = Cyclotomic::from_rational(m, y.clone());
            prop_assert_eq!(ex.times(&ey), Cyclotomic::from_rational(m, &x * &y));
            prop_assert_eq!(ex.plus(&ey), Cyclotomic::from_rational(m, &x + &y));
        }
    }
}
