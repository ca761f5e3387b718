use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ArrangementError;
use crate::exactfield::Rational;
use crate::linalg::determinant;
use crate::orbit_config::ArrangementSpec;

/// Points of `F_q^d` enumerated at most.
pub const MAX_FIELD_POINTS: u64 = 50_000_000;

/// Each hyperplane scaled to coprime integer coefficients, offset last.
pub fn integer_rows(a: &ArrangementSpec) -> Result<Vec<Vec<BigInt>>, ArrangementError> {
    let rows = a.as_rational().ok_or(ArrangementError::NotReal)?;
    Ok(rows
        .into_iter()
        .map(|(n, b)| {
            let mut all = n;
            all.push(b);
            let l = Rational::lcm_denominator(all.iter());
            let ints: Vec<BigInt> = all
                .iter()
                .map(|c| (c * &Rational::from(l.clone())).numer().clone())
                .collect();
            let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            ints.into_iter().map(|c| c / &g).collect()
        })
        .collect())
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(n: &BigInt, out: &mut BTreeSet<u64>) -> Result<(), ArrangementError> {
    let mut n = n
        .abs()
        .to_u64()
        .ok_or_else(|| ArrangementError::Invariant(format!("minor {n} too large to factor")))?;
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.insert(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    Ok(())
}

/// Primes dividing some nonzero minor of the integer augmented matrix.
/// Outside this set every rank, hence every flat, survives reduction mod q.
pub fn bad_primes(a: &ArrangementSpec) -> Result<BTreeSet<u64>, ArrangementError> {
    let rows = integer_rows(a)?;
    let ncols = a.dim + 1;
    let zero = Rational::zero();
    let mut out = BTreeSet::new();
    for r in 1..=rows.len().min(ncols) {
        for rs in (0..rows.len()).combinations(r) {
            for cs in (0..ncols).combinations(r) {
                let m: Vec<Vec<Rational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| Rational::from(rows[i][j].clone())).collect())
                    .collect();
                let det = determinant(m, &zero);
                if !det.is_zero() {
                    prime_factors(det.numer(), &mut out)?;
                }
            }
        }
    }
    Ok(out)
}

/// The first `count` good primes above every coefficient magnitude.
pub fn good_primes(a: &ArrangementSpec, count: usize) -> Result<Vec<u64>, ArrangementError> {
    let bad = bad_primes(a)?;
    let floor = max_coefficient(a)?;
    Ok((floor + 1..)
        .filter(|&p| is_prime(p) && !bad.contains(&p))
        .take(count)
        .collect())
}

fn max_coefficient(a: &ArrangementSpec) -> Result<u64, ArrangementError> {
    let rows = integer_rows(a)?;
    Ok(rows
        .iter()
        .flatten()
        .map(|c| c.abs().to_u64().unwrap_or(u64::MAX))
        .max()
        .unwrap_or(0))
}

/// Points of `F_q^d` on no hyperplane; equals `χ(q)` for good `q`.
pub fn finite_field_count(a: &ArrangementSpec, q: u64) -> Result<u64, ArrangementError> {
    if !is_prime(q) {
        return Err(ArrangementError::NotPrime(q));
    }
    if q <= max_coefficient(a)? || bad_primes(a)?.contains(&q) {
        return Err(ArrangementError::BadPrime(q));
    }
    let d = a.dim as u32;
    let total = q
        .checked_pow(d)
        .filter(|&t| t <= MAX_FIELD_POINTS)
        .ok_or(ArrangementError::Size {
            dim: a.dim,
            hyperplanes: a.len(),
        })?;
    let qb = BigInt::from(q);
    let rows: Vec<Vec<u64>> = integer_rows(a)?
        .iter()
        .map(|r| r.iter().map(|c| c.mod_floor(&qb).to_u64().expect("reduced mod q")).collect())
        .collect();
    let d = a.dim;
    let mut x = vec![0u64; d];
    let mut count = 0;
    for _ in 0..total {
        let avoids = rows.iter().all(|r| {
            let lhs = (0..d).fold(0u64, |acc, i| (acc + r[i] * x[i]) % q);
            lhs != r[d]
        });
        if avoids {
            count += 1;
        }
        for xi in x.iter_mut() {
            *xi += 1;
            if *xi < q {
                break;
            }
            *xi = 0;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit_config::{braid_arrangement, case3_x_arrangement};

    #[test]
    fn examples() {
        assert_eq!(finite_field_count(&braid_arrangement(3).unwrap(), 5).unwrap(), 60);
        let empty = ArrangementSpec::from_rational(2, vec![], "e").unwrap();
        assert_eq!(finite_field_count(&empty, 3).unwrap(), 9);
        assert_eq!(finite_field_count(&case3_x_arrangement(1).unwrap(), 5).unwrap(), 12);
    }

    #[test]
    fn bad_primes_are_refused() {
        // x ± y: the minor 2 makes 2 bad
        let a = case3_x_arrangement(1).unwrap();
        assert!(bad_primes(&a).unwrap().contains(&2));
        assert_eq!(finite_field_count(&a, 2), Err(ArrangementError::BadPrime(2)));
        assert_eq!(finite_field_count(&a, 4), Err(ArrangementError::NotPrime(4)));
        assert_eq!(good_primes(&a, 2).unwrap(), vec![3, 5]);
    }

    #[test]
    fn rational_coefficients_are_cleared() {
        let a = ArrangementSpec::from_rational(
            1,
            vec![(vec![Rational::frac(2, 3)], Rational::frac(1, 3))],
            "x=1/2",
        )
        .unwrap();
        assert_eq!(integer_rows(&a).unwrap(), vec![vec![BigInt::from(2), BigInt::from(1)]]);
        assert_eq!(finite_field_count(&a, 5).unwrap(), 4);
    }
}
