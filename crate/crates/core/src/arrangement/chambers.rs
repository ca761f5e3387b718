use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::restrict::{evaluate, restrict_all, Row};
use super::ArrangementError;
use crate::exactfield::Rational;
use crate::linalg::{rank, rref, solve_affine};
use crate::orbit_config::ArrangementSpec;

pub const MAX_CHAMBER_DIM: usize = 6;
pub const MAX_CHAMBER_HYPERPLANES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

/// An open region with a rational point strictly inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub signs: Vec<Sign>,
    pub witness: Vec<Rational>,
}

/// Every realizable sign vector, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberSet {
    pub hyperplanes: usize,
    pub chambers: Vec<Chamber>,
}

impl ChamberSet {
    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }
}

fn sign_vector(hs: &[Row<Rational>], x: &[Rational]) -> Vec<Sign> {
    hs.iter()
        .map(|h| {
            if evaluate(h, x).is_positive() {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect()
}

fn on_none(hs: &[Row<Rational>], x: &[Rational]) -> bool {
    hs.iter().all(|h| !evaluate(h, x).is_zero())
}

/// Witness points, one per chamber, by inserting hyperplanes one at a time.
/// A chamber meets the new hyperplane `H` exactly when some chamber of the
/// earlier hyperplanes restricted to `H` has the same signs; each such
/// restricted witness is pushed off `H` to both sides, by less than the
/// distance to any earlier hyperplane along the normal.
pub(crate) fn witnesses(hs: &[Row<Rational>], dim: usize, cap: &Rational) -> Vec<Vec<Rational>> {
    let mut points = vec![vec![Rational::zero(); dim]];
    for (k, h) in hs.iter().enumerate() {
        let old = &hs[..k];
        let (res, chart) = restrict_all(old, h).expect("hyperplane with zero normal");
        let normal = &h.0;
        let mut split: HashSet<Vec<Sign>> = HashSet::new();
        let mut next = Vec::new();
        for y in witnesses(&res, dim - 1, cap) {
            let q = chart.lift(&y);
            split.insert(sign_vector(old, &q));
            let mut delta = cap.clone();
            for g in old {
                let speed: Rational = g.0.iter().zip(normal).map(|(a, b)| a * b).sum();
                if speed.is_zero() {
                    continue;
                }
                let room = (evaluate(g, &q) / speed).abs() / Rational::from(2);
                if room < delta {
                    delta = room;
                }
            }
            for s in [Rational::one(), -Rational::one()] {
                let step = &delta * &s;
                next.push(q.iter().zip(normal).map(|(x, n)| x + &(&step * n)).collect());
            }
        }
        for p in points {
            if !split.contains(&sign_vector(old, &p)) {
                next.push(p);
            }
        }
        points = next;
    }
    points
}

fn rational_rows(a: &ArrangementSpec) -> Result<Vec<Row<Rational>>, ArrangementError> {
    a.as_rational().ok_or(ArrangementError::NotReal)
}

fn chamber_set(hs: &[Row<Rational>], dim: usize, cap: &Rational) -> ChamberSet {
    let mut chambers: Vec<Chamber> = witnesses(hs, dim, cap)
        .into_iter()
        .map(|w| Chamber {
            signs: sign_vector(hs, &w),
            witness: w,
        })
        .collect();
    chambers.sort_by(|a, b| a.signs.cmp(&b.signs));
    debug_assert!(chambers.windows(2).all(|w| w[0].signs != w[1].signs));
    debug_assert!(chambers.iter().all(|c| on_none(hs, &c.witness)));
    ChamberSet {
        hyperplanes: hs.len(),
        chambers,
    }
}

/// All chambers of a rational arrangement. `bound` caps how far a witness
/// is moved off a hyperplane when a chamber is split.
pub fn enumerate_chambers(a: &ArrangementSpec, bound: &Rational) -> Result<ChamberSet, ArrangementError> {
    if a.dim > MAX_CHAMBER_DIM || a.len() > MAX_CHAMBER_HYPERPLANES {
        return Err(ArrangementError::Size {
            dim: a.dim,
            hyperplanes: a.len(),
        });
    }
    if !bound.is_positive() {
        return Err(ArrangementError::InvalidBound(bound.clone()));
    }
    let hs = rational_rows(a)?;
    Ok(chamber_set(&hs, a.dim, bound))
}

/// Per-chamber wall counts of the essentialized arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialCertificate {
    pub simplicial: bool,
    pub rank: usize,
    pub chambers: usize,
    /// Walls of each chamber, in sorted sign-vector order.
    pub wall_counts: Vec<usize>,
    pub definition: &'static str,
}

pub const SIMPLICIAL_DEFINITION: &str = "central arrangement, essentialized; every chamber has exactly rank walls with linearly independent normals";

/// Translates a central arrangement to the origin and rewrites it in
/// coordinates on the span of its normals.
fn essentialize(hs: &[Row<Rational>], dim: usize) -> Result<(Vec<Vec<Rational>>, usize), ArrangementError> {
    let zero = Rational::zero();
    let augmented: Vec<Vec<Rational>> = hs
        .iter()
        .map(|(n, b)| {
            let mut r = n.clone();
            r.push(b.clone());
            r
        })
        .collect();
    if solve_affine(augmented, dim, &zero).is_none() {
        return Err(ArrangementError::Centrality);
    }
    let ech = rref(hs.iter().map(|h| h.0.clone()).collect(), dim);
    let normals = hs
        .iter()
        .map(|(n, _)| ech.pivots.iter().map(|&p| n[p].clone()).collect())
        .collect();
    Ok((normals, ech.rank()))
}

/// Facet-count simpliciality test on the essentialization.
pub fn is_simplicial(a: &ArrangementSpec) -> Result<SimplicialCertificate, ArrangementError> {
    let hs = rational_rows(a)?;
    let (normals, r) = essentialize(&hs, a.dim)?;
    let central: Vec<Row<Rational>> = normals.into_iter().map(|n| (n, Rational::zero())).collect();
    let cap = Rational::one();
    let set = chamber_set(&central, r, &cap);

    // signs of the other hyperplanes along each restricted chamber of H_i
    let facets: Vec<HashSet<Vec<Sign>>> = (0..central.len())
        .map(|i| {
            let others: Vec<Row<Rational>> = central
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h.clone())
                .collect();
            let (res, chart) = restrict_all(&others, &central[i]).expect("nonzero normal");
            witnesses(&res, r - 1, &cap)
                .into_iter()
                .map(|y| sign_vector(&others, &chart.lift(&y)))
                .collect()
        })
        .collect();

    let mut wall_counts = Vec::with_capacity(set.len());
    let mut simplicial = true;
    for c in &set.chambers {
        let walls: Vec<usize> = (0..central.len())
            .filter(|&i| {
                let mut rest = c.signs.clone();
                rest.remove(i);
                facets[i].contains(&rest)
            })
            .collect();
        let normals: Vec<Vec<Rational>> = walls.iter().map(|&i| central[i].0.clone()).collect();
        if walls.len() != r || rank(&normals, r) != r {
            simplicial = false;
        }
        wall_counts.push(walls.len());
    }
    Ok(SimplicialCertificate {
        simplicial,
        rank: r,
        chambers: set.len(),
        wall_counts,
        definition: SIMPLICIAL_DEFINITION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{chamber_count, flat_poset};
    use crate::orbit_config::{braid_arrangement, case3_x_arrangement};

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn spec(dim: usize, rows: &[(&[i64], i64)]) -> ArrangementSpec {
        ArrangementSpec::from_rational(
            dim,
            rows.iter()
                .map(|(n, b)| (n.iter().map(|&x| q(x)).collect(), q(*b)))
                .collect(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn crossing_lines() {
        let a = spec(2, &[(&[1, -1], 0), (&[1, 1], 0)]);
        let c = enumerate_chambers(&a, &q(1)).unwrap();
        assert_eq!(c.len(), 4);
        let hs = a.as_rational().unwrap();
        for ch in &c.chambers {
            assert_eq!(sign_vector(&hs, &ch.witness), ch.signs);
            assert!(on_none(&hs, &ch.witness));
        }
    }

    #[test]
    fn braid_and_case3_match_zaslavsky() {
        for a in [braid_arrangement(3).unwrap(), case3_x_arrangement(2).unwrap()] {
            let c = enumerate_chambers(&a, &q(1)).unwrap();
            assert_eq!(c.len() as u64, chamber_count(&flat_poset(&a)).unwrap().total);
        }
    }

    #[test]
    fn small_bound_still_works() {
        let a = spec(2, &[(&[1, 0], 0), (&[1, 0], 1), (&[0, 1], 0)]);
        let c = enumerate_chambers(&a, &Rational::frac(1, 1000)).unwrap();
        assert_eq!(c.len(), 6);
        assert!(enumerate_chambers(&a, &q(0)).is_err());
    }

    #[test]
    fn guard_rails() {
        let a = case3_x_arrangement(3).unwrap();
        assert_eq!(
            enumerate_chambers(&a, &q(1)),
            Err(ArrangementError::Size { dim: 4, hyperplanes: 13 })
        );
    }

    #[test]
    fn boolean_and_case3_are_simplicial() {
        let b = spec(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)]);
        let cert = is_simplicial(&b).unwrap();
        assert!(cert.simplicial);
        assert_eq!(cert.wall_counts, vec![3; 8]);
        let x1 = is_simplicial(&case3_x_arrangement(1).unwrap()).unwrap();
        assert!(x1.simplicial);
        assert_eq!(x1.wall_counts, vec![2; 6]);
    }

    #[test]
    fn non_simplicial_and_non_central() {
        // four planes through the origin whose normals are in general position
        let a = spec(
            3,
            &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0), (&[1, 1, 1], 0)],
        );
        let cert = is_simplicial(&a).unwrap();
        assert!(!cert.simplicial);
        assert_eq!(cert.chambers, 14);
        assert!(cert.wall_counts.contains(&4));
        let affine = spec(1, &[(&[1], 0), (&[1], 1)]);
        assert_eq!(is_simplicial(&affine), Err(ArrangementError::Centrality));
    }

    #[test]
    fn translated_and_non_essential() {
        // lines through (1, 2), then a non-essential copy in dimension 3
        let a = spec(2, &[(&[1, 0], 1), (&[0, 1], 2), (&[1, -1], -1)]);
        let cert = is_simplicial(&a).unwrap();
        assert!(cert.simplicial);
        assert_eq!(cert.chambers, 6);
        let b = spec(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0)]);
        let cert = is_simplicial(&b).unwrap();
        assert_eq!((cert.rank, cert.chambers, cert.simplicial), (2, 4, true));
    }
}
