use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;
use serde::Serialize;

use super::polynomial::Polynomial;
use super::restrict::{restrict_all, Row};
use super::ArrangementError;
use crate::exactfield::{Cyclotomic, Field};
use crate::linalg::{dot, nullspace, solve_affine, Echelon};
use crate::orbit_config::{ArrangementSpec, FieldTag, Hyperplane};

/// A nonempty intersection of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    /// Indices of every hyperplane containing the flat, ascending.
    pub hyperplanes: Vec<usize>,
    pub dim: usize,
    pub anchor: Vec<Cyclotomic>,
    /// Basis of the direction space.
    pub directions: Vec<Vec<Cyclotomic>>,
}

impl Flat {
    pub fn codim(&self, ambient: usize) -> usize {
        ambient - self.dim
    }
}

/// The intersection poset with its Möbius function. Index 0 is the ambient
/// space; flats are ordered by codimension, then by hyperplane set.
#[derive(Clone, Debug, Serialize)]
pub struct FlatPoset {
    pub ambient_dim: usize,
    pub field: FieldTag,
    pub hyperplane_count: usize,
    flats: Vec<Flat>,
    mobius: Vec<i64>,
    /// `(lower, upper)` pairs where `upper` covers `lower`.
    covers: Vec<(usize, usize)>,
}

fn bits(set: &[usize], k: usize) -> Vec<u64> {
    let mut b = vec![0u64; k.div_ceil(64).max(1)];
    for &i in set {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn proper_subset(a: &[u64], b: &[u64]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn augmented(h: &Hyperplane) -> Vec<Cyclotomic> {
    let mut r = h.normal.clone();
    r.push(h.offset.clone());
    r
}

struct Solved {
    closure: Vec<usize>,
    dim: usize,
    anchor: Vec<Cyclotomic>,
    directions: Vec<Vec<Cyclotomic>>,
}

fn solve(a: &ArrangementSpec, rows: &[Vec<Cyclotomic>], set: &[usize]) -> Option<Solved> {
    let d = a.dim;
    let zero = a.zero();
    let system: Vec<Vec<Cyclotomic>> = set.iter().map(|&i| rows[i].clone()).collect();
    let (anchor, ech) = solve_affine(system, d, &zero)?;
    let coeff = Echelon {
        rows: ech.rows.iter().map(|r| r[..d].to_vec()).collect(),
        pivots: ech.pivots.clone(),
        ncols: d,
    };
    let directions = nullspace(&coeff, &zero);
    let closure = a
        .hyperplanes()
        .iter()
        .enumerate()
        .filter(|(_, h)| {
            Field::is_zero(&h.evaluate(&anchor))
                && directions
                    .iter()
                    .all(|v| Field::is_zero(&dot(&h.normal, v, &zero)))
        })
        .map(|(i, _)| i)
        .collect();
    Some(Solved {
        closure,
        dim: directions.len(),
        anchor,
        directions,
    })
}

/// All flats, found by breadth-first closure under intersection with single
/// hyperplanes and deduplicated by their full set of containing hyperplanes.
pub fn flat_poset(a: &ArrangementSpec) -> FlatPoset {
    let d = a.dim;
    let k = a.len();
    let zero = a.zero();
    let rows: Vec<Vec<Cyclotomic>> = a.hyperplanes().iter().map(augmented).collect();
    let mut identity = vec![vec![zero.clone(); d]; d];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = zero.one_like();
    }
    let mut flats = vec![Flat {
        hyperplanes: Vec::new(),
        dim: d,
        anchor: vec![zero.clone(); d],
        directions: identity,
    }];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(Vec::new(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let base = flats[f].hyperplanes.clone();
        for h in 0..k {
            if base.contains(&h) {
                continue;
            }
            let mut set = base.clone();
            set.push(h);
            let Some(s) = solve(a, &rows, &set) else {
                continue;
            };
            if index.contains_key(&s.closure) {
                continue;
            }
            index.insert(s.closure.clone(), flats.len());
            queue.push_back(flats.len());
            flats.push(Flat {
                hyperplanes: s.closure,
                dim: s.dim,
                anchor: s.anchor,
                directions: s.directions,
            });
        }
    }
    flats.sort_by(|x, y| y.dim.cmp(&x.dim).then_with(|| x.hyperplanes.cmp(&y.hyperplanes)));

    let masks: Vec<Vec<u64>> = flats.iter().map(|f| bits(&f.hyperplanes, k)).collect();
    let mut mobius = vec![0i64; flats.len()];
    mobius[0] = 1;
    let mut covers = Vec::new();
    for x in 1..flats.len() {
        let mut sum = 0;
        for z in 0..x {
            if proper_subset(&masks[z], &masks[x]) {
                sum += mobius[z];
                if flats[z].dim == flats[x].dim + 1 {
                    covers.push((x, z));
                }
            }
        }
        mobius[x] = -sum;
    }
    covers.sort();
    FlatPoset {
        ambient_dim: d,
        field: a.field,
        hyperplane_count: k,
        flats,
        mobius,
        covers,
    }
}

impl FlatPoset {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn mobius(&self) -> &[i64] {
        &self.mobius
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Whether flat `x` is contained in flat `z`.
    pub fn contained_in(&self, x: usize, z: usize) -> bool {
        let hz = &self.flats[z].hyperplanes;
        hz.iter().all(|h| self.flats[x].hyperplanes.contains(h))
    }

    /// Codimension of the smallest flats.
    pub fn rank(&self) -> usize {
        self.ambient_dim - self.flats.iter().map(|f| f.dim).min().unwrap_or(self.ambient_dim)
    }

    pub fn is_central(&self) -> bool {
        self.flats
            .iter()
            .any(|f| f.hyperplanes.len() == self.hyperplane_count)
    }

    /// Number of flats of each dimension, indexed by dimension.
    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut c = vec![0; self.ambient_dim + 1];
        for f in &self.flats {
            c[f.dim] += 1;
        }
        c
    }
}

/// `χ(t) = Σ μ(X) t^{dim X}`.
pub fn characteristic_polynomial(p: &FlatPoset) -> Polynomial {
    let mut c = vec![0i64; p.ambient_dim + 1];
    for (f, mu) in p.flats.iter().zip(&p.mobius) {
        c[f.dim] += mu;
    }
    Polynomial::new(c)
}

/// `π(t) = Σ |μ(X)| t^{codim X}`, cross-checked against `(−t)^d χ(−1/t)`.
pub fn poincare_polynomial(p: &FlatPoset) -> Result<Polynomial, ArrangementError> {
    let d = p.ambient_dim;
    let mut abs = vec![0i64; d + 1];
    for (f, mu) in p.flats.iter().zip(&p.mobius) {
        abs[f.codim(d)] += mu.abs();
    }
    let chi = characteristic_polynomial(p);
    let substituted: Vec<i64> = (0..=d)
        .map(|c| {
            let coeff = chi.coeffs().get(d - c).copied().unwrap_or(0);
            if c % 2 == 0 {
                coeff
            } else {
                -coeff
            }
        })
        .collect();
    let pi = Polynomial::new(abs);
    if pi != Polynomial::new(substituted) {
        return Err(ArrangementError::Invariant(format!(
            "Poincaré polynomial {pi} disagrees with χ = {chi}"
        )));
    }
    Ok(pi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberCount {
    pub total: u64,
    pub bounded: u64,
}

/// Zaslavsky: `total = (−1)^d χ(−1)`, `bounded = (−1)^rank χ(1)`.
pub fn chamber_count(p: &FlatPoset) -> Result<ChamberCount, ArrangementError> {
    if p.field != FieldTag::Q {
        return Err(ArrangementError::NotReal);
    }
    let chi = characteristic_polynomial(p);
    let signed = |v: num_bigint::BigInt, e: usize| {
        let v = if e % 2 == 0 { v } else { -v };
        v.to_u64()
            .ok_or_else(|| ArrangementError::Invariant(format!("negative chamber count {v}")))
    };
    Ok(ChamberCount {
        total: signed(chi.eval(-1), p.ambient_dim)?,
        bounded: signed(chi.eval(1), p.rank())?,
    })
}

/// The arrangement induced on hyperplane `index` by the others, in the chart
/// that drops the hyperplane's first nonzero coordinate.
pub fn restriction(a: &ArrangementSpec, index: usize) -> Result<ArrangementSpec, ArrangementError> {
    let rows: Vec<Row<Cyclotomic>> = a
        .hyperplanes()
        .iter()
        .map(|h| (h.normal.clone(), h.offset.clone()))
        .collect();
    let h = rows.get(index).ok_or(ArrangementError::NoSuchHyperplane(index))?;
    let others: Vec<Row<Cyclotomic>> = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(_, r)| r.clone())
        .collect();
    let (restricted, _) = restrict_all(&others, h).expect("normalized hyperplanes have a pivot");
    let hs = restricted
        .into_iter()
        .map(|(normal, offset)| Hyperplane { normal, offset })
        .collect();
    Ok(ArrangementSpec::new(
        a.dim - 1,
        a.field,
        hs,
        format!("{} | H{index}", a.label),
    )?)
}

/// `χ(A) = χ(A∖H) − χ(A|_H)` for hyperplane `index`.
pub fn deletion_restriction_holds(a: &ArrangementSpec, index: usize) -> Result<bool, ArrangementError> {
    let whole = characteristic_polynomial(&flat_poset(a));
    let del = characteristic_polynomial(&flat_poset(&a.deletion(index)));
    let res = characteristic_polynomial(&flat_poset(&restriction(a, index)?));
    Ok(whole == del.sub(&res))
}
