//! Exact Gaussian elimination over any [`Field`].

use crate::exactfield::Field;

/// Reduced row echelon form. Zero rows are dropped, so `rows.len()` is the
/// rank, and `pivots[i]` is the pivot column of `rows[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inverse().expect("nonzero pivot");
        for x in rows[r].iter_mut().skip(col) {
            *x = x.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = x.minus(&factor.times(p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    rref(rows.to_vec(), ncols).rank()
}

/// Basis of `{x : A x = 0}` given the echelon form of `A`.
pub fn nullspace<F: Field>(ech: &Echelon<F>, zero: &F) -> Vec<Vec<F>> {
    let one = zero.one_like();
    let free: Vec<usize> = (0..ech.ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![zero.clone(); ech.ncols];
            v[fc] = one.clone();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                v[pc] = row[fc].negated();
            }
            v
        })
        .collect()
}

/// Solution set of an affine system whose augmented rows are `[a | b]`
/// meaning `a·x = b`. Returns `None` if inconsistent, else a particular
/// solution (free variables zero) and the echelon form of the augmented
/// system.
pub fn solve_affine<F: Field>(rows: Vec<Vec<F>>, dim: usize, zero: &F) -> Option<(Vec<F>, Echelon<F>)> {
    let ech = rref(rows, dim + 1);
    if ech.pivots.last() == Some(&dim) {
        return None;
    }
    let mut x = vec![zero.clone(); dim];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[dim].clone();
    }
    Some((x, ech))
}

/// Determinant of a square matrix.
pub fn determinant<F: Field>(mut m: Vec<Vec<F>>, zero: &F) -> F {
    let n = m.len();
    let mut det = zero.one_like();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return zero.clone();
        };
        if p != col {
            m.swap(p, col);
            det = det.negated();
        }
        det = det.times(&m[col][col]);
        let inv = m[col][col].inverse().expect("nonzero pivot");
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].times(&inv);
            for j in col..n {
                let t = factor.times(&m[col][j]);
                m[i][j] = m[i][j].minus(&t);
            }
        }
    }
    det
}

pub fn dot<F: Field>(a: &[F], b: &[F], zero: &F) -> F {
    a.iter()
        .zip(b)
        .fold(zero.clone(), |acc, (x, y)| acc.plus(&x.times(y)))
}
